"""Koszul complexes of the sub-ideals generated by x_i(x_j - x_k), the
uniquely determined chain-map lifts into the resolution of the standard
configuration, the wedge/pair symbols they define, and the final syzygy.

Wedge bases are m-subsets of the surviving indices ordered increasingly and
listed lexicographically; an arbitrary input wedge is sorted first and the
permutation sign applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .brackets import perm_sign
from .errors import InconsistencyError, InputError
from .resolution import GradedFreeResolution
from .symcore import Polynomial, PolyMatrix, QMatrix, monomials_of_degree

__all__ = [
    "KoszulComplex",
    "ChainMap",
    "koszul_complex",
    "lift_chain_map",
    "symbol",
    "final_syzygy",
    "FinalSyzygy",
]


class KoszulComplex:
    """The Koszul resolution of the ideal (x_i (x_j - x_k) : i != j, k)."""

    __slots__ = ("n", "j", "k", "indices", "wedges", "diffs")

    def __init__(self, n: int, j: int, k: int):
        if n < 5:
            raise InputError("the Koszul machinery assumes n >= 5")
        if not (1 <= j <= n - 1 and 1 <= k <= n - 1):
            raise InputError(f"pair indices must lie in 1..{n - 1}")
        if j == k:
            raise InputError("pair indices must be distinct")
        indices = tuple(v for v in range(1, n) if v not in (j, k))
        wedges = tuple(tuple(combinations(indices, m)) for m in range(n - 2))
        m_vars = n - 1
        diffs = []
        d1 = PolyMatrix(
            [[_x(m_vars, i) * (_x(m_vars, j) - _x(m_vars, k)) for i in indices]]
        )
        diffs.append(d1)
        for m in range(2, n - 2):
            lower = {w: t for t, w in enumerate(wedges[m - 1])}
            cols = []
            for w in wedges[m]:
                col = [Polynomial.zero(m_vars)] * len(wedges[m - 1])
                for ell, idx in enumerate(w, start=1):
                    target = tuple(v for v in w if v != idx)
                    col[lower[target]] = col[lower[target]] + _x(m_vars, idx) * ((-1) ** ell)
                cols.append(col)
            diffs.append(PolyMatrix([[cols[c][r] for c in range(len(cols))] for r in range(len(wedges[m - 1]))]))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "wedges", wedges)
        object.__setattr__(self, "diffs", tuple(diffs))

    def __setattr__(self, name, value):
        raise AttributeError("KoszulComplex is immutable")

    def wedge_index(self, m: int, wedge: tuple[int, ...]) -> int:
        return self.wedges[m].index(wedge)

    def __repr__(self):
        return f"KoszulComplex(n={self.n}, J=({self.j},{self.k}))"


def _x(num_vars: int, j: int) -> Polynomial:
    return Polynomial.variable(num_vars, j)


def koszul_complex(n: int, j: int, k: int) -> KoszulComplex:
    """Koszul complex K^J for J = (j, k)."""
    return KoszulComplex(n, j, k)


@dataclass(frozen=True)
class ChainMap:
    """Lift of K^J into F_*; psis[m-1] expresses the image of the wedge
    basis of K_m in the generators of F_m (constant matrices)."""

    source: KoszulComplex
    target: GradedFreeResolution
    psis: tuple[QMatrix, ...]

    def symbol(self, wedge: Sequence[int]) -> tuple[Fraction, ...]:
        return symbol(self, wedge)


def _coefficient_system(phi: PolyMatrix, degree: int) -> QMatrix:
    """Matrix whose column j lists the degree-d coefficients of entry column j."""
    mons = monomials_of_degree(phi.num_vars, degree)
    cols = []
    for j in range(phi.cols):
        col = []
        for i in range(phi.rows):
            col.extend(phi.entries[i][j].coefficient(e) for e in mons)
        cols.append(col)
    return QMatrix.from_columns(cols)


def _solve_unique(A: QMatrix, rhs: QMatrix, stage: str) -> QMatrix:
    try:
        return A.solve(rhs)
    except InputError as exc:
        if "underdetermined" in str(exc):
            raise InconsistencyError(f"chain-map lift at {stage} is not unique") from exc
        raise InputError(f"no chain-map lift at {stage}: the resolved ideal does not contain I^J") from exc


def lift_chain_map(K: KoszulComplex, F: GradedFreeResolution) -> ChainMap:
    """Solve the commuting squares phi_m psi_m = psi_{m-1} d_m one degree at
    a time; existence and uniqueness are certified by exact linear algebra."""
    if F.n != K.n:
        raise InputError("complex and resolution sizes differ")
    n = K.n
    psis: list[QMatrix] = []
    A1 = _coefficient_system(F.maps[0], 2)
    rhs1 = _coefficient_system(K.diffs[0], 2)
    psis.append(_solve_unique(A1, rhs1, "degree 2"))
    for m in range(2, n - 2):
        phi = F.maps[m - 1]
        A = _coefficient_system(phi, 1)
        prev = psis[-1]
        d = K.diffs[m - 1]
        rhs_rows = []
        mons1 = monomials_of_degree(phi.num_vars, 1)
        # rows of the system follow _coefficient_system's (entry, monomial) order
        d_cols = []
        for w_idx in range(d.cols):
            col = []
            for i in range(phi.rows):
                entry = sum(
                    (prev.entries[i][t] * d.entries[t][w_idx] for t in range(d.rows)),
                    Polynomial.zero(phi.num_vars),
                )
                col.extend(entry.coefficient(e) for e in mons1)
            d_cols.append(col)
        rhs = QMatrix.from_columns(d_cols)
        psis.append(_solve_unique(A, rhs, f"map {m}"))
    return ChainMap(K, F, tuple(psis))


def symbol(cm: ChainMap, wedge: Sequence[int]) -> tuple[Fraction, ...]:
    """The image (i_1 ^ ... ^ i_m) (x) (j,k) as a vector over the generators
    of F_m (coefficients are constants)."""
    w = tuple(int(v) for v in wedge)
    K = cm.source
    if len(set(w)) != len(w):
        raise InputError("wedge indices must be distinct")
    if any(v in (K.j, K.k) for v in w) or any(v not in K.indices for v in w):
        raise InputError(f"wedge indices must avoid the pair ({K.j},{K.k}) and lie in range")
    m = len(w)
    if not 1 <= m <= K.n - 3:
        raise InputError(f"wedge length must lie in 1..{K.n - 3}")
    sign = perm_sign(w)
    col = K.wedge_index(m, tuple(sorted(w)))
    psi = cm.psis[m - 1]
    return tuple(sign * psi.entries[r][col] for r in range(psi.rows))


@dataclass(frozen=True)
class FinalSyzygy:
    """The degree-n generator of ker(phi_{n-3}) assembled from symbols."""

    t: tuple[Polynomial, ...]
    factor: Fraction  # t == factor * (last column of the resolution)


def pair_symbol_even(chain_maps: dict[tuple[int, int], ChainMap], n: int,
                     j: int, k: int) -> tuple[Fraction, ...]:
    """(i_1 ^ ... ^ i_{n-3}) (x) (j,k) with the complement ordered so that
    i_1, ..., i_{n-3}, j, k is an even permutation of 1..n-1."""
    comp = tuple(v for v in range(1, n) if v not in (j, k))
    sign = perm_sign(comp + (j, k))
    vec = chain_maps[(j, k)].symbol(comp)
    return tuple(sign * v for v in vec)


def final_syzygy(F: GradedFreeResolution,
                 chain_maps: dict[tuple[int, int], ChainMap] | None = None) -> FinalSyzygy:
    """Assemble t = sum_{j<k} x_j x_k (i_1 ^ ... ^ i_{n-3}) (x) (j,k), check
    phi_{n-3} t = 0, and match it against the last differential."""
    n = F.n
    m_vars = n - 1
    if chain_maps is None:
        chain_maps = {}
    t_vec = [Polynomial.zero(m_vars) for _ in range(F.ranks[n - 3])]
    for j in range(1, n):
        for k in range(j + 1, n):
            if (j, k) not in chain_maps:
                chain_maps[(j, k)] = lift_chain_map(koszul_complex(n, j, k), F)
            sym = pair_symbol_even(chain_maps, n, j, k)
            quad = _x(m_vars, j) * _x(m_vars, k)
            for r, coeff in enumerate(sym):
                if coeff:
                    t_vec[r] = t_vec[r] + quad * coeff
    phi_last = F.maps[n - 4]  # phi_{n-3}
    for i in range(phi_last.rows):
        image = sum(
            (phi_last.entries[i][r] * t_vec[r] for r in range(phi_last.cols)),
            Polynomial.zero(m_vars),
        )
        if not image.is_zero():
            raise InconsistencyError("assembled final syzygy is not killed by phi_{n-3}")
    last_col = [F.maps[n - 3].entries[r][0] for r in range(F.ranks[n - 3])]
    factor = None
    for t_entry, col_entry in zip(t_vec, last_col):
        if col_entry.is_zero() != t_entry.is_zero():
            raise InconsistencyError("final syzygy support differs from the last differential")
        if not col_entry.is_zero():
            e, c = next(iter(col_entry.terms.items()))
            cand = t_entry.coefficient(e) / c
            if factor is None:
                factor = cand
    if factor is None or factor == 0:
        raise InconsistencyError("final syzygy vanished")
    for t_entry, col_entry in zip(t_vec, last_col):
        if t_entry != col_entry * factor:
            raise InconsistencyError("final syzygy is not proportional to the last differential")
    return FinalSyzygy(tuple(t_vec), factor)
