"""Bracket, double-bracket, omega and brace calculus of a graded free
resolution.

All index words use the 1-based variable indices 1..n-1.  A bracket word
has length n-2 (one index per differential), a brace word has length n
(head pair, one index per interior differential, tail pair).  Repeated
indices are allowed; alternation is a property of double brackets, not a
constraint on input.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Sequence

from .errors import InputError
from .symcore import Polynomial, PolyMatrix, QMatrix, partial_derivative

if TYPE_CHECKING:  # pragma: no cover
    from .resolution import GradedFreeResolution

IndexWord = tuple[int, ...]

__all__ = [
    "IndexWord",
    "perm_sign",
    "epsilon_ij",
    "epsilon_ijk",
    "OmegaTensor",
    "gl_act",
    "bracket",
    "double_bracket",
    "omega",
    "brace",
    "a_form",
]


def perm_sign(word: Sequence[int]) -> int:
    """Sign of the permutation sorting ``word``; 0 if entries repeat."""
    w = list(word)
    if len(set(w)) != len(w):
        return 0
    sign = 1
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if w[i] > w[j]:
                sign = -sign
    return sign


def _complement(n: int, omit: Sequence[int]) -> tuple[int, ...]:
    return tuple(v for v in range(1, n) if v not in set(omit))


def epsilon_ij(n: int, i: int, j: int) -> int:
    """Sign of the permutation taking 1..n-1 to i,j,1,...,^ij,...,n-1."""
    return perm_sign((i, j) + _complement(n, (i, j)))


def epsilon_ijk(n: int, i: int, j: int, k: int) -> int:
    """Sign of the permutation taking 1..n-1 to i,j,k,1,...,^ijk,...,n-1."""
    return perm_sign((i, j, k) + _complement(n, (i, j, k)))


# ---------------------------------------------------------------------------
# derivative caches


@lru_cache(maxsize=64)
def _derivatives(F: "GradedFreeResolution") -> tuple[tuple[PolyMatrix, ...], ...]:
    """d(phi_r)/d(x_v) for every map r and variable v (both 1-based slots)."""
    return tuple(
        tuple(partial_derivative(phi, v) for v in range(1, F.n))
        for phi in F.maps
    )


@lru_cache(maxsize=64)
def _constant_derivatives(F: "GradedFreeResolution") -> tuple[tuple[QMatrix, ...], ...]:
    """Interior derivative matrices as constant QMatrix, indexed [r-2][v-1] for 2 <= r <= n-3."""
    derivs = _derivatives(F)
    zero = (0,) * (F.n - 1)
    out = []
    for r in range(2, F.n - 2):
        row = []
        for v in range(1, F.n):
            M = derivs[r - 1][v - 1]
            row.append(QMatrix([[p.coefficient(zero) for p in mrow] for mrow in M.entries]))
        out.append(tuple(row))
    return tuple(out)


def _check_word(F, word: Sequence[int], length: int) -> tuple[int, ...]:
    w = tuple(int(a) for a in word)
    if len(w) != length:
        raise InputError(f"index word must have length {length}, got {len(w)}")
    if any(not 1 <= a <= F.n - 1 for a in w):
        raise InputError(f"indices must lie in 1..{F.n - 1}")
    return w


# ---------------------------------------------------------------------------
# brackets


def bracket(F: "GradedFreeResolution", word: Sequence[int]) -> Polynomial:
    """The quadratic form d(phi_1)/dx_{a_1} * ... * d(phi_{n-2})/dx_{a_{n-2}}."""
    w = _check_word(F, word, F.n - 2)
    derivs = _derivatives(F)
    row = list(derivs[0][w[0] - 1].entries[0])
    if len(w) == 1:
        return row[0]
    # interior derivative matrices are constant; fold the row through them
    consts = _constant_derivatives(F)
    for r in range(2, F.n - 2):
        M = consts[r - 2][w[r - 1] - 1]
        new_row = []
        for j in range(M.cols):
            acc = Polynomial.zero(F.n - 1)
            for i in range(M.rows):
                coeff = M.entries[i][j]
                if coeff:
                    acc = acc + row[i] * coeff
            new_row.append(acc)
        row = new_row
    col = derivs[F.n - 3][w[-1] - 1]
    total = Polynomial.zero(F.n - 1)
    for i, p in enumerate(row):
        if p:
            entry = col.entries[i][0]
            if entry:
                total = total + p * entry
    return total


def double_bracket(F: "GradedFreeResolution", word: Sequence[int]) -> Polynomial:
    """Sum of the n-2 even cyclic shifts of the bracket word."""
    w = _check_word(F, word, F.n - 2)
    m = len(w)
    total = Polynomial.zero(F.n - 1)
    for k in range(1, m + 1):
        shift = (2 * k) % m
        total = total + bracket(F, tuple(w[(t + shift) % m] for t in range(m)))
    return total


class OmegaTensor:
    """The element sum_j x*_j (x) Omega_j of V* (x) S^2V, with its GL action."""

    __slots__ = ("n", "forms")

    def __init__(self, n: int, forms: Sequence[Polynomial]):
        forms = tuple(forms)
        if len(forms) != n - 1:
            raise InputError(f"expected {n - 1} quadratic forms, got {len(forms)}")
        for f in forms:
            if f.num_vars != n - 1 or not f.is_homogeneous(2):
                raise InputError("omega forms must be quadratics in n-1 variables")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "forms", forms)

    def __setattr__(self, name, value):
        raise AttributeError("OmegaTensor is immutable")

    def __eq__(self, other):
        return isinstance(other, OmegaTensor) and self.n == other.n and self.forms == other.forms

    def __hash__(self):
        return hash((self.n, self.forms))

    def scale(self, c) -> "OmegaTensor":
        return OmegaTensor(self.n, [f * Fraction(c) for f in self.forms])

    def hessian_entry(self, k: int, i: int, j: int) -> Fraction:
        """The constant d^2 Omega_k / dx_i dx_j (1-based indices)."""
        return self.forms[k - 1].derivative(i).derivative(j).constant_term()

    def act(self, g: QMatrix) -> "OmegaTensor":
        return gl_act(g, self)

    def to_json(self) -> dict:
        return {"n": self.n, "omega": [f.to_json() for f in self.forms]}

    @staticmethod
    def from_json(data: dict) -> "OmegaTensor":
        return OmegaTensor(int(data["n"]), [Polynomial.from_json(f) for f in data["omega"]])

    def __repr__(self):
        return f"OmegaTensor(n={self.n}, [{'; '.join(str(f) for f in self.forms)}])"


def gl_act(g: QMatrix, Om: OmegaTensor) -> OmegaTensor:
    """Standard action of GL on V* (x) S^2V: x*_j and each form transform together.

    Satisfies gl_act(g, gl_act(h, Om)) == gl_act(g*h, Om) exactly.
    """
    from .symcore import linear_substitution

    m = Om.n - 1
    if g.rows != m or g.cols != m:
        raise InputError(f"group element must be {m}x{m}")
    ginv_t = g.inverse().transpose()
    moved = [linear_substitution(f, g) for f in Om.forms]
    forms = []
    for i in range(m):
        acc = Polynomial.zero(m)
        for j in range(m):
            coeff = ginv_t.entries[i][j]
            if coeff:
                acc = acc + moved[j] * coeff
        forms.append(acc)
    return OmegaTensor(Om.n, forms)


def omega(F: "GradedFreeResolution") -> OmegaTensor:
    """Omega_j = (-1)^j [[1, ..., j^, ..., n-1]]."""
    n = F.n
    forms = []
    for j in range(1, n):
        word = tuple(v for v in range(1, n) if v != j)
        forms.append(double_bracket(F, word) * ((-1) ** j))
    return OmegaTensor(n, forms)


# ---------------------------------------------------------------------------
# braces


def _quadratic_rows(phi: PolyMatrix, i: int, j: int) -> list[Fraction]:
    """Coefficients of the monomial x_i x_j in each entry of a 1-row/1-col matrix."""
    nv = phi.num_vars
    e = [0] * nv
    e[i - 1] += 1
    e[j - 1] += 1
    e = tuple(e)
    flat = [p for row in phi.entries for p in row]
    return [p.coefficient(e) for p in flat]


def brace(F: "GradedFreeResolution", word: Sequence[int]) -> Fraction:
    """The scalar {a_1 ... a_n} = P(a_1,a_2) dphi_2/dx_{a_3} ... dphi_{n-3}/dx_{a_{n-2}} Q(a_{n-1},a_n)."""
    n = F.n
    if n < 4:
        raise InputError("braces need n >= 4")
    w = _check_word(F, word, n)
    P = _quadratic_rows(F.maps[0], w[0], w[1])
    Q = _quadratic_rows(F.maps[-1], w[-2], w[-1])
    if n == 4:
        return sum((p * q for p, q in zip(P, Q)), Fraction(0))
    consts = _constant_derivatives(F)
    row = QMatrix([P])
    for t, a in enumerate(w[2 : n - 2]):
        row = row * consts[t][a - 1]
    return sum((p * q for p, q in zip(row.entries[0], Q)), Fraction(0))


def a_form(F: "GradedFreeResolution", i: int, j: int, word: Sequence[int]) -> Fraction:
    """The representative-independent quantity built from two braces.

    ``word`` must be a permutation of 1..n-1 with i and j removed; the value
    is sign(word) * ({i,j,word,i} + {i,i,word,j}) and does not depend on the
    choice of representative.
    """
    n = F.n
    if i == j or not (1 <= i <= n - 1 and 1 <= j <= n - 1):
        raise InputError("need distinct indices i, j in range")
    comp = _complement(n, (i, j))
    w = tuple(int(a) for a in word)
    if tuple(sorted(w)) != comp:
        raise InputError(f"word must be a permutation of {comp}")
    nu = perm_sign(w)
    return nu * (brace(F, (i, j) + w + (i,)) + brace(F, (i, i) + w + (j,)))
