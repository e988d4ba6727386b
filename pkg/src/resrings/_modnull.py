"""Verified multi-modular nullspace acceleration.

The reduced row echelon form of a matrix over Q is unique, so the canonical
kernel basis it induces is a property of the matrix alone.  This module
computes that basis fast: eliminate modulo 30-bit primes with numpy,
reconstruct rational entries by CRT + rational reconstruction, then verify
M @ N = 0 exactly over Z.

Soundness does not rest on the primes being lucky.  A mod-p elimination
certifies rank(Q) >= rank(p), so k = cols - rank(p) verified independent
kernel vectors pin the kernel dimension to exactly k, and the unit pattern
of the candidate basis forces it to be the canonical one.  Any failure
(bad prime, reconstruction miss) is detected and reported as None so the
caller can fall back to exact elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import numpy as np

_MAX_PRIMES = 30


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes() -> list[int]:
    out = []
    n = (1 << 30) - 1
    while len(out) < _MAX_PRIMES:
        if _is_prime(n):
            out.append(n)
        n -= 2
    return out


_PRIMES = _primes()


def _integer_rows(M) -> list[list[int]]:
    """Scale each row to coprime integers; row scaling preserves the RREF."""
    rows = []
    for row in M.entries:
        den = lcm(*(v.denominator for v in row)) if row else 1
        ints = [int(v * den) for v in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        rows.append(ints)
    return rows


def _rref_mod_p(rows: list[list[int]], p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array([[v % p for v in row] for row in rows], dtype=np.int64)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = int(nz[0]) + r
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        other = np.flatnonzero(a[:, c])
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def _kernel_mod_p(red: np.ndarray, pivots: list[int], ncols: int, p: int) -> list[list[int]]:
    """Columns of the canonical kernel basis, reduced mod p."""
    pivot_set = set(pivots)
    cols = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            if pc < f:
                v[pc] = int(-red[r, f]) % p
        cols.append(v)
    return cols


def _rat_reconstruct(a: int, m: int) -> Fraction | None:
    """Balanced rational reconstruction of a mod m, or None."""
    bound = int((m // 2) ** 0.5)
    r0, r1 = m, a % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    num, den = r1, t1
    if den < 0:
        num, den = -num, -den
    if gcd(num, den) != 1:
        return None
    if (num - a * den) % m != 0:
        return None
    return Fraction(num, den)


def _verify_kernel(rows: list[list[int]], basis: list[list[Fraction]]) -> bool:
    sparse = [[(j, v) for j, v in enumerate(row) if v] for row in rows]
    for col in basis:
        den = lcm(*(c.denominator for c in col))
        w = [int(c * den) for c in col]
        for row in sparse:
            if sum(v * w[j] for j, v in row):
                return False
    return True


def modular_nullspace(M) -> list[tuple[Fraction, ...]] | None:
    """Canonical nullspace basis of a QMatrix, or None if not certified."""
    rows = _integer_rows(M)
    ncols = M.cols

    best_pivots: list[int] | None = None
    residues: list[list[int]] = []  # per kernel column, flat entries
    modulus = 1

    for p in _PRIMES:
        red, pivots = _rref_mod_p(rows, p)
        if best_pivots is None or len(pivots) > len(best_pivots):
            # higher mod-p rank always wins; restart accumulation
            best_pivots = pivots
            residues = []
            modulus = 1
        elif pivots != best_pivots:
            continue  # bad prime for the current candidate structure
        kernel_p = _kernel_mod_p(red, best_pivots, ncols, p)
        if not residues:
            residues = [[v % p for v in col] for col in kernel_p]
            modulus = p
        else:
            inv = pow(modulus % p, p - 2, p)
            for col, col_p in zip(residues, kernel_p):
                for idx, (x, r) in enumerate(zip(col, col_p)):
                    col[idx] = x + modulus * ((r - x) * inv % p)
            modulus *= p

        candidate: list[list[Fraction]] = []
        ok = True
        for col in residues:
            vec = []
            for x in col:
                f = _rat_reconstruct(x, modulus)
                if f is None:
                    ok = False
                    break
                vec.append(f)
            if not ok:
                break
            candidate.append(vec)
        if ok and _verify_kernel(rows, candidate):
            return [tuple(col) for col in candidate]
    return None
