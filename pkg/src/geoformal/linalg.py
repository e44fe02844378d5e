"""Exact rational linear algebra.

Everything verdict-bearing in this package reduces to ranks and kernels of
matrices over Q.  Small systems go through plain fraction Gauss elimination.
Large integer systems (stacked Lie-derivative operators on big exterior
powers) go through a modular fast path: row reduction mod p with numpy,
rational reconstruction of the kernel, then an unconditional exact
certificate (verified kernel vectors give nullity_Q >= nullity_p, while
rank_p <= rank_Q gives nullity_Q <= nullity_p, so the verified basis is
provably complete).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579)


def frac_rows(rows):
    """Copy a matrix into lists of Fractions."""
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows):
    """Reduced row echelon form in place; returns (rows, pivot_columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows):
    if not rows:
        return 0
    _, pivots = rref(frac_rows(rows))
    return len(pivots)


def kernel(rows, ncols):
    """Exact kernel basis of the linear map given by `rows` (acting on the right).

    Returned vectors carry an identity pattern on the free columns, so they
    are independent by construction.
    """
    red, pivots = rref(frac_rows(rows)) if rows else ([], [])
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def solve_in_span(basis, target):
    """Coordinates of `target` in span(basis), or None.

    `basis` is a list of vectors; solves sum_i x_i basis_i = target exactly.
    """
    if not basis:
        return [] if all(t == 0 for t in target) else None
    n = len(target)
    aug = [[Fraction(basis[j][i]) for j in range(len(basis))] + [Fraction(target[i])]
           for i in range(n)]
    red, pivots = rref(aug)
    k = len(basis)
    if k in pivots:
        return None
    coords = [Fraction(0)] * k
    for r, pc in enumerate(pivots):
        coords[pc] = red[r][k]
    return coords


def invert(rows):
    """Exact inverse of a square matrix; raises ValueError if singular."""
    n = len(rows)
    aug = [[Fraction(rows[i][j]) for j in range(n)]
           + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def det(rows):
    """Exact determinant by fraction elimination."""
    n = len(rows)
    m = frac_rows(rows)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        result *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * result


def _as_int(x):
    if isinstance(x, int):
        return x
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"expected an integer entry, got {x}")
    return f.numerator


def int_det(rows):
    """Bareiss fraction-free determinant of a small integer matrix."""
    n = len(rows)
    m = [[_as_int(x) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def leading_principal_minors(rows):
    n = len(rows)
    return [det([row[: k + 1] for row in rows[: k + 1]]) for k in range(n)]


def is_positive_definite(rows):
    """Sylvester criterion with exact minors."""
    return all(m > 0 for m in leading_principal_minors(rows))


def is_negative_definite(rows):
    n = len(rows)
    minors = leading_principal_minors(rows)
    return all((m < 0) if (k % 2 == 0) else (m > 0) for k, m in enumerate(minors))


def gram_schmidt(vectors, form):
    """B-orthogonalize `vectors` without normalizing (stays rational).

    `form(u, v)` must be a symmetric bilinear form that is definite on the
    span.  Output vectors are scaled to integer entries for readability.
    """
    ortho = []
    for v in vectors:
        w = [Fraction(x) for x in v]
        for u in ortho:
            c = form(w, u) / form(u, u)
            if c != 0:
                w = [a - c * b for a, b in zip(w, u)]
        ortho.append(_clear_denominators(w))
    return ortho


def _clear_denominators(vec):
    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    vec = [x * denom for x in vec]
    g = 0
    for x in vec:
        g = gcd(g, abs(x.numerator))
    if g > 1:
        vec = [x / g for x in vec]
    return vec


# ---------------------------------------------------------------------------
# Modular fast path


def _rational_reconstruct(a, m):
    """Wang reconstruction of a mod m to n/d with |n|, d <= sqrt(m/2)."""
    a %= m
    if a == 0:
        return Fraction(0)
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _rref_mod_p(mat, p):
    """Vectorized RREF of an int64 matrix mod p; returns (reduced, pivots)."""
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a[: len(pivots)], pivots


def _crt_pair(a1, m1, a2, m2):
    d = pow(m1, -1, m2)
    t = ((a2 - a1) * d) % m2
    return a1 + m1 * t, m1 * m2


def integer_kernel(int_rows, ncols):
    """Certified exact kernel basis of an integer matrix.

    `int_rows` may be dense lists or sparse dicts {col: int}.  Returns
    (basis, free_columns); basis vectors carry the identity pattern on the
    free columns.  The result is unconditionally exact: verified kernel
    vectors give nullity_Q >= nullity_p, and rank_p <= rank_Q gives the
    reverse inequality.  Falls back through wider CRT moduli (and finally
    exact elimination) until verification succeeds.
    """
    sparse = [row if isinstance(row, dict) else
              {j: int(v) for j, v in enumerate(row) if v} for row in int_rows]
    sparse = [row for row in sparse if row]
    if not sparse:
        basis = []
        for f in range(ncols):
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            basis.append(v)
        return basis, list(range(ncols))

    dense = np.zeros((len(sparse), ncols), dtype=np.int64)
    big = {}
    for i, row in enumerate(sparse):
        for j, v in row.items():
            if -(2**62) < v < 2**62:
                dense[i, j] = v
            else:
                big[(i, j)] = v  # reduced per prime below

    for nprimes in (1, 2, 4):
        primes = _PRIMES[:nprimes]
        residues = []
        pivots0 = None
        ok = True
        for p in primes:
            a = dense % p
            for (i, j), v in big.items():
                a[i, j] = v % p
            red, pivots = _rref_mod_p(a, p)
            if pivots0 is None:
                pivots0 = pivots
            elif pivots != pivots0:
                ok = False  # rank disagreement between primes; widen modulus
                break
            residues.append((red, p))
        if not ok:
            continue
        candidates = _lift_kernel(residues, pivots0, ncols)
        if candidates is None:
            continue
        if all(_verify_kernel_vector(sparse, v) for v in candidates):
            pivot_set = set(pivots0)
            return candidates, [c for c in range(ncols) if c not in pivot_set]
    # Last resort: exact elimination (slow, but unconditional).
    dense_rows = [[row.get(j, 0) for j in range(ncols)] for row in sparse]
    red, pivots = rref(frac_rows(dense_rows))
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis, free


def _lift_kernel(residues, pivots, ncols):
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    modulus = 1
    for _, p in residues:
        modulus *= p
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            a, m = 0, 1
            for red, p in residues:
                a, m = _crt_pair(a, m, int(red[r, f]), p) if m > 1 else (int(red[r, f]), p)
            q = _rational_reconstruct((-a) % modulus, modulus)
            if q is None:
                return None
            v[pc] = q
        basis.append(v)
    return basis


def _verify_kernel_vector(sparse_rows, vec):
    for row in sparse_rows:
        s = Fraction(0)
        for j, c in row.items():
            if vec[j]:
                s += c * vec[j]
        if s != 0:
            return False
    return True


def kernel_sparse(rows, ncols, cutoff=140):
    """Kernel of a sparse Fraction matrix (rows are {col: Fraction} dicts).

    Returns (basis, free_columns); basis vectors carry the identity pattern
    on the free columns, so coordinates in this basis can be read off.
    Small systems run exact elimination; large ones take the modular path.
    """
    rows = [row for row in rows if row]
    if ncols <= cutoff or not rows:
        dense = [[Fraction(0)] * ncols for _ in rows]
        for i, row in enumerate(rows):
            for j, v in row.items():
                dense[i][j] = Fraction(v)
        red, pivots = rref(dense) if dense else ([], [])
        pivot_set = set(pivots)
        free = [c for c in range(ncols) if c not in pivot_set]
        basis = []
        for f in free:
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -red[r][f]
            basis.append(v)
        return basis, free
    int_rows = []
    for row in rows:
        denom = 1
        for x in row.values():
            fx = Fraction(x)
            denom = denom * fx.denominator // gcd(denom, fx.denominator)
        int_rows.append({j: int(Fraction(x) * denom) for j, x in row.items()
                         if Fraction(x) != 0})
    return integer_kernel(int_rows, ncols)
