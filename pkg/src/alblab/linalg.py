"""Small exact linear algebra kit over the rationals.

Vectors are lists/tuples of Fraction (ints are accepted and coerced).
Subspaces are represented by spanning lists of row vectors; ``rref``
canonicalizes them, which makes equality of subspaces decidable.
A float code path (numpy, rank tolerance) is provided for the few
operations that must also accept inexact input.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

FLOAT_RANK_TOL = 1e-12


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact path needs int/Fraction entries, got {type(x).__name__}")


def rref(rows):
    """Reduced row echelon form. Returns (rows, pivot_columns); zero rows dropped."""
    mat = [[_frac(x) for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return [row for row in mat[:r]], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def span_basis(rows):
    """Canonical (rref) basis of the span of the given vectors."""
    return rref(rows)[0]


def span_equal(a, b) -> bool:
    return span_basis(a) == span_basis(b)


def in_span(vectors, target) -> bool:
    """Exact membership of ``target`` in span(vectors)."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return all(_frac(x) == 0 for x in target)
    return rank(vecs) == rank(vecs + [list(target)])


def subspace_leq(a, b) -> bool:
    """span(a) <= span(b)."""
    return all(in_span(b, v) for v in a)


def nullspace(rows):
    """Basis of the right kernel {x : A x = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def matvec(mat, vec):
    return [sum((_frac(a) * _frac(x) for a, x in zip(row, vec)), Fraction(0)) for row in mat]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((_frac(x) * _frac(y) for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_power(mat, k):
    n = len(mat)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = matmul(out, mat)
    return out


def image(mat, vectors=None):
    """Basis of A·span(vectors); full column space when vectors is None."""
    n = len(mat)
    if vectors is None:
        vectors = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return span_basis([matvec(mat, v) for v in vectors])


def kernel_of_power(mat, k):
    return nullspace(mat_power(mat, k))


def intersect(a, b):
    """Basis of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    ncols = len(a[0])
    # x = sum s_i a_i = sum t_j b_j  <=>  [A^T | -B^T](s,t) = 0
    stacked = [[_frac(a[i][c]) for i in range(len(a))] + [-_frac(b[j][c]) for j in range(len(b))]
               for c in range(ncols)]
    out = []
    for sol in nullspace(stacked):
        coeffs = sol[: len(a)]
        vec = [sum((coeffs[i] * _frac(a[i][c]) for i in range(len(a))), Fraction(0)) for c in range(ncols)]
        if any(x != 0 for x in vec):
            out.append(vec)
    return span_basis(out)


def add_spans(a, b):
    return span_basis(list(a) + list(b))


def preimage(mat, subspace):
    """Basis of {v : A v ∈ span(subspace)}."""
    n = len(mat[0])
    m = len(mat)
    k = len(subspace)
    # A v - B^T c = 0 in the unknowns (v, c)
    rows = [[_frac(mat[i][j]) for j in range(n)] + [-_frac(subspace[t][i]) for t in range(k)]
            for i in range(m)]
    sols = nullspace(rows)
    return span_basis([s[:n] for s in sols if any(x != 0 for x in s[:n])])


def solve_in_span(vectors, target):
    """Coefficients c with sum c_i vectors_i = target, or None."""
    if not vectors:
        return [] if all(_frac(x) == 0 for x in target) else None
    ncols = len(vectors[0])
    aug = [[_frac(vectors[i][c]) for i in range(len(vectors))] + [_frac(target[c])]
           for c in range(ncols)]
    red, pivots = rref(aug)
    if len(vectors) in pivots:
        return None
    coeffs = [Fraction(0)] * len(vectors)
    for i, p in enumerate(pivots):
        coeffs[p] = red[i][-1]
    return coeffs


def extend_basis(inside, ambient):
    """Vectors from ``ambient`` extending a basis of span(inside) to span(inside + ambient)."""
    current = list(span_basis(inside))
    out = []
    for v in ambient:
        if not in_span(current, v):
            out.append(list(map(_frac, v)))
            current = span_basis(current + [out[-1]])
    return out


# --- float path -------------------------------------------------------------

def float_rank(rows, tol=FLOAT_RANK_TOL):
    arr = np.asarray(rows, dtype=complex)
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    scale = max(s[0], 1.0) if len(s) else 1.0
    return int(np.sum(s > tol * scale))


def float_in_span(vectors, target, tol=FLOAT_RANK_TOL):
    vecs = [list(map(complex, v)) for v in vectors]
    tgt = list(map(complex, target))
    if not vecs:
        return max(abs(x) for x in tgt) <= tol
    return float_rank(vecs, tol) == float_rank(vecs + [tgt], tol)
