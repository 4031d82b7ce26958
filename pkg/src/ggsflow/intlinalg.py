"""Exact integer linear algebra on small dense matrices.

Everything here works on plain Python ``int`` lists so no value can overflow.
Matrices are lists of rows; vectors are lists.  The routines are meant for the
tens-of-generators scale of the chain complexes in this package, not for
large sparse problems.
"""
from __future__ import annotations

from math import gcd
from typing import List, Sequence, Tuple

Matrix = List[List[int]]
Vector = List[int]


def to_matrix(a) -> Matrix:
    """Copy anything row-iterable (numpy arrays included) into an int matrix."""
    return [[int(x) for x in row] for row in a]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = zeros(len(a), ncols)
    for i, row in enumerate(a):
        oi = out[i]
        for t in range(inner):
            v = row[t]
            if v:
                bt = b[t]
                for j in range(ncols):
                    oi[j] += v * bt[j]
    return out


def matvec(a: Matrix, v: Sequence[int]) -> Vector:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = gcd(a, b) >= 0`` and ``s*a + t*b = g``.

    When ``a`` divides ``b`` the answer is always ``(|a|, +-1, 0)`` so that
    elimination against ``a`` never mixes in the other operand.
    """
    if a and b % a == 0:
        return (a, 1, 0) if a > 0 else (-a, -1, 0)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def column_echelon(a: Matrix, ncols: int | None = None) -> Tuple[Matrix, Matrix, List[int]]:
    """Column-style Hermite reduction.

    Returns ``(h, t, pivots)`` with ``a @ t == h``, ``t`` unimodular and ``h`` in
    column echelon form: column ``c < len(pivots)`` has its first nonzero entry
    in row ``pivots[c]`` (positive), pivot rows strictly increase, and every
    column from ``len(pivots)`` on is zero.  The trailing columns of ``t``
    therefore form a basis of the integer kernel of ``a``.
    """
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    h = [row[:] for row in a]
    t = identity(n)
    pivots: List[int] = []
    c = 0
    for i in range(m):
        if c >= n:
            break
        # gcd-combine every column >= c into column c along row i
        for j in range(c + 1, n):
            if h[i][j] == 0:
                continue
            x, y = h[i][c], h[i][j]
            g, s, u = xgcd(x, y)
            p, q = x // g, y // g
            # [col_c, col_j] <- [s*col_c + u*col_j, -q*col_c + p*col_j]; det = 1
            for row in h:
                vc, vj = row[c], row[j]
                row[c] = s * vc + u * vj
                row[j] = -q * vc + p * vj
            for row in t:
                vc, vj = row[c], row[j]
                row[c] = s * vc + u * vj
                row[j] = -q * vc + p * vj
        if h[i][c] == 0:
            continue
        if h[i][c] < 0:
            for row in h:
                row[c] = -row[c]
            for row in t:
                row[c] = -row[c]
        pivots.append(i)
        c += 1
    return h, t, pivots


def kernel_basis(a: Matrix, ncols: int) -> List[Vector]:
    """Basis (as column vectors) of ``{x in Z^ncols : a x = 0}``."""
    if ncols == 0:
        return []
    if not a:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    _, t, pivots = column_echelon(a, ncols)
    return [[t[i][j] for i in range(ncols)] for j in range(len(pivots), ncols)]


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> Tuple[List[Vector], List[int]]:
    """Echelon basis of the Z-span of ``vectors`` (each of length ``dim``).

    Returns ``(basis, pivots)``; ``basis[c]`` has leading entry at ``pivots[c]``.
    """
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return [], []
    a = [[v[i] for v in vecs] for i in range(dim)]
    h, _, pivots = column_echelon(a, len(vecs))
    return [[h[i][c] for i in range(dim)] for c in range(len(pivots))], pivots


def solve_in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]],
                     pivots: Sequence[int]) -> List[int] | None:
    """Integer coordinates of ``v`` in an echelon basis, or ``None`` if ``v`` is
    not in the lattice."""
    w = list(v)
    coords = []
    start = 0
    for b, p in zip(basis, pivots):
        if any(w[start:p]):
            return None
        q, rem = divmod(w[p], b[p])
        if rem:
            return None
        if q:
            for i in range(p, len(w)):
                w[i] -= q * b[i]
        coords.append(q)
        start = p + 1
    if any(w):
        return None
    return coords


def smith_normal_form(a: Matrix, ncols: int | None = None) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms: returns ``(d, u, v)`` with
    ``u @ a @ v == d``, ``u`` and ``v`` unimodular, ``d`` diagonal with
    non-negative entries each dividing the next."""
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    d = [row[:] for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_combine(i, j, s, t, p, q):
        # [row_i, row_j] <- [s*row_i + t*row_j, p*row_i + q*row_j]
        for mat in (d, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [s * x + t * y for x, y in zip(ri, rj)]
            mat[j] = [p * x + q * y for x, y in zip(ri, rj)]

    def col_combine(i, j, s, t, p, q):
        for mat in (d, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = s * x + t * y
                row[j] = p * x + q * y

    for k in range(min(m, n)):
        # pick the smallest nonzero entry of the trailing block as pivot
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        while True:
            changed = False
            for i in range(k + 1, m):
                if d[i][k]:
                    g, s, t = xgcd(d[k][k], d[i][k])
                    p, q = d[k][k] // g, d[i][k] // g
                    row_combine(k, i, s, t, -q, p)
                    changed = True
            for j in range(k + 1, n):
                if d[k][j]:
                    g, s, t = xgcd(d[k][k], d[k][j])
                    p, q = d[k][k] // g, d[k][j] // g
                    col_combine(k, j, s, t, -q, p)
                    changed = True
            if not changed:
                # enforce divisibility of the remaining block
                bad = None
                for i in range(k + 1, m):
                    for j in range(k + 1, n):
                        if d[i][j] % d[k][k]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_combine(k, bad, 1, 1, 0, 1)
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return d, u, v


def invariant_factors(a: Matrix, ncols: int | None = None) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    d, _, _ = smith_normal_form(a, ncols)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(d[i][i])
    return out


def rank(a: Matrix, ncols: int | None = None) -> int:
    if not a:
        return 0
    _, _, pivots = column_echelon(a, ncols)
    return len(pivots)


def quotient_structure(sub_generators: Sequence[Sequence[int]],
                       lattice_basis_vectors: Sequence[Sequence[int]],
                       pivots: Sequence[int]) -> Tuple[int, List[int]]:
    """Structure of ``L / S`` for a sublattice ``S`` of ``L``.

    ``L`` is given by an echelon basis (see :func:`lattice_basis`) and ``S`` by
    any generating set contained in ``L``.  Returns ``(free_rank, torsion)``
    where ``torsion`` lists the invariant factors greater than one.
    """
    dim = len(lattice_basis_vectors)
    if dim == 0:
        return 0, []
    cols = []
    for s in sub_generators:
        c = solve_in_lattice(s, lattice_basis_vectors, pivots)
        if c is None:
            raise ValueError("generator does not lie in the ambient lattice")
        cols.append(c)
    if not cols:
        return dim, []
    coords = [[c[i] for c in cols] for i in range(dim)]
    inv = invariant_factors(coords, len(cols))
    return dim - len(inv), [x for x in inv if x > 1]


def vec_gcd(values: Sequence[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
