"""Exact dense linear algebra over a field handle.

Matrices are lists of row lists of raw scalars.  Everything is computed by
fraction-free-free, plain Gauss-Jordan elimination: entries stay exact
(Fraction over Q, ints modulo p), and the reduced row echelon form is the
canonical representative used for subspace equality throughout the package.
"""

from __future__ import annotations

from .errors import DimensionMismatch, SingularMatrix


def rref(field, rows):
    """Reduced row echelon form.

    Returns (rows, pivots): nonzero rows with leading 1s, strictly increasing
    pivot columns, pivot columns cleared above and below.  Input is not
    modified.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    sub, mul, inv, is_zero = field.sub, field.mul, field.inv, field.is_zero
    out = []
    pivots = []
    for row in rows:
        if len(row) != ncols:
            raise DimensionMismatch("ragged matrix")
        for prow, pc in zip(out, pivots):
            f = row[pc]
            if not is_zero(f):
                row = [sub(a, mul(f, b)) for a, b in zip(row, prow)]
        pc = next((i for i, a in enumerate(row) if not is_zero(a)), None)
        if pc is None:
            continue
        f = inv(row[pc])
        row = [mul(f, a) for a in row]
        for k in range(len(out)):
            g = out[k][pc]
            if not is_zero(g):
                out[k] = [sub(a, mul(g, b)) for a, b in zip(out[k], row)]
        out.append(row)
        pivots.append(pc)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order], [pivots[i] for i in order]


def rank(field, rows) -> int:
    return len(rref(field, rows)[0])


def residual(field, rref_rows, pivots, vector):
    """Reduce a vector against an RREF basis; zero residual means membership."""
    sub, mul, is_zero = field.sub, field.mul, field.is_zero
    v = list(vector)
    for row, pc in zip(rref_rows, pivots):
        f = v[pc]
        if not is_zero(f):
            v = [sub(a, mul(f, b)) for a, b in zip(v, row)]
    return v


def kernel_basis(field, rows, ncols):
    """RREF basis of {x in F^ncols : sum_i x_i rows[i] = 0}.

    `rows` is an ncols x m matrix, i.e. the kernel of the row-vector map
    x -> x . rows.  Computed by reducing the transpose and reading off the
    free-variable solutions.
    """
    if len(rows) != ncols:
        raise DimensionMismatch(f"expected {ncols} rows, got {len(rows)}")
    m = len(rows[0]) if rows and rows[0] else 0
    if m == 0:
        return identity(field, ncols)
    transposed = [[rows[i][j] for i in range(ncols)] for j in range(m)]
    red, pivots = rref(field, transposed)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    neg = field.neg
    for j in free:
        v = [field.zero] * ncols
        v[j] = field.one
        for row, pc in zip(red, pivots):
            v[pc] = neg(row[j])
        basis.append(v)
    red2, _ = rref(field, basis)
    return red2


def mat_mul(field, a, b):
    if not a:
        return []
    if len(a[0]) != len(b):
        raise DimensionMismatch("matrix product shape mismatch")
    add, mul = field.add, field.mul
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [field.zero] * cols
        for x, brow in zip(row, b):
            if field.is_zero(x):
                continue
            acc = [add(c, mul(x, y)) for c, y in zip(acc, brow)]
        out.append(acc)
    return out


def vec_mat(field, v, m):
    return mat_mul(field, [list(v)], m)[0]


def identity(field, n):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_inv(field, m):
    """Inverse via Gauss-Jordan on [m | I]; raises SingularMatrix."""
    n = len(m)
    aug = [list(row) + idrow for row, idrow in zip(m, identity(field, n))]
    red, pivots = rref(field, aug)
    if pivots[: len(red)] != list(range(n)) or len(red) != n:
        raise SingularMatrix("matrix is not invertible")
    return [row[n:] for row in red]


def is_invertible(field, m) -> bool:
    n = len(m)
    return rank(field, m) == n


def random_invertible(field, n, rng):
    """Rejection-sample an invertible n x n matrix over the field."""
    while True:
        rows = [[field.random_scalar(rng) for _ in range(n)] for _ in range(n)]
        if is_invertible(field, rows):
            return rows
