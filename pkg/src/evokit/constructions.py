"""Builders for the nilpotent evolution-algebra families.

Every builder emits an EvolutionMatrix over the given field, in the basis
order in which the family's annihilator series is a chain of coordinate
suffixes (last vector annihilates first).  Indices in the docstrings are
1-based to match the multiplication tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .algebra import EvolutionMatrix
from .errors import BadShape, PatternViolation, ZeroC, ZeroGramEntry, ZeroVectorU


@dataclass
class TypeOnesParams:
    """Data for the [1 x k, n] family: a nowhere-zero diagonal Gram vector
    lam_1..lam_n and a (k-1) x n table mu of eigenvalues, one row per
    commuting endomorphism, one column per orthogonal basis vector."""

    n: int
    k: int
    gram: tuple
    eigen: tuple  # (k-1) rows of n eigenvalues


@dataclass
class ElrParams:
    """Data for the two-tail family with an l-chain, an n-dimensional middle
    block, and an r-chain: Gram diagonal lam_1..lam_n (nowhere zero) and the
    coordinates c_1..c_n of the distinguished middle vector (not all zero)."""

    l: int
    n: int
    r: int
    gram: tuple
    u_coords: tuple


@dataclass
class ChainParams:
    """Data for the graded chain family: level sizes m_1..m_k and, for each
    level i < k, the list of level-(i+1) coordinate vectors giving the
    square of each level-i basis vector (off-diagonal products vanish by
    construction and are not stored)."""

    dims: tuple
    squares: tuple  # squares[i][j] = vector of length dims[i+1]


def _coerce_nonzero_gram(field, gram, n):
    if len(gram) != n:
        raise BadShape(f"gram must have length {n}")
    out = []
    for a in gram:
        v = field.coerce(a)
        if field.is_zero(v):
            raise ZeroGramEntry("diagonal Gram coefficients must be nonzero")
        out.append(v)
    return out


def build_type_ones(field, params: TypeOnesParams) -> EvolutionMatrix:
    """dim n+k table: e_i^2 = sum_j lam_ij e_{n+j} for i <= n with
    lam_i1 = lam_i and lam_ij = mu[j-2][i] * lam_i; e_{n+j}^2 = e_{n+j+1}
    for j < k; e_{n+k}^2 = 0."""
    n, k = params.n, params.k
    if n < 1 or k < 1:
        raise BadShape("need n >= 1 and k >= 1")
    lam = _coerce_nonzero_gram(field, params.gram, n)
    eigen = [list(row) for row in params.eigen]
    if len(eigen) != k - 1 or any(len(row) != n for row in eigen):
        raise BadShape(f"eigen must be a {k - 1} x {n} table")
    dim = n + k
    zero = field.zero
    rows = [[zero] * dim for _ in range(dim)]
    for i in range(n):
        rows[i][n] = lam[i]
        for j in range(2, k + 1):
            rows[i][n + j - 1] = field.mul(field.coerce(eigen[j - 2][i]), lam[i])
    for j in range(k - 1):
        rows[n + j][n + j + 1] = field.one
    return EvolutionMatrix(field, rows)


def build_bnk(field, n: int, k: int) -> EvolutionMatrix:
    """dim n+k table with a doubled link in the tail:
    h_i^2 = h_{n+1} (i <= n); h_i^2 = h_{i+1} + h_{i+2} (n+1 <= i <= n+k-2);
    h_{n+k-1}^2 = h_{n+k}; h_{n+k}^2 = 0."""
    if n < 1:
        raise BadShape("need n >= 1")
    if k < 2:
        raise BadShape("need k >= 2")
    dim = n + k
    zero, one = field.zero, field.one
    rows = [[zero] * dim for _ in range(dim)]
    for i in range(n):
        rows[i][n] = one
    for i in range(n, n + k - 2):
        rows[i][i + 1] = one
        rows[i][i + 2] = one
    rows[n + k - 2][n + k - 1] = one
    return EvolutionMatrix(field, rows)


def build_elr(field, params: ElrParams) -> EvolutionMatrix:
    """dim l+n+r table: e_i^2 = e_{i+1} along both chains, e_l^2 fans out to
    the middle block with coefficients c_k, each middle vector squares to
    lam_j e_{l+n+1}, and the last vector squares to zero."""
    l, n, r = params.l, params.n, params.r
    if l < 1 or n < 1 or r < 1:
        raise BadShape("need l, n, r >= 1")
    lam = _coerce_nonzero_gram(field, params.gram, n)
    if len(params.u_coords) != n:
        raise BadShape(f"u_coords must have length {n}")
    c = [field.coerce(a) for a in params.u_coords]
    if all(field.is_zero(a) for a in c):
        raise ZeroVectorU("the distinguished middle vector must be nonzero")
    dim = l + n + r
    zero, one = field.zero, field.one
    rows = [[zero] * dim for _ in range(dim)]
    for i in range(l - 1):
        rows[i][i + 1] = one
    for kk in range(n):
        rows[l - 1][l + kk] = c[kk]
    for j in range(n):
        rows[l + j][l + n] = lam[j]
    for i in range(l + n, l + n + r - 1):
        rows[i][i + 1] = one
    return EvolutionMatrix(field, rows)


def _ma1_allowed_columns(l, n, r, i):
    """Allowed (0-based) column range for 0-based row i of the block pattern."""
    dim = l + n + r
    if i < l:
        return range(i + 1, dim)
    if i < l + n:
        return range(l + n, dim)
    if i < dim - 1:
        return range(i + 1, dim)
    return range(0)


def build_ma1(field, l: int, n: int, r: int, alpha) -> EvolutionMatrix:
    """General member of the chain-adapted block pattern: rows up to l may
    hit any later column, middle rows only the final r columns, tail rows
    only later tail columns, last row zero.  `alpha` is the full dim x dim
    coefficient table; entries outside the pattern raise PatternViolation."""
    if l < 1 or n < 1 or r < 1:
        raise BadShape("need l, n, r >= 1")
    dim = l + n + r
    if len(alpha) != dim or any(len(row) != dim for row in alpha):
        raise BadShape("alpha must be a dim x dim table")
    rows = [[field.coerce(a) for a in row] for row in alpha]
    for i in range(dim):
        allowed = set(_ma1_allowed_columns(l, n, r, i))
        for j in range(dim):
            if j not in allowed and not field.is_zero(rows[i][j]):
                raise PatternViolation(f"entry at row {i + 1}, column {j + 1} outside pattern")
    return EvolutionMatrix(field, rows)


def build_ma2(field, l: int, n: int, r: int, c, alpha) -> EvolutionMatrix:
    """The block pattern with the first middle row shortcut to the last
    vector: h_{l+1}^2 = c h_{l+n+r} with c != 0.  `alpha` supplies the other
    rows (row l+1 of alpha must be zero)."""
    if l < 1 or n < 1 or r < 1:
        raise BadShape("need l, n, r >= 1")
    cval = field.coerce(c)
    if field.is_zero(cval):
        raise ZeroC("the shortcut coefficient must be nonzero")
    dim = l + n + r
    if len(alpha) != dim or any(len(row) != dim for row in alpha):
        raise BadShape("alpha must be a dim x dim table")
    if any(not field.is_zero(field.coerce(a)) for a in alpha[l]):
        raise PatternViolation("row l+1 is fixed by c; its alpha row must be zero")
    full = [list(row) for row in alpha]
    full[l] = [field.zero] * dim
    full[l][dim - 1] = cval
    return build_ma1(field, l, n, r, full)


def build_ma12(field, l: int, n: int, r: int, alpha_rows) -> EvolutionMatrix:
    """The block pattern with doubled links along both chains:
    h_i^2 = h_{i+1} + h_{i+2} for i <= l and along the tail (except the
    next-to-last plain link), middle rows given by `alpha_rows`
    (n rows of r coefficients on the final columns)."""
    if l < 1 or n < 1:
        raise BadShape("need l >= 1 and n >= 1")
    if r < 2:
        raise BadShape("need r >= 2 (the doubled-link tail rows collide otherwise)")
    if len(alpha_rows) != n or any(len(row) != r for row in alpha_rows):
        raise BadShape(f"alpha_rows must be an {n} x {r} table")
    dim = l + n + r
    zero, one = field.zero, field.one
    rows = [[zero] * dim for _ in range(dim)]
    for i in range(l):
        rows[i][i + 1] = one
        rows[i][i + 2] = one
    for t in range(n):
        for j in range(r):
            rows[l + t][l + n + j] = field.coerce(alpha_rows[t][j])
    for m in range(r - 2):
        rows[l + n + m][l + n + m + 1] = one
        rows[l + n + m][l + n + m + 2] = one
    rows[dim - 2][dim - 1] = one
    return EvolutionMatrix(field, rows)


def build_eub(field, n: int, gram) -> EvolutionMatrix:
    """dim n+2 table of the flat family: e_i^2 = lam_i e_{n+2} for i <= n,
    the last two vectors square to zero.  Type comes out [2, n]."""
    if n < 1:
        raise BadShape("need n >= 1")
    lam = _coerce_nonzero_gram(field, gram, n)
    dim = n + 2
    rows = [[field.zero] * dim for _ in range(dim)]
    for i in range(n):
        rows[i][dim - 1] = lam[i]
    return EvolutionMatrix(field, rows)


def build_chain(field, params: ChainParams) -> EvolutionMatrix:
    """Graded chain algebra on blocks of sizes m_1..m_k: each level-i basis
    vector squares to a prescribed level-(i+1) vector, the last level
    squares to zero, and all distinct basis products vanish."""
    dims = list(params.dims)
    k = len(dims)
    if k < 1 or any(m < 1 for m in dims):
        raise BadShape("need k >= 1 levels with every m_i >= 1")
    squares = [list(level) for level in params.squares]
    if len(squares) != k - 1:
        raise BadShape(f"need square data for {k - 1} levels")
    offsets = [0]
    for m in dims:
        offsets.append(offsets[-1] + m)
    dim = offsets[-1]
    rows = [[field.zero] * dim for _ in range(dim)]
    for i in range(k - 1):
        if len(squares[i]) != dims[i]:
            raise BadShape(f"level {i + 1} needs {dims[i]} square vectors")
        for j, vec in enumerate(squares[i]):
            if len(vec) != dims[i + 1]:
                raise BadShape(
                    f"square vector at level {i + 1} must have length {dims[i + 1]}"
                )
            row = offsets[i] + j
            for t, a in enumerate(vec):
                rows[row][offsets[i + 1] + t] = field.coerce(a)
    return EvolutionMatrix(field, rows)


def chain_diagonals_nonzero(field, params: ChainParams) -> bool:
    """True when every prescribed square below the top level is nonzero.

    This is exactly the condition under which the type of build_chain equals
    the reversed level sizes; a single zero square inflates the first
    annihilator and breaks the count.
    """
    for level in params.squares:
        for vec in level:
            if all(field.is_zero(field.coerce(a)) for a in vec):
                return False
    return True


def chain_squares_surjective(field, params: ChainParams) -> bool:
    """True when, at every level, the prescribed squares span the next level."""
    for i, level in enumerate(params.squares):
        target = params.dims[i + 1]
        vecs = [[field.coerce(a) for a in vec] for vec in level]
        if linalg.rank(field, vecs) != target:
            return False
    return True


def enumerate_type_ones(field, n: int, k: int):
    """All valid (gram, eigen) parameterizations over a finite field, in
    deterministic lexicographic order.  Yields (params, matrix)."""
    p = field.order
    nonzero = list(range(1, p))
    for gram in itertools.product(nonzero, repeat=n):
        for flat in itertools.product(range(p), repeat=(k - 1) * n):
            eigen = tuple(tuple(flat[r * n : (r + 1) * n]) for r in range(k - 1))
            params = TypeOnesParams(n=n, k=k, gram=gram, eigen=eigen)
            yield params, build_type_ones(field, params)


def enumerate_elr(field, l: int, n: int, r: int):
    """All valid (gram, u_coords) parameterizations over a finite field."""
    p = field.order
    nonzero = list(range(1, p))
    for gram in itertools.product(nonzero, repeat=n):
        for coords in itertools.product(range(p), repeat=n):
            if not any(coords):
                continue
            params = ElrParams(l=l, n=n, r=r, gram=gram, u_coords=coords)
            yield params, build_elr(field, params)
