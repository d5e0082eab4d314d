"""Core engine: evolution algebras, commutative structure tensors, subspace
arithmetic, power chains, the upper annihilating series, nilpotency, types,
and the attached directed graph.

Conventions
-----------
* Basis indices are 0-based internally; serialized forms and graph labels
  are 1-based.
* An algebra element is a plain list/tuple of raw scalars of the algebra's
  field.
* A product of two subspaces is the span of all pairwise products of their
  basis vectors; by bilinearity that equals the span of all products.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from . import linalg
from .errors import DimensionMismatch, NotNilpotentError
from .field import check_same_field


class EvolutionMatrix:
    """Structural constants of a natural basis: e_i^2 = sum_k rows[i][k] e_k,
    distinct basis products vanish."""

    __slots__ = ("field", "dim", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.dim = len(rows)
        if self.dim == 0:
            raise DimensionMismatch("dimension must be >= 1")
        coerced = []
        for row in rows:
            if len(row) != self.dim:
                raise DimensionMismatch("structural matrix must be square")
            coerced.append(tuple(field.coerce(a) for a in row))
        self.rows = tuple(coerced)

    def __eq__(self, other):
        return (
            isinstance(other, EvolutionMatrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.spec, self.rows))

    def __repr__(self):
        return f"EvolutionMatrix({self.field!r}, dim={self.dim})"

    def to_tensor(self) -> "StructureTensor":
        return evolution_to_tensor(self)


class StructureTensor:
    """Commutative product table: table[(i, j)] with i <= j holds the
    coordinate vector of e_i e_j; missing pairs multiply to zero."""

    __slots__ = ("field", "dim", "table")

    def __init__(self, field, dim, table):
        if dim < 1:
            raise DimensionMismatch("dimension must be >= 1")
        self.field = field
        self.dim = dim
        clean = {}
        for (i, j), vec in table.items():
            if not (0 <= i <= j < dim):
                raise DimensionMismatch(f"bad basis pair ({i}, {j})")
            if len(vec) != dim:
                raise DimensionMismatch("product vector has wrong length")
            v = tuple(field.coerce(a) for a in vec)
            if any(not field.is_zero(a) for a in v):
                clean[(i, j)] = v
        self.table = clean

    def product_of_basis(self, i, j):
        if i > j:
            i, j = j, i
        vec = self.table.get((i, j))
        if vec is None:
            return (self.field.zero,) * self.dim
        return vec

    def is_evolution_form(self) -> bool:
        """True when only diagonal pairs multiply nonzero (natural basis)."""
        return all(i == j for (i, j) in self.table)

    def square_rows(self):
        """Rows of squares e_i^2, as a dense dim x dim list."""
        return [list(self.product_of_basis(i, i)) for i in range(self.dim)]

    def __eq__(self, other):
        return (
            isinstance(other, StructureTensor)
            and self.field == other.field
            and self.dim == other.dim
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.field.spec, self.dim, tuple(sorted(self.table.items()))))

    def __repr__(self):
        return f"StructureTensor({self.field!r}, dim={self.dim}, nonzero_pairs={len(self.table)})"


def evolution_to_tensor(a: EvolutionMatrix) -> StructureTensor:
    """Transcribe a structural matrix into the general tensor form:
    c_iik = a_ik, all off-diagonal products zero."""
    table = {(i, i): a.rows[i] for i in range(a.dim)}
    return StructureTensor(a.field, a.dim, table)


def multiply(t: StructureTensor, x, y):
    """Bilinear product of two coordinate vectors in the algebra of `t`."""
    if len(x) != t.dim or len(y) != t.dim:
        raise DimensionMismatch("element length does not match algebra dimension")
    f = t.field
    add, mul = f.add, f.mul
    out = [f.zero] * t.dim
    for (i, j), vec in t.table.items():
        if i == j:
            c = mul(x[i], y[i])
        else:
            c = add(mul(x[i], y[j]), mul(x[j], y[i]))
        if f.is_zero(c):
            continue
        for k, v in enumerate(vec):
            if not f.is_zero(v):
                out[k] = add(out[k], mul(c, v))
    return out


class Subspace:
    """A subspace of F^n held as its reduced row echelon basis.

    The RREF is a canonical form: two subspaces are equal iff their bases
    are identical tuples.
    """

    __slots__ = ("field", "ambient_dim", "rows", "pivots")

    def __init__(self, field, ambient_dim, rref_rows, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows = tuple(tuple(r) for r in rref_rows)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, field, ambient_dim, vectors):
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length does not match ambient dimension")
        red, piv = linalg.rref(field, vecs)
        return cls(field, ambient_dim, red, piv)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, [], [])

    @classmethod
    def full(cls, field, ambient_dim):
        eye = linalg.identity(field, ambient_dim)
        return cls(field, ambient_dim, eye, list(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, vector) -> bool:
        res = linalg.residual(self.field, self.rows, self.pivots, vector)
        return all(self.field.is_zero(a) for a in res)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace.from_vectors(
            self.field, self.ambient_dim, list(self.rows) + list(other.rows)
        )

    def is_coordinate(self) -> bool:
        """True when the subspace is spanned by standard basis vectors."""
        one, is_zero = self.field.one, self.field.is_zero
        for row, pc in zip(self.rows, self.pivots):
            for k, a in enumerate(row):
                if k == pc:
                    if a != one:
                        return False
                elif not is_zero(a):
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_product(t: StructureTensor, s: Subspace, w: Subspace) -> Subspace:
    """Span of all products s.w, computed from basis pairs."""
    if s.ambient_dim != t.dim or w.ambient_dim != t.dim:
        raise DimensionMismatch("subspace ambient dimension does not match algebra")
    check_same_field(s.field, t.field)
    prods = [multiply(t, u, v) for u in s.rows for v in w.rows]
    return Subspace.from_vectors(t.field, t.dim, prods)


POWER_ZERO = "reached_zero"
POWER_STABLE = "stabilized_nonzero"
POWER_TRUNCATED = "truncated"


@dataclass(frozen=True)
class PowerChain:
    """The power sequence E^1 = E, E^k = sum_{i<k} E^i E^{k-i}.

    `spaces` runs from E^1 through the first occurrence of the final value
    (the zero space, or the certified stable nonzero space).  The sequence
    is decreasing but may plateau and drop again, so stabilization is only
    declared once a plateau starting at step m has persisted through step
    2m: from then on every summand of the recursion is frozen.
    """

    spaces: tuple
    status: str

    @property
    def dims(self):
        return tuple(s.dim for s in self.spaces)

    def reaches_zero(self) -> bool:
        return self.status == POWER_ZERO


def power_chain(t: StructureTensor, max_k: int | None = None) -> PowerChain:
    """Compute the power sequence until it hits zero or provably stabilizes.

    `max_k` caps the number of computed powers; hitting the cap without a
    certificate yields status "truncated".
    """
    if max_k is not None and max_k < 2:
        raise ValueError("max_k must be >= 2")
    full = Subspace.full(t.field, t.dim)
    chain = [full]

    # Hash-consing of distinct spaces makes product/sum memoization cheap:
    # long plateaus re-use the same handful of products.
    seen = {full.rows: full}
    prod_memo = {}
    sum_memo = {}

    def intern(space):
        return seen.setdefault(space.rows, space)

    def product(a, b):
        key = (a.rows, b.rows)
        got = prod_memo.get(key)
        if got is None:
            got = intern(subspace_product(t, a, b))
            prod_memo[key] = got
            prod_memo[(b.rows, a.rows)] = got
        return got

    def span_sum(parts):
        key = tuple(sorted({p.rows for p in parts}))
        got = sum_memo.get(key)
        if got is None:
            vecs = [r for rows in key for r in rows]
            got = intern(Subspace.from_vectors(t.field, t.dim, vecs))
            sum_memo[key] = got
        return got

    status = POWER_TRUNCATED
    plateau_start = 1  # 1-based index of first occurrence of current value
    k = 1
    while max_k is None or k < max_k:
        k += 1
        terms = [product(chain[i - 1], chain[k - i - 1]) for i in range(1, k // 2 + 1)]
        nxt = span_sum(terms)
        if nxt.rows != chain[-1].rows:
            plateau_start = k
        chain.append(nxt)
        if nxt.dim == 0:
            status = POWER_ZERO
            break
        if k >= 2 * plateau_start:
            # The plateau E^m = ... = E^{2m} freezes every summand of the
            # recursion from step m on, so the sequence is stable.
            status = POWER_STABLE
            break
    if status == POWER_STABLE:
        chain = chain[:plateau_start]
    return PowerChain(tuple(chain), status)


@dataclass(frozen=True)
class AnnihilatorChain:
    """Upper annihilating series ann^0 = 0 <= ann^1 <= ..., stored through the
    first stable space."""

    spaces: tuple

    @property
    def dims(self):
        return tuple(s.dim for s in self.spaces)

    def reaches_full(self) -> bool:
        last = self.spaces[-1]
        return last.dim == last.ambient_dim


def annihilator_step(t: StructureTensor, s: Subspace) -> Subspace:
    """{x : x . e_j in s for every basis vector e_j} (commutativity makes the
    two-sided condition one-sided)."""
    if s.ambient_dim != t.dim:
        raise DimensionMismatch("ambient dimension mismatch")
    f = t.field
    n = t.dim
    # Row i of the stacked system = concatenated residuals of e_i . e_j
    # against s over all j; the kernel of x -> x . (stack) is the preimage.
    stacked = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = t.product_of_basis(i, j)
            row.extend(linalg.residual(f, s.rows, s.pivots, prod))
        stacked.append(row)
    basis = linalg.kernel_basis(f, stacked, n)
    red, piv = linalg.rref(f, basis)
    return Subspace(f, n, red, piv)


def ann_chain(t: StructureTensor) -> AnnihilatorChain:
    """Iterate the annihilator step from 0 until the series stabilizes."""
    spaces = [Subspace.zero(t.field, t.dim)]
    while True:
        nxt = annihilator_step(t, spaces[-1])
        if nxt.rows == spaces[-1].rows:
            break
        spaces.append(nxt)
        if nxt.dim == t.dim:
            break
    return AnnihilatorChain(tuple(spaces))


@dataclass(frozen=True)
class NilpotencyResult:
    nilpotent: bool
    ann: AnnihilatorChain
    powers: PowerChain

    def __bool__(self):
        return self.nilpotent


def is_nilpotent(t: StructureTensor) -> NilpotencyResult:
    """Annihilator-series decision, cross-checked against the power sequence.

    The series reaching the whole algebra and the power sequence reaching
    zero must agree; a disagreement would be an internal bug and raises.
    """
    chain = ann_chain(t)
    powers = power_chain(t)
    verdict = chain.reaches_full()
    if powers.status == POWER_TRUNCATED:
        raise RuntimeError("power chain did not certify (unbounded run should)")
    if powers.reaches_zero() != verdict:
        raise RuntimeError(
            "nilpotency criteria disagree: ann dims "
            f"{chain.dims}, power dims {powers.dims}"
        )
    return NilpotencyResult(verdict, chain, powers)


def type_signature(t: StructureTensor):
    """Dimension jumps of the upper annihilating series, as a tuple.

    Raises NotNilpotentError when the series stabilizes below the whole
    algebra.
    """
    chain = ann_chain(t)
    if not chain.reaches_full():
        raise NotNilpotentError(f"series stabilizes at dims {chain.dims}")
    dims = chain.dims
    return tuple(dims[i + 1] - dims[i] for i in range(len(dims) - 1))


def change_basis(t: StructureTensor, p_rows) -> StructureTensor:
    """Re-express the algebra in the basis f_i = sum_j P[i][j] e_j.

    Raises SingularMatrix when P is not invertible.  The result is a general
    commutative tensor; evolution form is not preserved in general.
    """
    f = t.field
    n = t.dim
    p = [[f.coerce(a) for a in row] for row in p_rows]
    if len(p) != n or any(len(r) != n for r in p):
        raise DimensionMismatch("change of basis matrix must be dim x dim")
    p_inv = linalg.mat_inv(f, p)  # raises SingularMatrix
    table = {}
    for i in range(n):
        for j in range(i, n):
            prod = multiply(t, p[i], p[j])  # in old coordinates
            table[(i, j)] = linalg.vec_mat(f, prod, p_inv)
    return StructureTensor(f, n, table)


@dataclass(frozen=True)
class AlgebraGraph:
    """Directed graph on 1..n with an edge (i, j) whenever a_ij != 0."""

    n: int
    edges: tuple  # 1-based ordered pairs, row-major order

    def successors(self, i):
        return [j for (a, j) in self.edges if a == i]

    def to_dot(self) -> str:
        lines = ["digraph evolution_algebra {"]
        for i in range(1, self.n + 1):
            lines.append(f'  "e{i}";')
        for (i, j) in self.edges:
            lines.append(f'  "e{i}" -> "e{j}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph_of(a: EvolutionMatrix) -> AlgebraGraph:
    edges = []
    for i, row in enumerate(a.rows):
        for j, v in enumerate(row):
            if not a.field.is_zero(v):
                edges.append((i + 1, j + 1))
    return AlgebraGraph(a.dim, tuple(edges))


def triangular_witness(a: EvolutionMatrix):
    """A basis order making the structural matrix strictly upper triangular.

    Returns `order`, a list of 0-based original indices such that
    A[order[s]][order[t]] != 0 implies s < t, or None when the attached
    graph has a self-loop or directed cycle.  Ties are broken toward the
    natural order, so an already-triangular matrix yields the identity.

    Only basis permutations are searched; absence of a permutation witness
    is inconclusive for nilpotency (the series test is authoritative).
    """
    n = a.dim
    is_zero = a.field.is_zero
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        for j in range(n):
            if not is_zero(a.rows[i][j]):
                if i == j:
                    return None
                succ[i].append(j)
                indeg[j] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(order) < n:
        return None  # directed cycle
    return order


def permute_basis(a: EvolutionMatrix, order) -> EvolutionMatrix:
    """Evolution matrix after relabeling basis vectors by `order` (new index
    s corresponds to old index order[s])."""
    rows = [[a.rows[oi][oj] for oj in order] for oi in order]
    return EvolutionMatrix(a.field, rows)
