"""Homomorphism checks, basis-free fingerprints, and exhaustive
filtration-constrained isomorphism search over prime fields.

The search enumerates linear maps whose matrix respects the block pattern
forced by "images of the m-th annihilator land in the m-th annihilator".
Two independent engines are provided:

* ``count_all`` literally visits every assignment of the free entries
  (vectorized, in canonical row-major ascending-residue order) and returns
  every invertible homomorphism; the number of visited candidates is
  exactly p**f.
* ``first`` walks the same space as a depth-first search in the same
  canonical order, pruning assignments that already violate an equation or
  linear independence; it stops at the first witness, which is therefore
  the canonical-minimal one.  The index space may be partitioned freely;
  minimality does not depend on the partition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import (
    AnnihilatorChain,
    EvolutionMatrix,
    StructureTensor,
    Subspace,
    ann_chain,
    change_basis,
    multiply,
    power_chain,
    subspace_product,
)
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FieldMismatch,
    IncompatibleChains,
    InfiniteFieldUnsupported,
    NonCoordinateChain,
)

DEFAULT_BUDGET = 10**8

MODE_FIRST = "first"
MODE_COUNT_ALL = "count_all"


@dataclass(frozen=True)
class LinearMap:
    """Row i holds the image coordinates of source basis vector i."""

    src_dim: int
    dst_dim: int
    rows: tuple

    def apply(self, field, vector):
        return linalg.vec_mat(field, vector, [list(r) for r in self.rows])

    @classmethod
    def identity(cls, field, n):
        return cls(n, n, tuple(tuple(r) for r in linalg.identity(field, n)))


def _as_tensor(obj) -> StructureTensor:
    if isinstance(obj, EvolutionMatrix):
        return obj.to_tensor()
    if isinstance(obj, StructureTensor):
        return obj
    raise TypeError(f"expected an algebra, got {type(obj).__name__}")


def is_homomorphism(phi: LinearMap, src, dst) -> bool:
    """phi(e_i e_j) == phi(e_i) phi(e_j) on all basis pairs i <= j
    (bilinearity extends this to all elements)."""
    s, d = _as_tensor(src), _as_tensor(dst)
    if phi.src_dim != s.dim or phi.dst_dim != d.dim:
        raise DimensionMismatch("map shape does not match the algebras")
    if s.field != d.field:
        raise FieldMismatch("source and destination fields differ")
    f = s.field
    mat = [list(r) for r in phi.rows]
    for i in range(s.dim):
        for j in range(i, s.dim):
            lhs = linalg.vec_mat(f, s.product_of_basis(i, j), mat)
            rhs = multiply(d, mat[i], mat[j])
            if any(not f.eq(a, b) for a, b in zip(lhs, rhs)):
                return False
    return True


@dataclass(frozen=True)
class Fingerprint:
    """Basis-free invariants, all recomputable from the tensor alone."""

    dim: int
    field: str
    power_dims: tuple
    ann_dims: tuple
    type_parts: tuple | None  # None when not nilpotent
    square_product_dim: int  # dim of E^2 . E^2
    square_annihilator_dim: int  # dim of {x in E^2 : x . E^2 = 0}

    def as_dict(self):
        return {
            "dim": self.dim,
            "field": self.field,
            "power_dims": list(self.power_dims),
            "ann_dims": list(self.ann_dims),
            "type": None if self.type_parts is None else list(self.type_parts),
            "square_product_dim": self.square_product_dim,
            "square_annihilator_dim": self.square_annihilator_dim,
        }


def fingerprint(obj) -> Fingerprint:
    t = _as_tensor(obj)
    f = t.field
    powers = power_chain(t)
    chain = ann_chain(t)
    parts = None
    if chain.reaches_full():
        dims = chain.dims
        parts = tuple(dims[i + 1] - dims[i] for i in range(len(dims) - 1))
    full = Subspace.full(f, t.dim)
    e2 = subspace_product(t, full, full)
    e2e2 = subspace_product(t, e2, e2)
    # {x in E^2 : x . E^2 = 0} in E^2-coordinates: stack the products of the
    # E^2 basis with itself and take the kernel of the coefficient map.
    if e2.dim == 0:
        square_ann = 0
    else:
        stacked = []
        for u in e2.rows:
            row = []
            for w in e2.rows:
                row.extend(multiply(t, u, w))
            stacked.append(row)
        square_ann = len(linalg.kernel_basis(f, stacked, e2.dim))
    return Fingerprint(
        dim=t.dim,
        field=str(f.spec),
        power_dims=powers.dims,
        ann_dims=chain.dims,
        type_parts=parts,
        square_product_dim=e2e2.dim,
        square_annihilator_dim=square_ann,
    )


def filtration_levels(chain: AnnihilatorChain):
    """Per-basis-index filtration level: the least m with e_idx in ann^m,
    or math.inf when the series never absorbs the vector.

    Requires every space of the chain to be a coordinate subspace.
    """
    n = chain.spaces[0].ambient_dim
    levels = [math.inf] * n
    for m, space in enumerate(chain.spaces):
        if not space.is_coordinate():
            raise NonCoordinateChain(
                f"ann^{m} is not spanned by standard basis vectors"
            )
        for pc in space.pivots:
            if levels[pc] is math.inf:
                levels[pc] = m
    return levels


@dataclass(frozen=True)
class SearchPattern:
    """Per-entry Free/Zero flags for candidate matrices: entry (i, j) is free
    exactly when the destination level of j does not exceed the source level
    of i, so images of ann^m stay in ann^m."""

    free: tuple  # n x n tuple of bools

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def free_count(self) -> int:
        return sum(sum(1 for x in row if x) for row in self.free)

    @property
    def positions(self):
        return [
            (i, j)
            for i in range(self.dim)
            for j in range(self.dim)
            if self.free[i][j]
        ]

    @classmethod
    def full(cls, n: int) -> "SearchPattern":
        return cls(tuple(tuple(True for _ in range(n)) for _ in range(n)))


def filtration_pattern(src_chain: AnnihilatorChain, dst_chain: AnnihilatorChain) -> SearchPattern:
    """Pattern forced by phi(ann^m(src)) <= ann^m(dst) for every m.

    Raises IncompatibleChains when the dimension profiles differ (algebras of
    different type are never isomorphic) and NonCoordinateChain when a chain
    is not coordinate-aligned.
    """
    if src_chain.dims != dst_chain.dims:
        raise IncompatibleChains(
            f"profiles differ: {src_chain.dims} vs {dst_chain.dims}"
        )
    src_levels = filtration_levels(src_chain)
    dst_levels = filtration_levels(dst_chain)
    n = len(src_levels)
    free = tuple(
        tuple(dst_levels[j] <= src_levels[i] for j in range(n)) for i in range(n)
    )
    return SearchPattern(free)


@dataclass
class SearchResult:
    witnesses: list
    visited: int
    mode: str
    verdict: str  # "FOUND" or "NOT_FOUND"


def _require_finite(field):
    if field.order is None:
        raise InfiniteFieldUnsupported("exhaustive search needs a finite field")


def iso_search(src, dst, pattern: SearchPattern, mode: str = MODE_FIRST,
               budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Enumerate pattern-respecting linear maps, return the invertible
    homomorphisms.

    count_all mode visits all p**f candidates and returns every witness in
    canonical order; first mode prunes soundly and returns only the
    canonical-minimal witness.  Every reported witness is re-verified with
    is_homomorphism and an independent rank check before being returned.
    """
    s, d = _as_tensor(src), _as_tensor(dst)
    if s.field != d.field:
        raise FieldMismatch("source and destination fields differ")
    _require_finite(s.field)
    if s.dim != d.dim or pattern.dim != s.dim:
        raise DimensionMismatch("algebras and pattern must share one dimension")
    p = s.field.order
    f_count = pattern.free_count
    if p**f_count > budget:
        raise BudgetExceeded(f"{p}^{f_count} candidates exceed budget {budget}")
    if mode == MODE_COUNT_ALL:
        witnesses, visited = _search_count_all(s, d, pattern)
    elif mode == MODE_FIRST:
        witnesses, visited = _search_dfs(s, d, pattern)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for w in witnesses:
        # re-verify outside the search loop: a returned witness must stand
        # on the public homomorphism and rank checks alone
        if not is_homomorphism(w, s, d):
            raise RuntimeError("search returned a non-homomorphism")
        if not linalg.is_invertible(s.field, [list(r) for r in w.rows]):
            raise RuntimeError("search returned a singular map")
    return SearchResult(
        witnesses=witnesses,
        visited=visited,
        mode=mode,
        verdict="FOUND" if witnesses else "NOT_FOUND",
    )


def _dense_product_tensor(t: StructureTensor):
    n = t.dim
    out = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), vec in t.table.items():
        out[i, j, :] = vec
        out[j, i, :] = vec
    return out


def _vectorized_det(mats, p):
    """Determinants mod p of a (count, n, n) stack, via the Leibniz sum."""
    n = mats.shape[1]
    det = np.zeros(mats.shape[0], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b]
        )
        term = np.ones(mats.shape[0], dtype=np.int64)
        for i, j in enumerate(perm):
            term = term * mats[:, i, j] % p
        det = (det - term) % p if inversions % 2 else (det + term) % p
    return det


def _search_count_all(s: StructureTensor, d: StructureTensor, pattern: SearchPattern):
    p = s.field.order
    n = s.dim
    positions = pattern.positions
    f_count = len(positions)
    total = p**f_count
    dprod = _dense_product_tensor(d)
    src_pairs = [
        (i, j, np.array(s.product_of_basis(i, j), dtype=np.int64))
        for i in range(n)
        for j in range(i, n)
    ]
    witnesses = []
    chunk_size = 1 << 14
    for start in range(0, total, chunk_size):
        count = min(chunk_size, total - start)
        idx = np.arange(start, start + count, dtype=np.int64)
        mats = np.zeros((count, n, n), dtype=np.int64)
        rem = idx.copy()
        for pos in range(f_count - 1, -1, -1):
            i, j = positions[pos]
            mats[:, i, j] = rem % p
            rem //= p
        mask = np.ones(count, dtype=bool)
        for (i, j, vec) in src_pairs:
            lhs = (mats * vec[None, :, None]).sum(axis=1) % p
            rhs = np.einsum("ct,cu,tuk->ck", mats[:, i, :], mats[:, j, :], dprod) % p
            mask &= (lhs == rhs).all(axis=1)
        if n <= 4:
            mask &= _vectorized_det(mats, p) != 0
            survivors = np.nonzero(mask)[0]
            for ci in survivors:
                rows = tuple(tuple(int(x) for x in mats[ci, a, :]) for a in range(n))
                witnesses.append(LinearMap(n, n, rows))
        else:
            for ci in np.nonzero(mask)[0]:
                rows = [[int(x) for x in mats[ci, a, :]] for a in range(n)]
                if linalg.is_invertible(s.field, rows):
                    witnesses.append(LinearMap(n, n, tuple(map(tuple, rows))))
    return witnesses, total


def _search_dfs(s: StructureTensor, d: StructureTensor, pattern: SearchPattern):
    """Canonical-order DFS over rows with sound pruning.

    An equation (i, j) becomes checkable once every row it mentions is
    assigned; linear dependence of a partial row set can never be repaired
    later, so both prunes lose no witnesses.
    """
    p = s.field.order
    n = s.dim
    d_table = list(d.table.items())

    def dprod(u, w):
        out = [0] * n
        for (a, b), vec in d_table:
            c = (u[a] * w[b] + u[b] * w[a]) % p if a != b else u[a] * w[a] % p
            if c:
                for k, v in enumerate(vec):
                    if v:
                        out[k] = (out[k] + c * v) % p
        return out

    eqs_by_depth = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            vec = [int(x) for x in s.product_of_basis(i, j)]
            supp = [t for t, x in enumerate(vec) if x]
            ready = max([j] + supp)
            eqs_by_depth[ready].append((i, j, vec))

    row_values = []
    for i in range(n):
        cols = [j for j in range(n) if pattern.free[i][j]]
        values = []
        for combo in itertools.product(range(p), repeat=len(cols)):
            row = [0] * n
            for c, v in zip(cols, combo):
                row[c] = v
            values.append(row)
        row_values.append(values)

    rows = [None] * n
    echelon = []  # (pivot, reduced row) pairs
    visited = 0
    witnesses = []

    def reduce_against(v):
        v = list(v)
        for pc, er in echelon:
            fct = v[pc]
            if fct:
                v = [(a - fct * b) % p for a, b in zip(v, er)]
        return v

    def walk(depth):
        nonlocal visited
        for candidate in row_values[depth]:
            visited += 1
            red = reduce_against(candidate)
            pivot = next((t for t, a in enumerate(red) if a), None)
            if pivot is None:
                continue  # dependent: can never become invertible
            rows[depth] = candidate
            ok = True
            for (i, j, vec) in eqs_by_depth[depth]:
                lhs = [0] * n
                for t, x in enumerate(vec):
                    if x:
                        rt = rows[t]
                        for k in range(n):
                            if rt[k]:
                                lhs[k] = (lhs[k] + x * rt[k]) % p
                if lhs != dprod(rows[i], rows[j]):
                    ok = False
                    break
            if not ok:
                continue
            inv = pow(red[pivot], p - 2, p)
            echelon.append((pivot, [(a * inv) % p for a in red]))
            if depth == n - 1:
                witnesses.append(LinearMap(n, n, tuple(tuple(r) for r in rows)))
                echelon.pop()
                return True
            if walk(depth + 1):
                echelon.pop()
                return True
            echelon.pop()
        rows[depth] = None
        return False

    walk(0)
    return witnesses, visited


def chain_adapt(obj):
    """Change of basis aligning the annihilator series with coordinate
    suffixes: in the new basis, ann^m is spanned by the last dim(ann^m)
    basis vectors.  Returns (tensor, p_rows) with new basis f_i = sum_j
    P[i][j] e_j.
    """
    t = _as_tensor(obj)
    f = t.field
    n = t.dim
    chain = ann_chain(t)
    picked = []  # (level, vector), insertion order = ascending level
    basis_rows, basis_pivots = [], []

    def try_add(level, vector):
        res = linalg.residual(f, basis_rows, basis_pivots, vector)
        pc = next((i for i, a in enumerate(res) if not f.is_zero(a)), None)
        if pc is None:
            return
        inv = f.inv(res[pc])
        basis_rows.append([f.mul(inv, a) for a in res])
        basis_pivots.append(pc)
        picked.append((level, list(vector)))

    for m, space in enumerate(chain.spaces):
        for row in space.rows:
            try_add(m, row)
    for row in linalg.identity(f, n):
        try_add(math.inf, row)
    # New basis lists unleveled vectors first, then levels descending, so
    # each ann^m becomes a coordinate suffix.  The sort is stable.
    picked.sort(key=lambda lv: -lv[0])
    p_rows = [vec for (_lv, vec) in picked]
    adapted = change_basis(t, p_rows)
    return adapted, p_rows


FAMILY_NONE = "NONE_ISOMORPHIC"
FAMILY_FOUND = "WITNESSES_FOUND"
FAMILY_INCONCLUSIVE = "INCONCLUSIVE"

MEMBER_FP_MISMATCH = "FINGERPRINT_MISMATCH"
MEMBER_NO_WITNESS = "NO_WITNESS"
MEMBER_WITNESS = "WITNESS_FOUND"
MEMBER_BUDGET = "BUDGET_EXCEEDED"


@dataclass
class MemberOutcome:
    label: str
    status: str
    visited: int = 0
    witness: LinearMap | None = None
    detail: str = ""


@dataclass
class FamilyReport:
    source_fingerprint: Fingerprint
    members: list = dc_field(default_factory=list)

    @property
    def verdict(self) -> str:
        if any(m.status == MEMBER_WITNESS for m in self.members):
            return FAMILY_FOUND
        if any(m.status == MEMBER_BUDGET for m in self.members):
            return FAMILY_INCONCLUSIVE
        return FAMILY_NONE

    @property
    def total_visited(self) -> int:
        return sum(m.visited for m in self.members)


def prepare_search_pair(src, dst, rebase: bool = True):
    """Chain-adapt both algebras (when needed) and derive the pattern.

    Returns (src_tensor, dst_tensor, pattern, p_src, p_dst) where the P
    matrices map adapted coordinates back to the originals (identity rows
    when no re-basing was necessary).  With rebase=False a non-coordinate
    chain raises NonCoordinateChain instead of being adapted.
    """
    s, d = _as_tensor(src), _as_tensor(dst)
    sc, dcn = ann_chain(s), ann_chain(d)

    def adapt(t, chain):
        if not rebase or all(space.is_coordinate() for space in chain.spaces):
            return t, linalg.identity(t.field, t.dim), chain
        adapted, p_rows = chain_adapt(t)
        return adapted, p_rows, ann_chain(adapted)

    s2, ps, sc2 = adapt(s, sc)
    d2, pd, dc2 = adapt(d, dcn)
    pattern = filtration_pattern(sc2, dc2)
    return s2, d2, pattern, ps, pd


def witness_to_original(field, witness: LinearMap, p_src, p_dst) -> LinearMap:
    """Pull a witness between adapted algebras back to the original bases."""
    m = [list(r) for r in witness.rows]
    back = linalg.mat_mul(field, linalg.mat_inv(field, p_src), linalg.mat_mul(field, m, p_dst))
    return LinearMap(witness.src_dim, witness.dst_dim, tuple(tuple(r) for r in back))


def family_noniso_report(src, members, budget: int = DEFAULT_BUDGET,
                         mode: str = MODE_FIRST) -> FamilyReport:
    """Search the source against every family member.

    Members with a differing fingerprint are recorded without search (the
    fingerprint is an isomorphism invariant); equal fingerprints trigger the
    filtration-constrained search.  Witnesses are mapped back to and
    re-verified against the original bases.
    """
    s = _as_tensor(src)
    _require_finite(s.field)
    src_fp = fingerprint(s)
    report = FamilyReport(source_fingerprint=src_fp)
    for label, member in members:
        m = _as_tensor(member)
        fp = fingerprint(m)
        if fp != src_fp:
            report.members.append(
                MemberOutcome(label=label, status=MEMBER_FP_MISMATCH,
                              detail=f"{fp.as_dict()}")
            )
            continue
        try:
            s2, d2, pattern, ps, pd = prepare_search_pair(s, m)
            result = iso_search(s2, d2, pattern, mode=mode, budget=budget)
        except BudgetExceeded as exc:
            report.members.append(
                MemberOutcome(label=label, status=MEMBER_BUDGET, detail=str(exc))
            )
            continue
        if result.witnesses:
            w = witness_to_original(s.field, result.witnesses[0], ps, pd)
            if not is_homomorphism(w, s, m) or not linalg.is_invertible(
                s.field, [list(r) for r in w.rows]
            ):
                raise RuntimeError("witness failed re-verification in original bases")
            report.members.append(
                MemberOutcome(label=label, status=MEMBER_WITNESS,
                              visited=result.visited, witness=w)
            )
        else:
            report.members.append(
                MemberOutcome(label=label, status=MEMBER_NO_WITNESS,
                              visited=result.visited)
            )
    return report
