"""Built-in verification suite.

Each check re-derives one of the package's headline results from scratch:
builder type grids, agreement of the nilpotency criteria, the two
non-isomorphism experiments, completeness of the pattern restriction, and
basis-invariance of the fingerprint.  Checks report PASS/FAIL (or SKIPPED
when an enumeration budget cuts a search short) together with their
runtime; stated runtime ceilings are part of the contract and are enforced.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import linalg
from .algebra import EvolutionMatrix, ann_chain, change_basis, is_nilpotent, triangular_witness, type_signature
from .constructions import (
    ChainParams,
    ElrParams,
    TypeOnesParams,
    build_bnk,
    build_chain,
    build_elr,
    build_eub,
    build_ma2,
    build_ma12,
    build_type_ones,
    chain_diagonals_nonzero,
    chain_squares_surjective,
    enumerate_elr,
    enumerate_type_ones,
)
from .errors import BudgetExceeded, IncompatibleChains
from .field import make_field
from .iso import (
    DEFAULT_BUDGET,
    MEMBER_NO_WITNESS,
    MODE_COUNT_ALL,
    MODE_FIRST,
    SearchPattern,
    family_noniso_report,
    fingerprint,
    iso_search,
    prepare_search_pair,
)

SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    status: str  # "PASS" | "FAIL" | "SKIPPED"
    detail: str
    elapsed: float

    def line(self) -> str:
        return f"[{self.status}] criterion {self.number}: {self.name} " \
               f"({self.elapsed:.1f}s) {self.detail}"


def _finish(number, name, start, failures, limit, detail=""):
    elapsed = time.time() - start
    if failures:
        shown = "; ".join(failures[:3])
        more = f" (+{len(failures) - 3} more)" if len(failures) > 3 else ""
        return CriterionResult(number, name, "FAIL", shown + more, elapsed)
    if elapsed > limit:
        return CriterionResult(
            number, name, "FAIL", f"runtime {elapsed:.1f}s exceeds {limit}s", elapsed
        )
    return CriterionResult(number, name, "PASS", detail, elapsed)


def criterion_1(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """type(build_type_ones(n, k)) == [1 x k, n] on the full (n<=5, k<=6) grid
    over Q and F3 with randomized nonzero Gram and arbitrary eigen tables."""
    start = time.time()
    rng = random.Random(SEED)
    failures = []
    checked = 0
    for field in (make_field("Q"), make_field("F3")):
        for n in range(1, 6):
            for k in range(1, 7):
                for _ in range(2):
                    gram = tuple(field.random_nonzero(rng) for _ in range(n))
                    eigen = tuple(
                        tuple(field.random_scalar(rng) for _ in range(n))
                        for _ in range(k - 1)
                    )
                    mat = build_type_ones(field, TypeOnesParams(n, k, gram, eigen))
                    got = type_signature(mat.to_tensor())
                    want = (1,) * k + (n,)
                    checked += 1
                    if got != want:
                        failures.append(f"(n={n},k={k},{field}): {got} != {want}")
    return _finish(1, "type grid for the [1 x k, n] family", start, failures, 10.0,
                   f"{checked} instances")


def criterion_2(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """Two-tail family type grid: parts are all 1 except n at position r+1,
    for every (l, n, r) <= 4 over Q and F3."""
    start = time.time()
    rng = random.Random(SEED + 1)
    failures = []
    checked = 0
    for field in (make_field("Q"), make_field("F3")):
        for l in range(1, 5):
            for n in range(1, 5):
                for r in range(1, 5):
                    gram = tuple(field.random_nonzero(rng) for _ in range(n))
                    coords = [field.random_scalar(rng) for _ in range(n)]
                    coords[rng.randrange(n)] = field.random_nonzero(rng)
                    mat = build_elr(field, ElrParams(l, n, r, gram, tuple(coords)))
                    parts = type_signature(mat.to_tensor())
                    checked += 1
                    ok = (
                        len(parts) == l + r + 1
                        and parts[r] == n
                        and all(parts[i] == 1 for i in range(len(parts)) if i != r)
                    )
                    if not ok:
                        failures.append(f"(l={l},n={n},r={r},{field}): {parts}")
    return _finish(2, "type grid for the two-tail family", start, failures, 10.0,
                   f"{checked} instances")


def _compositions(total):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def criterion_3(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """Flat family has type [2, n] for n <= 6; graded chain family has type
    equal to the reversed level sizes for every tuple with sum <= 8 that
    admits surjective (and nowhere-zero) square data."""
    start = time.time()
    rng = random.Random(SEED + 2)
    failures = []
    checked = 0
    for field in (make_field("Q"), make_field("F3")):
        for n in range(1, 7):
            gram = tuple(field.random_nonzero(rng) for _ in range(n))
            parts = type_signature(build_eub(field, n, gram).to_tensor())
            checked += 1
            if parts != (2, n):
                failures.append(f"flat n={n} over {field}: {parts}")
    for field in (make_field("Q"), make_field("F3")):
        for total in range(1, 9):
            for dims in _compositions(total):
                if any(dims[i + 1] > dims[i] for i in range(len(dims) - 1)):
                    continue  # no surjective squares exist for growing levels
                squares = []
                for i in range(len(dims) - 1):
                    level = []
                    for j in range(dims[i]):
                        vec = [field.zero] * dims[i + 1]
                        vec[j % dims[i + 1]] = field.random_nonzero(rng)
                        level.append(tuple(vec))
                    squares.append(tuple(level))
                params = ChainParams(tuple(dims), tuple(squares))
                if not chain_squares_surjective(field, params):
                    failures.append(f"generated data not surjective for {dims}")
                    continue
                if not chain_diagonals_nonzero(field, params):
                    failures.append(f"generated data has zero square for {dims}")
                    continue
                parts = type_signature(build_chain(field, params).to_tensor())
                checked += 1
                if parts != tuple(reversed(dims)):
                    failures.append(f"chain {dims} over {field}: {parts}")
    return _finish(3, "flat [2, n] and graded chain type checks", start, failures,
                   30.0, f"{checked} instances")


def criterion_4(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """1000 random strictly-upper-triangular tables over F5 (dim <= 7) are
    nilpotent by the series, the power sequence reaches zero, and a
    permutation witness exists; 1000 random tables with a forced diagonal
    entry agree between the series and power-sequence verdicts."""
    start = time.time()
    rng = random.Random(SEED + 3)
    field = make_field("F5")
    failures = []
    for trial in range(1000):
        n = rng.randint(1, 7)
        rows = [[field.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = field.random_scalar(rng)
        mat = EvolutionMatrix(field, rows)
        try:
            res = is_nilpotent(mat.to_tensor())  # raises on criteria disagreement
        except RuntimeError as exc:
            failures.append(f"triangular trial {trial}: {exc}")
            continue
        if not res.nilpotent:
            failures.append(f"triangular trial {trial}: series verdict not nilpotent")
        if not res.powers.reaches_zero():
            failures.append(f"triangular trial {trial}: powers stop at {res.powers.dims}")
        if triangular_witness(mat) is None:
            failures.append(f"triangular trial {trial}: no permutation witness")
        if failures:
            break
    for trial in range(1000):
        n = rng.randint(1, 7)
        rows = [[field.random_scalar(rng) for _ in range(n)] for _ in range(n)]
        i = rng.randrange(n)
        rows[i][i] = field.random_nonzero(rng)  # self-loop: a cycle through i
        mat = EvolutionMatrix(field, rows)
        try:
            is_nilpotent(mat.to_tensor())  # raises on criteria disagreement
        except RuntimeError as exc:
            failures.append(f"cyclic trial {trial}: {exc}")
            break
    return _finish(4, "nilpotency criteria agree on 2000 random tables", start,
                   failures, 60.0, "2000 instances")


def criterion_5(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """The doubled-link table bnk(1, 4) over F3 is isomorphic to no member of
    the 54-member [1 x 4, 1] family, while the search finds a witness for
    bnk(1, 4) against itself."""
    start = time.time()
    field = make_field("F3")
    failures = []
    source = build_bnk(field, 1, 4)
    if type_signature(source.to_tensor()) != (1, 1, 1, 1, 1):
        failures.append("source type is not [1,1,1,1,1]")
    members = [(f"gram={p.gram},eigen={p.eigen}", m)
               for p, m in enumerate_type_ones(field, 1, 4)]
    if len(members) != 54:
        failures.append(f"family has {len(members)} members, expected 54")
    try:
        report = family_noniso_report(source, members, budget=budget)
    except BudgetExceeded as exc:
        return CriterionResult(5, "doubled-link table vs [1 x 4, 1] family",
                               "SKIPPED", str(exc), time.time() - start)
    if any(m.status == "BUDGET_EXCEEDED" for m in report.members):
        return CriterionResult(5, "doubled-link table vs [1 x 4, 1] family",
                               "SKIPPED", "budget exceeded during search",
                               time.time() - start)
    if report.verdict != "NONE_ISOMORPHIC":
        failures.append(f"verdict {report.verdict}")
    not_searched = [m.label for m in report.members if m.status != MEMBER_NO_WITNESS]
    if not_searched:
        failures.append(f"{len(not_searched)} members were not actually searched")
    control = family_noniso_report(source, [("self", source)], budget=budget)
    if control.verdict != "WITNESSES_FOUND":
        failures.append("positive control found no witness")
    return _finish(5, "doubled-link table vs [1 x 4, 1] family", start, failures,
                   300.0, f"54 searches, {report.total_visited} nodes visited")


def criterion_6(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """Neither shortcut table is isomorphic to any two-tail family member:
    the c-shortcut (r >= 2 case) differs already in basis-free invariants,
    the doubled-link head (l >= 2 case) requires the exhaustive search."""
    start = time.time()
    field = make_field("F3")
    failures = []
    skipped = False
    # r >= 2 case: l=1, n=1, r=2 with the shortcut h2^2 = c h4.
    alpha = [[0] * 4 for _ in range(4)]
    alpha[0][1] = 1
    alpha[2][3] = 1
    for c in (1, 2):
        source = build_ma2(field, 1, 1, 2, c, alpha)
        members = [(f"gram={p.gram},u={p.u_coords}", m)
                   for p, m in enumerate_elr(field, 1, 1, 2)]
        try:
            report = family_noniso_report(source, members, budget=budget)
        except BudgetExceeded:
            skipped = True
            break
        if report.verdict != "NONE_ISOMORPHIC":
            failures.append(f"c={c}: verdict {report.verdict}")
    # l >= 2 case: l=2, n=1, r=2 with doubled links in the head chain.
    source = build_ma12(field, 2, 1, 2, [(1, 0)])
    members = [(f"gram={p.gram},u={p.u_coords}", m)
               for p, m in enumerate_elr(field, 2, 1, 2)]
    if type_signature(source.to_tensor()) != (1, 1, 1, 1, 1):
        failures.append("doubled-link head source type unexpected")
    try:
        report = family_noniso_report(source, members, budget=budget)
        if report.verdict != "NONE_ISOMORPHIC":
            failures.append(f"l>=2 case: verdict {report.verdict}")
        searched = [m for m in report.members if m.status == MEMBER_NO_WITNESS]
        if len(searched) != len(members):
            failures.append("l>=2 case: not every member was genuinely searched")
    except BudgetExceeded:
        skipped = True
    if skipped and not failures:
        return CriterionResult(6, "shortcut tables vs two-tail families",
                               "SKIPPED", "budget exceeded", time.time() - start)
    return _finish(6, "shortcut tables vs two-tail families", start, failures,
                   600.0, "r>=2 case excluded by invariants; l>=2 case searched")


def criterion_7(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """On all pairs from 50 random nilpotent dim-3 tables over F3, the
    filtration-restricted search and literal enumeration of every 3x3 matrix
    agree about the existence of an isomorphism."""
    start = time.time()
    rng = random.Random(SEED + 4)
    field = make_field("F3")
    failures = []
    algebras = []
    while len(algebras) < 50:
        rows = [[field.random_scalar(rng) for _ in range(3)] for _ in range(3)]
        mat = EvolutionMatrix(field, rows)
        if ann_chain(mat.to_tensor()).reaches_full():
            algebras.append(mat)
    full = SearchPattern.full(3)
    pairs = 0
    for a in range(len(algebras)):
        for b in range(a + 1, len(algebras)):
            src, dst = algebras[a], algebras[b]
            try:
                s2, d2, pattern, _ps, _pd = prepare_search_pair(src, dst)
                restricted = bool(
                    iso_search(s2, d2, pattern, mode=MODE_FIRST, budget=budget).witnesses
                )
            except IncompatibleChains:
                restricted = False
            except BudgetExceeded as exc:
                return CriterionResult(7, "pattern restriction is lossless",
                                       "SKIPPED", str(exc), time.time() - start)
            literal = bool(
                iso_search(src, dst, full, mode=MODE_COUNT_ALL, budget=budget).witnesses
            )
            pairs += 1
            if restricted != literal:
                failures.append(
                    f"pair ({a},{b}): restricted={restricted} literal={literal}"
                )
        if failures:
            break
    return _finish(7, "pattern restriction is lossless", start, failures, 300.0,
                   f"{pairs} pairs compared")


def criterion_8(budget: int = DEFAULT_BUDGET) -> CriterionResult:
    """Fingerprint and type are unchanged by 200 random invertible basis
    changes over F5 on each of 20 constructed algebras."""
    start = time.time()
    rng = random.Random(SEED + 5)
    field = make_field("F5")
    failures = []
    algebras = [
        build_eub(field, 1, (1,)),
        build_eub(field, 2, (1, 2)),
        build_eub(field, 3, (2, 3, 4)),
        build_eub(field, 4, (1, 2, 3, 4)),
        build_bnk(field, 1, 2),
        build_bnk(field, 1, 3),
        build_bnk(field, 1, 4),
        build_bnk(field, 2, 2),
        build_bnk(field, 2, 3),
        build_type_ones(field, TypeOnesParams(1, 1, (1,), ())),
        build_type_ones(field, TypeOnesParams(2, 2, (1, 1), ((2, 3),))),
        build_type_ones(field, TypeOnesParams(1, 3, (2,), ((3,), (4,)))),
        build_elr(field, ElrParams(1, 1, 1, (1,), (1,))),
        build_elr(field, ElrParams(2, 1, 2, (3,), (2,))),
        build_elr(field, ElrParams(1, 2, 2, (1, 2), (1, 1))),
        build_elr(field, ElrParams(2, 2, 1, (1, 4), (0, 1))),
        build_chain(field, ChainParams((2, 1), (((1,), (2,)),))),
        build_chain(field, ChainParams((2, 2, 1), (((1, 0), (0, 1)), ((1,), (1,))))),
        build_ma12(field, 2, 1, 2, [(1, 0)]),
        build_ma12(field, 2, 2, 2, [(1, 0), (1, 1)]),
    ]
    checked = 0
    for idx, mat in enumerate(algebras):
        tensor = mat.to_tensor()
        fp0 = fingerprint(tensor)
        t0 = type_signature(tensor)
        for trial in range(200):
            p_rows = linalg.random_invertible(field, mat.dim, rng)
            moved = change_basis(tensor, p_rows)
            if fingerprint(moved) != fp0:
                failures.append(f"algebra {idx} trial {trial}: fingerprint moved")
                break
            if type_signature(moved) != t0:
                failures.append(f"algebra {idx} trial {trial}: type moved")
                break
            checked += 1
    return _finish(8, "fingerprint/type basis invariance", start, failures, 60.0,
                   f"{checked} basis changes")


ALL_CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
]


def run_all(budget: int = DEFAULT_BUDGET, numbers=None):
    results = []
    for idx, fn in enumerate(ALL_CRITERIA, start=1):
        if numbers and idx not in numbers:
            continue
        results.append(fn(budget=budget))
    return results
