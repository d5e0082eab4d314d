"""Acceptance gate: every verification criterion must PASS at its stated
tolerance and inside its stated runtime ceiling.

Each test prints the criterion's verdict line so a verbose run reads as a
report; `evokit verify-paper` produces the same lines from the CLI.
"""

from evokit import acceptance
from evokit.constructions import build_bnk


def _check(result):
    print(result.line())
    assert result.status == "PASS", result.detail


def test_criterion_1_type_ones_grid():
    _check(acceptance.criterion_1())


def test_criterion_2_two_tail_grid():
    _check(acceptance.criterion_2())


def test_criterion_3_flat_and_chain():
    _check(acceptance.criterion_3())


def test_criterion_4_nilpotency_agreement():
    _check(acceptance.criterion_4())


def test_criterion_5_doubled_link_family_search():
    _check(acceptance.criterion_5())


def test_criterion_6_shortcut_family_searches():
    _check(acceptance.criterion_6())


def test_criterion_7_pattern_restriction_lossless():
    _check(acceptance.criterion_7())


def test_criterion_8_fingerprint_invariance():
    _check(acceptance.criterion_8())


# ---------------------------------------------------------------------------
# suite self-checks
# ---------------------------------------------------------------------------

def test_small_budget_marks_skipped_not_pass():
    result = acceptance.criterion_5(budget=10)
    assert result.status == "SKIPPED"


def test_injected_builder_corruption_fails_criterion(monkeypatch):
    # Break the doubled-link table (drop the last chain link); the source
    # type changes and criterion 5 must go red, not silently pass.
    def corrupted(field, n, k):
        mat = build_bnk(field, n, k)
        rows = [list(r) for r in mat.rows]
        rows[n + k - 2][n + k - 1] = field.zero
        return type(mat)(field, rows)

    monkeypatch.setattr(acceptance, "build_bnk", corrupted)
    result = acceptance.criterion_5()
    assert result.status == "FAIL"
