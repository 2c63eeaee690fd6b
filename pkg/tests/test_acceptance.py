"""The acceptance suite: eleven binding criteria, one pass/fail line each.

Run with -v to see one line per criterion; each criterion also prints its
summary line (shown on failure or with -s). A criterion passes only if its
checks hold at the stated tolerances and it finishes inside its time budget.
"""

import pytest

from carleman.acceptance import CRITERIA, run_criterion

EXPECTED_NAMES = [
    "trace-growth-identity",
    "kernel-taylor-bounds",
    "base-lower-bound",
    "base-upper-bound",
    "polar-bounds",
    "flat-lower-certificate",
    "flat-upper-bounds",
    "sharpness-roots",
    "ratio-step-schedule",
    "jet-consistency",
    "family-inequalities",
]


def test_criteria_roster():
    assert [name for name, _, _ in CRITERIA] == EXPECTED_NAMES
    assert len(CRITERIA) == 11


@pytest.mark.parametrize(
    "index", range(1, 12), ids=[f"{i:02d}-{n}" for i, n in enumerate(EXPECTED_NAMES, 1)]
)
def test_criterion(index):
    result = run_criterion(index)
    print(result.line())
    assert result.ok, result.line() + "\n" + str(result.extras)
    assert result.in_budget, (
        f"criterion {index} took {result.seconds:.2f}s, budget {result.budget}s"
    )
