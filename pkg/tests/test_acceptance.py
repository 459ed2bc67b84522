"""The twelve acceptance criteria, one test each.

Each test prints one PASS/FAIL line; the lines are repeated in a summary
section at the end of the run.
"""

import pytest

from dendroidal import acceptance

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    out = acceptance.run(number)
    print()
    print(out.line())
    ACCEPTANCE_LINES.append(out.line())
    assert out.ok, out.detail
    assert out.seconds <= out.budget, f"took {out.seconds:.1f}s, budget {out.budget}s"
    if number == 6:
        assert any(w.get("horn") in (0, w.get("k")) and w.get("extensions") != 1 for w in out.witnesses)
