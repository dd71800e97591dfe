"""Run every acceptance criterion at its stated tolerance.

Each criterion prints one line of the form ``PASS criterion N: name [...]``
(or FAIL).  Run with ``pytest tests/test_acceptance.py -v -s`` to see them
inline; they are also echoed in the terminal summary.
"""

import os

import pytest

from psl2z.acceptance import CRITERIA, AcceptanceContext, run_acceptance

SEED = int(os.environ.get("PSL2Z_SEED", "0"))
LINES: list[str] = []


@pytest.fixture(scope="module")
def ctx():
    return AcceptanceContext(seed=SEED)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(ctx, number, capsys):
    (result,) = run_acceptance(ctx, [number])
    line = result.line()
    LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    for f in result.failures:
        print(f)
    assert result.passed, "\n".join(result.failures[:20])


if __name__ == "__main__":
    import sys

    results = run_acceptance(AcceptanceContext(seed=SEED))
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
