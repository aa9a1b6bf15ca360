import os
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# PD codes of the six 20-crossing links that survive the classification,
# as printed by the source computation (arcs numbered along components).
L_SERIES = {
    "L235": """PD[X[3,33,4,40],X[4,13,5,12],X[6,29,7,28],X[7,36,8,37],
        X[10,39,11,38],X[13,22,14,21],X[14,30,15,29],X[16,1,9,8],
        X[17,10,18,9],X[20,5,21,6],X[23,32,24,31],X[24,2,17,1],
        X[26,12,27,11],X[27,20,28,19],X[30,34,31,35],X[32,3,25,2],
        X[33,23,34,22],X[35,16,36,15],X[37,18,38,19],X[39,25,40,26]]""",
    "L270": """PD[X[2,25,3,32],X[4,13,5,12],X[6,22,7,21],X[7,37,8,36],
        X[10,18,11,19],X[13,26,14,27],X[15,38,16,37],X[16,1,9,8],
        X[17,32,18,31],X[19,34,20,35],X[22,14,23,15],X[24,2,17,1],
        X[25,39,26,40],X[27,6,28,5],X[28,21,29,20],X[30,9,31,10],
        X[33,12,34,11],X[35,29,36,30],X[38,23,39,24],X[40,4,33,3]]""",
    "L298": """PD[X[3,33,4,40],X[4,13,5,12],X[6,22,7,21],X[7,36,8,37],
        X[10,39,11,38],X[13,31,14,30],X[14,23,15,22],X[16,1,9,8],
        X[19,12,20,11],X[20,29,21,28],X[23,34,24,35],X[24,2,17,1],
        X[25,18,26,17],X[26,10,27,9],X[29,5,30,6],X[32,3,25,2],
        X[33,32,34,31],X[35,16,36,15],X[37,27,38,28],X[39,18,40,19]]""",
    "L176": """PD[X[2,25,3,32],X[4,20,5,19],X[6,36,7,35],X[7,29,8,30],
        X[11,5,12,6],X[13,26,14,27],X[15,24,16,23],X[16,1,9,8],
        X[18,33,19,34],X[20,13,21,12],X[22,38,23,37],X[24,2,17,1],
        X[25,39,26,40],X[27,22,28,21],X[30,9,31,10],X[31,17,32,18],
        X[34,11,35,10],X[36,28,37,29],X[38,14,39,15],X[40,4,33,3]]""",
    "L246": """PD[X[2,25,3,32],X[4,13,5,12],X[6,28,7,29],X[7,37,8,36],
        X[11,33,12,34],X[13,22,14,21],X[15,38,16,37],X[16,1,9,8],
        X[17,10,18,9],X[20,5,21,6],X[22,26,23,27],X[24,2,17,1],
        X[25,39,26,40],X[27,15,28,14],X[30,18,31,19],X[31,10,32,11],
        X[34,20,35,19],X[35,29,36,30],X[38,23,39,24],X[40,4,33,3]]""",
    "L249": """PD[X[2,25,3,32],X[4,13,5,12],X[6,36,7,35],X[7,29,8,30],
        X[11,33,12,34],X[13,22,14,21],X[15,38,16,37],X[16,1,9,8],
        X[17,10,18,9],X[20,5,21,6],X[22,26,23,27],X[24,2,17,1],
        X[25,39,26,40],X[27,15,28,14],X[30,18,31,19],X[31,10,32,11],
        X[34,20,35,19],X[36,28,37,29],X[38,23,39,24],X[40,4,33,3]]""",
}

# Braid words of the six pairwise non-isotopic 20-crossing counterexample
# links (the first is the five-braid counterexample word, the second its
# mirror; all are 3-move equivalent to the first).
COUNTEREXAMPLE_WORDS = [
    (-1, 2, -1, 3, 2, -4, 3, 2, -1, 2, -4, 3, 2, -1, 2, -4, 3, 2, -4, 3),
    (1, -2, 1, -3, -2, 4, -3, -2, 1, -2, 4, -3, -2, 1, -2, 4, -3, -2, 4, -3),
    (1, 2, -3, 2, 1, 4, 3, -2, 1, 3, -4, 3, 2, 1, 3, -4, 3, -2, 3, 4),
    (-1, -2, 3, -2, -1, -4, -3, 2, -1, -3, 4, -3, -2, -1, -3, 4, -3, 2, -3, -4),
    (-1, 2, 3, 2, -4, -3, 2, -1, 2, -3, 2, 4, -3, 2, -1, 2, 4, -3, 2, -4),
    (1, -2, -3, -2, 4, 3, -2, 1, -2, 3, -2, -4, 3, -2, 1, -2, -4, 3, -2, 4),
]

# Printed Jones polynomials (coefficient maps over integer t-exponents).
JONES_GOLDEN = {
    "L176": {0: 232, -7: -1, -6: 9, -5: -36, -4: 85, -3: -144, -2: 202,
             -1: -232, 1: -194, 2: 140, 3: -67, 4: 18, 5: 18, 6: -25,
             7: 15, 8: -5, 9: 1},
    "L235": {16: 1, 15: -8, 14: 27, 13: -51, 12: 66, 11: -63, 10: 46,
             9: -9, 8: -18, 7: 52, 6: -66, 5: 64, 4: -43, 3: 23, 2: -5},
    "L270": {0: 221, -6: 1, -5: -8, -4: 32, -3: -78, -2: 136, -1: -186,
             1: -218, 2: 193, 3: -140, 4: 81, 5: -26, 7: 14, 8: -8, 9: 2},
}

TREFOIL_PD = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    env = os.environ.get("THREEMOVE_CACHE")
    if env:
        return Path(env)
    return tmp_path_factory.mktemp("quotient-cache")


@pytest.fixture(scope="session")
def c5_table(cache_dir):
    from threemove.groups import quotient_table

    return quotient_table(5, cache_dir)


@pytest.fixture(scope="session")
def c5_conjugation(c5_table):
    from threemove.groups import RegularConjugation

    return RegularConjugation(c5_table)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion, in criterion order."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        title, status, dt = RESULTS[num]
        terminalreporter.write_line(
            f"criterion {num:2d}: {status:5s} ({dt:7.1f}s)  {title}")


def random_braid_diagram(rng, max_index=4, max_len=8, oriented=False):
    """Random small diagram used across the property tests."""
    from threemove.braids import BraidWord, braid_closure

    n = rng.randint(2, max_index)
    length = rng.randint(2, max_len)
    letters = tuple(rng.choice([i for i in range(-(n - 1), n) if i != 0])
                    for _ in range(length))
    d = braid_closure(BraidWord(n, letters))
    return d if oriented else d.unoriented()
