import os
import random
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from config import SolverConfig  # noqa: E402
from formula import parse_dimacs  # noqa: E402
from generators import Rnd3SatSpec, gen_rnd3sat  # noqa: E402
from heuristic import PolarityMode  # noqa: E402
from shrink import ShrinkMode  # noqa: E402

# (x1 v -x2) ^ (x1 v -x3) ^ (-x1 v -x2)
CONFLICT_CNF = "p cnf 3 3\n1 -2 0\n1 -3 0\n-1 -2 0\n"
# (x1 v x2 v x3)
SINGLE_CLAUSE_CNF = "p cnf 3 1\n1 2 3 0\n"


@pytest.fixture
def conflict_formula():
    return parse_dimacs(CONFLICT_CNF)


@pytest.fixture
def single_clause():
    return parse_dimacs(SINGLE_CLAUSE_CNF)


@pytest.fixture
def pinned():
    """SolverConfig factory pinning order 3,2,1 used by the hand-traced scenarios."""
    def make(polarity="false", shrink="dynamic", **extra):
        return SolverConfig(
            shrink_mode=ShrinkMode(shrink),
            polarity_mode=PolarityMode(polarity),
            pinned_order=(3, 2, 1),
            **extra,
        )
    return make


@pytest.fixture
def rnd3sat():
    def make(seed, n=None, ratio=1.5):
        n = n if n is not None else 3 + seed % 10
        return gen_rnd3sat(Rnd3SatSpec(n=n, ratio=ratio, seed=seed))
    return make


def random_cnf_text(seed, n):
    """Messy DIMACS: widths 1-4, repeated literals, tautologies, duplicate clauses, comments.

    Returns the text and the raw clause lists it encodes.
    """
    rng = random.Random(seed)
    raw = []
    for _ in range(rng.randint(1, 2 * n)):
        if raw and rng.random() < 0.1:
            raw.append(list(rng.choice(raw)))
            continue
        width = 1 if rng.random() < 0.08 else rng.choice((2, 3, 3, 4))
        raw.append([rng.randint(1, n) * rng.choice((1, -1)) for _ in range(width)])
    lines = [f"p cnf {n} {len(raw)}"]
    for clause in raw:
        if rng.random() < 0.05:
            lines.append("c ruido")
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n", raw


@pytest.fixture
def random_cnf():
    def make(seed, n=None):
        n = n if n is not None else 1 + seed % 14
        return random_cnf_text(seed, n)
    return make
