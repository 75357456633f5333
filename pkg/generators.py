# ==============================================================================
# generators.py - Deterministic benchmark families (binary chains, random 3-SAT)
# ==============================================================================

import random
from dataclasses import dataclass

from formula import CnfFormula, build_formula

DEFAULT_RATIO = 1.5


class GeneratorError(ValueError):
    """Invalid generator parameters."""


@dataclass(frozen=True)
class Rnd3SatSpec:
    n: int
    ratio: float = DEFAULT_RATIO
    seed: int = 0

    @property
    def num_clauses(self) -> int:
        # round half up, not banker's rounding
        return int(self.ratio * self.n + 0.5)


def gen_binary(n: int) -> CnfFormula:
    """(x1 v xn) ^ (x2 v x(n-1)) ^ ... ; 3^(n/2) models."""
    if n <= 0 or n % 2:
        raise GeneratorError(f"gen_binary necesita n par y positivo, recibido {n}")
    return build_formula(n, [(i, n + 1 - i) for i in range(1, n // 2 + 1)])


def gen_rnd3sat(spec: Rnd3SatSpec) -> CnfFormula:
    """Random 3-SAT: three distinct variables per clause, each sign a fair coin.

    Uses Python's MT19937 seeded with ``spec.seed``: variables via
    randrange(1, n + 1) with rejection of repeats, signs via getrandbits(1).
    Duplicate clauses are kept.
    """
    if spec.n < 3:
        raise GeneratorError(f"gen_rnd3sat necesita n >= 3, recibido {spec.n}")
    if spec.ratio < 0:
        raise GeneratorError(f"ratio negativo: {spec.ratio}")

    rng = random.Random(spec.seed)
    clauses = []
    for _ in range(spec.num_clauses):
        chosen = []
        while len(chosen) < 3:
            v = rng.randrange(1, spec.n + 1)
            if v not in chosen:
                chosen.append(v)
        clauses.append(tuple(v if rng.getrandbits(1) else -v for v in chosen))
    return build_formula(spec.n, clauses)
