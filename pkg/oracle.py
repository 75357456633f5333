# ==============================================================================
# oracle.py - Brute-force ground truth: model counting and exact-cover checks
# ==============================================================================

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from formula import CnfFormula, Literal, var_of

DEFAULT_MAX_VARS = 26
# assignments evaluated per numpy pass
CHUNK_BITS = 20


class OracleBoundError(ValueError):
    """The formula has too many variables for exhaustive evaluation."""


@dataclass(frozen=True)
class OracleReport:
    model_count: int
    cover_ok: bool
    disjoint_ok: bool
    violation_kind: Optional[str] = None  # inconsistent | over-cover | uncovered | non-model
    first_violation: Optional[Tuple[Literal, ...]] = None
    covered: int = 0

    @property
    def ok(self) -> bool:
        return self.cover_ok and self.disjoint_ok

    def describe(self) -> str:
        if self.ok:
            return f"cobertura exacta y disjunta: {self.model_count} modelos"
        witness = " ".join(str(lit) for lit in self.first_violation or ())
        return f"violacion {self.violation_kind}: {witness} (modelos={self.model_count}, cubiertos={self.covered})"


def _check_bound(formula: CnfFormula, max_vars: int) -> None:
    if formula.num_vars > max_vars:
        raise OracleBoundError(
            f"{formula.num_vars} variables exceden el limite de fuerza bruta ({max_vars})"
        )


def decode_assignment(index: int, num_vars: int) -> Tuple[Literal, ...]:
    """Bit v-1 of ``index`` is the value of variable v."""
    return tuple(v if (index >> (v - 1)) & 1 else -v for v in range(1, num_vars + 1))


def _chunks(num_vars: int) -> Iterator[np.ndarray]:
    total = 1 << num_vars
    step = 1 << CHUNK_BITS
    for start in range(0, total, step):
        yield np.arange(start, min(total, start + step), dtype=np.int64)


def _satisfied(formula: CnfFormula, indices: np.ndarray) -> np.ndarray:
    mask = np.ones(indices.shape, dtype=bool)
    for clause in formula.all_clauses():
        clause_mask = np.zeros(indices.shape, dtype=bool)
        for lit in clause:
            bit = (indices >> (var_of(lit) - 1)) & 1
            clause_mask |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
        mask &= clause_mask
    return mask


def satisfaction_mask(formula: CnfFormula, max_vars: int = DEFAULT_MAX_VARS) -> np.ndarray:
    """Boolean array over all 2^n assignments: True where F holds."""
    _check_bound(formula, max_vars)
    return np.concatenate([_satisfied(formula, chunk) for chunk in _chunks(formula.num_vars)])


def count_models(formula: CnfFormula, max_vars: int = DEFAULT_MAX_VARS) -> int:
    _check_bound(formula, max_vars)
    return int(sum(int(np.count_nonzero(_satisfied(formula, chunk))) for chunk in _chunks(formula.num_vars)))


def enumerate_total_models(formula: CnfFormula, max_vars: int = DEFAULT_MAX_VARS) -> List[Tuple[Literal, ...]]:
    mask = satisfaction_mask(formula, max_vars)
    return [decode_assignment(int(i), formula.num_vars) for i in np.flatnonzero(mask)]


def _inconsistent(literals: Sequence[Literal]) -> bool:
    lits = set(literals)
    return any(-lit in lits for lit in lits)


def _fixed_bits(literals: Sequence[Literal]) -> Tuple[int, int]:
    """(mask, value) of the assignment bits a partial model pins down."""
    mask = value = 0
    for lit in literals:
        bit = 1 << (var_of(lit) - 1)
        mask |= bit
        if lit > 0:
            value |= bit
    return mask, value


def _covered_offsets(mask: int, value: int, width: int) -> np.ndarray:
    """Offsets below 2^width agreeing with ``value`` on the bits of ``mask``."""
    idx = np.array([value], dtype=np.int64)
    for bit in range(width):
        if not (mask >> bit) & 1:
            idx = np.concatenate([idx, idx | (1 << bit)])
    return idx


def _literals_of(model) -> Tuple[Literal, ...]:
    return tuple(getattr(model, "literals", model))


def verify_cover(formula: CnfFormula, models: Sequence, max_vars: int = DEFAULT_MAX_VARS) -> OracleReport:
    """Check that ``models`` cover every total model of F exactly once and nothing else.

    Works one chunk of 2^CHUNK_BITS assignments at a time. A violation is
    reported at its lowest assignment, over-cover first, then non-model,
    then uncovered.
    """
    _check_bound(formula, max_vars)
    n = formula.num_vars

    cubes = []
    for model in models:
        literals = _literals_of(model)
        if _inconsistent(literals) or any(lit == 0 or var_of(lit) > n for lit in literals):
            return OracleReport(count_models(formula, max_vars), False, False, "inconsistent", literals)
        cubes.append(_fixed_bits(literals))

    width = min(n, CHUNK_BITS)
    low = (1 << width) - 1
    model_count = covered_count = 0
    first = {}
    for chunk in _chunks(n):
        start = int(chunk[0])
        sat = _satisfied(formula, chunk)
        model_count += int(np.count_nonzero(sat))

        # saturating counter: 0, 1, or 2 (= covered at least twice)
        counts = np.zeros(chunk.shape, dtype=np.uint8)
        for mask, value in cubes:
            if (start & mask & ~low) != (value & ~low):
                continue
            offsets = _covered_offsets(mask & low, value & low, width)
            counts[offsets] = np.minimum(counts[offsets], 1) + 1

        covered = counts >= 1
        covered_count += int(np.count_nonzero(covered))
        for kind, hits in (("over-cover", counts >= 2), ("non-model", covered & ~sat), ("uncovered", sat & ~covered)):
            if kind not in first:
                found = np.flatnonzero(hits)
                if found.size:
                    first[kind] = start + int(found[0])

    for kind in ("over-cover", "non-model", "uncovered"):
        if kind in first:
            return OracleReport(
                model_count, False, kind != "over-cover", kind, decode_assignment(first[kind], n),
                covered=covered_count,
            )
    return OracleReport(model_count, True, True, covered=covered_count)


def check_against_count(formula: CnfFormula, models: Sequence, count: int) -> OracleReport:
    """Exact-cover check against an externally supplied model count (no enumeration of 2^n).

    Each model must satisfy F, models must be pairwise disjoint, and their
    weights must add up to ``count``.
    """
    n = formula.num_vars
    literal_sets = [_literals_of(m) for m in models]
    covered = 0
    for literals in literal_sets:
        if _inconsistent(literals):
            return OracleReport(count, False, False, "inconsistent", literals)
        if not formula.is_satisfied_by(literals):
            return OracleReport(count, False, True, "non-model", literals, covered=covered)
        covered += 1 << (n - len(literals))

    as_sets = [set(lits) for lits in literal_sets]
    for i, first in enumerate(as_sets):
        for second in as_sets[i + 1:]:
            if not any(-lit in first for lit in second):
                overlap = tuple(sorted(first | second, key=var_of))
                return OracleReport(count, False, False, "over-cover", overlap, covered=covered)

    if covered != count:
        kind = "uncovered" if covered < count else "over-cover"
        return OracleReport(count, False, True, kind, None, covered=covered)
    return OracleReport(count, True, True, covered=covered)
