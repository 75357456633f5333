# ==============================================================================
# heuristic.py - VSADS decision ordering (occurrences + decaying activity)
# ==============================================================================

from enum import Enum
from typing import Iterable, List, Optional, Sequence

from engine import Engine
from formula import CnfFormula, Literal, Variable


class PolarityMode(str, Enum):
    ALWAYS_FALSE = "false"
    ALWAYS_TRUE = "true"
    SAVED = "saved"


RESCALE_LIMIT = 1e100


class VsadsHeuristic:
    """Decide the unassigned variable maximizing w_occ*occurrences + w_act*activity.

    Ties go first to variables with a non-empty watch list (either polarity),
    then to the smallest index. Activities are stored MiniSat style: bumps add
    the current increment, the increment grows by 1/decay per conflict, and the
    effective activity is raw/increment.
    """

    def __init__(
        self,
        formula: CnfFormula,
        w_occ: float = 1.0,
        w_act: float = 100.0,
        decay: float = 0.95,
        polarity_mode: PolarityMode = PolarityMode.ALWAYS_FALSE,
        pinned_order: Optional[Sequence[Variable]] = None,
        rescale_limit: float = RESCALE_LIMIT,
    ):
        if not 0.0 < decay < 1.0:
            raise ValueError(f"decay debe estar en (0,1): {decay}")
        self.w_occ = w_occ
        self.w_act = w_act
        self.decay = decay
        self.polarity_mode = PolarityMode(polarity_mode)
        self.pinned_order = tuple(pinned_order) if pinned_order else ()
        self.rescale_limit = rescale_limit

        self.variables: List[Variable] = sorted(formula.variables())
        self.occurrence: List[int] = formula.occurrences()
        self.activity: List[float] = [0.0] * (formula.num_vars + 1)
        self.increment = 1.0

    # ------------------------------------------------------------- activities

    def effective_activity(self, v: Variable) -> float:
        return self.activity[v] / self.increment

    def score(self, v: Variable) -> float:
        return self.w_occ * self.occurrence[v] + self.w_act * self.effective_activity(v)

    def scale_activities(self, factor: float) -> None:
        """Scale raw activities and the increment together; scores are unchanged."""
        self.activity = [a * factor for a in self.activity]
        self.increment *= factor

    def on_conflict(self, variables: Iterable[Variable]) -> None:
        """Bump each variable of the learned clause and of the resolved reasons once, then decay."""
        for v in set(variables):
            self.activity[v] += self.increment
            if self.activity[v] > self.rescale_limit:
                self.scale_activities(1.0 / self.rescale_limit)
        self.increment /= self.decay
        if self.increment > self.rescale_limit:
            self.scale_activities(1.0 / self.rescale_limit)

    # -------------------------------------------------------------- decisions

    def _polarity(self, engine: Engine, v: Variable) -> Literal:
        if self.polarity_mode is PolarityMode.ALWAYS_TRUE:
            return v
        if self.polarity_mode is PolarityMode.SAVED:
            return v if engine.saved_phase[v] else -v
        return -v

    def pick_branch_literal(self, engine: Engine) -> Optional[Literal]:
        values = engine.values
        for v in self.pinned_order:
            if 1 <= v <= engine.num_vars and values[v] is None and v in engine.formula.variables():
                return self._polarity(engine, v)

        best = None
        best_key = None
        watches = engine.watches
        for v in self.variables:
            if values[v] is not None:
                continue
            key = (self.score(v), bool(watches[v] or watches[-v]), -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        if best is None:
            return None
        return self._polarity(engine, best)
