# ==============================================================================
# search.py - Chronological CDCL enumeration of disjoint partial models
# ==============================================================================

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from config import SolverConfig
from engine import Engine, EngineError, Reason, ReasonKind
from formula import Clause, CnfFormula, Literal, Variable, var_of
from heuristic import VsadsHeuristic
from shrink import ShrinkResult, implicant_shrinking

# cooperative time checks happen every this many steps (decisions + conflicts)
TIME_CHECK_INTERVAL = 1024


class AllModelsFound(Exception):
    """The search space is exhausted."""


class BudgetExhausted(Exception):
    def __init__(self, status: "RunStatus"):
        super().__init__(status.value)
        self.status = status


class RunStatus(str, Enum):
    COMPLETE = "complete"
    TIMEOUT = "timeout"
    BUDGET_EXHAUSTED = "budget_exhausted"
    UNSAT = "unsat"


@dataclass(frozen=True)
class PartialModel:
    """A consistent set of literals, sorted by variable, satisfying every clause."""

    literals: Tuple[Literal, ...]

    @classmethod
    def from_literals(cls, literals: Iterable[Literal]) -> "PartialModel":
        return cls(tuple(sorted(literals, key=var_of)))

    def weight(self, num_vars: int) -> int:
        """Number of total assignments covered."""
        return 1 << (num_vars - len(self.literals))

    def is_consistent(self) -> bool:
        lits = set(self.literals)
        return not any(-lit in lits for lit in lits)


@dataclass
class SearchStats:
    decisions: int = 0
    conflicts: int = 0
    partial_models: int = 0
    coverage: int = 0
    shrink_calls: int = 0
    dropped_literals: int = 0
    learned_clauses: int = 0
    # the run ended on a level-0 conflict, which learns nothing
    root_conflict: bool = False

    @property
    def steps(self) -> int:
        return self.decisions + self.conflicts


@dataclass(frozen=True)
class EnumerationSummary:
    status: RunStatus
    partial_models: int
    coverage: int
    conflicts: int
    decisions: int
    propagations: int
    elapsed: float
    shrink_calls: int = 0
    dropped_literals: int = 0
    learned_clauses: int = 0

    def summary_line(self) -> str:
        return f"s {self.status.value} models={self.partial_models} coverage={self.coverage}"

    def as_row(self) -> Dict[str, str]:
        return {
            "status": self.status.value,
            "partial_models": str(self.partial_models),
            "coverage": str(self.coverage),
            "conflicts": str(self.conflicts),
            "decisions": str(self.decisions),
            "propagations": str(self.propagations),
            "shrink_calls": str(self.shrink_calls),
            "dropped_literals": str(self.dropped_literals),
            "learned_clauses": str(self.learned_clauses),
            "elapsed": f"{self.elapsed:.6f}",
        }


@dataclass(frozen=True)
class ShrinkEvent:
    """What an instrumented run sees around one implicant_shrinking call."""

    result: ShrinkResult
    watches_before: dict = field(repr=False)
    watches_after: dict = field(repr=False)


ModelSink = Callable[[PartialModel], None]


def reconstruct_backtrue_reason(engine: Engine, lit: Literal) -> Clause:
    """Virtual reason of a flipped literal: itself plus the negated decisions below its origin level.

    The clause is built on demand and never enters the clause database.
    """
    reason = engine.reasons[var_of(lit)]
    if reason is None or reason.kind is not ReasonKind.BACKTRUE:
        raise EngineError(f"{lit} no tiene razon BACKTRUE")
    literals = [lit]
    for level in range(1, reason.origin):
        literals.append(-engine.decision(level))
    return Clause(literals)


class ChronoSolver:
    """Enumerates pairwise disjoint partial models without blocking clauses.

    Conflicts are analyzed up to the last UIP (the decision of the conflict
    level) and always backtrack exactly one level; total assignments are
    shrunk to a satisfying prefix, emitted, and the decision of the shrink
    level is flipped with a virtual reason.
    """

    def __init__(
        self,
        formula: CnfFormula,
        config: Optional[SolverConfig] = None,
        sink: Optional[ModelSink] = None,
        on_shrink: Optional[Callable[[ShrinkEvent], None]] = None,
    ):
        self.formula = formula
        self.config = config or SolverConfig()
        self.sink = sink
        self.on_shrink = on_shrink

        self.engine = Engine(formula)
        self.heuristic = VsadsHeuristic(
            formula,
            w_occ=self.config.w_occ,
            w_act=self.config.w_act,
            decay=self.config.decay,
            polarity_mode=self.config.polarity_mode,
            pinned_order=self.config.pinned_order,
        )
        self.stats = SearchStats()
        self._relevant = len(formula.variables())
        self._started = 0.0

    # ------------------------------------------------------------------ loop

    def run(self) -> EnumerationSummary:
        engine = self.engine
        self._started = time.perf_counter()
        status = RunStatus.COMPLETE
        try:
            conflict = engine.load()
            if conflict is not None:
                self.stats.conflicts += 1
                self.analyze_conflict(conflict)

            while True:
                conflict = engine.propagate()
                if conflict is not None:
                    self.stats.conflicts += 1
                    self._tick()
                    self.analyze_conflict(conflict)
                    continue

                if self.config.debug_checks:
                    engine.check_invariants()

                if len(engine.trail) == self._relevant:
                    self.analyze_assignment()
                    continue

                lit = self.heuristic.pick_branch_literal(engine)
                if lit is None:
                    raise EngineError("trail incompleto sin variables por decidir")
                self.stats.decisions += 1
                self._tick()
                engine.decide(lit)
        except AllModelsFound:
            status = RunStatus.COMPLETE if self.stats.partial_models else RunStatus.UNSAT
        except BudgetExhausted as e:
            status = e.status

        return self._summary(status)

    def _tick(self) -> None:
        steps = self.stats.steps
        budget = self.config.step_budget
        if budget is not None and steps > budget:
            raise BudgetExhausted(RunStatus.BUDGET_EXHAUSTED)
        limit = self.config.time_budget
        if limit is not None and steps % TIME_CHECK_INTERVAL == 0:
            if time.perf_counter() - self._started > limit:
                raise BudgetExhausted(RunStatus.TIMEOUT)

    def _summary(self, status: RunStatus) -> EnumerationSummary:
        stats = self.stats
        return EnumerationSummary(
            status=status,
            partial_models=stats.partial_models,
            coverage=stats.coverage,
            conflicts=stats.conflicts,
            decisions=stats.decisions,
            propagations=self.engine.propagations,
            elapsed=time.perf_counter() - self._started,
            shrink_calls=stats.shrink_calls,
            dropped_literals=stats.dropped_literals,
            learned_clauses=stats.learned_clauses,
        )

    # ------------------------------------------------------------- conflicts

    def _level_of(self, literals: Iterable[Literal]) -> int:
        levels = self.engine.levels
        return max((levels[var_of(lit)] for lit in literals), default=0)

    def analyze_conflict(self, conflict: Clause) -> None:
        engine = self.engine
        literals: List[Literal] = list(conflict.literals)
        bumped: Set[Variable] = set()

        while True:
            conflict_level = self._level_of(literals)
            if conflict_level < engine.level:
                engine.backtrack(conflict_level)
            dl = engine.level
            if dl == 0:
                self.stats.root_conflict = True
                raise AllModelsFound()

            uip, learned, resolved = self.last_uip_analysis(literals)
            bumped |= resolved
            if uip is not None:
                break
            # the resolvent fell below dl: analyze it as a virtual conflict
            literals = learned

        if self.config.debug_checks:
            self._check_learned(learned, dl)

        engine.backtrack(dl - 1)
        clause = engine.add_learned(learned, asserting=-uip)
        self.stats.learned_clauses += 1
        engine.assign(-uip, dl - 1, Reason.propagated(clause))
        self.heuristic.on_conflict(bumped | {var_of(lit) for lit in learned})

    def _reason_literals(self, lit: Literal) -> List[Literal]:
        reason = self.engine.reasons[var_of(lit)]
        if reason.kind is ReasonKind.BACKTRUE:
            return reconstruct_backtrue_reason(self.engine, lit).literals
        if reason.kind is ReasonKind.PROPAGATED:
            return reason.clause.literals
        raise EngineError(f"{lit} ({reason.kind.value}) no tiene clausula razon en nivel {self.engine.level}")

    def last_uip_analysis(
        self, conflict: Iterable[Literal]
    ) -> Tuple[Optional[Literal], List[Literal], Set[Variable]]:
        """Resolve the conflict back to the decision of the current level.

        Returns ``(uip, learned, resolved_vars)`` where ``learned`` holds the
        negated UIP first. When no level-dl literal survives the resolution
        ``uip`` is None and ``learned`` is a resolvent at a lower level.
        """
        engine = self.engine
        levels = engine.levels
        dl = engine.level
        decision = engine.decision(dl)

        seen: Set[Variable] = set()
        lower: List[Literal] = []

        def absorb(literals: Iterable[Literal], pivot: Optional[Literal]) -> int:
            added = 0
            for lit in literals:
                if lit == pivot:
                    continue
                v = var_of(lit)
                if v in seen or levels[v] == 0:
                    continue
                seen.add(v)
                if levels[v] == dl:
                    added += 1
                else:
                    lower.append(lit)
            return added

        open_count = absorb(conflict, None)
        for lit in reversed(engine.trail):
            if open_count == 0:
                break
            v = var_of(lit)
            if v not in seen or levels[v] != dl:
                continue
            if lit == decision:
                return lit, [-lit] + lower, seen
            open_count -= 1
            open_count += absorb(self._reason_literals(lit), lit)

        return None, lower, seen

    def _check_learned(self, learned: List[Literal], dl: int) -> None:
        engine = self.engine
        if any(engine.value(lit) is not False for lit in learned):
            raise EngineError(f"clausula aprendida no falsificada: {learned}")
        at_dl = [lit for lit in learned if engine.levels[var_of(lit)] == dl]
        if len(at_dl) != 1:
            raise EngineError(f"clausula aprendida con {len(at_dl)} literales de nivel {dl}: {learned}")

    # ----------------------------------------------------------- assignments

    def analyze_assignment(self) -> None:
        engine = self.engine
        before = engine.watch_snapshot() if self.on_shrink else None
        result = implicant_shrinking(engine, self.config.shrink_mode)
        if self.on_shrink:
            self.on_shrink(ShrinkEvent(result, before, engine.watch_snapshot()))
        self.stats.shrink_calls += 1
        self.stats.dropped_literals += result.dropped

        b = result.level
        engine.backtrack(b)
        model = PartialModel.from_literals(engine.trail)
        if self.config.debug_checks:
            if not model.is_consistent():
                raise EngineError(f"el modelo parcial {model.literals} es inconsistente")
            if not self.formula.is_satisfied_by(model.literals):
                raise EngineError(f"el modelo parcial {model.literals} no satisface la formula")
        self._emit(model)

        if b == 0:
            raise AllModelsFound()
        flip = -engine.decision(b)
        engine.backtrack(b - 1)
        engine.assign(flip, b - 1, Reason.backtrue(origin=b))

    def _emit(self, model: PartialModel) -> None:
        stats = self.stats
        stats.partial_models += 1
        stats.coverage += model.weight(self.formula.num_vars)
        if self.sink is not None and self.config.emit_models:
            self.sink(model)


def enumerate_models(
    formula: CnfFormula,
    config: Optional[SolverConfig] = None,
    sink: Optional[ModelSink] = None,
) -> EnumerationSummary:
    """Stream the disjoint partial models of ``formula`` into ``sink``."""
    return ChronoSolver(formula, config, sink).run()


def collect_models(
    formula: CnfFormula, config: Optional[SolverConfig] = None
) -> Tuple[List[PartialModel], EnumerationSummary]:
    models: List[PartialModel] = []
    summary = enumerate_models(formula, config, models.append)
    return models, summary
