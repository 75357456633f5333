# ==============================================================================
# engine.py - Trail, reasons, 2-watched-literal propagation, chronological backtracking
# ==============================================================================

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from formula import Clause, CnfFormula, Literal, var_of


class EngineError(RuntimeError):
    """Programming error inside the solver core (never a user error)."""


class ReasonKind(Enum):
    DECISION = "decision"
    UNIT = "unit"
    PROPAGATED = "propagated"
    BACKTRUE = "backtrue"


@dataclass(frozen=True)
class Reason:
    kind: ReasonKind
    clause: Optional[Clause] = None
    # BACKTRUE only: the level the flipped literal had as a decision
    origin: Optional[int] = None

    @staticmethod
    def propagated(clause: Clause) -> "Reason":
        return Reason(ReasonKind.PROPAGATED, clause=clause)

    @staticmethod
    def backtrue(origin: int) -> "Reason":
        return Reason(ReasonKind.BACKTRUE, origin=origin)

    @property
    def is_decision(self) -> bool:
        return self.kind is ReasonKind.DECISION


DECISION = Reason(ReasonKind.DECISION)
UNIT = Reason(ReasonKind.UNIT)


def _remove_ref(clauses: List[Clause], clause: Clause) -> int:
    """Remove the first occurrence of ``clause`` (by identity) and return its position."""
    for position, candidate in enumerate(clauses):
        if candidate is clause:
            del clauses[position]
            return position
    raise EngineError(f"la clausula {clause!r} no esta en la lista de vigilancia")


class Engine:
    """Assignment machinery shared by search and shrinking.

    Levels of propagated literals follow the out-of-order rule: the maximum
    level among the other (false) literals of the reason clause. Backtracking
    keeps every entry at or below the target level, in trail order, and queues
    the clauses touching removed variables for a recheck on the next
    propagate() so that the watch invariant holds again afterwards.
    """

    def __init__(self, formula: CnfFormula):
        n = formula.num_vars
        self.formula = formula
        self.num_vars = n

        self.values: List[Optional[bool]] = [None] * (n + 1)
        self.levels: List[Optional[int]] = [None] * (n + 1)
        self.reasons: List[Optional[Reason]] = [None] * (n + 1)
        self.saved_phase: List[bool] = [False] * (n + 1)

        self.trail: List[Literal] = []
        self.control: List[Literal] = []  # control[l - 1] is the decision of level l
        self.qhead = 0

        self.watches: Dict[Literal, List[Clause]] = {}
        for v in range(1, n + 1):
            self.watches[v] = []
            self.watches[-v] = []

        self.clauses: List[Clause] = []
        self.learned_units: List[Clause] = []
        self.journal: List[Tuple[Clause, int, Literal, Literal, int]] = []

        self._pending: List[Clause] = []
        self._pending_ids = set()
        self._conflict: Optional[Clause] = None

        self.propagations = 0

    # ------------------------------------------------------------------ state

    @property
    def level(self) -> int:
        return len(self.control)

    def value(self, lit: Literal) -> Optional[bool]:
        v = self.values[var_of(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def decision(self, level: int) -> Optional[Literal]:
        """sigma(level); None plays the role of the empty marker."""
        if 1 <= level <= len(self.control):
            return self.control[level - 1]
        return None

    def clause_level(self, clause: Clause) -> int:
        return max((self.levels[var_of(lit)] or 0 for lit in clause.literals), default=0)

    # ------------------------------------------------------------------ setup

    def load(self) -> Optional[Clause]:
        """Build the clause database and install input units at level 0.

        Returns a falsified unit clause when two input units clash.
        """
        conflict = None
        for lits in self.formula.clauses:
            clause = Clause(lits)
            self.clauses.append(clause)
            self.watches[clause.watches[0]].append(clause)
            self.watches[clause.watches[1]].append(clause)

        for unit in self.formula.units:
            clause = Clause((unit,))
            self.clauses.append(clause)
            current = self.value(unit)
            if current is None:
                self.assign(unit, 0, UNIT)
            elif current is False and conflict is None:
                conflict = clause
        return conflict

    # ------------------------------------------------------------- assignment

    def assign(self, lit: Literal, level: int, reason: Reason) -> None:
        v = var_of(lit)
        if self.values[v] is not None:
            raise EngineError(f"la variable {v} ya esta asignada")
        if reason.is_decision:
            if level != self.level + 1:
                raise EngineError(f"decision a nivel {level} con nivel actual {self.level}")
            self.control.append(lit)
        elif level > self.level:
            raise EngineError(f"nivel {level} por encima del nivel actual {self.level}")
        elif reason.kind is ReasonKind.UNIT and level != 0:
            raise EngineError("UNIT solo es valido a nivel 0")

        self.values[v] = lit > 0
        self.levels[v] = level
        self.reasons[v] = reason
        self.trail.append(lit)

    def decide(self, lit: Literal) -> None:
        self.assign(lit, self.level + 1, DECISION)

    def _implied_level(self, clause: Clause, lit: Literal) -> int:
        return max((self.levels[var_of(other)] for other in clause.literals if other != lit), default=0)

    def _imply(self, clause: Clause, lit: Literal) -> None:
        self.assign(lit, self._implied_level(clause, lit), Reason.propagated(clause))

    # ------------------------------------------------------------ propagation

    def propagate(self) -> Optional[Clause]:
        """Unit propagation to fixpoint; returns a falsified clause or None."""
        self._conflict = None

        while self._pending:
            clause = self._pending.pop(0)
            self._pending_ids.discard(id(clause))
            conflict = self._recheck(clause)
            if conflict is not None:
                return self._fail(conflict)

        trail = self.trail
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -lit
            for clause in list(self.watches[false_lit]):
                conflict = self._visit(clause, false_lit)
                if conflict is not None:
                    # the literal is revisited if it survives the backtrack
                    self.qhead -= 1
                    return self._fail(conflict)
        return None

    def _fail(self, conflict: Clause) -> Clause:
        # leftover rechecks stay queued for the next call
        self._conflict = conflict
        return conflict

    def _replacement(self, clause: Clause) -> Optional[Literal]:
        watched = clause.watches
        for lit in clause.literals:
            if lit != watched[0] and lit != watched[1] and self.value(lit) is not False:
                return lit
        return None

    def _visit(self, clause: Clause, false_lit: Literal) -> Optional[Clause]:
        w0, w1 = clause.watches
        other = w1 if w0 == false_lit else w0
        if self.value(other) is True:
            return None

        replacement = self._replacement(clause)
        if replacement is not None:
            self.move_watch(clause, false_lit, replacement)
            return None

        if self.value(other) is None:
            self._imply(clause, other)
            return None
        return clause

    def _recheck(self, clause: Clause) -> Optional[Clause]:
        if len(clause.literals) == 1:
            lit = clause.literals[0]
            current = self.value(lit)
            if current is None:
                self._imply(clause, lit)
            elif current is False:
                return clause
            return None

        if self.value(clause.watches[0]) is True or self.value(clause.watches[1]) is True:
            return None
        for watched in list(clause.watches):
            if self.value(watched) is False:
                replacement = self._replacement(clause)
                if replacement is not None:
                    self.move_watch(clause, watched, replacement)

        w0, w1 = clause.watches
        v0, v1 = self.value(w0), self.value(w1)
        if v0 is False and v1 is False:
            return clause
        if v0 is False and v1 is None:
            self._imply(clause, w1)
        elif v1 is False and v0 is None:
            self._imply(clause, w0)
        return None

    def _queue_recheck(self, clause: Clause) -> None:
        if id(clause) not in self._pending_ids:
            self._pending_ids.add(id(clause))
            self._pending.append(clause)

    # ------------------------------------------------------------ backtracking

    def backtrack(self, target: int) -> None:
        """Drop every entry above ``target``; survivors keep their order."""
        if target >= self.level:
            return

        survivors: List[Literal] = []
        removed: List[Literal] = []
        qhead = 0
        for position, lit in enumerate(self.trail):
            v = var_of(lit)
            if self.levels[v] <= target:
                survivors.append(lit)
                if position < self.qhead:
                    qhead += 1
            else:
                removed.append(lit)
                self.saved_phase[v] = lit > 0
                self.values[v] = None
                self.levels[v] = None
                self.reasons[v] = None

        self.trail = survivors
        self.qhead = qhead
        del self.control[target:]

        if self._conflict is not None:
            self._queue_recheck(self._conflict)
        for lit in removed:
            for clause in self.watches[lit]:
                self._queue_recheck(clause)
            for clause in self.watches[-lit]:
                self._queue_recheck(clause)
        for clause in self.learned_units:
            if self.value(clause.literals[0]) is None:
                self._queue_recheck(clause)

    # ----------------------------------------------------------------- watches

    def move_watch(self, clause: Clause, source: Literal, target: Literal, journaled: bool = False) -> None:
        if target not in clause.literals:
            raise EngineError(f"{target} no pertenece a {clause!r}")
        try:
            idx = clause.watches.index(source)
        except ValueError:
            raise EngineError(f"{clause!r} no esta vigilada por {source}")

        position = _remove_ref(self.watches[source], clause)
        self.watches[target].append(clause)
        clause.watches[idx] = target
        if journaled:
            self.journal.append((clause, idx, source, target, position))

    def journal_mark(self) -> int:
        return len(self.journal)

    def undo_journal(self, mark: int = 0) -> None:
        """Undo journaled watch moves back to ``mark``, newest first."""
        while len(self.journal) > mark:
            clause, idx, source, target, position = self.journal.pop()
            moved = self.watches[target].pop()
            if moved is not clause:
                raise EngineError("diario de vigilancias inconsistente")
            self.watches[source].insert(position, clause)
            clause.watches[idx] = source

    def watch_snapshot(self) -> Dict[Literal, Tuple[int, ...]]:
        return {lit: tuple(id(c) for c in clauses) for lit, clauses in self.watches.items() if clauses}

    # ---------------------------------------------------------------- learning

    def add_learned(self, literals: List[Literal], asserting: Literal) -> Clause:
        """Store a learned clause watched by ``asserting`` and its highest-level other literal."""
        clause = Clause(literals, learned=True)
        self.clauses.append(clause)
        if len(literals) == 1:
            self.learned_units.append(clause)
            return clause

        others = [lit for lit in literals if lit != asserting]
        second = max(others, key=lambda lit: self.levels[var_of(lit)] or 0)
        clause.watches = [asserting, second]
        self.watches[asserting].append(clause)
        self.watches[second].append(clause)
        return clause

    # -------------------------------------------------------------- self-checks

    def check_trail(self) -> None:
        on_trail = set()
        for lit in self.trail:
            v = var_of(lit)
            if v in on_trail:
                raise EngineError(f"variable {v} duplicada en el trail")
            on_trail.add(v)
            if self.value(lit) is not True:
                raise EngineError(f"{lit} en el trail pero no es verdadero")
            if self.levels[v] is None or self.levels[v] > self.level:
                raise EngineError(f"nivel invalido para {lit}: {self.levels[v]}")
        for v in range(1, self.num_vars + 1):
            assigned = self.values[v] is not None
            if assigned != (v in on_trail) or assigned != (self.levels[v] is not None):
                raise EngineError(f"estado incoherente para la variable {v}")
        for level, lit in enumerate(self.control, 1):
            if self.levels[var_of(lit)] != level or not self.reasons[var_of(lit)].is_decision:
                raise EngineError(f"sigma({level}) = {lit} incoherente")

    def check_watches(self) -> None:
        expected = 0
        for clause in self.clauses:
            if len(clause.literals) < 2:
                continue
            expected += 2
            w0, w1 = clause.watches
            if w0 == w1 or w0 not in clause.literals or w1 not in clause.literals:
                raise EngineError(f"vigilancias invalidas en {clause!r}")
            for w in (w0, w1):
                if sum(1 for c in self.watches[w] if c is clause) != 1:
                    raise EngineError(f"{clause!r} no aparece exactamente una vez en w({w})")
        total = sum(len(clauses) for clauses in self.watches.values())
        if total != expected:
            raise EngineError(f"{total} entradas de vigilancia, se esperaban {expected}")

    def check_propagation(self) -> None:
        """Naive scan: no clause is falsified or unit under the trail."""
        for clause in self.clauses:
            values = [self.value(lit) for lit in clause.literals]
            if True in values:
                continue
            unassigned = values.count(None)
            if unassigned == 0:
                raise EngineError(f"clausula falsificada sin conflicto: {clause!r}")
            if unassigned == 1:
                raise EngineError(f"clausula unitaria sin propagar: {clause!r}")
            w0, w1 = clause.watches
            if self.value(w0) is False or self.value(w1) is False:
                raise EngineError(f"vigilancia falsa en clausula no satisfecha: {clause!r}")

    def check_invariants(self) -> None:
        self.check_trail()
        self.check_watches()
        self.check_propagation()
