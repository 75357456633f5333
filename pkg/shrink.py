# ==============================================================================
# shrink.py - Chronological implicant shrinking over the watch lists
# ==============================================================================

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

from engine import Engine
from formula import Clause, Literal, var_of


class ShrinkMode(str, Enum):
    DYNAMIC = "dynamic"
    CONSERVATIVE = "conservative"
    NONE = "none"


@dataclass(frozen=True)
class ShrinkResult:
    level: int  # backtrack level b
    dropped: int  # trail literals above b


def _in_remaining(engine: Engine, lit: Literal, active: bytearray) -> bool:
    """lit is true and not yet popped from the working copy of the trail."""
    return active[var_of(lit)] == 1 and engine.value(lit) is True


def _substitute(engine: Engine, clause: Clause, lit: Literal, active: bytearray) -> Optional[Literal]:
    # unwatched literals first, the other watch only as last resort
    other = None
    for candidate in clause.literals:
        if candidate == lit or not _in_remaining(engine, candidate, active):
            continue
        if candidate in clause.watches:
            other = candidate
            continue
        return candidate
    return other


def check_literal_dynamic(engine: Engine, lit: Literal, b: int, active: bytearray) -> int:
    """Move every clause watched by ``lit`` onto a remaining true literal; pin ``lit`` otherwise."""
    level = engine.levels[var_of(lit)]
    for clause in list(engine.watches[lit]):
        substitute = _substitute(engine, clause, lit, active)
        if substitute is not None:
            engine.move_watch(clause, lit, substitute, journaled=True)
        else:
            b = max(b, level)
    return b


def check_literal_conservative(engine: Engine, lit: Literal, b: int, active: bytearray) -> int:
    """Project each watched clause onto its two watches; no watch is moved."""
    level = engine.levels[var_of(lit)]
    for clause in engine.watches[lit]:
        w0, w1 = clause.watches
        other = w1 if w0 == lit else w0
        if not _in_remaining(engine, other, active):
            b = max(b, level)
    return b


CHECKS: Dict[ShrinkMode, Callable[[Engine, Literal, int, bytearray], int]] = {
    ShrinkMode.DYNAMIC: check_literal_dynamic,
    ShrinkMode.CONSERVATIVE: check_literal_conservative,
}


def implicant_shrinking(engine: Engine, mode: ShrinkMode) -> ShrinkResult:
    """Lowest level b whose trail prefix still satisfies every watched clause.

    The trail must be total and satisfying. Watch moves made while checking
    are journaled and rolled back before returning.
    """
    dl = engine.level
    if mode is ShrinkMode.NONE:
        return ShrinkResult(level=dl, dropped=0)

    check = CHECKS[mode]
    active = bytearray(engine.num_vars + 1)
    for lit in engine.trail:
        active[var_of(lit)] = 1

    mark = engine.journal_mark()
    b = 0
    try:
        for lit in reversed(engine.trail):
            v = var_of(lit)
            active[v] = 0
            level = engine.levels[v]
            if not engine.reasons[v].is_decision:
                b = max(b, level)
            elif level > b:
                b = check(engine, lit, b, active)
            elif level == 0 or level == b:
                break
    finally:
        engine.undo_journal(mark)

    dropped = sum(1 for lit in engine.trail if engine.levels[var_of(lit)] > b)
    return ShrinkResult(level=b, dropped=dropped)
