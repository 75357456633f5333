import random

import pytest

from engine import DECISION, UNIT, Engine, EngineError, Reason, ReasonKind
from formula import Clause, parse_dimacs
from generators import Rnd3SatSpec, gen_rnd3sat


def loaded(formula):
    engine = Engine(formula)
    assert engine.load() is None
    return engine


def clause_with(engine, literals):
    return next(c for c in engine.clauses if c.literals == list(literals))


def test_assign_decision_records_sigma(conflict_formula):
    engine = loaded(conflict_formula)
    engine.assign(-3, 1, DECISION)
    assert engine.trail == [-3]
    assert engine.level == 1
    assert engine.decision(1) == -3
    assert engine.decision(2) is None
    assert engine.value(3) is False and engine.value(-3) is True


def test_unit_only_at_level_zero(conflict_formula):
    engine = loaded(conflict_formula)
    engine.assign(1, 0, UNIT)
    engine.decide(-3)
    with pytest.raises(EngineError):
        engine.assign(2, 1, UNIT)


def test_double_assign_is_programming_error(conflict_formula):
    engine = loaded(conflict_formula)
    engine.decide(-3)
    with pytest.raises(EngineError):
        engine.assign(3, 1, Reason.backtrue(origin=1))


def test_backtrue_assignment_keeps_origin(conflict_formula):
    engine = loaded(conflict_formula)
    engine.decide(-3)
    engine.assign(2, 1, Reason.backtrue(origin=2))
    reason = engine.reasons[2]
    assert reason.kind is ReasonKind.BACKTRUE and reason.origin == 2
    assert engine.levels[2] == 1


def test_input_units_installed_at_level_zero():
    engine = Engine(parse_dimacs("p cnf 3 2\n-2 0\n1 2 0\n"))
    assert engine.load() is None
    assert engine.propagate() is None
    assert engine.value(-2) is True and engine.levels[2] == 0
    assert engine.value(1) is True and engine.levels[1] == 0
    assert engine.reasons[2] is UNIT


def test_clashing_units_return_conflict():
    engine = Engine(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"))
    conflict = engine.load()
    assert conflict is not None and conflict.literals == [-1]


def test_backtrue_propagation_conflict(conflict_formula):
    # trail -x3^d x2^*: c1 forces x1, then c3 is falsified
    engine = loaded(conflict_formula)
    engine.decide(-3)
    engine.assign(2, 1, Reason.backtrue(origin=2))
    conflict = engine.propagate()
    assert conflict is clause_with(engine, [-1, -2])
    assert engine.value(1) is True
    assert engine.levels[1] == 1
    assert engine.reasons[1].clause is clause_with(engine, [1, -2])


def test_propagated_level_follows_reason_levels():
    engine = loaded(parse_dimacs("p cnf 3 1\n1 2 3 0\n"))
    engine.decide(-1)
    engine.decide(-3)
    engine.decide(-2)
    # dropping level 3 leaves the clause unit on x2 under levels 1 and 2
    engine.backtrack(2)
    assert engine.propagate() is None
    assert engine.value(2) is True
    assert engine.levels[2] == 2


def test_backtrack_keeps_out_of_order_entries(conflict_formula):
    engine = loaded(conflict_formula)
    engine.decide(-3)
    engine.decide(2)
    engine.assign(1, 1, Reason.propagated(clause_with(engine, [1, -3])))
    engine.backtrack(1)
    assert engine.trail == [-3, 1]
    assert engine.level == 1
    assert engine.value(2) is None
    assert engine.levels[2] is None and engine.reasons[2] is None


def test_backtrack_by_levels():
    engine = loaded(parse_dimacs("p cnf 3 0\n"))
    engine.decide(1)
    engine.decide(2)
    engine.decide(3)
    engine.backtrack(1)
    assert engine.trail == [1]
    assert engine.control == [1]
    assert engine.saved_phase[3] is True


def test_backtrack_to_current_level_is_noop(conflict_formula):
    engine = loaded(conflict_formula)
    engine.decide(-3)
    engine.decide(-2)
    before = (list(engine.trail), list(engine.control), engine.qhead)
    engine.backtrack(2)
    assert (engine.trail, engine.control, engine.qhead) == before


def test_move_watch_single_clause(single_clause):
    engine = loaded(single_clause)
    c1 = engine.clauses[0]
    engine.move_watch(c1, 1, 3)
    assert engine.watches[1] == []
    assert engine.watches[2] == [c1]
    assert engine.watches[3] == [c1]
    assert c1.watches == [3, 2]


def test_move_watch_to_foreign_literal_rejected(single_clause):
    engine = loaded(single_clause)
    with pytest.raises(EngineError):
        engine.move_watch(engine.clauses[0], 1, 4)
    with pytest.raises(EngineError):
        engine.move_watch(engine.clauses[0], 3, 1)


def test_journaled_moves_roll_back(single_clause):
    engine = loaded(single_clause)
    c1 = engine.clauses[0]
    before = engine.watch_snapshot()
    mark = engine.journal_mark()
    engine.move_watch(c1, 1, 3, journaled=True)
    engine.move_watch(c1, 2, 3, journaled=True)
    assert c1.watches == [3, 3]
    engine.undo_journal(mark)
    assert engine.watch_snapshot() == before
    assert c1.watches == [1, 2]
    assert engine.journal == []


def test_undo_restores_list_positions():
    engine = loaded(parse_dimacs("p cnf 4 3\n1 2 0\n1 3 0\n1 4 0\n"))
    before = engine.watch_snapshot()
    middle = engine.watches[1][1]
    engine.move_watch(middle, 1, 3, journaled=True)
    engine.undo_journal()
    assert engine.watches[1][1] is middle
    assert engine.watch_snapshot() == before


def test_learned_clause_watches():
    engine = loaded(parse_dimacs("p cnf 3 1\n1 2 3 0\n"))
    engine.decide(-1)
    engine.decide(-2)
    engine.decide(-3)
    learned = engine.add_learned([3, 1, 2], asserting=3)
    assert learned.learned
    assert learned.watches == [3, 2]
    unit = engine.add_learned([1], asserting=1)
    assert unit in engine.learned_units


def test_learned_unit_reasserted_after_backtrack():
    engine = loaded(parse_dimacs("p cnf 2 1\n1 2 0\n"))
    engine.decide(-1)
    unit = engine.add_learned([2], asserting=2)
    engine.assign(2, 1, Reason.propagated(unit))
    engine.backtrack(0)
    assert engine.propagate() is None
    assert engine.value(2) is True and engine.levels[2] == 0


@pytest.mark.parametrize("seed", range(25))
def test_invariants_hold_along_random_search(seed):
    rng = random.Random(seed)
    formula = gen_rnd3sat(Rnd3SatSpec(n=8, ratio=2.0, seed=seed))
    engine = Engine(formula)
    assert engine.load() is None
    for _ in range(40):
        conflict = engine.propagate()
        if conflict is not None:
            if engine.level == 0:
                break
            engine.backtrack(rng.randrange(engine.level))
            continue
        engine.check_invariants()
        free = [v for v in range(1, 9) if engine.values[v] is None]
        if not free:
            engine.backtrack(rng.randrange(engine.level + 1))
            continue
        v = rng.choice(free)
        engine.decide(v if rng.getrandbits(1) else -v)


def test_check_propagation_detects_missed_unit(conflict_formula):
    engine = loaded(conflict_formula)
    engine.decide(2)
    with pytest.raises(EngineError):
        engine.check_propagation()


def test_watch_integrity_check_detects_corruption(single_clause):
    engine = loaded(single_clause)
    engine.watches[3].append(engine.clauses[0])
    with pytest.raises(EngineError):
        engine.check_watches()


def test_clause_level():
    engine = loaded(parse_dimacs("p cnf 3 1\n1 2 3 0\n"))
    engine.decide(-1)
    engine.decide(-2)
    assert engine.clause_level(engine.clauses[0]) == 2
    assert engine.clause_level(Clause([3])) == 0
