# ==============================================================================
# formula.py - CNF data model and DIMACS reading/writing
# ==============================================================================

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

# Variables are 1-based DIMACS indices; a literal is +v or -v.
Variable = int
Literal = int


class DimacsError(ValueError):
    """Raised when the DIMACS input is malformed."""


class EmptyClauseError(DimacsError):
    """The input contains the empty clause: the formula has no models at all."""

    def __init__(self, num_vars: int, line_number: int):
        super().__init__(f"clausula vacia en la linea {line_number}: formula trivialmente insatisfacible")
        self.num_vars = num_vars
        self.line_number = line_number


def var_of(lit: Literal) -> Variable:
    return lit if lit > 0 else -lit


def negate(lit: Literal) -> Literal:
    return -lit


class Clause:
    """A clause as the engine sees it: literals plus the two watched literals.

    Identity matters here (watch lists hold references), so clauses compare by
    object identity, not by content.
    """

    __slots__ = ("literals", "watches", "learned")

    def __init__(self, literals: Sequence[Literal], learned: bool = False):
        self.literals: List[Literal] = list(literals)
        self.watches: List[Literal] = self.literals[:2] if len(self.literals) >= 2 else []
        self.learned = learned

    @property
    def origin(self) -> str:
        return "learned" if self.learned else "input"

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __contains__(self, lit):
        return lit in self.literals

    def __repr__(self):
        return f"Clause({self.literals}, watches={self.watches}, {self.origin})"


@dataclass(frozen=True)
class CnfFormula:
    """Normalized CNF formula. Immutable once built."""

    num_vars: int
    clauses: Tuple[Tuple[Literal, ...], ...] = ()
    units: Tuple[Literal, ...] = ()
    _variables: frozenset = field(default=frozenset(), repr=False, compare=False)

    @property
    def num_clauses(self) -> int:
        """Clauses of the input including unit clauses."""
        return len(self.clauses) + len(self.units)

    def all_clauses(self) -> List[Tuple[Literal, ...]]:
        return [(u,) for u in self.units] + list(self.clauses)

    def variables(self) -> frozenset:
        """Variables occurring in some clause; the rest are don't-care."""
        return self._variables

    def occurrences(self) -> List[int]:
        counts = [0] * (self.num_vars + 1)
        for clause in self.all_clauses():
            for lit in clause:
                counts[var_of(lit)] += 1
        return counts

    def is_satisfied_by(self, literals: Iterable[Literal]) -> bool:
        true_lits = set(literals)
        return all(any(lit in true_lits for lit in clause) for clause in self.all_clauses())


def normalize_clause(raw: Iterable[Literal]) -> Optional[Tuple[Literal, ...]]:
    """Drop duplicate literals (keeping first occurrence order); None for tautologies."""
    lits = tuple(OrderedDict.fromkeys(raw).keys())
    seen = set(lits)
    if any(-lit in seen for lit in lits):
        return None
    return lits


def build_formula(num_vars: int, raw_clauses: Iterable[Iterable[Literal]]) -> CnfFormula:
    """Normalize clauses and route units; the empty clause is rejected."""
    clauses = []
    units = []
    for number, raw in enumerate(raw_clauses, 1):
        lits = normalize_clause(raw)
        if lits is None:
            continue
        for lit in lits:
            if lit == 0 or var_of(lit) > num_vars:
                raise DimacsError(f"literal {lit} fuera de rango (num_vars={num_vars})")
        if not lits:
            raise EmptyClauseError(num_vars, number)
        if len(lits) == 1:
            units.append(lits[0])
        else:
            clauses.append(lits)

    variables = frozenset(var_of(lit) for clause in clauses for lit in clause) | frozenset(var_of(u) for u in units)
    return CnfFormula(num_vars=num_vars, clauses=tuple(clauses), units=tuple(units), _variables=variables)


def decoded_lines(lines: Iterable[str]) -> Iterator[str]:
    """Yield ``lines``, turning a UTF-8 decoding failure into ``DimacsError``."""
    it = iter(lines)
    while True:
        try:
            line = next(it)
        except StopIteration:
            return
        except UnicodeDecodeError as e:
            bad = e.object[e.start:e.start + 1].hex()
            raise DimacsError(f"la entrada no es UTF-8 valido (byte 0x{bad})")
        yield line


def _parse_header(line: str, line_number: int) -> int:
    parts = line.split()
    if len(parts) != 4 or parts[1] != "cnf":
        raise DimacsError(f"cabecera invalida en la linea {line_number}: {line!r}")
    try:
        num_vars, num_clauses = int(parts[2]), int(parts[3])
    except ValueError:
        raise DimacsError(f"cabecera invalida en la linea {line_number}: {line!r}")
    if num_vars < 0 or num_clauses < 0:
        raise DimacsError(f"cabecera con valores negativos en la linea {line_number}")
    return num_vars


def parse_dimacs(text: Union[str, TextIO, Iterable[str]]) -> CnfFormula:
    """Parse DIMACS CNF text (a string, an open file or any iterable of lines).

    The clause count of the header is advisory. A trailing ``%`` line (SATLIB
    style) ends the input.
    """
    lines = text.splitlines() if isinstance(text, str) else decoded_lines(text)

    num_vars: Optional[int] = None
    raw_clauses: List[List[Literal]] = []
    current: List[Literal] = []
    current_start = 0

    for line_number, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsError(f"cabecera duplicada en la linea {line_number}")
            num_vars = _parse_header(line, line_number)
            continue
        if num_vars is None:
            raise DimacsError(f"clausula antes de la cabecera en la linea {line_number}")

        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"token no numerico {token!r} en la linea {line_number}")
            if not current:
                current_start = line_number
            if lit == 0:
                if not current:
                    raise EmptyClauseError(num_vars, line_number)
                raw_clauses.append(current)
                current = []
                continue
            if var_of(lit) > num_vars:
                raise DimacsError(f"literal {lit} excede num_vars={num_vars} en la linea {line_number}")
            current.append(lit)

    if num_vars is None:
        raise DimacsError("falta la cabecera 'p cnf'")
    if current:
        raise DimacsError(f"clausula sin terminar (iniciada en la linea {current_start})")

    return build_formula(num_vars, raw_clauses)


def write_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.all_clauses():
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs_file(path: str) -> CnfFormula:
    with open(path, "r", encoding="utf-8") as f:
        return parse_dimacs(f)
