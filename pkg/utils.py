import sys
from typing import Iterable, List, Tuple

from formula import DimacsError, Literal, decoded_lines

_quiet = False


def set_quiet(quiet: bool) -> None:
    global _quiet
    _quiet = quiet


def report(message: str) -> None:
    """
    Diagnostic line to stderr (stdout carries the model stream).
    Silenced by --quiet.
    """
    if not _quiet:
        print(message, file=sys.stderr, flush=True)


def format_model_line(literals: Iterable[Literal]) -> str:
    body = " ".join(str(lit) for lit in literals)
    return f"v {body} 0" if body else "v 0"


def parse_model_lines(lines: Iterable[str]) -> List[Tuple[Literal, ...]]:
    """
    Read one partial model per `v` line. Any other line (the `s` summary,
    comments, blanks) is ignored.
    """
    models = []
    for line_number, line in enumerate(decoded_lines(lines), 1):
        tokens = line.split()
        if not tokens or tokens[0] != "v":
            continue
        try:
            values = [int(tok) for tok in tokens[1:]]
        except ValueError:
            raise DimacsError(f"linea de modelo invalida {line_number}: {line.strip()!r}")
        if not values or values[-1] != 0 or 0 in values[:-1]:
            raise DimacsError(f"linea de modelo sin terminador 0 en la linea {line_number}")
        models.append(tuple(values[:-1]))
    return models


def read_model_file(path: str) -> List[Tuple[Literal, ...]]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_model_lines(f)

