import pytest

from formula import DimacsError
from utils import format_model_line, parse_model_lines, report, set_quiet


def test_model_line_format():
    assert format_model_line((1, -2, -3)) == "v 1 -2 -3 0"
    assert format_model_line(()) == "v 0"


def test_parse_model_lines_skips_other_lines():
    lines = ["c comment", "v 3 0", "", "v 0", "s complete models=2 coverage=6"]
    assert parse_model_lines(lines) == [(3,), ()]


@pytest.mark.parametrize("line", ["v 1 2", "v 1 x 0", "v 1 0 2 0"])
def test_parse_model_lines_rejects_malformed(line):
    with pytest.raises(DimacsError):
        parse_model_lines([line])


def test_report_goes_to_stderr_and_respects_quiet(capsys):
    set_quiet(False)
    report("📊 hola")
    set_quiet(True)
    report("silenciado")
    set_quiet(False)
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == "📊 hola\n"
