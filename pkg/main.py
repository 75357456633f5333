# ==============================================================================
# main.py - Punto de entrada: enumeracion AllSAT disjunta, generadores, verificacion
# ==============================================================================

import argparse
import sys
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

from bench_runner import BenchRunner, generate_corpus, list_corpus
from config import ConfigError, SolverConfig, config, get_required_env
from formula import CnfFormula, DimacsError, EmptyClauseError, parse_dimacs, read_dimacs_file, write_dimacs
from generators import GeneratorError, Rnd3SatSpec, gen_binary, gen_rnd3sat
from heuristic import PolarityMode
from oracle import OracleBoundError, check_against_count, count_models, verify_cover
from results_manager import ResultsManager, print_mode_summary, summary_row
from search import EnumerationSummary, RunStatus, enumerate_models
from session_tracker import SessionTracker
from shrink import ShrinkMode
from utils import format_model_line, read_model_file, report, set_quiet

EXIT_COMPLETE = 0
EXIT_UNSAT = 1
EXIT_VIOLATION = 1
EXIT_INCOMPLETE = 2
EXIT_USAGE = 3


class CliParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; here usage errors are exit 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def parse_order(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"--order espera enteros separados por comas: {text!r}")


def add_solver_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--shrink', choices=[m.value for m in ShrinkMode], help='Variante de implicant shrinking')
    parser.add_argument('--polarity', choices=[m.value for m in PolarityMode], help='Polaridad de las decisiones')
    parser.add_argument('--order', help='Orden fijado de decision, p.ej. 3,2,1 (solo para ejemplos/tests)')
    parser.add_argument('--w-occ', type=float, help='Peso de las ocurrencias (VSADS)')
    parser.add_argument('--w-act', type=float, help='Peso de la actividad (VSADS)')
    parser.add_argument('--decay', type=float, help='Factor de decaimiento de la actividad')
    parser.add_argument('--timeout', type=float, help='Limite de tiempo en segundos')
    parser.add_argument('--step-budget', type=int, help='Limite de decisiones + conflictos')


def solver_config_from(args) -> SolverConfig:
    return SolverConfig.from_env().with_overrides(
        shrink_mode=args.shrink,
        polarity_mode=args.polarity,
        pinned_order=parse_order(args.order),
        w_occ=args.w_occ,
        w_act=args.w_act,
        decay=args.decay,
        time_budget=args.timeout,
        step_budget=args.step_budget,
        emit_models=False if getattr(args, 'no_models', False) else None,
        stats_path=getattr(args, 'stats', None),
    )


def exit_code_for(summary: EnumerationSummary) -> int:
    if summary.status is RunStatus.COMPLETE:
        return EXIT_COMPLETE
    if summary.status is RunStatus.UNSAT:
        return EXIT_UNSAT
    return EXIT_INCOMPLETE


def load_formula(path: str) -> CnfFormula:
    if path == "-":
        return parse_dimacs(sys.stdin)
    return read_dimacs_file(path)


# ------------------------------------------------------------------ commands

def cmd_solve(args) -> int:
    solver_config = solver_config_from(args)
    session = SessionTracker()
    session.start_session()

    try:
        formula = load_formula(args.path)
    except EmptyClauseError as e:
        report(f"⚠️ {e}")
        summary = EnumerationSummary(RunStatus.UNSAT, 0, 0, 0, 0, 0, 0.0)
    else:
        report(f"✅ Formula cargada: {formula.num_vars} variables, {formula.num_clauses} clausulas")

        def sink(model):
            print(format_model_line(model.literals), flush=True)

        summary = enumerate_models(formula, solver_config, sink)

    print(summary.summary_line(), flush=True)

    if solver_config.stats_path:
        results = ResultsManager(solver_config.stats_path)
        results.append(summary_row(args.path, solver_config.shrink_mode.value, summary))
        report(f"💾 Estadisticas anadidas a: {Path(solver_config.stats_path).resolve()}")

    session.record(summary)
    session.finish()
    return exit_code_for(summary)


def cmd_verify(args) -> int:
    models = read_model_file(args.models)
    try:
        formula = read_dimacs_file(args.path)
    except EmptyClauseError:
        # no models at all: only the empty list is an exact cover
        if not models:
            print("ok models=0 partial_models=0")
            return EXIT_COMPLETE
        print(f"fail non-model {' '.join(str(lit) for lit in models[0])}".rstrip())
        return EXIT_VIOLATION

    if args.model_count is not None:
        result = check_against_count(formula, models, args.model_count)
    else:
        result = verify_cover(formula, models, max_vars=args.max_vars)

    if result.ok:
        report(f"✅ {result.describe()}")
        print(f"ok models={result.model_count} partial_models={len(models)}")
        return EXIT_COMPLETE
    report(f"❌ {result.describe()}")
    witness = " ".join(str(lit) for lit in result.first_violation or ())
    print(f"fail {result.violation_kind} {witness}".rstrip())
    return EXIT_VIOLATION


def cmd_count(args) -> int:
    try:
        formula = read_dimacs_file(args.path)
    except EmptyClauseError:
        print(0)
        return EXIT_COMPLETE
    print(count_models(formula, max_vars=args.max_vars))
    return EXIT_COMPLETE


def _write_formula(formula: CnfFormula, output: Optional[str]) -> int:
    text = write_dimacs(formula)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        report(f"💾 Formula guardada en: {Path(output).resolve()}")
    else:
        sys.stdout.write(text)
    return EXIT_COMPLETE


def cmd_gen_binary(args) -> int:
    return _write_formula(gen_binary(args.n), args.output)


def cmd_gen_rnd3sat(args) -> int:
    seed = args.seed if args.seed is not None else config.SOLVER_SEED
    return _write_formula(gen_rnd3sat(Rnd3SatSpec(n=args.n, ratio=args.ratio, seed=seed)), args.output)


def cmd_bench(args) -> int:
    solver_config = solver_config_from(args)
    modes = [ShrinkMode(m.strip()) for m in args.modes.split(",") if m.strip()]
    session = SessionTracker()
    session.start_session()

    with tempfile.TemporaryDirectory(prefix="allsat_bench_") as scratch:
        if args.corpus:
            files = list_corpus(args.corpus)
        elif args.generate:
            seed = args.seed if args.seed is not None else config.SOLVER_SEED
            files = generate_corpus(scratch, args.generate, seed=seed)
        else:
            files = list_corpus(get_required_env("BENCH_CORPUS"))
        report(f"📁 Encontrados {len(files)} archivos DIMACS")

        results = ResultsManager.for_bench(config, args.output)
        runner = BenchRunner(config, solver_config, results, session)
        rows = runner.run(files, modes)

    report(f"💾 Resultados guardados en: {results.path.resolve()}")
    print_mode_summary(rows)
    session.finish()
    return EXIT_COMPLETE


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(description='Enumerador AllSAT disjunto (CDCL cronologico + implicant shrinking)')
    parser.add_argument('--quiet', '-q', action='store_true', help='Silenciar diagnosticos en stderr')
    sub = parser.add_subparsers(dest='command', parser_class=CliParser)

    solve = sub.add_parser('solve', help='Enumerar modelos parciales disjuntos')
    solve.add_argument('path', help="Archivo DIMACS ('-' para stdin)")
    add_solver_flags(solve)
    solve.add_argument('--no-models', action='store_true', help='No imprimir las lineas v')
    solve.add_argument('--stats', help='CSV donde anadir la fila de estadisticas')
    solve.set_defaults(handler=cmd_solve)

    verify = sub.add_parser('verify', help='Verificar cobertura exacta y disjunta')
    verify.add_argument('path', help='Archivo DIMACS')
    verify.add_argument('models', help='Archivo con lineas v')
    verify.add_argument('--model-count', type=int, help='Numero de modelos conocido (p.ej. de un contador #SAT)')
    verify.add_argument('--max-vars', type=int, default=config.ORACLE_MAX_VARS, help='Limite de fuerza bruta')
    verify.set_defaults(handler=cmd_verify)

    count = sub.add_parser('count', help='Contar modelos por fuerza bruta')
    count.add_argument('path', help='Archivo DIMACS')
    count.add_argument('--max-vars', type=int, default=config.ORACLE_MAX_VARS, help='Limite de fuerza bruta')
    count.set_defaults(handler=cmd_count)

    binary = sub.add_parser('gen-binary', help='Familia binary-clauses')
    binary.add_argument('n', type=int, help='Numero de variables (par)')
    binary.add_argument('--output', '-o', help='Archivo de salida (stdout por defecto)')
    binary.set_defaults(handler=cmd_gen_binary)

    rnd = sub.add_parser('gen-rnd3sat', help='3-SAT aleatorio')
    rnd.add_argument('n', type=int, help='Numero de variables')
    rnd.add_argument('--ratio', type=float, default=1.5, help='Clausulas por variable')
    rnd.add_argument('--seed', type=int, help='Semilla (SOLVER_SEED por defecto)')
    rnd.add_argument('--output', '-o', help='Archivo de salida (stdout por defecto)')
    rnd.set_defaults(handler=cmd_gen_rnd3sat)

    bench = sub.add_parser('bench', help='Barrido de corpus por modo de shrinking')
    bench.add_argument('corpus', nargs='?', help='Directorio con archivos DIMACS (BENCH_CORPUS por defecto)')
    bench.add_argument('--modes', default='dynamic,conservative', help='Modos separados por comas')
    bench.add_argument('--generate', type=int, help='Generar N instancias rnd3sat (+ familia binaria)')
    bench.add_argument('--seed', type=int, help='Semilla base para --generate')
    bench.add_argument('--output', '-o', help='CSV de salida (OUTPUT_PATH/bench_<fecha>.csv por defecto)')
    add_solver_flags(bench)
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_quiet(args.quiet)

    if not getattr(args, 'handler', None):
        report("❌ Especifica un subcomando: solve, verify, count, gen-binary, gen-rnd3sat o bench")
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        return args.handler(args)
    except (DimacsError, ConfigError, GeneratorError, OracleBoundError) as e:
        report(f"❌ {e}")
        return EXIT_USAGE
    except OSError as e:
        report(f"❌ {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
