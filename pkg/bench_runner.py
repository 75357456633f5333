# ==============================================================================
# bench_runner.py - Corpus sweep over (file, shrink mode) cells in batches
# ==============================================================================

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Sequence, Tuple
import time

from config import SolverConfig
from formula import EmptyClauseError, read_dimacs_file, write_dimacs
from generators import Rnd3SatSpec, gen_binary, gen_rnd3sat
from results_manager import ResultsManager, error_row, summary_row
from search import EnumerationSummary, RunStatus, enumerate_models
from session_tracker import SessionTracker
from shrink import ShrinkMode
from utils import report

CORPUS_PATTERNS = ("*.cnf", "*.dimacs")


def list_corpus(directory: str) -> List[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"directorio de corpus no encontrado: {root}")
    files = set()
    for pattern in CORPUS_PATTERNS:
        files.update(root.glob(pattern))
    return sorted(files)


def generate_corpus(directory: str, count: int, seed: int = 0, binary_max: int = 20) -> List[Path]:
    """Write ``count`` rnd3sat instances (n cycling over 8..20) plus the binary family up to ``binary_max``."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for i in range(count):
        spec = Rnd3SatSpec(n=8 + i % 13, seed=seed + i)
        path = root / f"rnd3sat_n{spec.n}_s{spec.seed}.cnf"
        path.write_text(write_dimacs(gen_rnd3sat(spec)), encoding="utf-8")
        written.append(path)
    for n in range(2, binary_max + 1, 2):
        path = root / f"binary_n{n}.cnf"
        path.write_text(write_dimacs(gen_binary(n)), encoding="utf-8")
        written.append(path)
    return written


def _unsat_summary() -> EnumerationSummary:
    return EnumerationSummary(
        status=RunStatus.UNSAT, partial_models=0, coverage=0,
        conflicts=0, decisions=0, propagations=0, elapsed=0.0,
    )


class BenchRunner:
    """Runs every (file, shrink mode) cell; per-cell failures become CSV rows"""

    def __init__(self, config, solver_config: SolverConfig, results: ResultsManager, session: SessionTracker):
        self.config = config
        self.solver_config = solver_config
        self.results = results
        self.session = session

    def run(self, files: Sequence[Path], modes: Sequence[ShrinkMode]) -> List[Dict[str, str]]:
        cells = [(Path(f), ShrinkMode(m)) for f in files for m in modes]
        batch_size = max(1, self.config.BENCH_BATCH_SIZE)
        rows = []
        done = 0

        report(f"\n🔄 Ejecutando {len(cells)} celdas en lotes de {batch_size} "
               f"con {self.config.BENCH_WORKERS} hilos...")

        for i in range(0, len(cells), batch_size):
            batch = cells[i:i + batch_size]
            batch_num = i // batch_size + 1
            total_batches = (len(cells) - 1) // batch_size + 1

            report(f"📦 Lote {batch_num}/{total_batches} ({len(batch)} celdas)")

            batch_start = time.time()
            rows.extend(self._run_batch(batch))
            batch_time = time.time() - batch_start
            done += len(batch)

            if batch_num % 5 == 0 or batch_num == total_batches:
                report(f"   ⚡ Lote {batch_num} completado en {batch_time:.2f}s")
                report(f"   📊 Progreso total: {done}/{len(cells)} ({done / len(cells) * 100:.1f}%)")

        return rows

    def _run_batch(self, batch: List[Tuple[Path, ShrinkMode]]) -> List[Dict[str, str]]:
        with ThreadPoolExecutor(max_workers=max(1, self.config.BENCH_WORKERS)) as pool:
            return list(pool.map(lambda cell: self._run_cell(*cell), batch))

    def _run_cell(self, path: Path, mode: ShrinkMode) -> Dict[str, str]:
        try:
            try:
                formula = read_dimacs_file(str(path))
            except EmptyClauseError:
                summary = _unsat_summary()
            else:
                cell_config = self.solver_config.with_overrides(shrink_mode=mode, emit_models=False)
                summary = enumerate_models(formula, cell_config)
            row = summary_row(path.name, mode.value, summary)
            self.session.record(summary)
        except Exception as e:
            report(f"❌ Error en {path.name} ({mode.value}): {e}")
            self.session.increment_stat('error_count')
            row = error_row(path.name, mode.value, e)

        self.results.append(row)
        return row
