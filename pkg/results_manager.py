# ==============================================================================
# results_manager.py - Stats CSV writing and per-mode bench summaries
# ==============================================================================

import csv
import threading
from collections import defaultdict
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from search import EnumerationSummary
from utils import report

STATS_HEADER = [
    "file", "shrink_mode", "status", "partial_models", "coverage", "conflicts",
    "decisions", "propagations", "shrink_calls", "dropped_literals", "learned_clauses", "elapsed",
]
BENCH_HEADER = STATS_HEADER + ["error"]


def summary_row(file: str, shrink_mode: str, summary: EnumerationSummary) -> Dict[str, str]:
    row = {"file": file, "shrink_mode": shrink_mode}
    row.update(summary.as_row())
    return row


def error_row(file: str, shrink_mode: str, error: Exception) -> Dict[str, str]:
    row = {key: "" for key in BENCH_HEADER}
    row.update(file=file, shrink_mode=shrink_mode, status="error", error=str(error))
    return row


class ResultsManager:
    """Append-only CSV writer; the only resource bench workers share"""

    def __init__(self, path: str, header: List[str] = None):
        self.path = Path(path)
        self.header = header or STATS_HEADER
        self._lock = threading.Lock()

    @classmethod
    def for_bench(cls, config, output_path: Optional[str] = None) -> "ResultsManager":
        """Timestamped bench CSV under OUTPUT_PATH"""
        if output_path:
            return cls(output_path, BENCH_HEADER)
        output_dir = Path(config.OUTPUT_PATH)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return cls(str(output_dir / f"bench_{timestamp}.csv"), BENCH_HEADER)

    def append(self, row: Dict[str, str]):
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            new_file = not self.path.exists() or self.path.stat().st_size == 0
            with open(self.path, "a", newline="", encoding="utf-8") as f:
                writer = csv.DictWriter(f, fieldnames=self.header, extrasaction="ignore", restval="")
                if new_file:
                    writer.writeheader()
                writer.writerow(row)

    def read_rows(self) -> List[Dict[str, str]]:
        with open(self.path, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))


def mode_totals(rows: List[Dict[str, str]]) -> Dict[str, Dict[str, float]]:
    totals = defaultdict(lambda: {"runs": 0, "partial_models": 0, "elapsed": 0.0, "errors": 0})
    for row in rows:
        bucket = totals[row["shrink_mode"]]
        bucket["runs"] += 1
        if row["status"] == "error":
            bucket["errors"] += 1
            continue
        bucket["partial_models"] += int(row["partial_models"])
        bucket["elapsed"] += float(row["elapsed"])
    return dict(totals)


def compare_modes(rows: List[Dict[str, str]], first: str = "dynamic", second: str = "conservative") -> Dict[str, int]:
    """Per-file partial-model counts of ``first`` vs ``second``: fewer is a win."""
    by_file = defaultdict(dict)
    for row in rows:
        if row["status"] == "complete":
            by_file[row["file"]][row["shrink_mode"]] = int(row["partial_models"])
    outcome = {"wins": 0, "ties": 0, "losses": 0}
    for counts in by_file.values():
        if first not in counts or second not in counts:
            continue
        if counts[first] < counts[second]:
            outcome["wins"] += 1
        elif counts[first] == counts[second]:
            outcome["ties"] += 1
        else:
            outcome["losses"] += 1
    return outcome


def print_mode_summary(rows: List[Dict[str, str]]):
    """Print totals per shrink mode and the dynamic-vs-conservative tally"""
    report(f"\n📋 Resumen por modo de shrinking:")
    for mode, bucket in sorted(mode_totals(rows).items()):
        report(f"  🧩 {mode}: {bucket['partial_models']} modelos parciales, "
               f"{bucket['elapsed']:.2f}s en {bucket['runs']} ejecuciones"
               + (f", {bucket['errors']} errores" if bucket['errors'] else ""))
    outcome = compare_modes(rows)
    if any(outcome.values()):
        report(f"  ⚖️ dynamic vs conservative: {outcome['wins']} mejores, "
               f"{outcome['ties']} empates, {outcome['losses']} peores")
