# ==============================================================================
# session_tracker.py - Track enumeration session statistics
# ==============================================================================

from datetime import datetime
import threading
from typing import Dict, Optional

from search import EnumerationSummary
from utils import report


class SessionTracker:
    """Tracks one enumeration run (or a bench sweep) and prints the final summary"""

    def __init__(self):
        self._lock = threading.Lock()
        self.reset_session()

    def reset_session(self):
        """Reset session statistics"""
        self._session_stats = {
            'start_time': None,
            'runs': 0,
            'partial_models': 0,
            'coverage': 0,
            'decisions': 0,
            'conflicts': 0,
            'propagations': 0,
            'dropped_literals': 0,
            'error_count': 0
        }

    def start_session(self):
        self._session_stats['start_time'] = datetime.now()

    def increment_stat(self, stat_name: str, increment: int = 1):
        """Increment a specific statistic"""
        with self._lock:
            if stat_name in self._session_stats:
                self._session_stats[stat_name] += increment

    def record(self, summary: EnumerationSummary):
        """Accumulate the counters of a finished run"""
        self.increment_stat('runs')
        self.increment_stat('partial_models', summary.partial_models)
        self.increment_stat('coverage', summary.coverage)
        self.increment_stat('decisions', summary.decisions)
        self.increment_stat('conflicts', summary.conflicts)
        self.increment_stat('propagations', summary.propagations)
        self.increment_stat('dropped_literals', summary.dropped_literals)

    def print_final_summary(self, elapsed_time: float):
        """Print the run summary on the diagnostic stream"""
        report(f"\n{'=' * 60}")
        report(f"📊 RESUMEN FINAL DE LA ENUMERACION")
        report(f"{'=' * 60}")

        stats = self._session_stats
        report(f"⏱️  Tiempo total: {elapsed_time:.2f} segundos")
        if stats['runs'] > 1:
            report(f"📁 Ejecuciones: {stats['runs']}")
        report(f"🔀 Decisiones: {stats['decisions']}")
        report(f"💥 Conflictos: {stats['conflicts']}")
        report(f"➡️  Propagaciones: {stats['propagations']}")
        report(f"🧩 Modelos parciales: {stats['partial_models']}")
        report(f"📐 Cobertura: {stats['coverage']}")
        report(f"✂️  Literales eliminados por shrinking: {stats['dropped_literals']}")
        if stats['error_count']:
            report(f"❌ Errores encontrados: {stats['error_count']}")

        if stats['partial_models'] > 0 and elapsed_time > 0:
            rate = stats['partial_models'] / elapsed_time
            report(f"🚀 Velocidad promedio: {rate:.1f} modelos/segundo")

    def get_stats(self) -> Dict:
        return self._session_stats.copy()

    def finish(self, start_time: Optional[datetime] = None):
        start_time = start_time or self._session_stats['start_time'] or datetime.now()
        elapsed_time = (datetime.now() - start_time).total_seconds()
        self.print_final_summary(elapsed_time)
