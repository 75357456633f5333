import os
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple
from dotenv import load_dotenv

from heuristic import PolarityMode
from shrink import ShrinkMode

# Cargar variables desde .env
load_dotenv(dotenv_path=".env")


class ConfigError(ValueError):
    """Invalid solver configuration."""


def get_required_env(key: str) -> str:
    value = os.getenv(key)
    if value is None:
        raise EnvironmentError(f"🌪️ Variable de entorno obligatoria '{key}' no está definida en .env")
    return value


@dataclass
class Config:
    # === Solver ===
    SOLVER_SEED: int = int(os.getenv("SOLVER_SEED", 0))
    SOLVER_SHRINK: str = os.getenv("SOLVER_SHRINK", "conservative")
    SOLVER_POLARITY: str = os.getenv("SOLVER_POLARITY", "false")
    SOLVER_W_OCC: float = float(os.getenv("SOLVER_W_OCC", 1.0))
    SOLVER_W_ACT: float = float(os.getenv("SOLVER_W_ACT", 100.0))
    SOLVER_DECAY: float = float(os.getenv("SOLVER_DECAY", 0.95))

    # === Oráculo ===
    ORACLE_MAX_VARS: int = int(os.getenv("ORACLE_MAX_VARS", 26))

    # === Benchmark ===
    BENCH_WORKERS: int = int(os.getenv("BENCH_WORKERS", 4))
    BENCH_BATCH_SIZE: int = int(os.getenv("BENCH_BATCH_SIZE", 10))

    # === Paths ===
    STATS_PATH: Optional[str] = os.getenv("STATS_PATH")
    OUTPUT_PATH: str = os.getenv("OUTPUT_PATH", "./data/bench")

# Exportar configuración centralizada
config = Config()


@dataclass(frozen=True)
class SolverConfig:
    """Everything one enumeration run needs; built from ``config`` and overridden by CLI flags."""

    shrink_mode: ShrinkMode = ShrinkMode.CONSERVATIVE
    polarity_mode: PolarityMode = PolarityMode.ALWAYS_FALSE
    w_occ: float = 1.0
    w_act: float = 100.0
    decay: float = 0.95
    pinned_order: Tuple[int, ...] = ()
    step_budget: Optional[int] = None
    time_budget: Optional[float] = None
    emit_models: bool = True
    stats_path: Optional[str] = None
    debug_checks: bool = field(default=False, compare=False)

    @classmethod
    def from_env(cls, source: Config = None) -> "SolverConfig":
        source = source or config
        try:
            shrink_mode = ShrinkMode(source.SOLVER_SHRINK)
            polarity_mode = PolarityMode(source.SOLVER_POLARITY)
        except ValueError as e:
            raise ConfigError(f"configuracion invalida en el entorno: {e}")
        return cls(
            shrink_mode=shrink_mode,
            polarity_mode=polarity_mode,
            w_occ=source.SOLVER_W_OCC,
            w_act=source.SOLVER_W_ACT,
            decay=source.SOLVER_DECAY,
            stats_path=source.STATS_PATH,
        ).validate()

    def with_overrides(self, **changes) -> "SolverConfig":
        """Copy with the non-None values of ``changes`` applied, validated."""
        changes = {k: v for k, v in changes.items() if v is not None}
        try:
            if "shrink_mode" in changes:
                changes["shrink_mode"] = ShrinkMode(changes["shrink_mode"])
            if "polarity_mode" in changes:
                changes["polarity_mode"] = PolarityMode(changes["polarity_mode"])
        except ValueError as e:
            raise ConfigError(str(e))
        if "pinned_order" in changes:
            changes["pinned_order"] = tuple(changes["pinned_order"])
        return replace(self, **changes).validate()

    def validate(self) -> "SolverConfig":
        if not isinstance(self.shrink_mode, ShrinkMode):
            raise ConfigError(f"modo de shrinking desconocido: {self.shrink_mode!r}")
        if not isinstance(self.polarity_mode, PolarityMode):
            raise ConfigError(f"modo de polaridad desconocido: {self.polarity_mode!r}")
        if not 0.0 < self.decay < 1.0:
            raise ConfigError(f"decay debe estar en (0,1), recibido {self.decay}")
        if self.w_occ < 0 or self.w_act < 0:
            raise ConfigError("los pesos de la heuristica no pueden ser negativos")
        if self.step_budget is not None and self.step_budget < 0:
            raise ConfigError(f"step_budget negativo: {self.step_budget}")
        if self.time_budget is not None and self.time_budget < 0:
            raise ConfigError(f"time_budget negativo: {self.time_budget}")
        if any(v <= 0 for v in self.pinned_order):
            raise ConfigError(f"orden fijado con variables invalidas: {self.pinned_order}")
        return self
