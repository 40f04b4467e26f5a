"""
Layout parameters and results shared by every layout algorithm.
"""

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from grid_plot.errors import LayoutConfigError, UnknownLayoutError

try:
    from grid_plot.config import GRIDPLOT_SEED
except ImportError:
    GRIDPLOT_SEED = 1

Point = Tuple[float, float]
Coords = Dict[int, Point]


class LayoutAlgorithm(str, Enum):
    KAMADA_KAWAI = "kamada_kawai"
    SPRING = "spring"
    SFDP = "sfdp"
    SPECTRAL = "spectral"
    SHELL = "shell"
    GRID = "grid"

    @classmethod
    def parse(cls, name: Union[str, "LayoutAlgorithm"]) -> "LayoutAlgorithm":
        if isinstance(name, LayoutAlgorithm):
            return name
        key = str(name).strip().lower().replace("-", "_")
        key = ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise UnknownLayoutError(str(name)) from None


ALIASES = {
    "kk": "kamada_kawai",
    "kamadakawai": "kamada_kawai",
    "fr": "spring",
    "fruchterman_reingold": "spring",
}


@dataclass(frozen=True)
class LayoutConfig:
    """
    Algorithm selection and parameters.

    Attributes:
        algorithm: Which layout to run (names and aliases such as "kk" accepted)
        iterations: Spring and SFDP iteration count
        C: SFDP repulsion scale
        K: SFDP natural edge length
        spring_k: Spring natural length; sqrt(1/n) when None
        seed: Seed of the random initial placement
        fixed: Keep coordinates already present in the data
        tol: Kamada-Kawai relative stress change stopping threshold
        max_sweeps: Kamada-Kawai sweep cap
    """

    algorithm: LayoutAlgorithm = LayoutAlgorithm.KAMADA_KAWAI
    iterations: int = 100
    C: float = 0.2
    K: float = 1.0
    spring_k: Optional[float] = None
    seed: int = GRIDPLOT_SEED
    fixed: bool = False
    tol: float = 1e-6
    max_sweeps: int = 500

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", LayoutAlgorithm.parse(self.algorithm))
        if self.iterations < 1:
            raise LayoutConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.max_sweeps < 1:
            raise LayoutConfigError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        for name in ("C", "K", "tol"):
            value = getattr(self, name)
            if not value > 0 or not np.isfinite(value):
                raise LayoutConfigError(f"{name} must be a positive number, got {value}")
        if self.spring_k is not None and (not self.spring_k > 0 or not np.isfinite(self.spring_k)):
            raise LayoutConfigError(f"spring_k must be a positive number, got {self.spring_k}")

    def replace(self, **changes) -> "LayoutConfig":
        return dataclasses.replace(self, **changes)

    def with_algorithm(self, algorithm: Union[str, LayoutAlgorithm]) -> "LayoutConfig":
        return self.replace(algorithm=LayoutAlgorithm.parse(algorithm))


@dataclass
class LayoutStats:
    algorithm: str = ""
    elapsed_seconds: float = 0.0
    iterations_run: int = 0
    final_stress: Optional[float] = None
    stress_history: List[float] = field(default_factory=list)
    pieces: int = 0


@dataclass
class LayoutResult:
    coords: Coords
    stats: LayoutStats = field(default_factory=LayoutStats)

    def positions(self, nodes: Sequence[int]) -> np.ndarray:
        """Coordinates as an (n, 2) array in the given node order."""
        return np.array([self.coords[n] for n in nodes], dtype=float).reshape(len(nodes), 2)


def for_algorithm(config: Optional[LayoutConfig], algorithm: LayoutAlgorithm) -> LayoutConfig:
    return (config or LayoutConfig()).with_algorithm(algorithm)
