from typing import AbstractSet, Optional

from typing_extensions import Protocol, runtime_checkable

from grid_plot.layouts.LayoutConfig import Coords, LayoutConfig, LayoutResult
from grid_plot.PowerGraph import PowerGraph


@runtime_checkable
class IGraphLayout(Protocol):
    @property
    def name(self) -> str:
        """Returns the algorithm name used for registration"""
        ...

    @property
    def supports_pinning(self) -> bool:
        """Whether pinned nodes are honored"""
        ...

    def compute(
        self,
        graph: PowerGraph,
        config: LayoutConfig,
        init: Optional[Coords] = None,
        pinned: Optional[AbstractSet[int]] = None,
    ) -> LayoutResult:
        """Lays out one connected graph"""
        ...
