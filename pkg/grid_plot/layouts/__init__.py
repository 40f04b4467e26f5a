from .LayoutConfig import LayoutAlgorithm, LayoutConfig, LayoutResult, LayoutStats
from .GraphLayout import GraphLayout
from .KamadaKawaiLayout import KamadaKawaiLayout, kamada_kawai
from .SpringLayout import SpringLayout, spring
from .SFDPLayout import SFDPLayout, sfdp
from .SpectralLayout import SpectralLayout, spectral
from .ShellLayout import ShellLayout, shell
from .GridLayout import GridLayout, grid

__all__ = [
    'LayoutAlgorithm',
    'LayoutConfig',
    'LayoutResult',
    'LayoutStats',
    'GraphLayout',
    'KamadaKawaiLayout',
    'SpringLayout',
    'SFDPLayout',
    'SpectralLayout',
    'ShellLayout',
    'GridLayout',
    'kamada_kawai',
    'spring',
    'sfdp',
    'spectral',
    'shell',
    'grid',
]
