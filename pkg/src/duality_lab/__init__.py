"""Complementarity relations in an n-path interferometer with which-path
detectors and a quantum memory: simulation, measures and verification."""

__version__ = "0.1.0"

from .qmat import ContractError
from .states import (DensityMatrix, PureBipartite, random_pure, random_mixed, werner,
                     example1_state, threepath_example_state)
from .interferometer import DetectorConfig, apply_detectors, build_tripartite, uniform_overlap
from .discrimination import Ensemble, ps_upper_bound, ps_helstrom_n2, ps_pgm, ps_optimize
from .relations import ComplementarityReport, RelationId, evaluate

__all__ = [
    "ContractError", "DensityMatrix", "PureBipartite", "random_pure", "random_mixed", "werner",
    "example1_state", "threepath_example_state", "DetectorConfig", "apply_detectors",
    "build_tripartite", "uniform_overlap", "Ensemble", "ps_upper_bound", "ps_helstrom_n2",
    "ps_pgm", "ps_optimize", "ComplementarityReport", "RelationId", "evaluate",
]
