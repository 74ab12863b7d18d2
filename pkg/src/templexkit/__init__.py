"""Templex analysis: cell complexes, directed cycle classes and their time series."""

__version__ = "0.1.0"

from .cellcomplex import (Cell, CellComplex, Chain, boundary, boundary_matrix, build_complex,
                          load_complex, save_complex)
from .errors import CycleCapExceeded, TemplexError, ValidationError
from .genex import (Bond, DirectedCycle, DirectedPath, GeneratexClass, PSignature, bonds, concat,
                    cycle, elementary_cycles, generatex_classes, multigraph_view, p_image, path)
from .homology import betti_numbers, betti_table, homology, orientability_report, smith_normal_form
from .ingest import Trajectory, build_bramah, delay_embed, simulate
from .templex import (Digraph, PoincareEdge, Templex, junction_loci, load_templex, poincare_edges,
                      save_templex)
from .tmv import Itinerary, label_trajectory, tipping_timeline, tmv_stats, transition_matrix

__all__ = [
    "Bond", "Cell", "CellComplex", "Chain", "CycleCapExceeded", "Digraph", "DirectedCycle",
    "DirectedPath", "GeneratexClass", "Itinerary", "PSignature", "PoincareEdge", "Templex",
    "TemplexError", "Trajectory", "ValidationError", "betti_numbers", "betti_table", "bonds",
    "boundary", "boundary_matrix", "build_bramah", "build_complex", "concat", "cycle",
    "delay_embed", "elementary_cycles", "generatex_classes", "homology", "junction_loci",
    "label_trajectory", "load_complex", "load_templex", "multigraph_view", "orientability_report",
    "p_image", "path", "poincare_edges", "save_complex", "save_templex", "simulate",
    "smith_normal_form", "tipping_timeline", "tmv_stats", "transition_matrix",
]
