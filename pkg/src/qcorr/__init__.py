"""Entropic classical and quantum correlation measures of bipartite states.

All entropies are in bits. Optimized classical correlations are certified
lower bounds; see :class:`qcorr.measures.MeasureReport`.
"""

__version__ = "0.1.0"

from .errors import ArgumentError, CapacityError, InvalidStateError, QcorrError
from .measurement import Povm, holevo_quantity, measure_side
from .measures import (
    CutSpec,
    MeasureReport,
    cl_sandwich,
    coherent_information,
    discord,
    eof_two_qubit,
    holevo_correlation,
    irreversibility_bound,
    koashi_winter_residual,
    lemma2_additive_value,
    mutual_information,
    regularization_probe_n2,
    s_min,
    symmetric_correlation,
    symmetric_discord,
)
from .povm_opt import OptConfig, maximize_product, maximize_single
from .qstate import DensityMatrix, PureState, partial_trace, tensor, von_neumann_entropy

__all__ = [
    "__version__",
    "ArgumentError",
    "CapacityError",
    "InvalidStateError",
    "QcorrError",
    "Povm",
    "holevo_quantity",
    "measure_side",
    "CutSpec",
    "MeasureReport",
    "cl_sandwich",
    "coherent_information",
    "discord",
    "eof_two_qubit",
    "holevo_correlation",
    "irreversibility_bound",
    "koashi_winter_residual",
    "lemma2_additive_value",
    "mutual_information",
    "regularization_probe_n2",
    "s_min",
    "symmetric_correlation",
    "symmetric_discord",
    "OptConfig",
    "maximize_product",
    "maximize_single",
    "DensityMatrix",
    "PureState",
    "partial_trace",
    "tensor",
    "von_neumann_entropy",
]
