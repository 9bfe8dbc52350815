"""Entanglement quantification from correlations in two mutually unbiased bases.

>>> from mubquant import witness_b_from_counts
>>> rep = witness_b_from_counts([[1015, 23, 9], [17, 947, 8], [9, 28, 1008]],
...                             [[1053, 21, 7], [29, 1017, 25], [5, 15, 1023]])
>>> round(rep.b, 4), rep.schmidt_lower_bound
(1.0338, 3)
"""

from .errors import MubQuantError
from .qcore import (
    MubPair,
    fourier_mub,
    ghz,
    partial_trace,
    phi_plus,
    random_mub_pair,
    tensor,
    von_neumann_entropy,
)
from .witness import (
    CoincidenceMatrix,
    WitnessReport,
    correlation_sum,
    eof_lower_bound,
    schmidt_lower_bound,
    witness_b_from_counts,
    witness_b_from_state,
)

__version__ = "0.1.0"

__all__ = [
    "CoincidenceMatrix",
    "MubPair",
    "MubQuantError",
    "WitnessReport",
    "correlation_sum",
    "eof_lower_bound",
    "fourier_mub",
    "ghz",
    "partial_trace",
    "phi_plus",
    "random_mub_pair",
    "schmidt_lower_bound",
    "tensor",
    "von_neumann_entropy",
    "witness_b_from_counts",
    "witness_b_from_state",
]
