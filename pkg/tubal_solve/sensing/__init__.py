"""
Random linear measurements, their adjoints, noise models and a t-RIP probe.
"""

from .operator import Scaling, SensingOperator, make_gaussian_operator, make_isometric_operator
from .noise import NoiseKind, NoiseSpec, sample_noise
from .probe import TripProbeResult, empirical_trip_probe, random_low_rank
from .io import (
    encode_operator,
    decode_operator,
    write_operator,
    read_operator,
    write_vector,
    read_vector,
)

__all__ = [
    "Scaling",
    "SensingOperator",
    "make_gaussian_operator",
    "make_isometric_operator",
    "NoiseKind",
    "NoiseSpec",
    "sample_noise",
    "TripProbeResult",
    "empirical_trip_probe",
    "random_low_rank",
    "encode_operator",
    "decode_operator",
    "write_operator",
    "read_operator",
    "write_vector",
    "read_vector",
]
