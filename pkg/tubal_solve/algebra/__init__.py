"""
t-product tensor algebra.
Transforms, products, decompositions, ranks and norms used by every solver.
"""

from .tensor import Tensor3, FourierSlices, identity_tensor
from .fourier import fft_mode3, ifft_mode3, half_spectrum, from_half_spectrum
from .products import tprod, ttranspose, inner, unfold, fold, bcirc_oracle, tprod_oracle
from .decomposition import (
    TSVD,
    SpectrumSummary,
    tsvd,
    truncate,
    best_rank_approximation,
    singular_values,
    tube_norms,
    tubal_rank,
    spectrum,
    orthonormal_columns,
)
from .norms import TensorNorms, norms, spectral_norm
from .io import encode_tensor, decode_tensor, write_tensor, read_tensor, write_mask, read_mask

__all__ = [
    "Tensor3",
    "FourierSlices",
    "identity_tensor",
    "fft_mode3",
    "ifft_mode3",
    "half_spectrum",
    "from_half_spectrum",
    "tprod",
    "ttranspose",
    "inner",
    "unfold",
    "fold",
    "bcirc_oracle",
    "tprod_oracle",
    "TSVD",
    "SpectrumSummary",
    "tsvd",
    "truncate",
    "best_rank_approximation",
    "singular_values",
    "tube_norms",
    "tubal_rank",
    "spectrum",
    "orthonormal_columns",
    "TensorNorms",
    "norms",
    "spectral_norm",
    "encode_tensor",
    "decode_tensor",
    "write_tensor",
    "read_tensor",
    "write_mask",
    "read_mask",
]
