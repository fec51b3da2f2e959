"""Grouped random-grid visual cryptography with exact contrast analysis."""

from .errors import BudgetExceededError, InvalidParameterError
from .image import ShadowSet, half_white_secret, recover_image, share_image
from .rng import RandomSource
from .sharing import (
    BitGroupLayout,
    SchemeParams,
    Variant,
    share_pixel_grouped,
    share_pixel_kk,
    share_pixel_traditional,
    stack_bits,
)
from .theory import ContrastBreakdown, scheme_contrast, valid_partitions

__version__ = "0.1.0"

__all__ = [
    "BitGroupLayout",
    "BudgetExceededError",
    "ContrastBreakdown",
    "InvalidParameterError",
    "RandomSource",
    "SchemeParams",
    "ShadowSet",
    "Variant",
    "half_white_secret",
    "recover_image",
    "scheme_contrast",
    "share_image",
    "share_pixel_grouped",
    "share_pixel_kk",
    "share_pixel_traditional",
    "stack_bits",
    "valid_partitions",
]
