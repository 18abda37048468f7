"""Integer group determinants of C4 x C2 x C2: evaluation, membership, witnesses."""

__version__ = "0.1.0"

from .core import bcde, d4, d4x2, d4x2x2_fast, d4x2x2_oracle
from .sets import Classification, Family, GroupTag, classify_c4c2c2, classify_group
from .witness import Witness, synthesize

__all__ = [
    "Classification",
    "Family",
    "GroupTag",
    "Witness",
    "bcde",
    "classify_c4c2c2",
    "classify_group",
    "d4",
    "d4x2",
    "d4x2x2_fast",
    "d4x2x2_oracle",
    "synthesize",
]
