"""Images of morphisms under pre-cover relations in finite categories.

The main entry points are :func:`image` for a single morphism,
:func:`lifted_image` for a natural transformation in a functor category
and :func:`oracle_image` for the same computation done by brute force in the
materialized functor category.
"""
from .errors import (
    CapExceeded,
    CertificationError,
    ConditionIIViolated,
    CoverImagesError,
    GuardExceeded,
    InvalidCategory,
    MissingComponentImage,
    MissingLimit,
    MissingPullback,
    MissingWidePullback,
    NotComposable,
    UnknownIdentifier,
)
from .fincat import FiniteCategory, is_mono, pullback, slice_category, terminal_object, validate_category, wide_pullback
from .functorcat import Functor, NatTrans, enumerate_functors, materialize, natural_transformations, oracle_image
from .lifting import LiftedImage, lifted_image, verify_universal
from .precover import PreCoverRelation, cover_closure, image, satisfies_condition_i, satisfies_condition_ii

__all__ = [
    "CapExceeded",
    "CertificationError",
    "ConditionIIViolated",
    "CoverImagesError",
    "FiniteCategory",
    "Functor",
    "GuardExceeded",
    "InvalidCategory",
    "LiftedImage",
    "MissingComponentImage",
    "MissingLimit",
    "MissingPullback",
    "MissingWidePullback",
    "NatTrans",
    "NotComposable",
    "PreCoverRelation",
    "UnknownIdentifier",
    "cover_closure",
    "enumerate_functors",
    "image",
    "is_mono",
    "lifted_image",
    "materialize",
    "natural_transformations",
    "oracle_image",
    "pullback",
    "satisfies_condition_i",
    "satisfies_condition_ii",
    "slice_category",
    "terminal_object",
    "validate_category",
    "verify_universal",
    "wide_pullback",
]
