"""Exception types shared across the package."""


class CoverImagesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidCategory(CoverImagesError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class NotComposable(CoverImagesError, ValueError):
    pass


class UnknownIdentifier(CoverImagesError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CapExceeded(CoverImagesError):
    """An exhaustive enumeration would exceed its configured size cap."""

    def __init__(self, what, count, cap):
        super().__init__(f"{what}: {count} candidates exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class GuardExceeded(CapExceeded):
    pass


class ConditionIIViolated(CoverImagesError):
    def __init__(self, witness):
        super().__init__(f"relation violates condition (ii) at {witness!r}")
        self.witness = witness


class MissingComponentImage(CoverImagesError):
    def __init__(self, obj, morphism=None):
        super().__init__(f"component at {obj!r} has no image")
        self.obj = obj
        self.morphism = morphism


class MissingLimit(CoverImagesError):
    pass


class MissingWidePullback(MissingLimit):
    """No wide pullback of the family ``w_i`` at index object ``obj``.

    ``maximal_cones`` lists the maximal cones found by the exhaustive search
    (more than one maximal cone, or none at all, means no limit).
    """

    def __init__(self, obj, family=(), maximal_cones=(), detail=None):
        msg = f"no wide pullback at index object {obj!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.obj = obj
        self.family = tuple(family)
        self.maximal_cones = tuple(maximal_cones)


class MissingPullback(MissingWidePullback):
    """The pullback defining ``W_i`` for index morphism ``index_morphism`` is missing.

    Since ``W_i`` belongs to the family at the domain of ``index_morphism``,
    this also means the wide pullback there cannot be formed.
    """

    def __init__(self, index_morphism, obj, cospan=(), maximal_cones=()):
        super().__init__(
            obj,
            cospan,
            maximal_cones,
            detail=f"pullback for index morphism {index_morphism!r} does not exist",
        )
        self.index_morphism = index_morphism
        self.cospan = tuple(cospan)


class CertificationError(CoverImagesError):
    """A certified limit produced zero or several mediators; indicates a bug."""
