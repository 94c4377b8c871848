"""Exception types raised across the package."""


class BunchainError(Exception):
    """Base class for every error raised by bunchain."""


# --- categories ---------------------------------------------------------


class MalformedCategory(BunchainError):
    pass


class UnknownMorphism(BunchainError):
    def __init__(self, morphism):
        super().__init__(f"unknown morphism {morphism!r}")
        self.morphism = morphism


class NonComposable(BunchainError):
    """A consecutive pair in a path does not match target to source."""

    def __init__(self, index, first=None, second=None):
        super().__init__(f"morphisms at positions {index} and {index + 1} are not composable")
        self.index = index
        self.first = first
        self.second = second


class NotMono(BunchainError):
    def __init__(self, morphism):
        super().__init__(f"{morphism!r} is not a monomorphism")
        self.morphism = morphism


class TargetMismatch(BunchainError):
    pass


class NotReflexive(BunchainError):
    def __init__(self, element):
        super().__init__(f"relation is not reflexive at {element!r}")
        self.element = element


class NotTransitive(BunchainError):
    def __init__(self, a, b, c):
        super().__init__(f"relation contains ({a!r}, {b!r}) and ({b!r}, {c!r}) but not ({a!r}, {c!r})")
        self.triple = (a, b, c)


class MalformedChoice(BunchainError):
    pass


class CategoryTooLarge(BunchainError):
    """Enumerating the requested category would exceed the configured cap."""


# --- bundles ------------------------------------------------------------


class PartialMap(BunchainError):
    def __init__(self, missing):
        super().__init__(f"no image assigned to {missing!r}")
        self.missing = missing


class ImageOutsideCodomain(BunchainError):
    def __init__(self, element, image):
        super().__init__(f"{element!r} is sent to {image!r}, outside the codomain")
        self.element = element
        self.image = image


class PartialProjection(PartialMap):
    pass


class ImageOutsideBase(ImageOutsideCodomain):
    pass


class UnknownBasePoint(BunchainError):
    def __init__(self, point):
        super().__init__(f"{point!r} is not a base point")
        self.point = point


class EmptyFactor(BunchainError):
    pass


class DomainMismatch(BunchainError):
    pass


class SquareFails(BunchainError):
    """The square p'(u(e)) = f(p(e)) fails at ``element``."""

    def __init__(self, element, via_top, via_bottom):
        super().__init__(
            f"square fails at {element!r}: projection after total map gives {via_top!r}, "
            f"base map after projection gives {via_bottom!r}"
        )
        self.element = element
        self.via_top = via_top
        self.via_bottom = via_bottom


class NotComposable(BunchainError):
    pass


class NotSubbundle(BunchainError):
    pass


class StructureMismatch(BunchainError):
    pass


class ActionSpaceMismatch(BunchainError):
    pass


# --- chains -------------------------------------------------------------


class LengthMismatch(BunchainError):
    pass


class LinkSquareFails(BunchainError):
    def __init__(self, index, witness):
        super().__init__(f"link {index} is not a bundle morphism: {witness}")
        self.index = index
        self.witness = witness


class ComponentSquareFails(BunchainError):
    def __init__(self, index, element):
        super().__init__(f"component {index} is not a bundle morphism (fails at {element!r})")
        self.index = index
        self.element = element


class LadderFails(BunchainError):
    def __init__(self, index, element, level):
        super().__init__(f"ladder square {index} fails on the {level} level at {element!r}")
        self.index = index
        self.element = element
        self.level = level


class NotSubchain(BunchainError):
    pass


class NotNested(BunchainError):
    pass


class BasePointMissing(BunchainError):
    pass


class ConstructionCostOverflow(BunchainError):
    pass


# --- exact sequences ----------------------------------------------------


class IllDefinedHom(BunchainError):
    pass


class ElementOutOfRange(BunchainError):
    pass


class GroupTooLarge(BunchainError):
    pass


class BoundaryPosition(BunchainError):
    pass


class ShapeMismatch(BunchainError):
    pass


# --- jets ---------------------------------------------------------------


class PolyParseError(BunchainError):
    pass


class OrderTooHigh(BunchainError):
    pass


class SingularBaseMap(BunchainError):
    pass


# --- cli ----------------------------------------------------------------


class UnknownKind(BunchainError):
    def __init__(self, kind):
        super().__init__(f"unknown document kind {kind!r}")
        self.kind = kind


class MalformedDocument(BunchainError):
    """A task document failed schema or semantic validation at ``path``."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
