"""Exception taxonomy shared by all phedra modules."""


class PhedraError(Exception):
    """Base class for every error raised by this package."""


class GeometryError(PhedraError):
    pass


class PointOffPlane(GeometryError):
    """A 3D point handed to a plane chart does not lie on that plane."""


class PointAtInfinity(GeometryError):
    """A homology image left the affine chart (homogeneous weight ~ 0).

    Usually signals a minus sign on an apex of a scissor-like column, which
    is rejected at validation time; hitting this during row propagation
    means the input slipped past that check.
    """

    def __init__(self, message, apex_index=None, column=None):
        super().__init__(message)
        self.apex_index = apex_index
        self.column = column


class DegenerateCollineation(GeometryError):
    """The homology center lies on its axis; the map degenerates."""


class DegenerateFrame(PhedraError):
    """The first two profile planes do not define a usable frame."""


class TranslationUndefined(PhedraError):
    """A strip translation direction is parallel to its target plane."""

    def __init__(self, message, strip=None):
        super().__init__(message)
        self.strip = strip


class OutOfDomain(PhedraError):
    """Motion parameter outside the reach of the driving bar."""


class ComplexBranch(PhedraError):
    """The propagation constraints have no real solution at this parameter."""

    def __init__(self, message, strip=None, t=None, discriminant=None):
        super().__init__(message)
        self.strip = strip
        self.t = t
        self.discriminant = discriminant


class NumericallyTangent(PhedraError):
    """Discriminant within tolerance of zero: the state sits at a limit.

    Only raised when a caller asks for strict evaluation; by default the two
    coalescing candidates are merged and reported as a diagnostic instead.
    """

    def __init__(self, message, strip=None, t=None):
        super().__init__(message)
        self.strip = strip
        self.t = t


class DegenerateK(PhedraError):
    """A grid vertex coincides with an apex, so the side of the apex ray
    cannot be determined."""


class ScissorRequiresAllPlus(PhedraError):
    """Equal-bar column present but some apex carries a minus sign."""


class GridMismatch(PhedraError):
    pass


class NotALimit(PhedraError):
    """Branch switching was requested at a hard domain endpoint."""


class RigidPattern(PhedraError):
    """The flat linkage admits no infinitesimal motion besides standstill."""


class IndeterminatePattern(PhedraError):
    """The flat linkage has a motion space of dimension two or more."""

    def __init__(self, message, nullity):
        super().__init__(message)
        self.nullity = nullity


class NotFlat(PhedraError):
    """Flat-pattern analysis requested on a model whose profile planes do
    not all coincide."""


class SchemaError(PhedraError):
    """Model file violates the JSON schema; carries the offending path."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
