"""Enumerations shared by the library, scenario models and reports."""

from enum import Enum


class DomainKind(str, Enum):
    """Cross-section domain kinds."""

    BALL = "ball"
    CUBE = "cube"
    CROSS_POLYTOPE = "cross_polytope"
    DIAMOND = "diamond"
    REGULAR_POLYGON = "regular_polygon"
    CONE_BALL = "cone_ball"
    RADIAL_2D = "radial2d"
    MONTE_CARLO = "monte_carlo"


class SignatureKind(str, Enum):
    """Ambient metric signature."""

    EUCLIDEAN = "euclidean"
    LORENTZIAN = "lorentzian"


class GroupType(str, Enum):
    """Irreducible finite reflection group families."""

    A = "A"
    B = "B"
    D = "D"
    I2 = "I2"
    H3 = "H3"
    H4 = "H4"
    F4 = "F4"
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"


class VolumePath(str, Enum):
    """How a tube volume was obtained."""

    EXTRINSIC = "extrinsic"
    INTRINSIC = "intrinsic"
    MONTE_CARLO = "monte_carlo"


class IntrinsicCriterion(str, Enum):
    """Which sufficient condition makes a tube formula intrinsic."""

    ROTATIONAL = "rotational"
    GROUP_ORTHOGONAL = "group_orthogonal"
    MOMENT_SYMMETRIC = "moment_symmetric"
    NONE = "none"


class CheckStatus(str, Enum):
    """Outcome of one verification check."""

    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"
