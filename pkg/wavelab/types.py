from enum import Enum


class DiffMode(str, Enum):
    ANALYTIC = "analytic"
    DUAL = "dual"
    FINITE_DIFFERENCE = "finite_difference"


class WaveKind(str, Enum):
    S_PLUS = "S+"
    ENTROPIC = "E"
    S_MINUS = "S-"


class Convention(str, Enum):
    POSITIVE = "positive"
    STANDARD = "standard"


class Criterion(str, Enum):
    SPAN = "span"
    CURL = "curl"
    FLUX = "flux"


class SystemKind(str, Enum):
    FULL = "full"
    REDUCED_SOUND = "reduced_sound"
    REDUCED_KAPPA3 = "reduced_kappa3"


class PatchKind(str, Enum):
    PHI = "phi"
    SIGMA = "sigma"


class Verdict(str, Enum):
    ELASTIC = "elastic"
    NON_ELASTIC = "non-elastic"


class Command(str, Enum):
    ANALYZE = "analyze"
    SIMULATE = "simulate"
    INDEX = "index"
    ALGEBRA = "algebra"
    GEOMETRY = "geometry"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class AlgebraVariant(str, Enum):
    K = "K"
    H = "H"


class SupportScale(str, Enum):
    COMMON = "common"
    PER_KIND = "per_kind"
