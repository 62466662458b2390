import os
from dataclasses import dataclass, field, replace
from fractions import Fraction

import dotenv
import numpy as np

dotenv.load_dotenv()

TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = "1"

DEFAULT_SEED = int(os.environ.get("SLIVERLAB_SEED", 7))
WORKERS = int(os.environ.get("SLIVERLAB_WORKERS", 1))
DEFAULT_SAMPLES = int(os.environ.get("SLIVERLAB_SAMPLES", 2 ** 20))
PRECISION_BITS = int(os.environ.get("SLIVERLAB_PRECISION", 256))

# Geometry
DENOMINATOR_LIMIT = 64
MAX_STEPS = 32
GENERICIZE_BUDGET = 64
TRANSFORM_SAMPLES = 8

# Sliver constants
SLIVER_RADIUS = Fraction(1, 8)
VALIDATION_SAMPLES = 4096
COVERAGE_SAMPLES = 2 ** 14
RADIUS_SHRINKS = 6
N0_START = 2
N0_MAX = 2 ** 16
DELTA_START = Fraction(1, 2)
DELTA_MIN = Fraction(1, 2 ** 24)
MARGIN = 1.05
LOG_SCALES = 4  # x sampled over [radius * 10^-LOG_SCALES, radius]

# Numerical verification
DEFAULT_RADIUS = 0.5
SUBLEVEL_TOLERANCE = 0.05
DECAY_TOLERANCE = 0.1
DECAY_EPSILON = 0.02
R2_MIN = 0.9
ETA = 0.5
UNIT_SIZE = 2 ** 16
ANNULI = 8
DEFAULT_LAMBDAS = (16.0, 4096.0, 9)
DEFAULT_DELTA = 0.01
DEFAULT_S = 1.2


@dataclass(frozen=True)
class GeometricGrid:
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 4:
            raise ValueError("a geometric grid needs at least 4 points")
        if not 0 < self.min < self.max:
            raise ValueError("a geometric grid needs 0 < min < max")

    def values(self):
        return np.geomspace(self.min, self.max, self.count)

    def to_dict(self):
        return {"min": self.min, "max": self.max, "count": self.count}


@dataclass(frozen=True)
class VerificationConfig:
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    radius: float = DEFAULT_RADIUS
    t_grid: GeometricGrid = None
    s_grid: tuple = None
    lambda_grid: GeometricGrid = field(default_factory=lambda: GeometricGrid(*DEFAULT_LAMBDAS))
    precision_bits: int = PRECISION_BITS
    workers: int = WORKERS

    def __post_init__(self):
        if self.samples < 1000:
            raise ValueError("samples must be at least 1000")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    def with_overrides(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)

    def to_dict(self):
        return {
            "seed": self.seed,
            "samples": self.samples,
            "radius": self.radius,
            "tGrid": self.t_grid.to_dict() if self.t_grid else None,
            "sGrid": list(self.s_grid) if self.s_grid else None,
            "lambdaGrid": self.lambda_grid.to_dict(),
            "precisionBits": self.precision_bits,
        }
