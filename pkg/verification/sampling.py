import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats.qmc import Sobol

import config

logger = logging.getLogger(__name__)

CONSTRUCTION_STREAM = 0
VERIFICATION_STREAM = 1


def stream_seed(seed, stream):
    """Seed of child `stream` spawned from `seed`; distinct streams draw independent points."""
    child = np.random.SeedSequence(seed, spawn_key=(stream,))
    return int(child.generate_state(1)[0])


@dataclass(frozen=True)
class WorkUnit:
    index: int
    start: int
    size: int


def sobol_points(n, seed, start=0, dims=2):
    """n scrambled Sobol points in [0, 1)^dims, skipping the first `start` of the stream."""
    engine = Sobol(d=dims, scramble=True, seed=seed)
    if start:
        engine.fast_forward(start)
    return engine.random(n)


def work_units(total, unit_size=None):
    unit_size = unit_size or config.UNIT_SIZE
    units = []
    start = 0
    while start < total:
        size = min(unit_size, total - start)
        units.append(WorkUnit(len(units), start, size))
        start += size
    return units


def map_units(fn, jobs, workers=1):
    """Ordered map; results come back in job order whatever the worker count."""
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]
