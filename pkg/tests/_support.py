from __future__ import annotations

import numpy as np

from teichlevi.curve import new_curve
from teichlevi.gaussian import GaussianRational


def integer_curve(g: int):
    """Branch points -g-1..g (distinct integers, simple polyline)."""
    return new_curve([GaussianRational(k) for k in range(-g - 1, g + 1)])


def random_exact_curve(g: int, rng: np.random.Generator, box: int = 30):
    pts: set = set()
    while len(pts) < 2 * g + 2:
        pts.add(GaussianRational(int(rng.integers(-box, box + 1)), int(rng.integers(-box, box + 1))))
    return new_curve(sorted(pts, key=lambda z: z.sort_key()))
