"""Seeded rational sample points for exact identity checks

Two rational functions of bounded degree that agree on enough exact points
are equal; points are small-height positive rationals drawn from a seeded
random.Random so every run with the same seed sees the same points.
"""

import random
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from .config import get_config

Point = Dict[str, Fraction]


def point_count(degree: int, requested: Optional[int] = None) -> int:
    """Number of points for a check of the given total degree

    max(min_points, requested, degree + 1): a request can add points but
    never drop below what the degree needs.
    """
    return max(get_config().min_points, requested or 0, degree + 1)



def random_rational(rng: random.Random, height: int) -> Fraction:
    """Positive rational a/b with 1 <= a, b <= height"""
    return Fraction(rng.randint(1, height), rng.randint(1, height))


def sample_points(
    seed: int,
    count: int,
    variables: Sequence[str] = ("p", "q", "x"),
    height: Optional[int] = None,
    accept: Optional[Callable[[Mapping[str, Fraction]], bool]] = None,
) -> List[Point]:
    """Draw distinct rational points, rejecting p = q and anything `accept` refuses

    Args:
        seed: Random seed
        count: Number of points
        variables: Coordinates to draw
        height: Largest numerator/denominator; Config.sample_height by default
        accept: Extra predicate, e.g. "no denominator vanishes here"

    Returns:
        List of {variable: Fraction} mappings
    """
    height = height or get_config().sample_height
    rng = random.Random(seed)
    points: List[Point] = []
    seen = set()
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise ValueError(f"Cannot draw {count} admissible points at height {height}")
        point = {name: random_rational(rng, height) for name in variables}
        if "p" in point and "q" in point and point["p"] == point["q"]:
            continue
        if accept is not None and not accept(point):
            continue
        key = tuple(point[name] for name in variables)
        if key in seen:
            continue
        seen.add(key)
        points.append(point)
    return points
