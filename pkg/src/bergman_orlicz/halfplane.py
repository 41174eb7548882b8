"""Geometry of the upper half-plane and integration against y^alpha dx dy.

Points are strictly interior (y > 0). Pseudo-hyperbolic style disks are
Euclidean disks D_s(z) = {w : |w - z| < s Im z} with 0 < s < 1, so they stay
inside the half-plane. Integration closed forms reduce to the Beta function.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError, ParameterError
from .quadrature import (
    Field2D,
    integrate_1d,
    integrate_box,
    integrate_box_graded,
    integrate_halfplane,
)


@dataclass(frozen=True)
class HPoint:
    """A point x + iy of the open upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0) or not math.isfinite(self.y) or not math.isfinite(self.x):
            raise ParameterError(f"point must satisfy Im z > 0, got y={self.y}")

    @property
    def z(self):
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z):
        return cls(float(z.real), float(z.imag))


@dataclass(frozen=True)
class Disk:
    """Disk D_s(center) of radius s * Im(center), strictly inside the half-plane."""

    center: HPoint
    s: float

    def __post_init__(self):
        if not (0 < self.s < 1):
            raise ParameterError(f"disk ratio must lie in (0, 1), got s={self.s}")

    @property
    def radius(self):
        return self.s * self.center.y

    def contains(self, z):
        """Vectorized membership test for complex z."""
        return np.abs(np.asarray(z) - self.center.z) < self.radius


@dataclass(frozen=True)
class CarlesonSquare:
    """The square I x (0, |I|] over a boundary interval I."""

    interval_center: float
    interval_length: float

    def __post_init__(self):
        if not (self.interval_length > 0):
            raise ParameterError("interval_length must be positive")

    @property
    def x_min(self):
        return self.interval_center - 0.5 * self.interval_length

    @property
    def x_max(self):
        return self.interval_center + 0.5 * self.interval_length


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [x_min, x_max] x [y_min, y_max], y_min >= 0."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and 0 <= self.y_min < self.y_max):
            raise ParameterError(f"degenerate box {self}")


@dataclass(frozen=True)
class StripUnion:
    """Finite union of pairwise-disjoint boxes."""

    boxes: tuple

    def __post_init__(self):
        if not self.boxes:
            raise ParameterError("strip union needs at least one box")


# Region = Box | Disk | CarlesonSquare | StripUnion | None (whole half-plane).


def beta(m, n):
    """Euler Beta B(m, n) for m, n > 0, via log-Gamma."""
    if not (m > 0 and n > 0):
        raise ParameterError(f"beta needs positive arguments, got ({m}, {n})")
    return math.exp(math.lgamma(m) + math.lgamma(n) - math.lgamma(m + n))


def line_power_integral(y, a):
    """Closed form of int_R |x + iy|^-a dx = B(1/2, (a-1)/2) y^(1-a).

    Requires y > 0; diverges unless a > 1.
    """
    if not (y > 0):
        raise ParameterError(f"height must be positive, got y={y}")
    if not (a > 1):
        raise DivergenceError(f"line integral diverges for exponent a={a} <= 1")
    return beta(0.5, 0.5 * (a - 1)) * y ** (1 - a)


def halfline_power_integral(t, a, b):
    """Closed form of int_0^inf y^a (y+t)^-b dy = B(1+a, b-a-1) t^(1+a-b).

    Requires t > 0; converges iff a > -1 (at 0) and b - a > 1 (at infinity).
    """
    if not (t > 0):
        raise ParameterError(f"shift must be positive, got t={t}")
    if not (a > -1):
        raise DivergenceError(f"half-line integral diverges at 0 for a={a} <= -1")
    if not (b - a > 1):
        raise DivergenceError(f"half-line integral diverges at infinity for b-a={b - a} <= 1")
    return beta(1 + a, b - a - 1) * t ** (1 + a - b)


def _weighted_field(f, alpha):
    def fn(X, Y):
        return np.asarray(f(X + 1j * Y)) * Y ** alpha

    return Field2D(fn)


def integrate_disk(f, alpha, disk, tol=1e-8):
    """Integral of f(z) y^alpha over a disk, in polar coordinates."""
    cx, cy, r = disk.center.x, disk.center.y, disk.radius

    def fn(R, T):
        X = cx + R * np.cos(T)
        Y = cy + R * np.sin(T)
        return np.asarray(f(X + 1j * Y)) * Y ** alpha * R

    value, _, _ = integrate_box(Field2D(fn), (0.0, r, 0.0, 2 * math.pi), tol=tol)
    return value


def integrate(f, alpha, region=None, tol=1e-8):
    """Integral of a vectorized complex-argument callable against y^alpha dxdy.

    Parameters
    ----------
    f : callable
        Accepts a complex ndarray, returns values of the same shape.
    alpha : float
        Weight exponent, alpha > -1.
    region : Box | Disk | CarlesonSquare | StripUnion | None
        None integrates over the whole half-plane with automatic truncation
        driven by the integrand's decay (doubling shells).
    tol : float
        Relative tolerance.

    Raises
    ------
    DivergenceError
        When strip/shell masses do not decay (non-integrable input).
    AccuracyError
        When the refinement budget is exhausted.
    """
    if not (alpha > -1):
        raise ParameterError(f"weight exponent must exceed -1, got alpha={alpha}")
    field = _weighted_field(f, alpha)
    if region is None:
        value, _, _ = integrate_halfplane(field, tol=tol)
        return value
    if isinstance(region, Box):
        if region.y_min == 0:
            value, _, _ = integrate_box_graded(
                field, region.x_min, region.x_max, region.y_max, tol=tol
            )
        else:
            value, _, _ = integrate_box(
                field, (region.x_min, region.x_max, region.y_min, region.y_max), tol=tol
            )
        return value
    if isinstance(region, CarlesonSquare):
        value, _, _ = integrate_box_graded(
            field, region.x_min, region.x_max, region.interval_length, tol=tol
        )
        return value
    if isinstance(region, Disk):
        return integrate_disk(f, alpha, region, tol=tol)
    if isinstance(region, StripUnion):
        return sum(integrate(f, alpha, box, tol=tol) for box in region.boxes)
    raise ParameterError(f"unknown region {region!r}")


def disk_measure(disk, alpha, tol=1e-12):
    """V_alpha measure of a disk: int_D y^alpha dxdy.

    Reduces to 2 r^2 int_{-pi/2}^{pi/2} (y0 + r sin t)^alpha cos^2 t dt, which
    is exact (pi r^2 for alpha = 0, pi r^2 y0 for alpha = 1).
    """
    if not (alpha > -1):
        raise ParameterError(f"weight exponent must exceed -1, got alpha={alpha}")
    y0, r = disk.center.y, disk.radius
    if not (r < y0):
        raise DomainError("disk touches the boundary of the half-plane")
    if alpha == 0:
        return math.pi * r * r
    if alpha == 1:
        return math.pi * r * r * y0

    def fn(t):
        return (y0 + r * np.sin(t)) ** alpha * np.cos(t) ** 2

    value, _ = integrate_1d(fn, -0.5 * math.pi, 0.5 * math.pi, tol=tol)
    return 2 * r * r * value


def region_from_json(obj):
    """Parse the region wire format.

    Accepts {"box": [x0, x1, y0, y1]}, {"carleson": {"center": c,
    "length": L}}, {"disk": {"cx": x, "cy": y, "s": s}}, or "auto"
    (None) for the automatic whole-plane truncation.
    """
    if obj is None or obj == "auto":
        return None
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParameterError(f"malformed region spec: {obj!r}")
    if "box" in obj:
        x0, x1, y0, y1 = (float(v) for v in obj["box"])
        return Box(x0, x1, y0, y1)
    if "carleson" in obj:
        c = obj["carleson"]
        return CarlesonSquare(float(c["center"]), float(c["length"]))
    if "disk" in obj:
        d = obj["disk"]
        return Disk(HPoint(float(d["cx"]), float(d["cy"])), float(d["s"]))
    raise ParameterError(f"unknown region variant {list(obj)[0]!r}")


def region_to_json(region):
    """Inverse of `region_from_json`."""
    if region is None:
        return "auto"
    if isinstance(region, Box):
        return {"box": [region.x_min, region.x_max,
                        region.y_min, region.y_max]}
    if isinstance(region, CarlesonSquare):
        return {"carleson": {"center": region.interval_center,
                             "length": region.interval_length}}
    if isinstance(region, Disk):
        return {"disk": {"cx": region.center.x, "cy": region.center.y,
                         "s": region.s}}
    raise ParameterError(f"region {type(region).__name__} has no wire format")
