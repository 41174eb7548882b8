"""Modulars and Luxembourg norms over half-plane measures.

A measure is atomic, a weighted density over a region, or the pullback
of a power weight under a Mobius map fixing the half-plane.  The
modular of a field f is the integral of Phi(|f|) against the measure;
the Luxembourg norm is the infimum of scales lambda with
modular(f/lambda) <= 1, located here by bisection on the strictly
decreasing map lambda -> modular(f/lambda).  Power-family growth
functions take the closed p-norm route instead.

Sequence-space analogues live on lattice index sets with row weights
2**(j*gamma*(alpha+2)); the Hardy variant takes per-horizontal-line
norms and their supremum.
"""

from dataclasses import dataclass, field

import numpy as np

from . import quadrature as Q
from .errors import (AccuracyError, BergmanOrliczError, DivergenceError,
                     NotInSpaceError, ParameterError)
from .growth import inverse as _phi_inverse
from .halfplane import Box, CarlesonSquare, Disk, HPoint, StripUnion

VANISH_LAMBDA = 1e-300
MODULAR_TARGET_TOL = 1e-8
BRACKET_FLOOR = 1e-12
PROBE_CAP = 1100
DIVERGENT_PROBE_CAP = 24
VALUE_CLIP = 1e300


@dataclass(frozen=True)
class MeasureSpec:
    """One positive measure on the upper half-plane.

    Use the module constructors (`atomic_measure`, `valpha_measure`,
    `density_measure`, `mobius_measure`) rather than instantiating
    directly.
    """

    kind: str
    atoms: tuple = ()
    weight: object = None
    support: object = None
    alpha_base: float = 0.0
    mobius: tuple = ()
    beta: float = 0.0


def atomic_measure(points_masses):
    """Finite sum of point masses.

    Parameters
    ----------
    points_masses : iterable of (HPoint, float)
        Locations and strictly positive masses.
    """
    atoms = []
    for p, m in points_masses:
        if not isinstance(p, HPoint):
            p = HPoint(p.real, p.imag) if isinstance(p, complex) else HPoint(*p)
        m = float(m)
        if not m > 0 or not np.isfinite(m):
            raise ParameterError(f"atom mass must be positive finite, got {m}")
        atoms.append((p, m))
    if not atoms:
        raise ParameterError("atomic measure needs at least one atom")
    return MeasureSpec(kind="atomic", atoms=tuple(atoms))


def valpha_measure(alpha=0.0, support=None):
    """The weight y**alpha over a region (default: whole half-plane)."""
    if alpha <= -1.0:
        raise ParameterError(f"alpha must be > -1, got {alpha}")
    return MeasureSpec(kind="density", support=support, alpha_base=float(alpha))


def density_measure(weight, support=None, alpha=0.0):
    """A custom nonnegative weight times y**alpha over a region."""
    return MeasureSpec(kind="density", weight=weight, support=support,
                       alpha_base=float(alpha))


def mobius_measure(a, b, c, d, beta):
    """Pullback of the y**beta weight under z -> (az+b)/(cz+d).

    The measure of a set E is the y**beta volume of its preimage, which
    has the closed density (Im w)**beta * |w'|**2 with
    w(z) = (dz-b)/(-cz+a).
    """
    a, b, c, d = (float(v) for v in (a, b, c, d))
    if a * d - b * c <= 0:
        raise ParameterError(f"need ad - bc > 0, got {a * d - b * c}")
    if beta <= -1.0:
        raise ParameterError(f"beta must be > -1, got {beta}")
    return MeasureSpec(kind="mobius", mobius=(a, b, c, d), beta=float(beta))


def mobius_density(mu):
    """The closed density of a pullback measure, as a callable of z."""
    a, b, c, d = mu.mobius
    det = a * d - b * c
    beta = mu.beta

    def h(z):
        w = (d * z - b) / (-c * z + a)
        dw = det / (-c * z + a) ** 2
        return np.imag(w) ** beta * np.abs(dw) ** 2

    return h


@dataclass(frozen=True)
class LatticeSequence:
    """Finitely supported coefficients on a lattice index window."""

    entries: dict = field(repr=False)
    lattice: object = None

    def __post_init__(self):
        if self.lattice is not None:
            l_max, j_max = self.lattice.window
            for (l, j) in self.entries:
                if abs(l) > l_max or abs(j) > j_max:
                    raise ParameterError(
                        f"index ({l}, {j}) outside lattice window "
                        f"{self.lattice.window}")

    def items_sorted(self):
        """Entries in deterministic (j, l) order."""
        return sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))


@dataclass(frozen=True)
class LuxResult:
    """Outcome of a Luxembourg-norm computation."""

    value: float
    modular_at_value: float
    iterations: int
    bracket: tuple


class _ComboField:
    """Panel values Phi(|f|/lambda) * weight, both factors cached."""

    def __init__(self, absf, wt, phi, lam):
        self._absf = absf
        self._wt = wt
        self._phi = phi
        self._lam = lam

    def values(self, rect, order):
        v = self._phi(self._absf.values(rect, order) / self._lam)
        v = np.minimum(v, VALUE_CLIP)
        if self._wt is not None:
            v = v * self._wt.values(rect, order)
        return v


class _ModularEngine:
    """Evaluates lambda -> modular(f/lambda) for one (f, measure) pair.

    Density routes cache |f| and the weight on quadrature panels, so
    re-evaluations at new lambda during bisection cost no field calls.
    """

    def __init__(self, f, mu, tol):
        self.mu = mu
        self.tol = tol
        if mu.kind == "atomic":
            pts = np.array([p.z for p, _ in mu.atoms])
            self.fvals = np.abs(np.asarray(f(pts), dtype=complex))
            self.masses = np.array([m for _, m in mu.atoms])
            return
        support = mu.support
        if mu.kind == "mobius":
            wfun, alpha = mobius_density(mu), 0.0
        else:
            wfun, alpha = mu.weight, mu.alpha_base
        if isinstance(support, Disk):
            cx, cy, r = support.center.x, support.center.y, support.radius

            def absf_p(th, rho):
                z = (cx + rho * np.cos(th)) + 1j * (cy + rho * np.sin(th))
                return np.abs(f(z))

            def wt_p(th, rho):
                y = cy + rho * np.sin(th)
                w = rho * y ** alpha
                if wfun is not None:
                    w = w * wfun((cx + rho * np.cos(th)) + 1j * y)
                return w

            self.absf = Q.Field2D(absf_p)
            self.wt = Q.Field2D(wt_p)
        else:
            self.absf = Q.Field2D(lambda x, y: np.abs(f(x + 1j * y)))

            def wt_c(x, y):
                w = y ** alpha if alpha != 0.0 else np.ones_like(y)
                if wfun is not None:
                    w = w * wfun(x + 1j * y)
                return w

            self.wt = Q.Field2D(wt_c)

    def modular_at(self, phi, lam):
        mu = self.mu
        if mu.kind == "atomic":
            with np.errstate(over="ignore", invalid="ignore"):
                vals = phi(self.fvals / lam)
            return float(np.sum(self.masses * np.minimum(vals, VALUE_CLIP)))
        combo = _ComboField(self.absf, self.wt, phi, lam)
        support = mu.support
        if support is None:
            v, _, _ = Q.integrate_halfplane(combo, self.tol)
        elif isinstance(support, Disk):
            r = support.radius
            v, _, _ = Q.integrate_box(combo, (-np.pi, np.pi, 0.0, r), self.tol)
        elif isinstance(support, CarlesonSquare):
            v, _, _ = Q.integrate_box_graded(
                combo, support.x_min, support.x_max,
                support.interval_length, self.tol)
        elif isinstance(support, Box):
            if support.y_min == 0.0:
                v, _, _ = Q.integrate_box_graded(
                    combo, support.x_min, support.x_max,
                    support.y_max, self.tol)
            else:
                rect = (support.x_min, support.x_max,
                        support.y_min, support.y_max)
                v, _, _ = Q.integrate_box(combo, rect, self.tol)
        elif isinstance(support, StripUnion):
            v = 0.0
            for b in support.boxes:
                sub = MeasureSpec(kind=mu.kind, weight=mu.weight, support=b,
                                  alpha_base=mu.alpha_base, mobius=mu.mobius,
                                  beta=mu.beta)
                hold, self.mu = self.mu, sub
                try:
                    v += self.modular_at(phi, lam)
                finally:
                    self.mu = hold
        else:
            raise ParameterError(
                f"unsupported support type {type(support).__name__}")
        return float(v)

    def mass_scale(self):
        """Rough total-mass estimate used to seed the bracket search."""
        mu = self.mu
        if mu.kind == "atomic":
            return float(np.sum(self.masses))
        s = mu.support
        a = mu.alpha_base if mu.kind == "density" else 0.0
        if isinstance(s, (Box, CarlesonSquare)):
            if isinstance(s, CarlesonSquare):
                x0, x1, y0, y1 = s.x_min, s.x_max, 0.0, s.interval_length
            else:
                x0, x1, y0, y1 = s.x_min, s.x_max, s.y_min, s.y_max
            return (x1 - x0) * (y1 ** (a + 1) - y0 ** (a + 1)) / (a + 1)
        return 1.0

    def typical_value(self):
        if self.mu.kind == "atomic":
            return float(np.max(self.fvals, initial=0.0))
        return float(self.absf.values((-0.5, 0.5, 0.5, 1.5), Q.ORDER_LOW).max())


def modular(f, mu, phi, tol=1e-8):
    """Integral of Phi(|f|) against the measure.

    Parameters
    ----------
    f : callable
        Field of one complex argument, vectorized.
    mu : MeasureSpec
    phi : GrowthFunction
    tol : float
        Relative integration tolerance (ignored for atomic measures,
        which are exact sums).

    Returns
    -------
    float
    """
    engine = _ModularEngine(f, mu, tol)
    try:
        return engine.modular_at(phi, 1.0)
    except DivergenceError as e:
        raise AccuracyError(
            f"modular diverges under automatic truncation ({e})") from e


def _power_params(phi):
    if phi.family == "power":
        return phi.params["p"], phi.params["coef"]
    return None


def _lux_bisect(modular_fn, lam0, *, divergence_means_large=True):
    """Locate inf{lam : modular_fn(lam) <= 1} for decreasing modular_fn."""

    def mod(lam):
        try:
            return modular_fn(lam)
        except DivergenceError:
            if divergence_means_large:
                return np.inf
            raise

    iters = 0
    # vanishing input: even an absurdly small scale keeps the modular small
    m_tiny = mod(VANISH_LAMBDA)
    iters += 1
    if m_tiny <= 1.0:
        return LuxResult(0.0, m_tiny, iters, (0.0, VANISH_LAMBDA))

    lam = max(lam0, VANISH_LAMBDA * 1e10)
    m = mod(lam)
    iters += 1
    divergent_run = 1 if np.isinf(m) else 0
    while m > 1.0:
        if np.isinf(m):
            divergent_run += 1
            if divergent_run > DIVERGENT_PROBE_CAP:
                raise NotInSpaceError(
                    "modular divergent for all probed scales")
        else:
            divergent_run = 0
        if iters > PROBE_CAP:
            raise NotInSpaceError(
                "modular stayed above 1 for all probed scales")
        lam *= 2.0
        m = mod(lam)
        iters += 1
    hi, m_hi = lam, m
    lo = hi / 2.0
    m_lo = mod(lo)
    iters += 1
    while m_lo <= 1.0:
        hi, m_hi = lo, m_lo
        lo /= 2.0
        if lo < VANISH_LAMBDA:
            return LuxResult(0.0, m_hi, iters, (0.0, hi))
        m_lo = mod(lo)
        iters += 1

    if np.isfinite(m_lo) and m_lo < m_hi - 1e-9 * (1.0 + abs(m_lo)):
        raise BergmanOrliczError(
            "modular failed to decrease in lambda during bracketing")

    value, m_val = hi, m_hi
    while hi - lo > BRACKET_FLOOR * hi:
        mid = 0.5 * (lo + hi)
        m_mid = mod(mid)
        iters += 1
        if abs(m_mid - 1.0) <= MODULAR_TARGET_TOL:
            return LuxResult(mid, m_mid, iters, (lo, hi))
        if m_mid > 1.0:
            lo = mid
        else:
            hi, value, m_val = mid, mid, m_mid
    return LuxResult(value, m_val, iters, (lo, hi))


def luxembourg(f, mu, phi, tol=1e-8):
    """Luxembourg norm of f in the Orlicz space of the measure.

    Power growth functions use the exact p-norm identity; everything
    else is bisection on the modular.  The result's modular sits within
    1e-8 of 1 whenever the value is positive and the modular is
    continuous at it.

    Returns
    -------
    LuxResult
    """
    engine = _ModularEngine(f, mu, tol)
    pc = _power_params(phi)
    if pc is not None:
        p, coef = pc
        from .growth import power as _power
        try:
            s = _ModularEngine(f, mu, tol).modular_at(_power(p), 1.0)
        except DivergenceError as e:
            raise NotInSpaceError(f"p-th power integral diverges ({e})") from e
        if s == 0.0:
            return LuxResult(0.0, 0.0, 0, (0.0, 0.0))
        value = (coef * s) ** (1.0 / p)
        m_val = engine.modular_at(phi, value)
        return LuxResult(float(value), float(m_val), 0, (value, value))

    lam0 = 1.0
    mass = engine.mass_scale()
    typ = engine.typical_value()
    if mass > 0 and typ > 0:
        try:
            y = _phi_inverse(phi, 1.0 / mass)
            if np.isfinite(y) and y > 0:
                lam0 = typ / y
        except (BergmanOrliczError, OverflowError, ZeroDivisionError):
            pass
    return _lux_bisect(lambda lam: engine.modular_at(phi, lam), lam0)


def seq_modular(seq, phi, alpha, lam=1.0):
    """Row-weighted modular of a lattice sequence."""
    if not seq.entries:
        return 0.0
    gamma = seq.lattice.gamma
    items = seq.items_sorted()
    mags = np.array([abs(v) for _, v in items])
    js = np.array([k[1] for k, _ in items], dtype=float)
    weights = 2.0 ** (js * gamma * (alpha + 2.0))
    with np.errstate(over="ignore", invalid="ignore"):
        vals = phi(mags / lam)
    return float(np.sum(weights * np.minimum(vals, VALUE_CLIP)))


def seq_luxembourg(seq, phi, alpha):
    """Luxembourg norm on the weighted sequence space over the lattice.

    Returns
    -------
    LuxResult
    """
    if not seq.entries:
        return LuxResult(0.0, 0.0, 0, (0.0, 0.0))
    pc = _power_params(phi)
    if pc is not None:
        p, coef = pc
        from .growth import power as _power
        s = seq_modular(seq, _power(p), alpha)
        if s == 0.0:
            return LuxResult(0.0, 0.0, 0, (0.0, 0.0))
        value = (coef * s) ** (1.0 / p)
        return LuxResult(float(value), seq_modular(seq, phi, alpha, value),
                         0, (value, value))
    mags = [abs(v) for _, v in seq.items_sorted()]
    lam0 = max(mags) if mags else 1.0
    return _lux_bisect(lambda lam: seq_modular(seq, phi, alpha, lam),
                       max(lam0, 1e-30))


def _line_modular(F, phi, y, lam, tol):
    v, _ = Q.integrate_1d_line(
        lambda x: np.minimum(phi(np.abs(F(x + 1j * y)) / lam), VALUE_CLIP),
        tol=tol)
    return float(v)


def _line_lux(F, phi, y, tol):
    pc = _power_params(phi)
    if pc is not None:
        p, coef = pc
        s, _ = Q.integrate_1d_line(lambda x: np.abs(F(x + 1j * y)) ** p,
                                   tol=tol)
        return float((coef * s) ** (1.0 / p))
    res = _lux_bisect(lambda lam: _line_modular(F, phi, y, lam, tol), 1.0,
                      divergence_means_large=False)
    return res.value


def hardy_norm(F, phi, y_grid=None, tol=1e-8):
    """Sup over horizontal lines of the 1-D Luxembourg norms of F.

    Parameters
    ----------
    F : callable
        Analytic function of z, vectorized.
    phi : GrowthFunction
    y_grid : sequence of float, optional
        Heights to scan; default 16 points log-spaced over [1e-4, 10].
        The per-line norm is nonincreasing in the height, so the sup
        over (0, inf) is approached at the small end of the grid.

    Returns
    -------
    (float, list of (y, norm))
    """
    if y_grid is None:
        y_grid = np.logspace(-4, 1, 16)
    ys = sorted(float(y) for y in y_grid)
    if not ys or ys[0] <= 0:
        raise ParameterError("y_grid must contain positive heights")
    per_line = []
    for y in ys:
        try:
            per_line.append((y, _line_lux(F, phi, y, tol)))
        except (DivergenceError, NotInSpaceError) as e:
            raise NotInSpaceError(
                f"line norm at y={y:.6g} diverges ({e})") from e
    return max(v for _, v in per_line), per_line


def measure_from_json(obj):
    """Parse the measure wire format.

    Accepts {"atomic": [[x, y, mass], ...]},
    {"density": {"kind": "valpha", "alpha": A, "support": region}},
    {"mobius": {"a":, "b":, "c":, "d":, "beta":}}.
    """
    from .halfplane import region_from_json
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParameterError(f"malformed measure spec: {obj!r}")
    if "atomic" in obj:
        return atomic_measure(
            [(HPoint(row[0], row[1]), row[2]) for row in obj["atomic"]])
    if "density" in obj:
        d = obj["density"]
        if d.get("kind", "valpha") != "valpha":
            raise ParameterError(f"unknown density kind {d.get('kind')!r}")
        support = region_from_json(d.get("support", "auto"))
        return valpha_measure(float(d.get("alpha", 0.0)), support)
    if "mobius" in obj:
        m = obj["mobius"]
        return mobius_measure(m["a"], m["b"], m["c"], m["d"],
                              m.get("beta", 0.0))
    raise ParameterError(f"unknown measure variant {list(obj)[0]!r}")


def measure_to_json(mu):
    """Inverse of `measure_from_json`."""
    from .halfplane import region_to_json
    if mu.kind == "atomic":
        return {"atomic": [[p.x, p.y, m] for p, m in mu.atoms]}
    if mu.kind == "density":
        if mu.weight is not None:
            raise ParameterError("custom density weights have no wire format")
        return {"density": {"kind": "valpha", "alpha": mu.alpha_base,
                            "support": region_to_json(mu.support)}}
    a, b, c, d = mu.mobius
    return {"mobius": {"a": a, "b": b, "c": c, "d": d, "beta": mu.beta}}
