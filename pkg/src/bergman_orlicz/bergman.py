"""Bergman kernel, projection, and reference analytic functions.

The kernel here is K(z, w) = ((z - conj(w))/i)**(-alpha-2), taken on
the principal branch, which is safe because (z - conj(w))/i has real
part Im z + Im w > 0 whenever both points are in the upper half-plane.
The kernel that actually reproduces point values against the weight
y**alpha is this one times the constant (alpha+1) * 2**alpha / pi, and
`project` / `positive_op` include that constant.

Reference functions: the decay family (1 - i*eps*z)**(-m), whose
p-th-power weighted integrals have a closed beta-function form, and
kernel-atom sums over a lattice sequence with coefficient mu at index
(l, j) contributing

    2**(alpha+2) * mu * K(z, lattice point) * 2**(j*gamma*(alpha+2)),

normalized so the sum evaluated at its own lattice point returns mu
when the other atoms are far.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DivergenceError, ParameterError
from .growth import inverse_vec as _phi_inverse_vec
from .halfplane import HPoint, beta as _beta, integrate as _integrate
from .orlicz import LatticeSequence, luxembourg, valpha_measure


def _as_complex(z):
    if isinstance(z, HPoint):
        return z.z
    return z


def _check_alpha(alpha):
    if not alpha > -1:
        raise ParameterError(f"weight exponent must exceed -1, got {alpha}")


def kernel(z, w, alpha=0.0):
    """Bergman kernel K(z, w) on the principal branch.

    Accepts HPoint or complex for either argument; vectorized over z.
    """
    _check_alpha(alpha)
    zz, ww = _as_complex(z), _as_complex(w)
    return ((zz - np.conj(ww)) / 1j) ** (-alpha - 2.0)


def normalized_kernel(z, w, alpha=0.0):
    """Unit-norm kernel Im(w)**((2+alpha)/2) / (z - conj(w))**(2+alpha)."""
    _check_alpha(alpha)
    zz, ww = _as_complex(z), _as_complex(w)
    return np.imag(ww) ** ((2.0 + alpha) / 2.0) \
        / (zz - np.conj(ww)) ** (2.0 + alpha)


def reproducing_constant(alpha=0.0):
    """Constant making `kernel` reproduce against y**alpha dV."""
    _check_alpha(alpha)
    return (alpha + 1.0) * 2.0 ** alpha / math.pi


ATOM_COEF_BASE = 2.0  # atom coefficient scale is 2**(alpha+2)


@dataclass(frozen=True)
class AnalyticFn:
    """One analytic function on the half-plane, callable and vectorized.

    Closed-form variants carry their parameters so oracles can verify
    values independently; `custom` wraps an arbitrary callable.
    """

    kind: str
    params: dict = field(default_factory=dict, repr=False)

    def __call__(self, z):
        z = np.asarray(_as_complex(z), dtype=complex)
        p = self.params
        if self.kind == "kernel":
            return kernel(z, p["w"], p["alpha"])
        if self.kind == "normalized_kernel":
            return normalized_kernel(z, p["w"], p["alpha"])
        if self.kind == "decay":
            return (1.0 - 1j * p["eps"] * z) ** (-p["m"])
        if self.kind == "atom_sum":
            flat = np.ascontiguousarray(np.atleast_1d(z).ravel())
            out = kernels.atom_sum_eval(flat, p["centers"], p["coeffs"],
                                        p["expo"])
            return out.reshape(z.shape) if z.shape else out[0]
        if self.kind == "const":
            return np.full(z.shape, p["value"]) if z.shape else p["value"]
        if self.kind == "custom":
            return p["fn"](z)
        raise ParameterError(f"unknown analytic-fn kind {self.kind!r}")


def kernel_fn(w, alpha=0.0):
    """K(. , w) as an AnalyticFn."""
    _check_alpha(alpha)
    if not isinstance(w, HPoint):
        w = HPoint(np.real(w), np.imag(w))
    return AnalyticFn("kernel", {"w": w, "alpha": float(alpha)})


def normalized_kernel_fn(w, alpha=0.0):
    """k(. , w) as an AnalyticFn."""
    _check_alpha(alpha)
    if not isinstance(w, HPoint):
        w = HPoint(np.real(w), np.imag(w))
    return AnalyticFn("normalized_kernel", {"w": w, "alpha": float(alpha)})


def decay(eps, m):
    """The reference decay function (1 - i*eps*z)**(-m)."""
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if not m >= 0:
        raise ParameterError(f"m must be nonnegative, got {m}")
    return AnalyticFn("decay", {"eps": float(eps), "m": float(m)})


def atom_sum(seq, alpha=0.0):
    """Kernel-atom sum of a lattice sequence as an AnalyticFn."""
    _check_alpha(alpha)
    if not isinstance(seq, LatticeSequence):
        raise ParameterError("atom_sum needs a LatticeSequence")
    gamma = seq.lattice.gamma
    items = seq.items_sorted()
    centers = np.array([seq.lattice.point(l, j).z for (l, j), _ in items])
    coefs = np.array([
        ATOM_COEF_BASE ** (alpha + 2.0) * v
        * 2.0 ** (j * gamma * (alpha + 2.0))
        for (l, j), v in items], dtype=complex)
    return AnalyticFn("atom_sum", {
        "seq": seq, "alpha": float(alpha), "centers": centers,
        "coeffs": coefs, "expo": alpha + 2.0})


def const_fn(value):
    """The constant function z -> value."""
    return AnalyticFn("const", {"value": complex(value)})


def custom_fn(fn):
    """Wrap an arbitrary vectorized callable."""
    return AnalyticFn("custom", {"fn": fn})


def decay_modular_exact(eps, m, p, alpha=0.0):
    """Closed form of the p-th power y**alpha integral of the decay family.

    Requires m*p > alpha + 2; below that the integral diverges.
    """
    _check_alpha(alpha)
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    mp_ = m * p
    if not mp_ > alpha + 2.0:
        raise DivergenceError(
            f"modular diverges: need m*p > alpha + 2, got {mp_} <= {alpha + 2}")
    return _beta(0.5, (mp_ - 1.0) / 2.0) * _beta(alpha + 1.0, mp_ - alpha - 2.0) \
        * eps ** (-2.0 - alpha)


def project(F, z, alpha=0.0, tol=1e-6):
    """Kernel integral of F against y**alpha dV, at one point.

    For F in the weighted Bergman space this reproduces F(z).
    """
    _check_alpha(alpha)
    zz = _as_complex(z)
    c = reproducing_constant(alpha)

    def integrand(w):
        return kernel(zz, w, alpha) * F(w)

    return c * _integrate(integrand, alpha, None, tol=tol)


def positive_op(F, z, alpha=0.0, tol=1e-6):
    """Same integral with absolute values on both factors."""
    _check_alpha(alpha)
    zz = _as_complex(z)
    c = reproducing_constant(alpha)

    def integrand(w):
        return np.abs(kernel(zz, w, alpha)) * np.abs(F(w))

    return c * _integrate(integrand, alpha, None, tol=tol)


def pointwise_bound_check(F, phi, alpha=0.0, z_list=(), tol=1e-8):
    """Largest ratio of |F(z)| to the norm-scaled growth envelope.

    The envelope at z is inverse(phi)(Im(z)**(-2-alpha)) times the
    Luxembourg norm of F over the whole weighted plane; a bounded ratio
    across z_list is the pointwise growth bound.

    Returns
    -------
    float
    """
    _check_alpha(alpha)
    if not z_list:
        raise ParameterError("z_list must be nonempty")
    lux = luxembourg(F, valpha_measure(alpha), phi, tol=tol).value
    if lux == 0.0:
        return 0.0
    zs = np.array([_as_complex(z) for z in z_list])
    ys = np.imag(zs)
    if np.any(ys <= 0):
        raise ParameterError("evaluation points must be in the half-plane")
    env = _phi_inverse_vec(phi, ys ** (-2.0 - alpha)) * lux
    return float(np.max(np.abs(F(zs)) / env))


def fn_from_json(obj):
    """Parse the analytic-function wire format.

    Accepts {"kernel": {"wx":, "wy":, "alpha":}}, the same with
    "normalized_kernel", {"g": {"eps":, "m":}}, {"const": v} with v a
    number or [re, im], and {"atoms": {"sequence": [[l, j, re, im], ...],
    "delta":, "window": [L, J], "alpha":}} where delta defaults to 0.5,
    the window to the smallest one containing the sequence, and alpha
    to 0.
    """
    from . import lattice as _lattice
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParameterError(f"malformed analytic-fn spec: {obj!r}")
    if "kernel" in obj or "normalized_kernel" in obj:
        key = "kernel" if "kernel" in obj else "normalized_kernel"
        d = obj[key]
        w = HPoint(float(d["wx"]), float(d["wy"]))
        make = kernel_fn if key == "kernel" else normalized_kernel_fn
        return make(w, float(d.get("alpha", 0.0)))
    if "g" in obj:
        d = obj["g"]
        return decay(float(d["eps"]), float(d["m"]))
    if "const" in obj:
        d = obj["const"]
        if isinstance(d, (list, tuple)):
            return const_fn(complex(d[0], d[1]))
        return const_fn(d)
    if "atoms" in obj:
        d = obj["atoms"]
        rows = d["sequence"]
        if not rows:
            raise ParameterError("atom sequence must be nonempty")
        entries = {}
        for l, j, re, im in rows:
            entries[(int(l), int(j))] = complex(re, im)
        if "window" in d:
            window = (int(d["window"][0]), int(d["window"][1]))
        else:
            window = (max(abs(k[0]) for k in entries),
                      max(abs(k[1]) for k in entries))
        lat = _lattice.build(float(d.get("delta", 0.5)), window,
                             d.get("gamma"))
        return atom_sum(LatticeSequence(entries, lat),
                        float(d.get("alpha", 0.0)))
    raise ParameterError(f"unknown analytic-fn variant {list(obj)[0]!r}")


def fn_to_json(F):
    """Inverse of `fn_from_json` for the closed-form variants."""
    p = F.params
    if F.kind in ("kernel", "normalized_kernel"):
        return {F.kind: {"wx": p["w"].x, "wy": p["w"].y,
                         "alpha": p["alpha"]}}
    if F.kind == "decay":
        return {"g": {"eps": p["eps"], "m": p["m"]}}
    if F.kind == "const":
        return {"const": [p["value"].real, p["value"].imag]}
    if F.kind == "atom_sum":
        seq = p["seq"]
        rows = [[l, j, v.real, v.imag]
                for (l, j), v in seq.items_sorted()]
        return {"atoms": {"sequence": rows, "delta": seq.lattice.delta,
                          "window": list(seq.lattice.window),
                          "alpha": p["alpha"]}}
    raise ParameterError(f"{F.kind!r} functions have no wire format")
