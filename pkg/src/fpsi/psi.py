"""Catalog of univalent functions psi with psi(0) = 0.

Each :class:`PsiSpec` knows its closed form, its Taylor coefficients
``A_1, A_2, ...`` and two three-valued capability flags (``True``,
``False`` or ``None`` for unknown) recording the hypotheses that the
growth and radius results need:

``convex_image``
    psi maps the unit disk onto a convex domain.
``real_extrema_at_axis``
    on every circle ``|z| = r`` the extrema of ``Re psi`` are ``psi(r)``
    and ``psi(-r)``.

Unknown flags can be resolved numerically with :func:`certify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from . import series as ser
from .errors import ParamOutOfRange
from .series import Series

FAMILIES = ("identity", "booth", "cissoid", "s_gamma", "janowski", "concave")

PARAM_NAMES = {
    "identity": (),
    "booth": ("beta",),
    "cissoid": ("beta",),
    "s_gamma": ("gamma", "eta"),
    "janowski": ("D", "E"),
    "concave": ("beta",),
}

BOOTH_CONVEX_LIMIT = 3 - 2 * math.sqrt(2)


@dataclass(frozen=True)
class PsiSpec:
    family: str
    params: Mapping[str, float] = field(default_factory=dict)
    convex_image: Optional[bool] = None
    real_extrema_at_axis: Optional[bool] = None

    def __getitem__(self, name):
        return self.params[name]

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items()))))

    @property
    def label(self) -> str:
        inner = ", ".join(f"{k}={float(v):g}" for k, v in self.params.items())
        return f"{self.family}({inner})" if inner else self.family

    def to_json(self) -> dict:
        out = {"family": self.family}
        out.update({k: float(v) for k, v in self.params.items()})
        return out


def _check(cond: bool, msg: str):
    if not cond:
        raise ParamOutOfRange(msg)


def make_psi(family: str, **params) -> PsiSpec:
    """Build a catalog entry, validating parameter ranges.

    >>> make_psi("booth", beta=0).family
    'identity'
    """
    if family not in FAMILIES:
        raise ParamOutOfRange(f"unknown psi family {family!r}")
    names = PARAM_NAMES[family]
    missing = [n for n in names if n not in params]
    extra = [n for n in params if n not in names]
    _check(not missing and not extra, f"{family} takes parameters {names}, got {sorted(params)}")

    if family == "booth":
        b = params["beta"]
        _check(0 <= b < 1, f"booth beta must lie in [0, 1), got {b}")
        if b == 0:
            return make_psi("identity")
        return PsiSpec(family, dict(params), convex_image=b <= BOOTH_CONVEX_LIMIT,
                       real_extrema_at_axis=True)
    if family == "cissoid":
        _check(0 <= params["beta"] < 1, f"cissoid beta must lie in [0, 1), got {params['beta']}")
    elif family == "s_gamma":
        _check(params["gamma"] > 0, "s_gamma needs gamma > 0")
        _check(0 <= params["eta"] < 1, "s_gamma needs eta in [0, 1)")
    elif family == "janowski":
        D, E = params["D"], params["E"]
        _check(-1 <= E < D <= 1, f"janowski needs -1 <= E < D <= 1, got D={D}, E={E}")
    elif family == "concave":
        _check(1 <= params["beta"] <= 2, "concave beta must lie in [1, 2]")
    elif family == "identity":
        return PsiSpec(family, {}, convex_image=True, real_extrema_at_axis=True)
    return PsiSpec(family, dict(params))


def from_json(obj: Mapping) -> PsiSpec:
    obj = dict(obj)
    family = obj.pop("family")
    return make_psi(family, **obj)


# Taylor coefficients ----------------------------------------------------------


def _exact_params(spec: PsiSpec) -> dict:
    return {k: Fraction(v) for k, v in spec.params.items()}


def psi_taylor(spec: PsiSpec, order: int = ser.DEFAULT_ORDER, exact: Optional[bool] = None) -> Series:
    """Taylor coefficients ``0, A_1, ..., A_order``.

    Exact rational coefficients are produced when ``exact`` is true, or by
    default when every parameter is an ``int`` or ``Fraction``.
    """
    if exact is None:
        exact = all(ser._is_exact_scalar(v) for v in spec.params.values())
    p = _exact_params(spec) if exact else {k: float(v) for k, v in spec.params.items()}
    f = spec.family
    n = range(order + 1)
    if f == "identity":
        c = [0, 1] + [0] * (order - 1)
    elif f == "booth":
        b = p["beta"]
        c = [b ** ((k - 1) // 2) if k % 2 else 0 for k in n]
    elif f == "cissoid":
        b = p["beta"]
        c = [0] + [sum((-b) ** j for j in range(k)) for k in range(1, order + 1)]
    elif f == "s_gamma":
        g, e = p["gamma"], p["eta"]
        c = [0] + [g * k * (-e) ** (k - 1) for k in range(1, order + 1)]
    elif f == "janowski":
        D, E = p["D"], p["E"]
        c = [0] + [(D - E) * (-E) ** (k - 1) for k in range(1, order + 1)]
    elif f == "concave":
        b = p["beta"]
        one = 1 if exact else 1.0
        num = Series([one, one] + [0 * one] * (order - 1))
        den = Series([one, -one] + [0 * one] * (order - 1))
        q = ser.power(ser.divide(num, den), b)
        c = list(((q - 1) / (2 * b)).coeffs)
        c[0] = 0 * one
    else:  # pragma: no cover - guarded by make_psi
        raise ParamOutOfRange(f)
    if not exact:
        c = [complex(v) for v in c]
    return Series(c, exact=exact)


# closed forms -------------------------------------------------------------------


def _fparams(spec):
    return {k: float(v) for k, v in spec.params.items()}


def psi_eval(spec: PsiSpec, z):
    """Closed-form value of psi; vectorized over numpy arrays."""
    z = np.asarray(z, dtype=complex)
    p = _fparams(spec)
    f = spec.family
    if f == "identity":
        out = z.copy()
    elif f == "booth":
        out = z / (1 - p["beta"] * z * z)
    elif f == "cissoid":
        out = z / ((1 - z) * (1 + p["beta"] * z))
    elif f == "s_gamma":
        out = p["gamma"] * z / (1 + p["eta"] * z) ** 2
    elif f == "janowski":
        out = (p["D"] - p["E"]) * z / (1 + p["E"] * z)
    elif f == "concave":
        b = p["beta"]
        out = (((1 + z) / (1 - z)) ** b - 1) / (2 * b)
    return out if out.ndim else complex(out)


def psi_over_z(spec: PsiSpec, z):
    """``psi(z)/z`` with the removable singularity at 0 filled by ``A_1``."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-8
    safe = np.where(small, 0.5, z)
    out = psi_eval(spec, safe) / safe
    if np.any(small):
        A = psi_taylor(spec, 2, exact=False).coeffs
        out = np.where(small, A[1] + A[2] * z, out)
    return out if out.ndim else complex(out)


def psi_prime(spec: PsiSpec, z):
    z = np.asarray(z, dtype=complex)
    p = _fparams(spec)
    f = spec.family
    if f == "identity":
        return np.ones_like(z)
    if f == "booth":
        b = p["beta"]
        return (1 + b * z * z) / (1 - b * z * z) ** 2
    if f == "cissoid":
        b = p["beta"]
        return (1 + b * z * z) / ((1 - z) ** 2 * (1 + b * z) ** 2)
    if f == "s_gamma":
        e = p["eta"]
        return p["gamma"] * (1 - e * z) / (1 + e * z) ** 3
    if f == "janowski":
        return (p["D"] - p["E"]) / (1 + p["E"] * z) ** 2
    b = p["beta"]
    return (1 + z) ** (b - 1) / (1 - z) ** (b + 1)


def curvature_term(spec: PsiSpec, z):
    """``1 + z psi''(z)/psi'(z)``; positive real part on the disk iff psi is convex."""
    z = np.asarray(z, dtype=complex)
    p = _fparams(spec)
    f = spec.family
    if f == "identity":
        t = np.zeros_like(z)
    elif f == "booth":
        w = p["beta"] * z * z
        t = 2 * w / (1 + w) + 4 * w / (1 - w)
    elif f == "cissoid":
        b = p["beta"]
        t = z * (2 * b * z / (1 + b * z * z) + 2 / (1 - z) - 2 * b / (1 + b * z))
    elif f == "s_gamma":
        e = p["eta"]
        t = z * (-e / (1 - e * z) - 3 * e / (1 + e * z))
    elif f == "janowski":
        E = p["E"]
        t = -2 * E * z / (1 + E * z)
    else:
        b = p["beta"]
        t = z * ((b - 1) / (1 + z) + (b + 1) / (1 - z))
    return 1 + t


# numeric hypothesis checks ----------------------------------------------------------

_INV_PHI = (math.sqrt(5) - 1) / 2


def _golden_max(f, a: float, b: float, tol: float = 1e-10):
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def psi_real_extrema_on_circle(spec: PsiSpec, r: float, grid: int = 720):
    """``(min Re psi, max Re psi, attained_at_axis)`` over ``|z| = r``.

    A coarse angular grid is refined by golden-section search around the
    three best samples on each side.
    """
    theta = 2 * np.pi * np.arange(grid) / grid
    re = np.real(psi_eval(spec, r * np.exp(1j * theta)))
    re = np.atleast_1d(re)
    at_pos = float(np.real(psi_eval(spec, r)))
    at_neg = float(np.real(psi_eval(spec, -r)))
    if grid == 1:
        v = float(re[0])
        return v, v, _axis_ok(v, v, at_pos, at_neg)

    h = 2 * np.pi / grid

    def refine(sign: float) -> float:
        best = float(np.max(sign * re))
        for i in np.argsort(-sign * re)[:3]:
            g = lambda t: sign * float(np.real(psi_eval(spec, r * np.exp(1j * t))))
            _, val = _golden_max(g, theta[i] - h, theta[i] + h)
            best = max(best, val)
        return sign * best

    hi = refine(1.0)
    lo = refine(-1.0)
    return lo, hi, _axis_ok(lo, hi, at_pos, at_neg)


def _axis_ok(lo, hi, at_pos, at_neg, tol=1e-9) -> bool:
    return abs(hi - at_pos) <= tol * max(1.0, abs(at_pos)) and abs(lo - at_neg) <= tol * max(1.0, abs(at_neg))


CONVEXITY_RADII = (0.5, 0.9, 0.99, 0.999)


def convexity_margin(spec: PsiSpec, grid: int = 512) -> float:
    theta = 2 * np.pi * np.arange(grid) / grid
    e = np.exp(1j * theta)
    return float(min(np.min(np.real(curvature_term(spec, r * e))) for r in CONVEXITY_RADII))


def psi_convexity_check(spec: PsiSpec, grid: int = 512) -> Optional[bool]:
    """Sampled test of ``Re(1 + z psi''/psi') > 0`` on circles approaching 1.

    Returns ``None`` when the margin is within 1e-6 of zero.
    """
    m = convexity_margin(spec, grid)
    if abs(m) < 1e-6:
        return None
    return m > 0


EXTREMA_RADII = (0.1, 0.3, 0.5, 0.7, 0.9)


def certify(spec: PsiSpec, grid: int = 720) -> PsiSpec:
    """Fill unknown capability flags from the numeric checks."""
    convex = spec.convex_image
    if convex is None:
        convex = psi_convexity_check(spec)
    axis = spec.real_extrema_at_axis
    if axis is None:
        axis = all(psi_real_extrema_on_circle(spec, r, grid)[2] for r in EXTREMA_RADII)
    return replace(spec, convex_image=convex, real_extrema_at_axis=axis)
