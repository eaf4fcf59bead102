"""Members of F(psi): the extremal function, Schwarz-generated members,
growth bounds, the Koebe radius and the coefficient-level transformations.

A member is built as ``f(z) = z exp(int_0^z psi(omega(t))/t dt)`` for a
Schwarz function ``omega``; ``omega(z) = z`` gives the extremal ``f_psi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import series as ser
from .errors import HypothesisUnverified, InvalidSchwarz, InputError
from .psi import PsiSpec, psi_eval, psi_over_z, psi_real_extrema_on_circle, psi_taylor
from .quadrature import adaptive_gl, segment_rule
from .series import Series

ORIGINS = ("extremal", "schwarz_generated", "transformed")


@dataclass(frozen=True, eq=False)
class MemberFn:
    """A normalized member ``z + a_2 z^2 + ...`` with provenance."""

    series: Series
    origin: str
    schwarz_witness: Optional[Series] = None
    spec: Optional[PsiSpec] = None
    closed_form: Optional[Callable] = None

    def __post_init__(self):
        c = self.series.coeffs
        if self.series.order < 1 or abs(c[0]) > 1e-12 or abs(c[1] - 1) > 1e-12:
            raise InputError("member must be normalized: a_0 = 0, a_1 = 1")
        if self.origin not in ORIGINS:
            raise InputError(f"unknown origin {self.origin!r}")

    def __call__(self, z):
        if self.closed_form is not None:
            return self.closed_form(z)
        return self.series(z)

    def coeff(self, n: int):
        return self.series[n]

    def log_derivative_minus_one(self, z):
        """``z f'(z)/f(z) - 1`` from the series, with the value 0 at the origin."""
        g = ser.unshift(self.series, 1)  # f/z
        dg = ser.derivative(g)
        z = np.asarray(z, dtype=complex)
        return z * dg(z) / g(z)


# extremal function ----------------------------------------------------------------


def extremal_function(spec: PsiSpec, order: int = ser.DEFAULT_ORDER, exact: Optional[bool] = None) -> MemberFn:
    """``f_psi(z) = z exp(int_0^z psi(t)/t dt)`` to degree ``order``."""
    if order < 2:
        raise InputError("extremal function needs order >= 2")
    A = psi_taylor(spec, order - 1, exact=exact)
    s = ser.shift(ser.exp(ser.integrate_div_t(A)), 1)
    return MemberFn(s, "extremal", Series.z(order - 1), spec, lambda z: extremal_eval(spec, z))


_SEG_NODES, _SEG_WEIGHTS = segment_rule()


def integral_psi_over_t(spec: PsiSpec, z):
    """``int_0^z psi(t)/t dt`` along the straight segment, vectorized in ``z``."""
    z = np.asarray(z, dtype=complex)
    s = _SEG_NODES.reshape((-1,) + (1,) * z.ndim)
    vals = psi_over_z(spec, s * z)
    out = z * np.tensordot(_SEG_WEIGHTS, vals, axes=1)
    return out if out.ndim else complex(out)


def extremal_eval(spec: PsiSpec, z):
    """Closed-form evaluation of ``f_psi`` by quadrature of its exponent."""
    z = np.asarray(z, dtype=complex)
    out = z * np.exp(integral_psi_over_t(spec, z))
    return out if out.ndim else complex(out)


def fhat(spec: PsiSpec, order: int = ser.DEFAULT_ORDER) -> Series:
    """Absolute-coefficient majorant ``z + sum |a_n| z^n`` of ``f_psi``."""
    return extremal_function(spec, order).series.abs_coeffs()


def booth_fhat_eval(beta: float, z):
    """``z ((1 + sqrt(b) z)/(1 - sqrt(b) z))**(1/(2 sqrt(b)))``; ``z e^z`` at ``b = 0``."""
    z = np.asarray(z, dtype=complex)
    if beta == 0:
        return z * np.exp(z)
    sb = math.sqrt(beta)
    return z * ((1 + sb * z) / (1 - sb * z)) ** (1 / (2 * sb))


# Schwarz-generated members -------------------------------------------------------------


def coeffs_from_schwarz(spec: PsiSpec, omega: Series, order: Optional[int] = None) -> MemberFn:
    """Member ``z exp(int_0^z psi(omega(t))/t dt)``; result order is ``omega.order + 1``."""
    if order is not None:
        omega = omega.truncate(order - 1)
    c = omega.coeffs
    if abs(c[0]) > 1e-14:
        raise InvalidSchwarz("omega(0) must vanish")
    if omega.order >= 1 and abs(c[1]) > 1 + 1e-12:
        raise InvalidSchwarz(f"|omega'(0)| = {abs(c[1])} exceeds 1")
    A = psi_taylor(spec, omega.order, exact=omega.exact and None)
    inner = ser.compose(A, omega)
    s = ser.shift(ser.exp(ser.integrate_div_t(inner)), 1)
    return MemberFn(s, "schwarz_generated", omega, spec)


# growth -------------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthBounds:
    r: float
    lower: float
    upper: float


def _real_integral(spec: PsiSpec, sign: float, r: float) -> float:
    g = lambda t: np.real(psi_over_z(spec, sign * t)) * sign
    return adaptive_gl(g, 0.0, r)


def _require_axis_extrema(spec: PsiSpec, r: float):
    flag = spec.real_extrema_at_axis
    if flag is None:
        flag = psi_real_extrema_on_circle(spec, r)[2]
    if not flag:
        raise HypothesisUnverified(
            f"Re psi does not attain its extrema at +-r on |z|={r} for {spec.label}"
        )


def growth_bounds(spec: PsiSpec, r: float) -> GrowthBounds:
    """``r exp(int_0^r psi(-t)/t dt) <= |f(z)| <= r exp(int_0^r psi(t)/t dt)`` on ``|z| = r``."""
    if not 0 < r < 1:
        raise InputError("growth bounds need 0 < r < 1")
    _require_axis_extrema(spec, r)
    lower = r * math.exp(_real_integral(spec, -1.0, r))
    upper = r * math.exp(_real_integral(spec, 1.0, r))
    return GrowthBounds(r, lower, upper)


def koebe_radius(spec: PsiSpec) -> float:
    """``exp(int_0^1 psi(-t)/t dt)``: radius of the disk covered by every member."""
    return math.exp(_real_integral(spec, -1.0, 1.0))


def booth_koebe_closed(beta: float) -> float:
    if beta == 0:
        return math.exp(-1.0)
    sb = math.sqrt(beta)
    return ((1 - sb) / (1 + sb)) ** (1 / (2 * sb))


def general_growth_upper(r: float):
    """Upper bounds for ``|f|`` and ``|f'|`` valid for any univalent psi."""
    if not 0 < r < 1:
        raise InputError("need 0 < r < 1")
    e = math.exp(r / (1 - r))
    return r * e, (1 - r + r * r) / (1 - r) ** 2 * e


def general_growth_witness(z):
    """``z exp(z/(1-z))``, the equality case of :func:`general_growth_upper`."""
    z = np.asarray(z, dtype=complex)
    return z * np.exp(z / (1 - z))


# transformations ---------------------------------------------------------------------------


def transform_member(f: MemberFn, kind: str, param) -> MemberFn:
    """Rotation ``e^{-ia} f(e^{ia} z)``, dilation ``f(tz)/t``, or ``k``-th root ``f(z^k)^{1/k}``."""
    c = f.series.coeffs
    n = np.arange(len(c))
    if kind == "rotation":
        a = float(param)
        s = Series(f.series.to_float().coeffs * np.exp(1j * a * (n - 1)), exact=False)
        cf = None
        if f.closed_form is not None:
            cf = lambda z, g=f.closed_form: np.exp(-1j * a) * g(np.exp(1j * a) * np.asarray(z, complex))
    elif kind == "dilation":
        t = param
        if not 0 < t <= 1:
            raise InputError("dilation needs 0 < t <= 1")
        if f.series.exact and ser._is_exact_scalar(t):
            s = Series([ck * Fraction(t) ** (k - 1) if k else ck for k, ck in enumerate(c)])
        else:
            s = Series(f.series.to_float().coeffs * float(t) ** (n - 1.0), exact=False)
        cf = None
        if f.closed_form is not None:
            cf = lambda z, g=f.closed_form: g(t * np.asarray(z, complex)) / t
    elif kind == "kth_root":
        k = int(param)
        if k < 1:
            raise InputError("k must be a positive integer")
        g = ser.unshift(f.series, 1)
        e = Fraction(1, k) if g.exact else 1.0 / k
        h = ser.power(g, e)
        s = ser.shift(ser.stretch(h, k), 1)
        cf = None
    else:
        raise InputError(f"unknown transformation {kind!r}")
    return MemberFn(s, "transformed", f.schwarz_witness, f.spec, cf)
