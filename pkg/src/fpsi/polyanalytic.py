"""Poly-analytic functions ``F(z) = sum_k conj(z)^k f_k(z)`` and their majorant sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import series as ser
from .errors import BadRange, DilatationExceedsOne, InputError, TooFewComponents
from .extremal import MemberFn
from .series import Series

BOUNDARY_GRID = 512


@dataclass(frozen=True, eq=False)
class PolyFn:
    components: tuple
    vanish_at_zero: tuple

    @property
    def alpha(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        """Uniform truncation degree: the smallest component order."""
        return min(c.order for c in self.components)

    def grid(self) -> np.ndarray:
        """``a[n, k]``: coefficient of ``z^n`` in ``f_k``, one column per component."""
        d = self.degree
        return np.stack([c.to_float().coeffs[: d + 1] for c in self.components], axis=1)

    def __call__(self, z):
        return eval_polyfn(self, z)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "components": [[[complex(v).real, complex(v).imag] for v in c.to_float().coeffs] for c in self.components],
        }


def _as_series(c) -> Series:
    if isinstance(c, MemberFn):
        return c.series
    if isinstance(c, Series):
        return c
    return Series(c)


def make_polyfn(components: Sequence) -> PolyFn:
    if len(components) < 2:
        raise TooFewComponents("a poly-analytic function needs at least 2 components")
    comps = tuple(_as_series(c) for c in components)
    return PolyFn(comps, tuple(bool(abs(c[0]) == 0) for c in comps))


def polyfn_from_json(obj) -> PolyFn:
    comps = [Series([complex(re, im) for re, im in col], exact=False) for col in obj["components"]]
    if obj.get("alpha", len(comps)) != len(comps):
        raise InputError("alpha does not match the number of components")
    return make_polyfn(comps)


def eval_polyfn(F: PolyFn, z):
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    out = np.zeros_like(z)
    for c in reversed(F.components):
        out = out * zb + c.to_float()(z)
    return out if out.ndim else complex(out)


def majorant_sum(F: PolyFn, N: int, m: int, r: float) -> float:
    """``sum_{n=N}^{m} sum_k |a_{n,k}| r^{k+n}``."""
    if N < 0 or N > m or m > F.degree:
        raise BadRange(f"need 0 <= N <= m <= {F.degree}, got N={N}, m={m}")
    if not 0 <= r < 1:
        raise BadRange("need 0 <= r < 1")
    a = np.abs(F.grid()[N : m + 1])
    n = np.arange(N, m + 1)[:, None]
    k = np.arange(F.alpha)[None, :]
    return float(np.sum(a * float(r) ** (n + k)))


def construct_sense_preserving(f0: Union[MemberFn, Series], dilatations: Sequence[Series], tol: float = 1e-12) -> PolyFn:
    """Components ``f_k`` with ``f_k' = omega_k f_0'`` and ``f_k(0) = 0``.

    Each ``omega_k`` must satisfy ``|omega_k| <= 1`` on a 512-point grid of
    the unit circle, which bounds it on the disk by the maximum principle.
    """
    base = _as_series(f0).to_float()
    T = base.order
    theta = np.linspace(0, 2 * math.pi, BOUNDARY_GRID, endpoint=False)
    circle = np.exp(1j * theta)
    d0 = ser.derivative(base)
    comps = [base]
    for k, w in enumerate(dilatations, start=1):
        w = _as_series(w).to_float()
        peak = float(np.abs(w(circle)).max())
        if peak > 1 + tol:
            raise DilatationExceedsOne(f"|omega_{k}| reaches {peak} on the unit circle")
        w = Series(np.concatenate([w.coeffs, np.zeros(max(0, T - w.order))])[:T], exact=False)
        comps.append(ser.antiderivative(ser.arith(w, d0, "mul")).truncate(T))
    return make_polyfn(comps)


def factorization_sides(F: PolyFn, N: int, m: int, r: float):
    """``(B_N^m(F, r), B_N^m(f_0, r) (1 - r^alpha)/(1 - r))``."""
    lhs = majorant_sum(F, N, m, r)
    rhs = ser.majorant_partial(F.components[0].truncate(F.degree), N, m, r) * (1 - r**F.alpha) / (1 - r)
    return lhs, rhs


def verify_majorant_factorization(F: PolyFn, N: int, m: int, r: float, tol: float = 1e-12) -> bool:
    """Check ``B_N^m(F, r) <= B_N^m(f_0, r)(1 - r^alpha)/(1 - r)``; meant for ``r <= 1/3``."""
    lhs, rhs = factorization_sides(F, N, m, r)
    return lhs <= rhs + tol * max(1.0, rhs)
