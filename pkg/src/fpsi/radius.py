"""Bracketed root finding for the Bohr, Bohr-Rogosinski, poly-analytic and
Landau radius equations.

Every solver scans for the first sign change from the left end of its
search interval and then bisects to a bracket of width 1e-12, so the
reported root is the smallest positive root resolved by the scan.  Radii
that the corresponding statement caps at 1/3 carry ``clamped_at_third``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import series as ser
from .errors import (
    BadRange,
    HypothesisUnverified,
    NoSignChange,
    ParamOutOfRange,
    TailNotCertified,
)
from .extremal import booth_fhat_eval, booth_koebe_closed, fhat, koebe_radius
from .psi import BOOTH_CONVEX_LIMIT, PsiSpec, make_psi, psi_convexity_check, psi_taylor
from .series import Series

M_INF = math.inf
THIRD = 1.0 / 3.0
BISECT_WIDTH = 1e-12
TAIL_TOL = 1e-10
MAX_ORDER = 4096
SCAN_POINTS = 2000


@dataclass(frozen=True)
class RadiusResult:
    equation: str
    radius: float
    clamped_at_third: bool
    bracket: tuple
    residual: float
    iterations: int
    root: float
    scan_bracket: tuple = ()
    order: Optional[int] = None
    params: dict = field(default_factory=dict)


def solve_bracketed(
    G: Callable[[float], float],
    lo: float,
    hi: float,
    scan: int = SCAN_POINTS,
    width: float = BISECT_WIDTH,
    equation: str = "custom",
) -> RadiusResult:
    """Smallest root of ``G`` in ``(lo, hi]`` by a left-to-right scan plus bisection."""
    xs = np.linspace(lo, hi, scan + 1)
    prev_x, prev = xs[0], float(G(xs[0]))
    bracket = None
    for x in xs[1:]:
        val = float(G(x))
        if val == 0.0:
            return _finish(equation, x, x, 0.0, 0, (prev_x, x))
        if prev != 0.0 and math.copysign(1.0, val) != math.copysign(1.0, prev):
            bracket = (prev_x, x)
            break
        prev_x, prev = x, val
    if bracket is None:
        raise NoSignChange(f"{equation}: no sign change on [{lo}, {hi}]")
    a, b = bracket
    ga = float(G(a))
    it = 0
    # keep halving past ``width`` while the midpoint residual is still large
    while b - a > width or (abs(float(G(0.5 * (a + b)))) >= TAIL_TOL and b - a > 4e-16 * max(1.0, abs(b))):
        mid = 0.5 * (a + b)
        gm = float(G(mid))
        it += 1
        if gm == 0.0:
            a = b = mid
            break
        if math.copysign(1.0, gm) == math.copysign(1.0, ga):
            a, ga = mid, gm
        else:
            b = mid
    root = 0.5 * (a + b)
    return _finish(equation, root, root, abs(float(G(root))), it, bracket, (float(a), float(b)))


def _finish(equation, root, radius, residual, it, scan_bracket, bracket=None):
    root, radius = float(root), float(radius)
    scan_bracket = (float(scan_bracket[0]), float(scan_bracket[1]))
    return RadiusResult(
        equation=equation,
        radius=radius,
        clamped_at_third=False,
        bracket=bracket or (root, root),
        residual=residual,
        iterations=it,
        root=root,
        scan_bracket=scan_bracket,
    )


def _clamp(res: RadiusResult, **extra) -> RadiusResult:
    clamped = bool(res.root > THIRD)
    return _with(res, radius=THIRD if clamped else res.root, clamped_at_third=clamped, **extra)


def _with(res: RadiusResult, **kw) -> RadiusResult:
    d = dict(res.__dict__)
    d.update(kw)
    return RadiusResult(**d)


def _is_inf(m) -> bool:
    return m is None or (isinstance(m, float) and math.isinf(m))


def _require_convex(spec: PsiSpec, certify: bool):
    flag = spec.convex_image
    if flag is None and certify:
        flag = psi_convexity_check(spec)
    if flag is not True:
        state = "unknown" if flag is None else "false"
        raise HypothesisUnverified(f"convexity of psi(D) is {state} for {spec.label}")


# majorant-series radii -----------------------------------------------------------


def _adaptive_series_root(name: str, build_G, order: int = ser.DEFAULT_ORDER, hi: float = 1 - 1e-9):
    """Solve with a series-based ``G`` built at truncation ``order``.

    ``build_G(order)`` returns ``(G, tail)`` where ``tail(r)`` estimates the
    truncation error at ``r`` (``None`` if unknown).  The order doubles until
    the tail at the right end of the root bracket is below 1e-10.
    """
    while True:
        G, tail = build_G(order)
        res = solve_bracketed(G, 0.0, hi, equation=name)
        t = tail(res.scan_bracket[1])
        if t is not None and t < TAIL_TOL:
            return _with(res, order=order)
        if order >= MAX_ORDER:
            raise TailNotCertified(f"{name}: truncation tail {t} at order {order}")
        order *= 2


def bohr_radius(spec: PsiSpec, certify: bool = False) -> RadiusResult:
    """``min(1/3, r0)`` with ``r0`` the least root of ``fhat_psi(r) = r*``."""
    return bohr_rogosinski_radius(spec, m=M_INF, N=1, certify=certify, equation="bohr")


def bohr_rogosinski_radius(
    spec: PsiSpec,
    m=1,
    N: int = 1,
    weight="power",
    certify: bool = False,
    equation: str = "bohr-rogosinski",
) -> RadiusResult:
    """Least root of ``fhat(r^m) + sum_{n>=N} |a_n| nu_n(r) = r*``, capped at 1/3.

    ``m = M_INF`` drops the ``fhat(r^m)`` term.  ``weight`` is ``"power"``
    (``nu_n(r) = r^n``) or a callable ``nu(n, r)`` taking an array of ``n``.
    """
    _require_convex(spec, certify)
    if N < 1:
        raise BadRange("N must be >= 1")
    if not _is_inf(m) and m < 1:
        raise BadRange("m must be >= 1")
    rstar = koebe_radius(spec)

    def build(order):
        fh = fhat(spec, order)
        mags = np.real(fh.coeffs)
        n = np.arange(order + 1)

        if weight == "power":
            tail_series = ser.Series(np.where(n >= N, mags, 0.0).astype(complex))

            def weighted(r):
                return float(np.real(tail_series(r)))

            def tail(r):
                return _sum_tails(fh, r, m, tail_series)
        else:
            def weighted(r):
                return float(np.sum(mags[N:] * weight(n[N:], r)))

            def tail(r, order=order):
                fine = fhat(spec, 2 * order)
                fm = np.real(fine.coeffs)
                nn = np.arange(2 * order + 1)
                diff = abs(np.sum(fm[N:] * weight(nn[N:], r)) - weighted(r))
                if not _is_inf(m):
                    diff += abs(fine(r**m) - fh(r**m))
                return float(diff)

        def G(r):
            val = weighted(r) - rstar
            if not _is_inf(m):
                val += float(np.real(fh(r**m)))
            return val

        return G, tail

    res = _adaptive_series_root(equation, build)
    return _clamp(res, params={"spec": spec.label, "m": m, "N": N, "r_star": rstar})


def _sum_tails(fh: Series, r: float, m, tail_series: Series):
    t = ser.tail_bound(tail_series, r)
    if t is None:
        return None
    if not _is_inf(m):
        t2 = ser.tail_bound(fh, r**m)
        if t2 is None:
            return None
        t += t2
    return t


def booth_BR_radius(beta: float, m=1, N: int = 1) -> RadiusResult:
    """Booth-lemniscate radius from the closed forms of ``fhat`` and ``r*``."""
    if not 0 < beta <= BOOTH_CONVEX_LIMIT + 1e-15:
        raise ParamOutOfRange(f"booth-br needs 0 < beta <= 3 - 2 sqrt 2, got {beta}")
    if N < 1 or (not _is_inf(m) and m < 1):
        raise BadRange("need N >= 1 and m >= 1")
    rstar = booth_koebe_closed(beta)
    spec = make_psi("booth", beta=beta)
    S = ser.partial_sum(fhat(spec, max(N, 2)), N - 1) if N > 1 else None
    b = float(beta)

    def G(r):
        val = float(np.real(booth_fhat_eval(b, r))) - rstar
        if S is not None:
            val -= float(np.real(S(r)))
        if not _is_inf(m):
            val += float(np.real(booth_fhat_eval(b, r**m)))
        return val

    res = solve_bracketed(G, 0.0, 1.0 - 1e-9, equation="booth-br")
    return _clamp(res, params={"beta": beta, "m": m, "N": N, "r_star": rstar})


# poly-analytic equations ------------------------------------------------------------

POLY_CASES = (
    "poly-generic",
    "poly-convex",
    "poly-starlike",
    "poly-janowski",
    "poly-rogosinski-convex",
    "poly-n1-convex",
    "poly-n1-starlike",
    "poly-concave",
    "poly-ff1",
)

# equations whose statement caps the radius at 1/3
_CLAMPED = {"poly-generic", "poly-convex", "poly-starlike", "poly-n1-convex", "poly-n1-starlike", "poly-ff1"}


def janowski_majorant_coeffs(D: float, E: float, order: int) -> np.ndarray:
    """``prod_{t=0}^{n-2} |E - D + E t|/(t+1)`` for ``n = 0..order`` (0 at ``n = 0``)."""
    c = np.zeros(order + 1)
    if order >= 1:
        c[1] = 1.0
    for n in range(2, order + 1):
        t = n - 2
        c[n] = c[n - 1] * abs(E - D + E * t) / (t + 1)
    return c


def _check_alpha_nm(alpha, N, m):
    if int(alpha) != alpha or alpha < 2:
        raise ParamOutOfRange(f"alpha must be an integer >= 2, got {alpha}")
    if N < 1:
        raise ParamOutOfRange("N must be >= 1")
    if not _is_inf(m) and m < N:
        raise ParamOutOfRange(f"need m >= N, got m={m}, N={N}")


def poly_equation(case_id: str, alpha: int, N: int = 1, m=M_INF, **params) -> Callable:
    """The left-hand side ``G(r)`` of a closed-form poly-analytic radius equation.

    Only the purely algebraic cases are returned here; they accept
    ``Fraction`` arguments so roots can be checked exactly.
    """
    _check_alpha_nm(alpha, N, m)
    a = int(alpha)
    if case_id == "poly-convex":
        _need_finite(m, case_id)
        return lambda r: (r / (1 - r)) * (r**N - r**m) * (1 - r**a) + r - 1
    if case_id == "poly-starlike":
        _need_finite(m, case_id)
        return lambda r: (r / (1 - r)) * ((r ** (N - 1) - r ** (m - 1)) / (1 - r) - (m - 1) * r**m + (N - 1) * r**N) * (1 - r**a) + r - 1
    if case_id == "poly-rogosinski-convex":
        return lambda r: r * (1 - r**a) - (1 - r) ** 2
    if case_id == "poly-n1-convex":
        return lambda r: (1 - r) ** 2 - r**2 + r ** (a + 2)
    if case_id == "poly-n1-starlike":
        return lambda r: (1 - r) ** 3 - r + r ** (a + 1)
    if case_id == "poly-ff1":
        return lambda r: (1 - r**a) * (r + r**N) - (1 - r) ** 2
    raise ParamOutOfRange(f"{case_id} is not a closed-form poly-analytic equation")


def _need_finite(m, case_id):
    if _is_inf(m):
        raise ParamOutOfRange(f"{case_id} needs a finite m")


def _majorant_builder(coeff_fn, alpha: int, N: int, m):
    """``G(r) = B_N^m(r) (1 - r^alpha) + r - 1`` with ``B`` from ``coeff_fn(order)``."""

    def build(order):
        top = order if _is_inf(m) else int(m)
        c = np.asarray(coeff_fn(max(order, top)), dtype=float)
        mask = np.zeros_like(c)
        mask[N : top + 1] = 1.0
        s = Series((c * mask).astype(complex))

        def G(r):
            return float(np.real(s(r))) * (1 - r**alpha) + r - 1

        def tail(r):
            return 0.0 if not _is_inf(m) else ser.tail_bound(s, r)

        return G, tail

    return build


def polyanalytic_radius(case_id: str, alpha: int, N: int = 1, m=M_INF, certify: bool = False, **params) -> RadiusResult:
    """Minimal positive root of a registered poly-analytic radius equation.

    Extra ``params`` by case: ``spec`` (or ``series``) for ``poly-generic``,
    ``D`` and ``E`` for ``poly-janowski``, ``beta`` for ``poly-concave``.
    """
    _check_alpha_nm(alpha, N, m)
    a = int(alpha)
    meta = {"alpha": a, "N": N, "m": m}
    if case_id in ("poly-generic", "poly-janowski", "poly-concave"):
        if case_id == "poly-generic":
            if "series" in params:
                base = params["series"]
                coeff_fn = lambda order: np.abs(base.to_float().coeffs)[: order + 1] if order <= base.order else _pad(base, order)
                meta["series"] = True
            else:
                spec = params["spec"]
                _require_convex(spec, certify)
                coeff_fn = lambda order: np.real(fhat(spec, order).coeffs)
                meta["spec"] = spec.label
        elif case_id == "poly-janowski":
            D, E = float(params["D"]), float(params["E"])
            if not -1 <= E < D <= 1:
                raise ParamOutOfRange(f"janowski needs -1 <= E < D <= 1, got D={D}, E={E}")
            coeff_fn = lambda order: janowski_majorant_coeffs(D, E, order)
            meta.update(D=D, E=E)
        else:
            beta = params["beta"]
            spec = make_psi("concave", beta=beta)
            coeff_fn = lambda order: np.abs(psi_taylor(spec, order, exact=False).coeffs)
            meta["beta"] = beta
        start = ser.DEFAULT_ORDER if _is_inf(m) else max(int(m), 2)
        hi = 1 - 1e-9
        res = _adaptive_series_root(case_id, _majorant_builder(coeff_fn, a, N, m), order=start, hi=hi)
    else:
        G = poly_equation(case_id, a, N, m)
        res = solve_bracketed(G, 0.0, 1 - 1e-9, equation=case_id)
    res = _with(res, params=meta)
    if case_id in _CLAMPED:
        return _clamp(res)
    return res


def _pad(base: Series, order: int) -> np.ndarray:
    raise TailNotCertified(f"supplied series has order {base.order} < required {order}")


# Landau ----------------------------------------------------------------------------------


class LandauResult(NamedTuple):
    rho1: float
    R1: float
    certificate: RadiusResult


def landau_equation(alpha: int, M: float) -> Callable:
    ks = range(1, alpha)

    def G(p):
        s = p * (2 - p) / (1 - p) ** 2
        for k in ks:
            s += p**k * (1 + k + k * p) / (1 - k * p) ** 2
        return 1 - M * s

    return G


def landau_R1(alpha: int, M: float, rho: float) -> float:
    return rho - rho**2 * (1 - rho ** (alpha - 1)) / (1 - rho) - M * sum(rho ** (k + 2) for k in range(alpha)) / (1 - rho)


def landau_radius(alpha: int, M: float) -> LandauResult:
    """Univalence radius ``rho_1`` and covered-disk radius ``R_1`` for poly-analytic ``F``."""
    if int(alpha) != alpha or alpha < 2:
        raise ParamOutOfRange("alpha must be an integer >= 2")
    if not M > 1:
        raise ParamOutOfRange("M must exceed 1")
    a = int(alpha)
    hi = 1.0 / (a - 1) - 1e-9
    res = solve_bracketed(landau_equation(a, M), 0.0, hi, equation="landau")
    R1 = float(landau_R1(a, M, res.root))
    res = _with(res, params={"alpha": a, "M": M, "R1": R1})
    return LandauResult(res.root, R1, res)


# registry ------------------------------------------------------------------------------

EQUATIONS = ("bohr", "bohr-rogosinski", "booth-br") + POLY_CASES + ("landau",)
