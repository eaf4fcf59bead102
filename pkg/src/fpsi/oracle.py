"""Brute-force checks that do not lean on the closed-form results.

Membership in psi(D) is decided by winding numbers, Schwarz functions are
built from Schur parameters so they are genuine self-maps of the disk, and
functional maxima come from a batched coefficient computation that is
separate from the series code used elsewhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.optimize import minimize

from . import series as ser
from .errors import InputError
from .extremal import MemberFn, coeffs_from_schwarz, integral_psi_over_t, koebe_radius
from .functionals import FUNCTIONALS, evaluate_functional, functional_value, parse_functional
from .psi import PsiSpec, psi_eval, psi_taylor
from .series import Series

EPS_BOUNDARY = 1e-6
WINDING_RESIDUAL = 0.05
EDGE_MARGIN = 1e-3
SCHWARZ_ORDER = 512


# winding numbers -------------------------------------------------------------------------


def _winding_many(curve: Callable, vs: np.ndarray, n0: int = 256, nmax: int = 2**16):
    """Winding numbers of ``theta -> curve(theta)`` about each point of ``vs``.

    The sampling doubles until every consecutive argument step is below
    pi/4 and every total is within 0.05 of an integer, or ``nmax`` is hit.
    Returns ``(winding, residual, min_distance, resolved)``.
    """
    vs = np.atleast_1d(np.asarray(vs, dtype=complex))
    n = n0
    while True:
        theta = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        c = np.asarray(curve(theta), dtype=complex)
        d = c[None, :] - vs[:, None]
        dist = np.abs(d).min(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.nan_to_num(np.angle(np.roll(d, -1, axis=1) / d), nan=math.pi)
        total = steps.sum(axis=1) / (2 * math.pi)
        w = np.rint(total)
        resid = np.abs(total - w)
        resolved = (np.abs(steps).max(axis=1) < math.pi / 4) & (resid < WINDING_RESIDUAL)
        if resolved.all() or n >= nmax:
            return w.astype(int), resid, dist, resolved
        n *= 2


@dataclass(frozen=True)
class MembershipVerdict:
    status: str
    winding: int
    min_boundary_distance: float


def _verdicts(w, resid, dist, resolved):
    out = []
    for wi, di, ok in zip(w, dist, resolved):
        if di < EPS_BOUNDARY or not ok:
            status = "indeterminate"
        else:
            status = "inside" if wi == 1 else "outside"
        out.append(MembershipVerdict(status, int(wi), float(di)))
    return out


def region_membership(spec: PsiSpec, v, rho: float):
    """Is ``v`` inside the curve ``psi(rho e^{i theta})``?  Arrays give a list."""
    if not 0 < rho < 1:
        raise InputError("need 0 < rho < 1")
    scalar = np.ndim(v) == 0
    curve = lambda th: psi_eval(spec, rho * np.exp(1j * th))
    res = _verdicts(*_winding_many(curve, np.atleast_1d(v)))
    return res[0] if scalar else res


# reports -----------------------------------------------------------------------------------


@dataclass
class OracleReport:
    kind: str
    checked: int = 0
    violations: list = field(default_factory=list)
    indeterminate: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def records(self):
        for verdict, items in (("violation", self.violations), ("indeterminate", self.indeterminate)):
            for r in items:
                z, v = complex(r["z"]), complex(r["value"])
                yield {"check": self.kind, "verdict": verdict, "z": [z.real, z.imag], "value": [v.real, v.imag]}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records())


def write_jsonl(reports: Iterable[OracleReport], path) -> int:
    n = 0
    with open(path, "w") as fh:
        for rep in reports:
            text = rep.to_jsonl()
            n += text.count("\n")
            fh.write(text)
    return n


def check_subordination(spec: PsiSpec, f: MemberFn, radii=(0.3, 0.6, 0.9), angles: int = 256, steps: int = 6) -> OracleReport:
    """Pointwise test of ``(z f'/f - 1)(z) in psi(rho D)`` for ``rho`` from ``|z|`` toward 1.

    By the subordination principle the value should already sit inside the
    curve at ``rho = |z|``; ``rho`` escalates to ``1 - 1e-3`` before a
    sample is declared a violation.
    """
    rep = OracleReport("subordination")
    theta = np.linspace(0.0, 2 * math.pi, angles, endpoint=False)
    df = ser.derivative(f.series)
    for r in radii:
        z = r * np.exp(1j * theta)
        vals = np.asarray(f.log_derivative_minus_one(z))
        err = _log_derivative_error(f.series, df, z, vals)
        pending = list(range(len(z)))
        final = {}
        for rho in np.linspace(r, 1 - EDGE_MARGIN, steps):
            verdicts = region_membership(spec, vals[pending], float(rho))
            final.update(zip(pending, verdicts))
            pending = [i for i, v in zip(pending, verdicts) if v.status != "inside"]
            if not pending:
                break
        rep.checked += len(z)
        for i in pending:
            v = final[i]
            rec = {"z": z[i], "value": vals[i], "winding": v.winding}
            # a truncated series only proves a violation if its value is accurate
            sure = v.status == "outside" and err[i] < EPS_BOUNDARY
            (rep.violations if sure else rep.indeterminate).append(rec)
    return rep


def _log_derivative_error(s: Series, ds: Series, z, vals):
    """Bound on the truncation error of ``z f'/f - 1`` from the series tails."""
    r = float(np.abs(z).max())
    t, dt = ser.tail_bound(s, r), ser.tail_bound(ds, r)
    if t is None or dt is None:
        return np.full(len(z), np.inf)
    fz = np.abs(s.to_float()(z))
    with np.errstate(divide="ignore"):
        return (r * dt + np.abs(vals + 1) * t) / fz


# Schwarz functions ----------------------------------------------------------------------------


def schur_to_schwarz(gammas, order: int = SCHWARZ_ORDER) -> Series:
    """``z phi(z)`` where ``phi`` has Schur parameters ``gammas`` and then 0."""
    phi = Series.zeros(order)
    for g in reversed(list(gammas)):
        zphi = ser.shift(phi, 1).truncate(order)
        num = zphi + Series([g] + [0] * order, exact=False)
        den = Series.one(order) + ser.scale(zphi, np.conj(g))
        phi = ser.divide(num, den)
    return ser.shift(phi, 1).truncate(order)


@dataclass(frozen=True, eq=False)
class SchwarzSample:
    """A Schwarz function with prescribed ``(t, x, y)`` body coordinates."""

    t: float
    x: complex
    y: complex
    gamma3: complex = 0j
    phase: float = 0.0
    order: int = SCHWARZ_ORDER

    @property
    def params(self):
        return (self.t, self.x, self.y)

    @property
    def coefficients(self):
        """``(c1, c2, c3)`` after the phase rotation ``omega(e^{i phase} z)``."""
        t, x, y = self.t, self.x, self.y
        s = 1 - t * t
        c = (t, s * x, s * (1 - abs(x) ** 2) * y - np.conj(t) * s * x * x)
        return tuple(complex(ck * np.exp(1j * self.phase * (k + 1))) for k, ck in enumerate(c))

    def omega(self, order: Optional[int] = None) -> Series:
        n = self.order if order is None else order
        w = schur_to_schwarz((self.t, self.x, self.y, self.gamma3), n)
        k = np.arange(n + 1)
        return Series(w.coeffs * np.exp(1j * self.phase * k), exact=False)

    def body_slack(self) -> float:
        """``(1-|c1|^2)^2 - |c2|^2 - |c3(1-|c1|^2) + conj(c1) c2^2|`` (nonnegative)."""
        c1, c2, c3 = self.coefficients
        s = 1 - abs(c1) ** 2
        return s * s - abs(c2) ** 2 - abs(c3 * s + np.conj(c1) * c2 * c2)


def _disk(rng):
    return math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())


def sample_schwarz(rng_seed: int, order: int = SCHWARZ_ORDER) -> SchwarzSample:
    rng = np.random.default_rng(rng_seed)
    t = float(rng.uniform())
    x, y, g3 = _disk(rng), _disk(rng), _disk(rng)
    return SchwarzSample(t, complex(x), complex(y), complex(g3), float(rng.uniform(0, 2 * math.pi)), order)


def schwarz_member(spec: PsiSpec, sample: SchwarzSample, order: Optional[int] = None) -> MemberFn:
    return coeffs_from_schwarz(spec, sample.omega(order))


# batched coefficient route ---------------------------------------------------------------------


def _bmul(a, b, K):
    out = np.zeros(a.shape[:-1] + (K + 1,), dtype=complex)
    for i in range(K + 1):
        out[..., i:] += a[..., i : i + 1] * b[..., : K + 1 - i]
    return out


def _bexp(a, K):
    # e = exp(a) with a[...,0] = 0:  n e_n = sum_k k a_k e_{n-k}
    e = np.zeros_like(a)
    e[..., 0] = 1.0
    for n in range(1, K + 1):
        k = np.arange(1, n + 1)
        e[..., n] = (k * a[..., k] * e[..., n - k]).sum(axis=-1) / n
    return e


def member_coeffs_batch(A: np.ndarray, c1, c2, c3):
    """``(a2, a3, a4)`` of ``z exp(int psi(omega)/t)`` for arrays of ``(c1, c2, c3)``."""
    c1, c2, c3 = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (c1, c2, c3)))
    K = 3
    w = np.stack([np.zeros_like(c1), c1, c2, c3], axis=-1)
    p = np.zeros_like(w)
    wk = np.zeros_like(w)
    wk[..., 0] = 1.0
    for k in range(1, K + 1):
        wk = _bmul(wk, w, K)
        p = p + A[k] * wk
    q = np.zeros_like(p)
    q[..., 1:] = p[..., 1:] / np.arange(1, K + 1)
    e = _bexp(q, K)
    return e[..., 1], e[..., 2], e[..., 3]


def _body_point(t, rho, ax, ay):
    x = rho * np.exp(1j * ax)
    y = np.exp(1j * ay)
    s = 1 - t * t
    return t, s * x, s * (1 - rho * rho) * y - t * s * x * x, x, y


def maximize_functional_bruteforce(spec: PsiSpec, which: str, grid_density: int = 12, nu=None, seed: int = 0):
    """Maximum of a coefficient functional over the Schwarz coefficient body.

    Samples ``t`` in ``[0, 1]``, ``x`` on a polar grid and ``y`` on the unit
    circle, then polishes the best cells with Nelder-Mead.  Returns
    ``(max, SchwarzSample)``; the witness re-evaluates through
    :func:`coeffs_from_schwarz`.
    """
    name, parsed = parse_functional(which)
    nu = parsed if parsed is not None else nu
    if name not in FUNCTIONALS:
        raise InputError(f"unknown functional {which!r}")
    A = np.asarray(psi_taylor(spec, 3, exact=False).coeffs)
    d = max(int(grid_density), 2)
    t = np.linspace(0, 1, d + 1)[:, None, None, None]
    rho = np.linspace(0, 1, d + 1)[None, :, None, None]
    ax = np.linspace(0, 2 * math.pi, 2 * d, endpoint=False)[None, None, :, None]
    ay = np.linspace(0, 2 * math.pi, 2 * d, endpoint=False)[None, None, None, :]
    c1, c2, c3, _, _ = _body_point(t, rho, ax, ay)
    vals = functional_value(*member_coeffs_batch(A, c1, c2, c3), name, nu)
    vals = np.broadcast_to(vals, np.broadcast_shapes(t.shape, rho.shape, ax.shape, ay.shape))

    def F(p):
        tt = min(max(p[0], 0.0), 1.0)
        rr = min(max(p[1], 0.0), 1.0)
        cc = _body_point(tt, rr, p[2], p[3])
        return float(functional_value(*member_coeffs_batch(A, *cc[:3]), name, nu))

    grids = (t.ravel(), rho.ravel(), ax.ravel(), ay.ravel())
    best, arg = -1.0, None
    for flat in np.argsort(vals.ravel())[-4:][::-1]:
        idx = np.unravel_index(flat, vals.shape)
        p0 = np.array([g[i] for g, i in zip(grids, idx)])
        res = minimize(lambda p: -F(p), p0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 6000})
        for cand in (p0, res.x):
            v = F(cand)
            if v > best:
                best, arg = v, cand
    tt, rr = min(max(arg[0], 0.0), 1.0), min(max(arg[1], 0.0), 1.0)
    _, _, _, x, y = _body_point(tt, rr, arg[2], arg[3])
    witness = SchwarzSample(float(tt), complex(x), complex(y), 0j, 0.0, order=8)
    return best, witness


def witness_value(spec: PsiSpec, which: str, witness: SchwarzSample, nu=None):
    """Re-evaluate a functional on the genuine member built from ``witness``."""
    f = coeffs_from_schwarz(spec, witness.omega(8))
    return float(evaluate_functional(f, which, nu))


# sign grids ----------------------------------------------------------------------------------------


def kappa_eval(eta: float, z):
    """``z exp(z/(1 + eta z)^2)``."""
    z = np.asarray(z, dtype=complex)
    return z * np.exp(z / (1 + eta * z) ** 2)


def polar_grid(resolution: int):
    r = (1 - EDGE_MARGIN) * np.arange(1, resolution + 1) / resolution
    theta = 2 * math.pi * np.arange(resolution) / resolution
    return r[:, None] * np.exp(1j * theta[None, :])


def f_over_z(target: str, z, beta: float = None, eta: float = None, member: MemberFn = None, spec: PsiSpec = None):
    """``f(z)/z`` for the grid targets, finite at ``z = 0``."""
    z = np.asarray(z, dtype=complex)
    if target == "booth_fhat":
        if beta is None:
            raise InputError("booth_fhat needs beta")
        if beta == 0:
            return np.exp(z)
        sb = math.sqrt(beta)
        return ((1 + sb * z) / (1 - sb * z)) ** (1 / (2 * sb))
    if target == "kappa":
        if eta is None:
            raise InputError("kappa needs eta")
        return np.exp(z / (1 + eta * z) ** 2)
    if target == "member":
        return ser.unshift(member.series, 1).to_float()(z)
    if target == "extremal":
        return np.exp(integral_psi_over_t(spec, z))
    raise InputError(f"unknown target {target!r}")


def sign_grid(target: str, resolution: int = 512, beta: float = None, eta: float = None, member: MemberFn = None,
              predicate: str = "re_f_over_z_positive", spec: PsiSpec = None):
    """Scan ``Re(f(z)/z) > 0`` over a polar grid of radius ``1 - 1e-3``.

    ``target`` is ``booth_fhat`` (needs ``beta``), ``kappa`` (needs ``eta``),
    ``member`` or ``extremal`` (needs ``spec``).  Returns
    ``(holds_everywhere, counterexample)`` where the counterexample is the
    first violation in (radius, angle) index order.
    """
    if resolution < 64:
        raise InputError("resolution must be at least 64")
    if predicate != "re_f_over_z_positive":
        raise InputError(f"unknown predicate {predicate!r}")
    z = polar_grid(resolution)
    q = f_over_z(target, z, beta=beta, eta=eta, member=member, spec=spec)
    bad = ~(np.real(q) > 0)
    if not bad.any():
        return True, None
    i, j = np.argwhere(bad)[0]
    return False, complex(z[i, j])


# covering -----------------------------------------------------------------------------------------


def winding_about(f_eval: Callable, w, rho: float):
    """Winding numbers of ``f(rho e^{i theta})`` about the points ``w``."""
    curve = lambda th: f_eval(rho * np.exp(1j * th))
    return _winding_many(curve, np.atleast_1d(w))


def covering_check(spec: PsiSpec, f: MemberFn, samples: int = 64, rhos=(0.9, 0.99, 0.999)) -> OracleReport:
    """Points with ``|w| < r*(1 - 1e-3)`` should be enclosed by ``f(rho T)`` for ``rho`` near 1."""
    rep = OracleReport("covering")
    rstar = koebe_radius(spec)
    n_ang = max(int(round(math.sqrt(samples))), 1)
    n_rad = max(samples // n_ang, 1)
    rad = rstar * (1 - EDGE_MARGIN) * np.arange(n_rad) / n_rad
    ang = 2 * math.pi * np.arange(n_ang) / n_ang
    w = (rad[:, None] * np.exp(1j * ang[None, :])).ravel()
    w = np.unique(np.round(w, 15))
    pending = np.arange(len(w))
    for rho in rhos:
        wn, _, dist, ok = winding_about(f, w[pending], rho)
        covered = (wn >= 1) & ok & (dist > EPS_BOUNDARY)
        pending = pending[~covered]
        if not len(pending):
            break
    rep.checked = len(w)
    for i in pending:
        rep.violations.append({"z": w[i], "value": w[i]})
    return rep
