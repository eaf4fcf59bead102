"""Sharp bounds for early coefficient functionals of F(psi).

Everything is expressed through the first three Taylor coefficients
``A_1, A_2, A_3`` of psi.  The |a_4| and Zalcman bounds reduce to the
Prokhorov-type quantity

    H(q1, q2) = max |c3 + q1 c1 c2 + q2 c1^3|

over Schwarz functions ``omega = c1 z + c2 z^2 + c3 z^3 + ...``, which is
computed here by a grid search over the coefficient body followed by a
Nelder-Mead polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .errors import AmbiguousCase, InputError, OrderTooLow, ParamOutOfRange
from .extremal import MemberFn
from .psi import PsiSpec, psi_taylor

CASE_TOL = 1e-10

FUNCTIONALS = ("a2", "a3", "a4", "fekete", "zalcman", "hankel2")


@dataclass(frozen=True)
class FunctionalBound:
    value: float
    branch: str
    witness: str
    inputs: tuple
    kind: str = ""
    params: dict = field(default_factory=dict)


# Prokhorov H --------------------------------------------------------------------------


def _body_objective(q1, q2, t, rho, phi):
    """``|K| + (1 - t^2)(1 - rho^2)``: the value maximized over ``|y| = 1``."""
    x = rho * np.exp(1j * phi)
    s = 1 - t * t
    K = q2 * t**3 + t * s * (q1 * x - x * x)
    return np.abs(K) + s * (1 - rho * rho)


def _grid_search(q1, q2, nt=200, nr=100, nphi=36):
    t = np.linspace(0.0, 1.0, nt)[:, None, None]
    rho = np.linspace(0.0, 1.0, nr)[None, :, None]
    phi = np.linspace(0.0, 2 * math.pi, nphi, endpoint=False)[None, None, :]
    vals = _body_objective(q1, q2, t, rho, phi)
    flat = vals.ravel()
    top = np.argsort(flat)[-6:][::-1]
    out = []
    for idx in top:
        i, j, k = np.unravel_index(idx, vals.shape)
        out.append((float(t[i, 0, 0]), float(rho[0, j, 0]), float(phi[0, 0, k])))
    return out, float(flat[top[0]])


def _clip_params(p):
    t = min(max(p[0], 0.0), 1.0)
    rho = min(max(p[1], 0.0), 1.0)
    return t, rho, p[2]


@lru_cache(maxsize=4096)
def _prokhorov_oracle(q1: float, q2: float):
    starts, best = _grid_search(q1, q2)
    arg = starts[0]
    f = lambda p: -float(_body_objective(q1, q2, *_clip_params(p)))
    for s in starts:
        res = minimize(f, np.array(s), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        val = -res.fun
        if val > best:
            best, arg = val, _clip_params(res.x)
    # corners that the polish can miss by clipping
    for cand in ((1.0, 0.0, 0.0), (0.0, 0.0, 0.0)):
        v = float(_body_objective(q1, q2, *cand))
        if v > best:
            best, arg = v, cand
    return best, tuple(float(a) for a in arg)


def prokhorov_H(q1: float, q2: float, mode: str = "oracle") -> float:
    """``max |c3 + q1 c1 c2 + q2 c1^3|`` over Schwarz functions (real ``q1``, ``q2``)."""
    if mode != "oracle":
        raise InputError("only the oracle evaluation of H is available")
    return _prokhorov_oracle(float(q1), float(q2))[0]


def prokhorov_argmax(q1: float, q2: float):
    """``(t, |x|, arg x)`` attaining :func:`prokhorov_H`, with ``y`` aligned to ``K``."""
    return _prokhorov_oracle(float(q1), float(q2))[1]


# coefficient inputs --------------------------------------------------------------------


def psi_inputs(spec: PsiSpec, exact: Optional[bool] = None):
    """``(A_1, A_2, A_3)``, rotated by ``z -> -z`` when ``A_1 < 0``."""
    c = psi_taylor(spec, 3, exact=exact).coeffs
    A1, A2, A3 = c[1], c[2], c[3]
    if not isinstance(A1, Fraction):
        A1, A2, A3 = (complex(v) for v in (A1, A2, A3))
        if max(abs(A1.imag), abs(A2.imag), abs(A3.imag)) > 1e-14:
            raise ParamOutOfRange("functional bounds need real Taylor coefficients")
        A1, A2, A3 = A1.real, A2.real, A3.real
    if A1 == 0:
        raise ParamOutOfRange("A_1 must be nonzero")
    if A1 < 0:
        A1, A2, A3 = -A1, A2, -A3
    return A1, A2, A3


def a4_q(A1, A2, A3):
    return (4 * A2 + 3 * A1**2) / (2 * A1), (2 * A3 + A1**3 + 3 * A1 * A2) / (2 * A1)


def zalcman_q(A1, A2, A3, form: str = "derived"):
    """Prokhorov parameters for ``|a2 a3 - a4|``.

    ``a2 a3 - a4 = (p1^3 - p3)/3`` with ``p = psi(omega)``, which gives
    ``q1 = 2 A2/A1`` and ``q2 = (A3 - A1^3)/A1``.  ``form="printed"`` returns
    the published pair ``((A1^2 + 4A2)/(2A1), (A3 - A1^2)/A1)`` instead.
    """
    if form == "derived":
        return 2 * A2 / A1, (A3 - A1**3) / A1
    if form == "printed":
        return (A1**2 + 4 * A2) / (2 * A1), (A3 - A1**2) / A1
    raise InputError(f"unknown form {form!r}")


def _witness_of(q1, q2):
    t, rho, phi = prokhorov_argmax(q1, q2)
    return f"Schwarz body point t={t:.6g}, |x|={rho:.6g}, arg x={phi:.6g}"


# bounds ----------------------------------------------------------------------------------


def _a3_branch(A1, A2):
    s = A1**2 + A2
    if s >= A1:
        return s / 2, "(i)", "omega(z)=z"
    if s >= -A1:
        return A1 / 2, "(ii)", "omega(z)=z^2"
    return -s / 2, "(iii)", "omega(z)=z"


def initial_bounds(spec: PsiSpec):
    """Sharp bounds for ``|a_2|``, ``|a_3|`` and ``|a_4|``."""
    A1, A2, A3 = psi_inputs(spec)
    inputs = (A1, A2, A3)
    b2 = FunctionalBound(A1, "(i)", "omega(z)=z", inputs, "a2")
    v3, br3, w3 = _a3_branch(A1, A2)
    b3 = FunctionalBound(v3, br3, w3, inputs, "a3")
    q1, q2 = a4_q(*map(float, inputs))
    b4 = FunctionalBound(float(A1) / 3 * prokhorov_H(q1, q2), "(i)", _witness_of(q1, q2), inputs, "a4", {"q1": q1, "q2": q2})
    return b2, b3, b4


def fekete_szego_bound(spec: PsiSpec, nu) -> FunctionalBound:
    """Sharp bound for ``|a_3 - nu a_2^2|`` with its three branches in ``nu``."""
    A1, A2, A3 = psi_inputs(spec)
    s = A2 + (1 - 2 * nu) * A1**2
    lo = (A2 - A1 + A1**2) / (2 * A1**2)
    hi = (A2 + A1 + A1**2) / (2 * A1**2)
    if nu <= lo:
        val, br, w = s / 2, "(i)", "omega(z)=z"
    elif nu <= hi:
        val, br, w = A1 / 2, "(ii)", "omega(z)=z^2"
    else:
        val, br, w = -s / 2, "(iii)", "omega(z)=z"
    return FunctionalBound(val, br, w, (A1, A2, A3), "fekete", {"nu": nu, "nu_lo": lo, "nu_hi": hi})


def zalcman_bound(spec: PsiSpec, form: str = "derived") -> FunctionalBound:
    """``(A1/3) H(q1, q2)`` bounding ``|a_2 a_3 - a_4|``; see :func:`zalcman_q`."""
    A1, A2, A3 = psi_inputs(spec)
    q1, q2 = zalcman_q(*(float(v) for v in (A1, A2, A3)), form=form)
    val = float(A1) / 3 * prokhorov_H(q1, q2)
    return FunctionalBound(val, "(i)", _witness_of(q1, q2), (A1, A2, A3), "zalcman", {"q1": q1, "q2": q2, "form": form})


def hankel_M(A1, A2, A3):
    """``|A1^4 - 4 A1 A3 + 3 A2^2 + 6 A1^2 A2|`` as it enters the case split."""
    return abs(A1**4 - 4 * A1 * A3 + 3 * A2**2 + 6 * A1**2 * A2)


def hankel2_branch(A1, A2, A3, tol: float = CASE_TOL) -> str:
    """Which case of the ``|a_2 a_4 - a_3^2|`` bound applies.

    The bound maximizes ``A t^2 + B t + C`` over ``t = p^2`` in ``[0, 4]``
    with ``A = M - 2 A1 |A2| - A1^2``, ``B = 8 A1 (|A2| - A1)``,
    ``C = 48 A1^2``.  The interior-vertex case needs ``8A <= -B``, that is
    ``M <= A1 |A2| + 2 A1^2``.
    """
    M = hankel_M(A1, A2, A3)
    a2 = abs(A2)
    if a2 <= A1 + tol and M <= 3 * A1**2 + tol:
        return "(i)"
    if (a2 >= A1 - tol and M >= A1 * a2 + 2 * A1**2 - tol) or (a2 <= A1 + tol and M >= 3 * A1**2 - tol):
        return "(ii)"
    if a2 > A1 and M <= A1 * a2 + 2 * A1**2 + tol:
        return "(iii)"
    raise AmbiguousCase(f"no case applies for A=({A1}, {A2}, {A3}), M={M}")


def hankel2_bound(spec: PsiSpec) -> FunctionalBound:
    A1, A2, A3 = psi_inputs(spec)
    f1, f2, f3 = (float(v) for v in (A1, A2, A3))
    M = hankel_M(f1, f2, f3)
    br = hankel2_branch(f1, f2, f3)
    if br == "(i)":
        val, w = f1**2 / 4, "omega(z)=z^2"
    elif br == "(ii)":
        val, w = M / 12, "omega(z)=z"
    else:
        val = f1**2 / 4 - 4 * f1**2 * (abs(f2) - f1) ** 2 / (48 * (M - 2 * f1 * abs(f2) - f1**2))
        w = "interior p^2 = -B/(2A)"
    return FunctionalBound(val, br, w, (A1, A2, A3), "hankel2", {"M": M})


def branch_holds(b: FunctionalBound, tol: float = CASE_TOL) -> bool:
    """Re-evaluate the branch condition of ``b`` on its stored inputs."""
    A1, A2, A3 = (float(v) for v in b.inputs)
    if b.kind == "a3":
        s = A1**2 + A2
        return {"(i)": s >= A1 - tol, "(ii)": -A1 - tol <= s <= A1 + tol, "(iii)": s <= -A1 + tol}[b.branch]
    if b.kind == "fekete":
        nu, lo, hi = b.params["nu"], b.params["nu_lo"], b.params["nu_hi"]
        return {"(i)": nu <= lo + tol, "(ii)": lo - tol <= nu <= hi + tol, "(iii)": nu >= hi - tol}[b.branch]
    if b.kind == "hankel2":
        return hankel2_branch(A1, A2, A3, tol) == b.branch
    return b.branch == "(i)"


def hankel2_cross_check(spec: PsiSpec, grid_density: int = 12, seed: int = 0) -> dict:
    """Compare the case bound with the brute-force maximum over Schwarz members."""
    from .oracle import maximize_functional_bruteforce

    b = hankel2_bound(spec)
    brute, _ = maximize_functional_bruteforce(spec, "hankel2", grid_density, seed=seed)
    gap = (b.value - brute) / b.value if b.value else 0.0
    return {
        "bound": b.value,
        "branch": b.branch,
        "M": b.params["M"],
        "bruteforce": brute,
        "relative_gap": gap,
        "exceeds": brute > b.value + 1e-8,
        "flagged": abs(gap) > 0.02,
    }


def bound_for(spec: PsiSpec, which: str, nu=None) -> FunctionalBound:
    if which in ("a2", "a3", "a4"):
        return initial_bounds(spec)[("a2", "a3", "a4").index(which)]
    if which == "fekete":
        return fekete_szego_bound(spec, nu)
    if which == "zalcman":
        return zalcman_bound(spec)
    if which == "hankel2":
        return hankel2_bound(spec)
    raise InputError(f"unknown functional {which!r}")


# evaluation on members ---------------------------------------------------------------------


def parse_functional(which: str):
    """``"fekete(0.5)"`` -> ``("fekete", 0.5)``; other names pass through."""
    if which.startswith("fekete(") and which.endswith(")"):
        return "fekete", float(which[7:-1])
    return which, None


def functional_value(a2, a3, a4, which: str, nu=None):
    """The functional from raw coefficients (arrays broadcast)."""
    if which == "a2":
        return abs(a2)
    if which == "a3":
        return abs(a3)
    if which == "a4":
        return abs(a4)
    if which == "fekete":
        return abs(a3 - nu * a2 * a2)
    if which == "zalcman":
        return abs(a2 * a3 - a4)
    if which == "hankel2":
        return abs(a2 * a4 - a3 * a3)
    raise InputError(f"unknown functional {which!r}")


def evaluate_functional(f: MemberFn, which: str, nu=None):
    name, parsed = parse_functional(which)
    if parsed is not None:
        nu = parsed
    if name not in FUNCTIONALS:
        raise InputError(f"unknown functional {which!r}")
    if name == "fekete" and nu is None:
        raise InputError("fekete needs nu")
    if f.series.order < 4:
        raise OrderTooLow("functionals need coefficients through a_4")
    c = f.series.coeffs
    return functional_value(c[2], c[3], c[4], name, nu)
