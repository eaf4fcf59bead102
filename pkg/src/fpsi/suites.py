"""Seeded verification runs shared by the command line and the test-suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .extremal import extremal_function, growth_bounds
from .functionals import bound_for, evaluate_functional, hankel2_cross_check
from .oracle import check_subordination, sample_schwarz, schwarz_member
from .polyanalytic import construct_sense_preserving, factorization_sides
from .psi import PsiSpec
from .series import Series

GROWTH_RADII = (0.2, 0.5, 0.8)
NU_GRID = (-1.0, 0.0, 0.5, 1.0, 2.0)
SUITES = ("subordination", "growth", "functional-dominance", "majorant-factorization", "hankel-oracle")


@dataclass
class SuiteResult:
    suite: str
    checked: int = 0
    failures: int = 0
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def fail(self, **rec):
        self.failures += 1
        self.records.append({"suite": self.suite, "verdict": "violation", **rec})


def _cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def run_subordination(spec: PsiSpec, samples: int = 10, seed: int = 0, order: int = 256) -> SuiteResult:
    res = SuiteResult("subordination")
    members = [extremal_function(spec, order)]
    members += [schwarz_member(spec, sample_schwarz(seed + i, order)) for i in range(samples)]
    for k, f in enumerate(members):
        rep = check_subordination(spec, f, angles=128)
        res.checked += rep.checked
        for r in rep.violations:
            res.fail(member=k, z=_cplx(r["z"]), value=_cplx(r["value"]))
        for r in rep.indeterminate:
            res.records.append({"suite": res.suite, "verdict": "indeterminate", "member": k, "z": _cplx(r["z"])})
    return res


def run_growth(spec: PsiSpec, samples: int = 50, seed: int = 0, radii=GROWTH_RADII, angles: int = 64, order: int = 256) -> SuiteResult:
    """``|f(r e^{i theta})|`` against the growth sandwich for seeded Schwarz members."""
    res = SuiteResult("growth")
    bounds = {r: growth_bounds(spec, r) for r in radii}
    theta = np.linspace(0, 2 * math.pi, angles, endpoint=False)
    for i in range(samples):
        f = schwarz_member(spec, sample_schwarz(seed + i, order))
        for r, b in bounds.items():
            z = r * np.exp(1j * theta)
            mod = np.abs(f.series(z))
            bad = (mod < b.lower * (1 - 1e-9)) | (mod > b.upper * (1 + 1e-9))
            res.checked += len(z)
            for j in np.flatnonzero(bad):
                res.fail(member=i, z=_cplx(z[j]), modulus=float(mod[j]), lower=b.lower, upper=b.upper)
    return res


def run_functional_dominance(spec: PsiSpec, samples: int = 200, seed: int = 0, nus=NU_GRID, tol: float = 1e-8) -> SuiteResult:
    res = SuiteResult("functional-dominance")
    checks = [(w, None) for w in ("a2", "a3", "a4", "zalcman", "hankel2")] + [("fekete", nu) for nu in nus]
    bounds = {(w, nu): float(bound_for(spec, w, nu).value) for w, nu in checks}
    for i in range(samples):
        f = schwarz_member(spec, sample_schwarz(seed + i, 8))
        for w, nu in checks:
            v = float(evaluate_functional(f, w, nu))
            res.checked += 1
            if v > bounds[(w, nu)] + tol:
                res.fail(member=i, functional=w, nu=nu, value=v, bound=bounds[(w, nu)])
    return res


def random_dilatation(rng: np.random.Generator, degree: int) -> Series:
    """A random polynomial scaled so that its maximum on a fine circle grid is below 1."""
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    circle = np.exp(2j * math.pi * np.arange(4096) / 4096)
    peak = np.abs(np.polyval(c[::-1], circle)).max()
    return Series(c / peak * rng.uniform(0.5, 1.0), exact=False)


def run_majorant_factorization(spec: PsiSpec, samples: int = 20, seed: int = 0, radii=(0.1, 0.2, 1 / 3)) -> SuiteResult:
    res = SuiteResult("majorant-factorization")
    rng = np.random.default_rng(seed)
    for i in range(samples):
        f0 = schwarz_member(spec, sample_schwarz(seed + i, 16))
        alpha = int(rng.integers(2, 6))
        F = construct_sense_preserving(f0, [random_dilatation(rng, int(rng.integers(0, 6))) for _ in range(alpha - 1)])
        m = int(rng.integers(3, F.degree + 1))
        for r in radii:
            lhs, rhs = factorization_sides(F, 1, m, r)
            res.checked += 1
            if lhs > rhs + 1e-12 * max(1.0, rhs):
                res.fail(sample=i, alpha=alpha, m=m, r=r, lhs=lhs, rhs=rhs)
    return res


def run_hankel_oracle(spec: PsiSpec, seed: int = 0, grid_density: int = 12) -> SuiteResult:
    res = SuiteResult("hankel-oracle", checked=1)
    rep = hankel2_cross_check(spec, grid_density, seed)
    rec = {"suite": res.suite, "verdict": "report", "spec": spec.label, **rep}
    res.records.append(rec)
    if rep["exceeds"]:
        res.failures += 1
        rec["verdict"] = "violation"
    return res


def run_suite(name: str, spec: PsiSpec, samples=None, seed: int = 0) -> SuiteResult:
    kw = {"seed": seed}
    if samples is not None and name != "hankel-oracle":
        kw["samples"] = samples
    fn = {
        "subordination": run_subordination,
        "growth": run_growth,
        "functional-dominance": run_functional_dominance,
        "majorant-factorization": run_majorant_factorization,
        "hankel-oracle": run_hankel_oracle,
    }[name]
    return fn(spec, **kw)
