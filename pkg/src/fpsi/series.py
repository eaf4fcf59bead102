"""Truncated power series in one complex variable.

A :class:`Series` holds the coefficients ``c_0 .. c_T`` of a power series
truncated at degree ``T`` (its *order*).  Coefficients above the order are
unknown, not zero, so every operation returns a result whose order never
exceeds what its operands determine.

Two coefficient domains are supported:

* floating point (``complex128``), the production path;
* exact rationals (:class:`fractions.Fraction`, stored in an object array),
  used whenever every input coefficient is an ``int`` or ``Fraction``.

Mixing the two promotes to floating point.

    >>> z = Series.z(3)
    >>> print(divide(z, Series([1, -1, 0, 0])).coeffs)
    [Fraction(0, 1) Fraction(1, 1) Fraction(1, 1) Fraction(1, 1)]
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import (
    BadRange,
    ConstantTermNotZero,
    DivisionByZeroConstantTerm,
    InnerNotVanishing,
    InputError,
    NonFiniteCoefficient,
    NotNormalized,
)

TAU_ZERO = 1e-14
TAU_SERIES = 1e-12
DEFAULT_ORDER = 64


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (Fraction, numbers.Integral)) and not isinstance(x, bool)


class Series:
    """Immutable truncated power series ``c_0 + c_1 z + ... + c_T z^T``."""

    __slots__ = ("_c", "_exact")

    def __init__(self, coeffs: Iterable, exact: Optional[bool] = None):
        values = list(coeffs.tolist() if isinstance(coeffs, np.ndarray) else coeffs)
        if not values:
            raise InputError("a series needs at least the constant coefficient")
        if exact is None:
            exact = all(_is_exact_scalar(v) for v in values)
        if exact:
            c = np.empty(len(values), dtype=object)
            for i, v in enumerate(values):
                if not _is_exact_scalar(v):
                    raise InputError(f"coefficient {v!r} is not rational")
                c[i] = v if type(v) is Fraction else Fraction(int(v))
        else:
            c = np.asarray(
                [complex(v) for v in values] if any(isinstance(v, Fraction) for v in values) else values,
                dtype=np.complex128,
            )
            if not np.all(np.isfinite(c)):
                raise NonFiniteCoefficient("series coefficients must be finite")
        c.flags.writeable = False
        self._c = c
        self._exact = bool(exact)

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, order: int, exact: bool = True) -> "Series":
        return cls([0] * (order + 1)) if exact else cls(np.zeros(order + 1, complex))

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1) -> "Series":
        """``coeff * z**k`` known exactly up to ``order``."""
        c = [0] * (order + 1)
        if k <= order:
            c[k] = coeff
        return cls(c)

    @classmethod
    def z(cls, order: int) -> "Series":
        return cls.monomial(1, order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls.monomial(0, order)

    def _like(self, coeffs, exact: Optional[bool] = None) -> "Series":
        return Series(coeffs, exact=self._exact if exact is None else exact)

    # basic protocol --------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def exact(self) -> bool:
        return self._exact

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k):
        return self._c[k]

    def __repr__(self) -> str:
        kind = "exact" if self._exact else "float"
        return f"Series({self._c.tolist()!r}, order={self.order}, {kind})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self._c, other._c))

    __hash__ = None

    def to_float(self) -> "Series":
        if not self._exact:
            return self
        return Series(np.array([complex(v) for v in self._c]), exact=False)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise BadRange(f"cannot extend order {self.order} to {order}")
        return self._like(self._c[: order + 1])

    def allclose(self, other: "Series", tol: float = TAU_SERIES) -> bool:
        n = min(self.order, other.order) + 1
        a = self.to_float()._c[:n]
        b = other.to_float()._c[:n]
        return bool(np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.abs(b))))

    def abs_coeffs(self) -> "Series":
        """The majorant series ``sum |c_n| z^n``."""
        if self._exact:
            return self._like([abs(v) for v in self._c])
        return self._like(np.abs(self._c).astype(complex))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        return arith(self, _as_series(other, self), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return arith(self, _as_series(other, self), "sub")

    def __rsub__(self, other):
        return arith(_as_series(other, self), self, "sub")

    def __mul__(self, other):
        if isinstance(other, Series):
            return arith(self, other, "mul")
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return arith(self, other, "div")
        return scale(self, 1 / Fraction(other) if _is_exact_scalar(other) else 1 / other)

    def __neg__(self):
        return scale(self, -1)

    def __call__(self, z):
        return horner(self, z)


def _as_series(x, like: Series) -> Series:
    if isinstance(x, Series):
        return x
    c = [0] * (like.order + 1)
    c[0] = x
    return Series(c)


def _promote(a: Series, b: Series):
    if a.exact and b.exact:
        return a._c, b._c, True
    return a.to_float()._c, b.to_float()._c, False


def scale(a: Series, k) -> Series:
    if a.exact and _is_exact_scalar(k):
        return a._like(a._c * Fraction(k))
    return Series(a.to_float()._c * complex(k), exact=False)


def arith(a: Series, b: Series, kind: str) -> Series:
    """Add, subtract, multiply or divide two series at their common order."""
    n = min(a.order, b.order) + 1
    ca, cb, exact = _promote(a, b)
    ca, cb = ca[:n], cb[:n]
    if kind == "add":
        out = ca + cb
    elif kind == "sub":
        out = ca - cb
    elif kind == "mul":
        out = np.convolve(ca, cb)[:n]
    elif kind == "div":
        b0 = cb[0]
        if abs(b0) < TAU_ZERO:
            raise DivisionByZeroConstantTerm("divisor has a vanishing constant term")
        out = np.empty(n, dtype=object if exact else complex)
        for k in range(n):
            acc = ca[k] - (np.dot(cb[1 : k + 1], out[k - 1 :: -1][:k]) if k else 0)
            out[k] = acc / b0
    else:
        raise InputError(f"unknown arithmetic kind {kind!r}")
    result = Series(out, exact=exact)
    assert result.order == n - 1
    return result


def divide(a: Series, b: Series) -> Series:
    return arith(a, b, "div")


# transcendental operations -------------------------------------------------


def exp(a: Series) -> Series:
    c = a._c
    n = len(c)
    if a.exact:
        if c[0] != 0:
            raise InputError("exact exp needs a vanishing constant term")
        pre = Fraction(1)
    else:
        pre = np.exp(c[0])
    k = np.arange(n)
    kc = c * (k if not a.exact else [Fraction(int(i)) for i in k])
    out = np.empty(n, dtype=object if a.exact else complex)
    out[0] = Fraction(1) if a.exact else 1.0
    for m in range(1, n):
        out[m] = np.dot(kc[1 : m + 1], out[m - 1 :: -1][:m]) / m
    return a._like(out * pre)


def log(a: Series) -> Series:
    c = a._c
    if abs(c[0] - 1) > TAU_ZERO:
        raise NotNormalized("log needs a series with constant term 1")
    n = len(c)
    out = np.empty(n, dtype=object if a.exact else complex)
    out[0] = Fraction(0) if a.exact else 0.0
    kl = np.empty(n, dtype=out.dtype)
    kl[0] = out[0]
    for m in range(1, n):
        if m > 1:
            out[m] = c[m] - np.dot(kl[1:m], c[m - 1 : 0 : -1][: m - 1]) / m
        else:
            out[m] = c[m]
        kl[m] = m * out[m]
    return a._like(out)


def power(a: Series, exponent) -> Series:
    """``a**exponent`` for a normalized series (``c_0 = 1``)."""
    if abs(a._c[0] - 1) > TAU_ZERO:
        raise NotNormalized("pow needs a series with constant term 1")
    lg = log(a)
    if lg.exact and _is_exact_scalar(exponent):
        return exp(scale(lg, exponent))
    return exp(scale(lg.to_float(), exponent))


def exp_log_pow(a: Series, kind: str, exponent=None) -> Series:
    if kind == "exp":
        return exp(a)
    if kind == "log":
        return log(a)
    if kind == "pow":
        return power(a, exponent)
    raise InputError(f"unknown kind {kind!r}")


def compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(z))`` truncated at the common order; needs ``inner(0) = 0``."""
    if abs(inner._c[0]) > TAU_ZERO:
        raise InnerNotVanishing("inner series must vanish at the origin")
    order = min(outer.order, inner.order)
    inner = inner.truncate(order)
    acc = _as_series(outer._c[-1], inner)
    if outer.exact != inner.exact:
        acc = acc.to_float()
    for ck in outer._c[-2::-1]:
        acc = acc * inner + ck
    return acc


def integrate_div_t(a: Series) -> Series:
    """Term-wise ``int_0^z a(t)/t dt``."""
    if abs(a._c[0]) > TAU_ZERO:
        raise ConstantTermNotZero("a(t)/t must be analytic at the origin")
    out = [0 if a.exact else 0.0] + [a._c[k] / k for k in range(1, len(a._c))]
    return a._like(out)


def derivative(a: Series) -> Series:
    c = a._c
    if len(c) == 1:
        return a._like([0])
    return a._like([k * c[k] for k in range(1, len(c))])


def antiderivative(a: Series) -> Series:
    """``int_0^z a(t) dt``; the order grows by one."""
    c = a._c
    return a._like([0] + [c[k] / (k + 1) for k in range(len(c))])


def shift(a: Series, k: int) -> Series:
    """Exact multiplication by ``z**k``."""
    return a._like([0] * k + list(a._c))


def unshift(a: Series, k: int = 1) -> Series:
    """Exact division by ``z**k``; the low coefficients must vanish."""
    if any(abs(v) > TAU_ZERO for v in a._c[:k]):
        raise ConstantTermNotZero(f"series is not divisible by z^{k}")
    return a._like(a._c[k:])


def stretch(a: Series, k: int) -> Series:
    """Substitute ``z -> z**k``.  Known exactly up to degree ``k*(T+1) - 1``."""
    n = k * (a.order + 1)
    out = [0] * n
    for i, v in enumerate(a._c):
        out[k * i] = v
    return a._like(out)


def partial_sum(a: Series, K: int) -> Series:
    """Zero every coefficient above degree ``K``; ``K = 0`` gives the zero series."""
    if K > a.order or K < 0:
        raise BadRange(f"partial sum degree {K} outside 0..{a.order}")
    if K == 0:
        return a._like([0] * len(a), exact=a.exact)
    zero = Fraction(0) if a.exact else 0.0
    return a._like(list(a._c[: K + 1]) + [zero] * (a.order - K))


# evaluation -------------------------------------------------------------------


def horner(a: Series, z):
    if a.exact and _is_exact_scalar(z):
        acc = Fraction(0)
        for ck in a._c[::-1]:
            acc = acc * z + ck
        return acc
    c = a.to_float()._c
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for ck in c[::-1]:
        acc = acc * z + ck
    return acc if acc.ndim else complex(acc)


def tail_bound(a: Series, r: float) -> Optional[float]:
    """Estimate of ``sum_{n>T} |c_n| r^n`` from the trailing coefficients.

    Returns ``None`` (tail unknown) when the local ratio test does not
    converge at ``r``.
    """
    mags = np.abs(a.to_float()._c)
    T = a.order
    w = max(4, min(16, T // 4))
    idx = np.arange(max(0, T - w + 1), T + 1)
    window = mags[idx]
    nz = idx[window > 0]
    if len(nz) == 0:
        return 0.0 if T >= 8 else None
    if len(nz) == 1:
        return None
    rho = max(
        (mags[j] / mags[i]) ** (1.0 / (j - i)) for i, j in zip(nz[:-1], nz[1:])
    )
    q = rho * r
    if q >= 1.0:
        return None
    lead = max(mags[j] * r**j * q ** (T - j) for j in nz)
    return float(lead * q / (1.0 - q))


def evaluate(a: Series, z, radius_hint: Optional[float] = None):
    """Value of the truncation at ``z`` and a tail estimate (``None`` if unknown)."""
    r = float(np.max(np.abs(z))) if radius_hint is None else radius_hint
    return horner(a, z), tail_bound(a, r)


def majorant_partial(a: Series, N: int, m: int, r: float) -> float:
    """``sum_{n=N}^{m} |c_n| r^n``."""
    if N < 0 or N > m or m > a.order:
        raise BadRange(f"need 0 <= N <= m <= {a.order}, got N={N}, m={m}")
    mags = np.abs(a.to_float()._c[N : m + 1])
    return float(np.sum(mags * float(r) ** np.arange(N, m + 1)))


def geometric(order: int, ratio=1) -> Series:
    """``1/(1 - ratio z)``."""
    return Series([ratio**k if _is_exact_scalar(ratio) else ratio**k for k in range(order + 1)])


def exp_series(order: int) -> Series:
    return Series([Fraction(1, math.factorial(k)) for k in range(order + 1)])
