"""Operator-monotone functions and their Morozova-Chentsov kernels.

Four families are supported, selected by a short string:

========  ===============================  ==========================
string    f(x)                             f(0)
========  ===============================  ==========================
sld       (1 + x) / 2                      1/2
wy        ((1 + sqrt x) / 2)^2             1/4
wyd:a     Wigner-Yanase-Dyson, 0 < a < 1   a (1 - a)
gwyd:a,b  generalized WYD, a, b > 0,       2ab if a + b < 1, else ab
          a + b <= 1
========  ===============================  ==========================

The kernel is ``c(x, y) = 1 / (y f(x/y))`` and the mean it induces is
``m(x, y) = y f(x/y) = 1 / c(x, y)``. Boundary values are taken
analytically: ``c(x, x) = 1/x``, ``c(x, 0) = 1/(x f(0))``, and the pair
(0, 0) has ``c = inf`` (``ZERO_WEIGHT``) whose ``(x - y)^2``-weighted
contribution is defined as 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT

__all__ = [
    "ZERO_WEIGHT",
    "MonotoneFunction",
    "construct_mcf",
    "parse_mcf",
    "c_value",
    "inverse_mean",
    "f_tilde_transform",
]

# c at the (0, 0) eigenvalue pair; only ever multiplied by (x - y)^2 = 0.
ZERO_WEIGHT = math.inf

_FAMILIES = ("sld", "wy", "wyd", "gwyd", "tilde")
_GRID = np.array([0.1, 0.2, 0.5, 0.8, 1.0, 1.25, 2.0, 5.0, 10.0])


@dataclass(frozen=True)
class MonotoneFunction:
    """One member of the supported operator-monotone families.

    Use :func:`construct_mcf` or :func:`parse_mcf` rather than the
    constructor; they check the parameter domain and the defining
    invariants. ``family == "tilde"`` is the transformed function of
    :func:`f_tilde_transform` and carries its parent in ``base``.
    """

    family: str
    alpha: float = 0.0
    beta: float = 0.0
    f0: float = 0.0
    base: "MonotoneFunction | None" = None

    @property
    def label(self) -> str:
        if self.family in ("sld", "wy"):
            return self.family
        if self.family == "wyd":
            return f"wyd:{self.alpha:g}"
        if self.family == "gwyd":
            return f"gwyd:{self.alpha:g},{self.beta:g}"
        return f"tilde({self.base.label})"

    def __str__(self) -> str:
        return self.label

    # -- f itself ---------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("f is only defined for x >= 0")
        if self.family == "sld":
            out = 0.5 * (1.0 + x)
        elif self.family == "tilde":
            b = self.base
            with np.errstate(divide="ignore", invalid="ignore"):
                out = 0.5 * ((x + 1.0) - (x - 1.0) ** 2 * b.f0 / b(x))
            out = np.where(x == 0, self.f0, out)
        else:
            out = _gwyd_f(x, self.alpha, self.beta)
            out = np.where(x == 0, self.f0, out)
        return out[()] if out.ndim == 0 else out

    # -- kernel, mean, weight -------------------------------------------------
    def c(self, x, y):
        """Morozova-Chentsov kernel, elementwise and symmetric."""
        x, y = _check_pair(x, y)
        if self.family == "tilde":
            with np.errstate(divide="ignore"):
                out = 1.0 / self.mean(x, y)
            return out
        hi = np.maximum(x, y)
        lo = np.minimum(x, y)
        out = np.empty(np.broadcast(x, y).shape)
        both_zero = hi == 0
        one_zero = (lo == 0) & ~both_zero
        near = ~both_zero & ~one_zero & (hi - lo <= DEFAULT.degenerate_rel * hi)
        general = ~(both_zero | one_zero | near)
        out[both_zero] = ZERO_WEIGHT
        out[one_zero] = 1.0 / (hi[one_zero] * self.f0)
        out[near] = 2.0 / (hi[near] + lo[near])
        if np.any(general):
            h, l = hi[general], lo[general]
            if self.family == "sld":
                out[general] = 2.0 / (h + l)
            else:
                out[general] = _gwyd_c(l, h, self.alpha, self.beta)
        return out[()] if out.ndim == 0 else out

    def mean(self, x, y):
        """``y f(x/y)``, the reciprocal of :meth:`c`; 0 at the pair (0, 0)."""
        x, y = _check_pair(x, y)
        if self.family == "tilde":
            b = self.base
            out = 0.5 * (x + y) - 0.5 * b.f0 * b.weight(x, y)
            # exact limit m(x, 0) = x * f~(0) = 0
            out = np.where((x == 0) | (y == 0), 0.0, out)
            return out[()] if out.ndim == 0 else out
        c = self.c(x, y)
        out = np.where(np.isinf(c), 0.0, 1.0 / c)
        return out[()] if out.ndim == 0 else out

    def weight(self, x, y):
        """``(x - y)^2 c(x, y)`` with the (0, 0) pair contributing 0."""
        x, y = _check_pair(x, y)
        c = self.c(x, y)
        diff2 = (x - y) ** 2
        out = np.where(diff2 == 0, 0.0, diff2 * np.where(np.isinf(c), 0.0, c))
        return out[()] if out.ndim == 0 else out


def _check_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("kernel arguments must be nonnegative")
    x, y = np.broadcast_arrays(x, y)
    return x, y


def _gwyd_f(x, a, b):
    # expm1 form of 2ab(x-1)^2 / ((x^a - 1)(x^b - 1)(x^g + 1)), no cancellation near x = 1
    g = 1.0 - a - b
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.log(x)
        num = 2.0 * a * b * np.expm1(t) ** 2
        den = np.expm1(a * t) * np.expm1(b * t) * (np.exp(g * t) + 1.0)
        out = num / den
    return np.where(t == 0, 1.0, out)


def _gwyd_c(lo, hi, a, b):
    # c = (1/hi) * expm1(at) expm1(bt) (e^{gt} + 1) / (2ab expm1(t)^2), t = log(lo/hi) < 0
    g = 1.0 - a - b
    t = np.log(lo / hi)
    num = np.expm1(a * t) * np.expm1(b * t) * (np.exp(g * t) + 1.0)
    return num / (2.0 * a * b * np.expm1(t) ** 2) / hi


def _analytic_f0(family: str, a: float, b: float) -> float:
    if family == "sld":
        return 0.5
    if a + b < 1.0 - 1e-15:
        return 2.0 * a * b
    return a * b


def _check_invariants(f: MonotoneFunction) -> None:
    if not abs(float(f(1.0)) - 1.0) <= 1e-12:
        raise ValueError(f"{f.label}: f(1) = {float(f(1.0))} != 1")
    vals = f(_GRID)
    sym = _GRID * f(1.0 / _GRID)
    if np.max(np.abs(vals - sym)) > 1e-10:
        raise ValueError(f"{f.label}: f(x) != x f(1/x) on the test grid")
    if np.any(np.diff(vals) < -1e-12):
        raise ValueError(f"{f.label}: f is not monotone on the test grid")
    if not f.f0 > 0:
        raise ValueError(f"{f.label}: f(0) must be positive")
    # Numeric cross-check of the analytic f(0). With u = x^e, e the smallest
    # positive exponent among a, b, 1 - a - b, the product form gives
    # |f(x)/f(0) - 1| <= 1/(1 - u)^2 - 1, so the gap is widened by that much.
    x = 1e-8
    rel = abs(float(f(x)) - f.f0) / f.f0
    if f.family == "sld":
        allowed = 1e-4
    else:
        exps = [e for e in (f.alpha, f.beta, 1.0 - f.alpha - f.beta) if e > 1e-15]
        u = x ** min(exps)
        allowed = 1e-4 + 1.0 / (1.0 - u) ** 2 - 1.0
    if rel > allowed:
        raise ValueError(f"{f.label}: analytic f(0) = {f.f0} disagrees with f(1e-8) = {float(f(x))}")


@lru_cache(maxsize=None)
def construct_mcf(family: str, alpha: float | None = None, beta: float | None = None) -> MonotoneFunction:
    """Build and validate a monotone function.

    Parameters
    ----------
    family : {"sld", "wy", "wyd", "gwyd"}
    alpha, beta : float
        ``wyd`` takes ``0 < alpha < 1``; ``gwyd`` takes ``alpha, beta > 0``
        with ``alpha + beta <= 1``.
    """
    if family == "sld":
        f = MonotoneFunction("sld", f0=0.5)
    elif family == "wy":
        f = MonotoneFunction("wy", 0.5, 0.5, f0=0.25)
    elif family == "wyd":
        if alpha is None or not 0.0 < alpha < 1.0:
            raise ValueError(f"wyd requires 0 < alpha < 1, got {alpha}")
        f = MonotoneFunction("wyd", float(alpha), 1.0 - float(alpha), f0=_analytic_f0("wyd", alpha, 1.0 - alpha))
    elif family == "gwyd":
        if alpha is None or beta is None:
            raise ValueError("gwyd requires alpha and beta")
        if alpha * beta == 0:
            raise ValueError("gwyd requires alpha * beta != 0")
        if alpha < 0 or beta < 0 or alpha + beta > 1.0 + 1e-15:
            raise ValueError(f"gwyd requires alpha, beta > 0 and alpha + beta <= 1, got ({alpha}, {beta})")
        f = MonotoneFunction("gwyd", float(alpha), float(beta), f0=_analytic_f0("gwyd", alpha, beta))
    else:
        raise ValueError(f"unknown monotone family {family!r}")
    _check_invariants(f)
    return f


def parse_mcf(text: str) -> MonotoneFunction:
    """Parse ``sld``, ``wy``, ``wyd:0.3`` or ``gwyd:0.2,0.5``."""
    name, _, args = text.strip().partition(":")
    name = name.strip().lower()
    try:
        params = [float(v) for v in args.split(",")] if args else []
    except ValueError:
        raise ValueError(f"bad parameters in {text!r}") from None
    expected = {"sld": 0, "wy": 0, "wyd": 1, "gwyd": 2}
    if name not in expected:
        raise ValueError(f"unknown monotone family in {text!r}")
    if len(params) != expected[name]:
        raise ValueError(f"{name} takes {expected[name]} parameter(s), got {text!r}")
    return construct_mcf(name, *params)


def c_value(f: MonotoneFunction, x, y):
    return f.c(x, y)


def inverse_mean(f: MonotoneFunction, x, y):
    return f.mean(x, y)


def f_tilde_transform(f: MonotoneFunction) -> MonotoneFunction:
    """``x -> [(x + 1) - (x - 1)^2 f(0)/f(x)] / 2``.

    Since ``(x - 1)^2 / f(x) -> 1/f(0)`` as x -> 0, the transformed function
    vanishes at 0 for every family.
    """
    if f.family == "tilde":
        raise ValueError("transform of a transformed function is not supported")
    return MonotoneFunction("tilde", f0=0.0, base=f)
