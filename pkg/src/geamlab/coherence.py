"""Average coherence under GEAMs and numerical checks of the closed forms.

The direct average is ``C(rho) = (1/N) sum_{k,l} I_f(rho, P_{k,l})``. For a
conical 2-design it collapses to ``(S/N) Q_f(rho)``; the functions here
compute both sides independently so that the identities can be audited.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import DEFAULT
from .geam import Geam, GeamSpec, HermitianBasis, build_geam, scale_to_symmetric
from .linalg import _as_state
from .mcf import parse_mcf
from .skewinfo import (
    SkewContext,
    f_entropy,
    max_coherence,
    quantum_uncertainty,
    quasientropy_sum,
    unitary_average_mc,
)

__all__ = [
    "IdentityReport",
    "IdentityMismatchError",
    "skew_sum",
    "average_coherence_geam",
    "closed_form_coherence",
    "symmetric_measurement_coherence",
    "identity_suite",
]


class IdentityMismatchError(AssertionError):
    """An identity that must hold to roundoff did not."""


@dataclass(frozen=True)
class IdentityReport:
    """One identity check: ``pass`` iff ``residual <= tolerance``.

    ``status`` is "checked" or "not-applicable" (S = 0 for identities that
    divide by S); not-applicable reports always pass.
    """

    identity: str
    d: int
    f: str
    spec: dict
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    seed: int | None = None
    status: str = "checked"
    passed: bool = field(init=False)

    def __post_init__(self):
        ok = self.status == "not-applicable" or self.residual <= self.tolerance
        object.__setattr__(self, "passed", bool(ok))

    @classmethod
    def compare(cls, identity, d, f, spec, lhs, rhs, tolerance, seed=None):
        lhs, rhs = float(lhs), float(rhs)
        return cls(identity, d, f, spec, lhs, rhs, abs(lhs - rhs), float(tolerance), seed)

    @classmethod
    def not_applicable(cls, identity, d, f, spec, tolerance, seed=None):
        return cls(identity, d, f, spec, float("nan"), float("nan"), float("nan"), float(tolerance), seed, "not-applicable")

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "d": self.d,
            "f": self.f,
            "spec": self.spec,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "seed": self.seed,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "IdentityReport":
        return cls(
            obj["identity"], obj["d"], obj["f"], obj["spec"], obj["lhs"], obj["rhs"],
            obj["residual"], obj["tolerance"], obj.get("seed"), obj.get("status", "checked"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def require(self) -> "IdentityReport":
        if not self.passed:
            raise IdentityMismatchError(f"{self.identity}: |{self.lhs!r} - {self.rhs!r}| = {self.residual:.3e} > {self.tolerance:.1e}")
        return self


def _context(rho, f) -> SkewContext:
    if isinstance(rho, SkewContext):
        return rho
    if isinstance(f, str):
        f = parse_mcf(f)
    return SkewContext(_as_state(rho), f)


def skew_sum(ctx: SkewContext, ops: np.ndarray) -> float:
    """``sum_j I_f(rho, ops[j])`` using one batched change of basis."""
    ops = np.asarray(ops, dtype=complex)
    if ops.shape[1:] != (ctx.dim, ctx.dim):
        raise ValueError(f"operators of shape {ops.shape[1:]} do not match state dimension {ctx.dim}")
    v = ctx.vecs
    hm = v.conj().T[None] @ ops @ v[None]
    return float(0.5 * ctx.f.f0 * np.sum(ctx.weights[None] * np.abs(hm) ** 2))


def average_coherence_geam(rho, g: Geam, f) -> float:
    """Direct ``(1/N) sum_{k,l} I_f(rho, P_{k,l})``."""
    ctx = _context(rho, f)
    if ctx.dim != g.d:
        raise ValueError(f"state dimension {ctx.dim} does not match GEAM dimension {g.d}")
    return skew_sum(ctx, g.operators()) / g.N


def closed_form_coherence(rho, spec: GeamSpec, f) -> float:
    """``(S/N) Q_f(rho)``; conical specs only."""
    S = spec.require_conical()
    ctx = _context(rho, f)
    if ctx.dim != spec.d:
        raise ValueError(f"state dimension {ctx.dim} does not match spec dimension {spec.d}")
    return S / spec.N * quantum_uncertainty(ctx)


def symmetric_measurement_coherence(rho, g: Geam, f, *, tol: float = DEFAULT.identity) -> tuple[float, float]:
    """Average coherence under the rescaled operators ``P_{k,l}/gamma_k``.

    Returns ``(direct, closed)`` where ``closed = N S Q_f``. Raises
    :class:`IdentityMismatchError` if ``direct`` is not ``N^2`` times the
    GEAM average within ``tol``.
    """
    ctx = _context(rho, f)
    frames = scale_to_symmetric(g)
    direct = skew_sum(ctx, np.concatenate(frames)) / g.N
    closed = g.N * g.spec.require_conical() * quantum_uncertainty(ctx)
    plain = average_coherence_geam(ctx, g, f)
    if abs(direct - g.N ** 2 * plain) > tol:
        raise IdentityMismatchError(f"symmetric sum {direct!r} != N^2 x GEAM sum {g.N ** 2 * plain!r}")
    return direct, closed


@lru_cache(maxsize=None)
def _reference_geams(d: int) -> tuple[np.ndarray, int, Geam]:
    # rescaled mub operators and the sic GEAM; only (N, S) matters for the sums
    mub = build_geam("mub", d, realization="gell-mann")
    sic = build_geam("sic", d, realization="gell-mann")
    return np.concatenate(scale_to_symmetric(mub)), mub.N, sic


def _haar_report(ctx, spec_dict, g, direct, tolerance, estimate, seed):
    mean, se = estimate
    scale = g.spec.S * (g.d + 1) / g.N
    tol = max(4.0 * scale * se, tolerance)
    return IdentityReport.compare("haar-average", g.d, ctx.f.label, spec_dict, scale * mean, direct, tol, seed)


def identity_suite(
    rho,
    g: Geam,
    f,
    basis=None,
    *,
    tolerance: float = DEFAULT.identity,
    include_mc: bool = True,
    mc_samples: int = 20000,
    seed: int = 0,
    threads: int = 1,
    haar_estimate: tuple[float, float] | None = None,
) -> list[IdentityReport]:
    """Evaluate every closed-form identity for one (state, GEAM, f) triple.

    ``basis`` is an operator orthonormal basis (d^2 Hermitian matrices) for
    the quasientropy sum; by default the GEAM's own Hermitian basis.
    ``haar_estimate`` is a precomputed ``unitary_average_mc`` result; it
    depends only on the state and f, so callers iterating over GEAMs can
    reuse it. Reports are returned sorted by identity name.
    """
    ctx = _context(rho, f)
    d, N = g.d, g.N
    spec = g.spec
    label = ctx.f.label
    sd = g.to_dict()
    if basis is None:
        basis = g.basis.elements()
    elif isinstance(basis, HermitianBasis):
        basis = basis.elements()
    S = spec.require_conical()
    Q = quantum_uncertainty(ctx)
    direct = average_coherence_geam(ctx, g, f)
    closed = S / N * Q
    qsum = quasientropy_sum(ctx, basis)
    ent = f_entropy(ctx)
    out = []

    def rep(name, lhs, rhs, tol=tolerance):
        out.append(IdentityReport.compare(name, d, label, sd, lhs, rhs, tol, seed))

    rep("geam-average", direct, closed)
    # f-entropy plus quasientropy sum is fixed independently of any GEAM
    rep("quasientropy-entropy", qsum - ent, 1.0)
    if S > 0:
        rep("tradeoff-entropy", ent + N / S * direct, d - 1)
        rep("tradeoff-quasientropy", qsum + N / S * direct, d)
    else:
        for name in ("tradeoff-entropy", "tradeoff-quasientropy"):
            out.append(IdentityReport.not_applicable(name, d, label, sd, tolerance, seed))
    if spec.uniform_gamma:
        sym, sym_closed = symmetric_measurement_coherence(ctx, g, ctx.f, tol=np.inf)
        rep("scaling-symmetric", sym, N ** 2 * direct)
        rep("symmetric-closed-form", sym, sym_closed)
    imax = max_coherence(ctx)
    c_mub = Q / (d + 1)
    c_sic = Q / (d * (d + 1))
    rep("max-coherence-closed", c_mub + c_sic, imax, min(tolerance, 1e-12))
    mub_ops, mub_n, sic = _reference_geams(d)
    mub_direct = skew_sum(ctx, mub_ops) / mub_n
    rep("max-coherence-direct", mub_direct + average_coherence_geam(ctx, sic, ctx.f), imax)
    if include_mc and S > 0:
        if haar_estimate is None:
            haar_estimate = unitary_average_mc(ctx, mc_samples, seed, threads)
        out.append(_haar_report(ctx, sd, g, direct, tolerance, haar_estimate, seed))
    return sorted(out, key=lambda r: r.identity)
