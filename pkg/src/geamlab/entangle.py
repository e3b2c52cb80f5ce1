"""Entanglement criteria from GEAMs and the isotropic/Werner reference families.

Criterion F: ``F = (1/N) sum_{k,l} I_f(rho_AB, P^A_{k,l} (x) I + I (x) P^B_{k,l})``
exceeds ``2 S (d - 1) / N`` only for entangled states.

Criterion G: ``G = sum_{k,l} |tr[(P^A_{k,l} (x) P^B_{k,l})(rho_AB - rho_A (x) rho_B)]|``
exceeds ``S sqrt((1 - tr rho_A^2)(1 - tr rho_B^2))`` only for entangled
states.

The "scaled" variants use the rescaled operators ``P_{k,l}/gamma_k``; both
sides grow by N^2 so the verdict is unchanged.

The Werner parameter is called ``x`` throughout.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .coherence import skew_sum
from .geam import Geam, GeamError, GeamSpec, scale_to_symmetric
from .linalg import DensityMatrix, _as_state, partial_trace, special_operators
from .mcf import parse_mcf
from .skewinfo import SkewContext

__all__ = [
    "DetectionReport",
    "ReferenceState",
    "build_reference",
    "conjugate_geam",
    "criterion_F",
    "criterion_G",
    "isotropic_closed_form",
    "isotropic_threshold",
    "example1_reference",
    "example2_reference",
    "werner_p_from_x",
    "werner_x_from_p",
]

FAMILIES = ("isotropic", "werner", "werner-qubit")
VERDICT_MARGIN = 1e-12


@dataclass(frozen=True)
class DetectionReport:
    """Outcome of one criterion.

    ``verdict`` is "entangled" iff ``value > threshold + margin`` with
    ``margin = 1e-12 * max(1, threshold)``. Pure product states attain the
    bounds exactly, so a bare ``>`` would let roundoff decide those ties.
    """

    criterion: str
    value: float
    threshold: float
    d: int
    spec: dict
    f: str | None = None
    family: str | None = None
    param: float | None = None
    verdict: str = field(init=False)

    def __post_init__(self):
        margin = VERDICT_MARGIN * max(1.0, abs(self.threshold))
        object.__setattr__(self, "verdict", "entangled" if self.value > self.threshold + margin else "inconclusive")

    @property
    def entangled(self) -> bool:
        return self.verdict == "entangled"

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "value": self.value,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "family": self.family,
            "param": self.param,
            "d": self.d,
            "spec": self.spec,
            "f": self.f,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "DetectionReport":
        rep = cls(obj["criterion"], obj["value"], obj["threshold"], obj["d"], obj["spec"], obj.get("f"), obj.get("family"), obj.get("param"))
        if rep.verdict != obj["verdict"]:
            raise ValueError("verdict inconsistent with value and threshold")
        return rep

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# --------------------------------------------------------------------------
# Reference states


def werner_x_from_p(p: float) -> float:
    return (1.0 - 3.0 * p) / 2.0


def werner_p_from_x(x: float) -> float:
    return (1.0 - 2.0 * x) / 3.0


@dataclass(frozen=True, eq=False)
class ReferenceState:
    family: str
    d: int
    param: float
    state: DensityMatrix


def build_reference(family: str, d: int, param: float) -> ReferenceState:
    """Isotropic ``((1-q)/d^2) I + q |phi+><phi+|``, Werner
    ``((d-x) I + (dx-1) F)/(d^3 - d)``, or the two-qubit Werner state
    ``p |psi-><psi-| + (1-p) I/4``.
    """
    param = float(param)
    n = d * d
    if family == "isotropic":
        if not 0.0 <= param <= 1.0:
            raise ValueError(f"isotropic parameter q must be in [0, 1], got {param}")
        phi = special_operators(d, "max-entangled")
        m = (1 - param) / n * np.eye(n) + param * np.outer(phi, phi.conj())
    elif family == "werner":
        if not -1.0 <= param <= 1.0:
            raise ValueError(f"Werner parameter x must be in [-1, 1], got {param}")
        m = ((d - param) * np.eye(n) + (d * param - 1) * special_operators(d, "swap")) / (d ** 3 - d)
    elif family == "werner-qubit":
        if d != 2:
            raise ValueError("werner-qubit is a two-qubit family (d = 2)")
        if not -1.0 / 3.0 <= param <= 1.0:
            raise ValueError(f"two-qubit Werner parameter p must be in [-1/3, 1], got {param}")
        psi = special_operators(2, "singlet")
        m = param * np.outer(psi, psi.conj()) + (1 - param) / 4 * np.eye(4)
    else:
        raise ValueError(f"unknown family {family!r}")
    state = DensityMatrix(m)
    for keep in ("A", "B"):
        red = partial_trace(state, (d, d), keep).matrix
        if np.max(np.abs(red - np.eye(d) / d)) > 1e-12:
            raise AssertionError(f"{family} reduced state {keep} is not maximally mixed")
    return ReferenceState(family, d, param, state)


# --------------------------------------------------------------------------
# Criteria


def conjugate_geam(g: Geam) -> Geam:
    """Entrywise complex conjugate of every operator (and of the basis)."""
    frames = []
    for P in g.frames:
        c = np.conj(P)
        c.flags.writeable = False
        frames.append(c)
    return replace(g, basis=g.basis.conjugate(), frames=tuple(frames))


def _check_pair(gA: Geam, gB: Geam) -> None:
    a, b = gA.spec, gB.spec
    if a.N != b.N or a.M != b.M or a.S_k != b.S_k or a.gamma != b.gamma:
        raise GeamError("the two GEAMs must share N, M_k, gamma_k and S")


def _frames(g: Geam, scaled: bool):
    return scale_to_symmetric(g) if scaled else g.frames


def _local_dims(state: DensityMatrix, gA: Geam, gB: Geam) -> tuple[int, int]:
    if state.dim != gA.d * gB.d:
        raise ValueError(f"state dimension {state.dim} does not match {gA.d} x {gB.d}")
    return gA.d, gB.d


def criterion_F(rho_ab, gA: Geam, gB: Geam, f, scaled: bool = False, *, family=None, param=None) -> DetectionReport:
    state = _as_state(rho_ab)
    _check_pair(gA, gB)
    dA, dB = _local_dims(state, gA, gB)
    if dA != dB:
        raise ValueError("criterion F needs equal local dimensions")
    if isinstance(f, str):
        f = parse_mcf(f)
    d, N, S = dA, gA.N, gA.spec.require_conical()
    ia, ib = np.eye(dA), np.eye(dB)
    ops = np.concatenate(
        [np.kron(pa, ib)[None] + np.kron(ia, pb)[None] for fa, fb in zip(_frames(gA, scaled), _frames(gB, scaled)) for pa, pb in zip(fa, fb)]
    )
    value = skew_sum(SkewContext(state, f), ops) / N
    threshold = 2 * N * S * (d - 1) if scaled else 2 * S * (d - 1) / N
    return DetectionReport("F-scaled" if scaled else "F", value, threshold, d, gA.to_dict(), f.label, family, param)


def criterion_G(rho_ab, gA: Geam, gB: Geam, scaled: bool = False, *, family=None, param=None) -> DetectionReport:
    state = _as_state(rho_ab)
    _check_pair(gA, gB)
    dA, dB = _local_dims(state, gA, gB)
    S = gA.spec.require_conical()
    N = gA.N
    ra = partial_trace(state, (dA, dB), "A")
    rb = partial_trace(state, (dA, dB), "B")
    delta = state.matrix - np.kron(ra.matrix, rb.matrix)
    # tr[(A (x) B) D] = sum A_ji B_lk D_ik,jl with D reshaped to (dA, dB, dA, dB)
    t = delta.reshape(dA, dB, dA, dB)
    value = 0.0
    for fa, fb in zip(_frames(gA, scaled), _frames(gB, scaled)):
        vals = np.einsum("nji,nlk,ikjl->n", fa, fb, t)
        value += float(np.sum(np.abs(vals)))
    root = math.sqrt(max(0.0, (1 - ra.purity) * (1 - rb.purity)))
    threshold = (N ** 2 if scaled else 1) * S * root
    return DetectionReport("G-scaled" if scaled else "G", value, threshold, dA, gA.to_dict(), None, family, param)


# --------------------------------------------------------------------------
# Examples


def isotropic_closed_form(d: int, q: float, spec: GeamSpec) -> float:
    """F for the isotropic state with P^B = conj(P^A) and f = sld."""
    S = spec.require_conical()
    return 4 * q * q * S * (d * d - 1) * d / (spec.N * (2 * (1 - q) + q * d * d))


def isotropic_threshold(d: int) -> float:
    """Positive root of ``2 d (d+1) q^2 - (d^2 - 2) q - 2 = 0``."""
    a = d * d - 2
    return (a + math.sqrt(a * a + 16 * d * (d + 1))) / (4 * d * (d + 1))


def example1_reference(d: int, q: float, spec: GeamSpec, geam: Geam | None = None, tol: float = 1e-9) -> tuple[float, float]:
    """``(F_closed, q*)``; with ``geam`` also checks the direct sum (relative ``tol``)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    closed = isotropic_closed_form(d, q, spec)
    if geam is not None:
        ref = build_reference("isotropic", d, q)
        direct = criterion_F(ref.state, geam, conjugate_geam(geam), "sld").value
        if abs(direct - closed) > tol * max(abs(closed), 1e-300):
            raise AssertionError(f"isotropic F: direct {direct!r} != closed {closed!r}")
    return closed, isotropic_threshold(d)


def example2_reference(d: int, x: float, spec: GeamSpec, geam: Geam | None = None, tol: float = 1e-9) -> tuple[float, float]:
    """``(G_closed, x*)`` with ``G_closed = S|1 - d x|/d`` and ``x* = 2/d - 1``.

    At d = 2 the equivalent condition is ``p > 1/3`` with ``p = (1 - 2x)/3``.
    """
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"x must be in [-1, 1], got {x}")
    S = spec.require_conical()
    closed = S * abs(1 - d * x) / d
    if geam is not None:
        ref = build_reference("werner", d, x)
        direct = criterion_G(ref.state, geam, geam).value
        if abs(direct - closed) > tol:
            raise AssertionError(f"Werner G: direct {direct!r} != closed {closed!r}")
    return closed, 2.0 / d - 1.0
