"""Metric-adjusted skew information and the quantities built from it.

Notation: ``rho = sum_j lam_j |phi_j><phi_j|``. Everything reduces to sums
over eigenvalue pairs weighted by ``(lam_m - lam_n)^2 c_f(lam_m, lam_n)``;
the superoperators L_rho, R_rho are never formed explicitly, since in the
eigenbasis ``c_f(L, R)`` acts entrywise.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT
from .linalg import DensityMatrix, _as_state, as_hermitian, haar_unitaries, spawn_rngs
from .mcf import MonotoneFunction, f_tilde_transform, parse_mcf

__all__ = [
    "SkewContext",
    "skew_information",
    "quantum_uncertainty",
    "max_coherence",
    "f_entropy",
    "quasientropy_sum",
    "unitary_average_mc",
    "check_operator_basis",
]

_MC_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class SkewContext:
    """A state and a monotone function with the pair weights precomputed."""

    state: DensityMatrix
    f: MonotoneFunction
    lam: np.ndarray = field(init=False, repr=False)
    vecs: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        state = _as_state(self.state)
        f = parse_mcf(self.f) if isinstance(self.f, str) else self.f
        spec = state.spectrum
        # roundoff-level eigenvalues become exact zeros (see Tolerances.eigen_floor)
        lam = np.where(spec.eigenvalues <= DEFAULT.eigen_floor, 0.0, spec.eigenvalues)
        w = f.weight(lam[:, None], lam[None, :])
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "vecs", spec.eigenvectors)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.state.dim

    def in_eigenbasis(self, h: np.ndarray) -> np.ndarray:
        v = self.vecs
        return v.conj().T @ h @ v


def skew_information(ctx: SkewContext, h, path: str = "spectral") -> float:
    """I_f(rho, H).

    ``path="spectral"`` sums ``(f0/2) sum_mn w_mn |<phi_m|H|phi_n>|^2``.
    ``path="commutator"`` forms ``A = i[rho, H]`` in the computational basis,
    moves it to the eigenbasis and evaluates ``(f0/2) tr(A^H c_f(L,R) A)``.
    The two agree to roundoff; the second is kept as an independent check.
    """
    h = as_hermitian(h)
    if h.shape != (ctx.dim, ctx.dim):
        raise ValueError(f"observable of shape {h.shape} does not match state dimension {ctx.dim}")
    f0 = ctx.f.f0
    if path == "spectral":
        hm = ctx.in_eigenbasis(h)
        return float(0.5 * f0 * np.sum(ctx.weights * np.abs(hm) ** 2))
    if path == "commutator":
        rho = ctx.state.matrix
        a = 1j * (rho @ h - h @ rho)
        am = ctx.in_eigenbasis(a)
        lam = ctx.lam
        c = ctx.f.c(lam[:, None], lam[None, :])
        c = np.where(np.isinf(c), 0.0, c)
        return float(0.5 * f0 * np.real(np.sum(np.conj(am) * c * am)))
    raise ValueError(f"unknown path {path!r}")


def quantum_uncertainty(ctx: SkewContext) -> float:
    """Q_f(rho) = (f0/2) sum_mn (lam_m - lam_n)^2 c_f(lam_m, lam_n)."""
    return float(0.5 * ctx.f.f0 * np.sum(ctx.weights))


def max_coherence(ctx: SkewContext) -> float:
    return quantum_uncertainty(ctx) / ctx.dim


def f_entropy(ctx: SkewContext) -> float:
    """Quantum f-entropy ``d - 1 - (d + 1) C_f`` with ``C_f = Q_f/(d + 1)``."""
    d = ctx.dim
    return (d - 1) - (d + 1) * (quantum_uncertainty(ctx) / (d + 1))


def check_operator_basis(basis, d: int, tol: float = DEFAULT.geam) -> np.ndarray:
    """Stack ``basis`` and verify it is d^2 Hilbert-Schmidt orthonormal Hermitian matrices."""
    xs = np.array([as_hermitian(x) for x in basis])
    if xs.shape != (d * d, d, d):
        raise ValueError(f"expected {d * d} matrices of size {d}x{d}, got array of shape {xs.shape}")
    flat = xs.reshape(d * d, -1)
    gram = flat.conj() @ flat.T
    dev = float(np.max(np.abs(gram - np.eye(d * d))))
    if dev > tol:
        raise ValueError(f"basis is not orthonormal (max Gram deviation {dev:.3e})")
    return xs


def quasientropy_sum(ctx: SkewContext, basis) -> float:
    """``sum_k S_{f~}^{X_k}(rho|rho)`` over an operator orthonormal basis.

    Each term is ``sum_mn m_{f~}(lam_m, lam_n) |<phi_m|X_k|phi_n>|^2`` with
    ``m`` the mean of the transformed function. Equals ``d - Q_f``.
    """
    xs = check_operator_basis(basis, ctx.dim)
    ft = f_tilde_transform(ctx.f)
    lam = ctx.lam
    means = ft.mean(lam[:, None], lam[None, :])
    v = ctx.vecs
    xm = v.conj().T[None, :, :] @ xs @ v[None, :, :]
    return float(np.sum(means[None, :, :] * np.abs(xm) ** 2))


def _mc_chunk(ctx: SkewContext, n: int, rng) -> tuple[float, float]:
    # sum_i I_f(rho, U|i><i|U^H) = (f0/2) sum_i p_i^T W p_i with p_i = |V^H U e_i|^2
    u = haar_unitaries(ctx.dim, n, rng)
    p = np.abs(ctx.vecs.conj().T[None, :, :] @ u) ** 2
    vals = 0.5 * ctx.f.f0 * np.einsum("smi,mn,sni->s", p, ctx.weights, p)
    return float(np.sum(vals)), float(np.sum(vals ** 2))


def unitary_average_mc(ctx: SkewContext, samples: int, seed: int, threads: int = 1) -> tuple[float, float]:
    """Monte-Carlo average of ``sum_i I_f(rho, U|i><i|U^H)`` over Haar U.

    Samples are split into fixed chunks of 4096, chunk ``j`` drawing from
    stream ``j`` of ``seed``; the estimate is therefore independent of
    ``threads``.

    Returns
    -------
    (mean, stderr)
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    sizes = [_MC_CHUNK] * (samples // _MC_CHUNK)
    if samples % _MC_CHUNK:
        sizes.append(samples % _MC_CHUNK)
    rngs = spawn_rngs(seed, len(sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _mc_chunk(ctx, *a), zip(sizes, rngs)))
    else:
        parts = [_mc_chunk(ctx, n, r) for n, r in zip(sizes, rngs)]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, float(np.sqrt(var / samples))
