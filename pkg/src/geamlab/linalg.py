"""Dense Hermitian linear algebra, states, and random sampling.

Everything here works on small dense complex matrices (d <= ~64). The
eigensolver is a cyclic complex Jacobi iteration, so results do not depend
on the LAPACK build.

Random streams
--------------
All randomness comes from ``numpy.random.Generator(PCG64(seed))``. Parallel
work splits one seed into independent streams with
``numpy.random.SeedSequence(seed).spawn(n)``; child ``i`` drives task ``i``,
so the result does not depend on how tasks are scheduled.

Matrix exchange format
----------------------
A matrix is stored as JSON: an array of rows, each row an array of
``[re, im]`` pairs. ``[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]`` is |0><0|.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .config import DEFAULT

__all__ = [
    "EigenConvergenceError",
    "InvalidStateError",
    "SpectralDecomposition",
    "DensityMatrix",
    "BipartiteDims",
    "hermitian_eig",
    "as_hermitian",
    "tensor_product",
    "partial_trace",
    "purity",
    "make_rng",
    "spawn_rngs",
    "sample",
    "haar_unitaries",
    "special_operators",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "dump_matrix",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class EigenConvergenceError(RuntimeError):
    """Jacobi sweeps hit the iteration cap."""

    def __init__(self, sweeps: int, residual: float):
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {residual:.3e})"
        )
        self.sweeps = sweeps
        self.residual = residual


class InvalidStateError(ValueError):
    """Matrix is not a density matrix."""


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (descending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def residual(self, a) -> float:
        """Max-abs reconstruction error against ``a``."""
        return float(np.max(np.abs(np.asarray(a) - self.reconstruct())))

    def orthonormality_error(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))


def as_hermitian(a, tol: float = DEFAULT.hermitian_input) -> np.ndarray:
    """Return ``(a + a^H)/2`` after checking ``a`` is square and Hermitian."""
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian (max |A - A^H| = {dev:.3e})")
    return 0.5 * (a + a.conj().T)


def hermitian_eig(
    a,
    *,
    tol: float = DEFAULT.jacobi_offdiag,
    max_sweeps: int = DEFAULT.jacobi_max_sweeps,
) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation, so ``a[p, q]`` becomes zero
    exactly. Sweeps stop once the off-diagonal Frobenius norm falls below
    ``tol * ||a||_F``.

    Raises
    ------
    EigenConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = as_hermitian(a)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return _sorted_decomposition(np.real(np.diag(a)).copy(), v)

    threshold = tol * scale
    off = _offdiag_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps >= max_sweeps:
            raise EigenConvergenceError(sweeps, off)
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
        off = _offdiag_norm(a)
    return _sorted_decomposition(np.real(np.diag(a)).copy(), v)


def _offdiag_norm(a: np.ndarray) -> float:
    # explicit mask; total minus diagonal cancels catastrophically near convergence
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real ** 2 + off.imag ** 2)))


def _sorted_decomposition(w: np.ndarray, v: np.ndarray) -> SpectralDecomposition:
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = np.ascontiguousarray(v[:, order])
    w.flags.writeable = False
    v.flags.writeable = False
    return SpectralDecomposition(w, v)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite, unit-trace Hermitian matrix.

    The input is symmetrized and validated on construction; the spectrum is
    computed once and cached.
    """

    matrix: np.ndarray
    _spectrum: SpectralDecomposition = field(init=False, repr=False)

    def __post_init__(self):
        tols = DEFAULT
        m = as_hermitian(self.matrix)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > tols.trace:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        spec = hermitian_eig(m)
        lmin = float(spec.eigenvalues[-1])
        if lmin < -tols.psd:
            raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {lmin:.3e})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_spectrum", spec)
        p = self.purity
        d = self.dim
        if not (1.0 / d - tols.purity <= p <= 1.0 + tols.purity):
            raise InvalidStateError(f"purity {p} outside [1/d, 1]")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectrum(self) -> SpectralDecomposition:
        return self._spectrum

    @cached_property
    def purity(self) -> float:
        return float(np.sum(self._spectrum.eigenvalues ** 2))

    @property
    def min_eigenvalue(self) -> float:
        return float(self._spectrum.eigenvalues[-1])

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d) / d)

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def _as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def _as_array(a) -> np.ndarray:
    return a.matrix if isinstance(a, DensityMatrix) else np.asarray(a)


@dataclass(frozen=True)
class BipartiteDims:
    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise ValueError("subsystem dimensions must be positive")

    @property
    def total(self) -> int:
        return self.d_a * self.d_b


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; ``a``'s indices are the major (slow) ones."""
    return np.kron(_as_array(a), _as_array(b))


def partial_trace(rho_ab, dims: BipartiteDims | tuple[int, int], keep: str = "A") -> DensityMatrix:
    """Reduced state of subsystem ``keep`` ("A" or "B")."""
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    m = _as_array(rho_ab)
    if m.shape != (dims.total, dims.total):
        raise ValueError(f"state of shape {m.shape} does not match dims {dims.d_a}x{dims.d_b}")
    t = m.reshape(dims.d_a, dims.d_b, dims.d_a, dims.d_b)
    if keep == "A":
        red = np.einsum("ijkj->ik", t)
    elif keep == "B":
        red = np.einsum("ijil->jl", t)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(red)


def purity(rho) -> float:
    """tr(rho^2)."""
    if isinstance(rho, DensityMatrix):
        return rho.purity
    m = np.asarray(rho)
    return float(np.real(np.vdot(m, m)))


def make_rng(seed=None) -> np.random.Generator:
    """PCG64-backed generator; passes existing generators through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed, n: int) -> list[np.random.Generator]:
    """``n`` independent streams derived from one seed (see module docs)."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(n)]


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_unitaries(d: int, n: int, rng) -> np.ndarray:
    """``n`` Haar-random d x d unitaries, shape (n, d, d).

    QR of a complex Ginibre matrix with the diagonal of R made positive
    (Mezzadri's phase fix); without it the distribution is not Haar.
    """
    rng = make_rng(rng)
    z = _complex_gaussian(rng, (n, d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def sample(kind: str, d: int, seed=None, *, rank: int | None = None, rng=None):
    """Draw a random state or unitary.

    Parameters
    ----------
    kind : {"ginibre-mixed", "haar-pure", "haar-unitary"}
    d : int
        Hilbert-space dimension.
    seed : int, optional
        Ignored when ``rng`` is given.
    rank : int, optional
        Width of the Ginibre matrix for "ginibre-mixed" (default ``d``).

    Returns
    -------
    DensityMatrix for the state kinds, ndarray for "haar-unitary".
    """
    gen = make_rng(rng if rng is not None else seed)
    if kind == "ginibre-mixed":
        r = d if rank is None else int(rank)
        if not 1 <= r <= d:
            raise ValueError(f"rank must be in [1, {d}], got {rank}")
        g = _complex_gaussian(gen, (d, r))
        m = g @ g.conj().T
        return DensityMatrix(m / np.trace(m).real)
    if kind == "haar-pure":
        psi = _complex_gaussian(gen, d)
        return DensityMatrix.pure(psi)
    if kind == "haar-unitary":
        return haar_unitaries(d, 1, gen)[0]
    raise ValueError(f"unknown sample kind {kind!r}")


def special_operators(d: int, which: str) -> np.ndarray:
    """Swap operator on C^d (x) C^d, or the |phi+> / singlet vectors.

    "swap" returns a d^2 x d^2 matrix; "max-entangled" and "singlet" return
    unit vectors of length d^2.
    """
    if which == "swap":
        f = np.zeros((d * d, d * d), dtype=complex)
        for i in range(d):
            for j in range(d):
                f[j * d + i, i * d + j] = 1.0
        return f
    if which == "max-entangled":
        v = np.zeros(d * d, dtype=complex)
        v[[i * d + i for i in range(d)]] = 1.0 / np.sqrt(d)
        return v
    if which == "singlet":
        if d != 2:
            raise ValueError("the singlet is only defined for d = 2")
        return np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    raise ValueError(f"unknown operator {which!r}")


def matrix_to_json(a) -> list:
    a = np.asarray(_as_array(a), dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(obj) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("matrix JSON must be an array of rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_json(obj)


def dump_matrix(a, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)), encoding="utf-8")
