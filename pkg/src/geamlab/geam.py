"""Generalized equiangular measurements (GEAMs).

A GEAM is a union of N frames ``{P_{k,l}}_{l=1..M_k}`` built from an
orthonormal Hermitian basis ``{I/sqrt(d), G_{k,l}}``::

    P_{k,l} = (a_k/d) I + tau_k H_{k,l}
    H_{k,l} = G_k - sqrt(M_k)(sqrt(M_k) + 1) G_{k,l}    (l < M_k)
    H_{k,M_k} = (sqrt(M_k) + 1) G_k,                     G_k = sum_l G_{k,l}
    tau_k = sigma_k sqrt(S_k / (M_k (sqrt(M_k) + 1)^2))

with ``a_k = d gamma_k / M_k``. A GeamSpec is parameterized by the
2-design constant S (one per frame; equal for conical 2-designs) and the
purity parameter is derived from it:
``b_k = [1 + S_k M_k (M_k - 1) / (d gamma_k^2)] / d``.

Positivity of the P_{k,l} depends on the basis; it is measured, never
assumed.

Basis assignment order
----------------------
:func:`gell_mann_matrices` lists, for each pair j < k (lexicographic), the
symmetric element then the antisymmetric one, followed by the d - 1
diagonal elements. Frame 1 takes the first ``M_1 - 1`` of them, frame 2 the
next ``M_2 - 1``, and so on. A seed shuffles the list before assignment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .config import DEFAULT
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, hermitian_eig, make_rng

__all__ = [
    "GeamError",
    "GeamSpec",
    "HermitianBasis",
    "Geam",
    "CheckResult",
    "ValidationReport",
    "gell_mann_matrices",
    "gell_mann_basis",
    "preset_spec",
    "parse_preset",
    "nm_shapes",
    "frame_cap",
    "construct_geam",
    "validate_geam",
    "max_feasible_S",
    "scale_to_symmetric",
    "mub_bases",
    "sic_vectors",
    "projective_basis",
    "basis_from_operators",
    "build_geam",
    "positive_nm_geam",
]


class GeamError(ValueError):
    """Invalid GEAM parameters or inconsistent inputs."""


def frame_cap(d: int, M: int, gamma: float) -> float:
    """Largest admissible 2-design constant for one frame."""
    base = d * gamma ** 2 / M
    return min(base, (d - 1) / (M - 1) * base)


@dataclass(frozen=True)
class GeamSpec:
    """Symbolic GEAM parameters.

    ``S`` is a float for a conical 2-design, or a per-frame sequence for a
    general GEAM (tagged non-conical).
    """

    d: int
    N: int
    M: tuple[int, ...]
    gamma: tuple[float, ...]
    S: float | tuple[float, ...]
    preset: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "M", tuple(int(m) for m in self.M))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        if isinstance(self.S, (list, tuple, np.ndarray)):
            s = tuple(float(v) for v in self.S)
            if len(set(s)) == 1:
                s = s[0]
            object.__setattr__(self, "S", s)
        else:
            object.__setattr__(self, "S", float(self.S))
        d, N = self.d, self.N
        if d < 2:
            raise GeamError("dimension must be at least 2")
        if len(self.M) != N or len(self.gamma) != N or len(self.S_k) != N:
            raise GeamError("M, gamma and S must have one entry per frame")
        if any(m < 2 for m in self.M):
            raise GeamError("every frame needs at least 2 elements")
        if any(g <= 0 for g in self.gamma) or abs(sum(self.gamma) - 1.0) > 1e-12:
            raise GeamError(f"gamma must be a probability vector, got {self.gamma}")
        if sum(self.M) != d * d + N - 1:
            raise GeamError(f"sum of frame sizes must be d^2 + N - 1 = {d * d + N - 1}, got {sum(self.M)}")
        for s, cap in zip(self.S_k, self.caps):
            if s < 0 or s > cap * (1 + 1e-12):
                raise GeamError(f"S = {s} outside [0, {cap}]")

    @property
    def conical(self) -> bool:
        return not isinstance(self.S, tuple)

    @property
    def S_k(self) -> tuple[float, ...]:
        return self.S if isinstance(self.S, tuple) else (self.S,) * self.N

    @property
    def caps(self) -> tuple[float, ...]:
        return tuple(frame_cap(self.d, m, g) for m, g in zip(self.M, self.gamma))

    @property
    def a(self) -> np.ndarray:
        return np.array([self.d * g / m for g, m in zip(self.gamma, self.M)])

    @property
    def b(self) -> np.ndarray:
        d = self.d
        return np.array(
            [(1 + s * m * (m - 1) / (d * g ** 2)) / d for s, m, g in zip(self.S_k, self.M, self.gamma)]
        )

    @property
    def c(self) -> np.ndarray:
        d = self.d
        return np.array([(m - d * b) / (d * (m - 1)) for m, b in zip(self.M, self.b)])

    @property
    def tau(self) -> np.ndarray:
        """Magnitudes of tau_k (signs live on the constructed GEAM)."""
        return np.array([math.sqrt(s / (m * (math.sqrt(m) + 1) ** 2)) for s, m in zip(self.S_k, self.M)])

    @property
    def uniform_gamma(self) -> bool:
        return all(abs(g - 1.0 / self.N) <= 1e-12 for g in self.gamma)

    def require_conical(self) -> float:
        if not self.conical:
            raise GeamError("closed forms need a conical 2-design (equal S for all frames)")
        return self.S

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "N": self.N,
            "M": list(self.M),
            "gamma": list(self.gamma),
            "S": self.S if self.conical else list(self.S),
        }
        if self.preset is not None:
            out["preset"] = self.preset
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "GeamSpec":
        return cls(obj["d"], obj["N"], tuple(obj["M"]), tuple(obj["gamma"]), obj["S"], obj.get("preset"))


# --------------------------------------------------------------------------
# Presets


def nm_shapes(d: int) -> list[tuple[int, int]]:
    """All (N, M) with N (M - 1) = d^2 - 1."""
    n2 = d * d - 1
    return [(N, n2 // N + 1) for N in range(1, n2 + 1) if n2 % N == 0]


def preset_spec(name: str, d: int, *, b: float | None = None, N: int | None = None, M: int | None = None) -> GeamSpec:
    """Conical GEAM parameters for the standard measurement families.

    ``mub``, ``mum`` (needs b), ``sic``, ``gsic`` (needs b), ``nm`` (needs N,
    M; b defaults to its upper limit min(d, M)/d).
    """
    def check_b(lo, hi):
        if b is None:
            raise GeamError(f"{name} needs the parameter b")
        if not lo < b <= hi + 1e-15:
            raise GeamError(f"{name} needs {lo:g} < b <= {hi:g}, got {b}")

    if name == "mub":
        return GeamSpec(d, d + 1, (d,) * (d + 1), (1 / (d + 1),) * (d + 1), 1 / (d + 1) ** 2, "mub")
    if name == "mum":
        check_b(1 / d, 1.0)
        S = (d * b - 1) / ((d + 1) * (d * d - 1))
        return GeamSpec(d, d + 1, (d,) * (d + 1), (1 / (d + 1),) * (d + 1), S, f"mum:{b:g}")
    if name == "sic":
        return GeamSpec(d, 1, (d * d,), (1.0,), 1 / (d * (d + 1)), "sic")
    if name == "gsic":
        check_b(1 / d, 1.0)
        S = (d * b - 1) / (d * (d * d - 1))
        return GeamSpec(d, 1, (d * d,), (1.0,), S, f"gsic:{b:g}")
    if name == "nm":
        if N is None or M is None:
            raise GeamError("nm needs N and M")
        if N < 1 or M < 2 or N * (M - 1) != d * d - 1:
            raise GeamError(f"nm needs N(M-1) = d^2 - 1 = {d * d - 1}, got N={N}, M={M}")
        if b is None:
            b = min(d, M) / d
        check_b(1 / d, min(d, M) / d)
        S = d * (d * b - 1) / (N * M * (d * d - 1))
        return GeamSpec(d, N, (M,) * N, (1 / N,) * N, S, f"nm:{N},{M},{b:g}")
    raise GeamError(f"unknown preset {name!r}")


def parse_preset(text: str, d: int) -> GeamSpec:
    """Parse ``mub``, ``mum:b``, ``sic``, ``gsic:b`` or ``nm:N,M[,b]``."""
    name, _, args = text.strip().partition(":")
    name = name.strip().lower()
    try:
        vals = [float(v) for v in args.split(",")] if args else []
    except ValueError:
        raise GeamError(f"bad preset parameters in {text!r}") from None
    if name in ("mub", "sic"):
        if vals:
            raise GeamError(f"{name} takes no parameters")
        return preset_spec(name, d)
    if name in ("mum", "gsic"):
        if len(vals) != 1:
            raise GeamError(f"{name} takes one parameter b")
        return preset_spec(name, d, b=vals[0])
    if name == "nm":
        if len(vals) not in (2, 3) or vals[0] != int(vals[0]) or vals[1] != int(vals[1]):
            raise GeamError("nm takes integer N, M and an optional b")
        return preset_spec("nm", d, N=int(vals[0]), M=int(vals[1]), b=vals[2] if len(vals) == 3 else None)
    raise GeamError(f"unknown preset {text!r}")


# --------------------------------------------------------------------------
# Hermitian bases


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Orthonormal Hermitian basis split into frames.

    ``frames[k]`` has shape ``(M_k - 1, d, d)`` and holds traceless
    elements; together with ``I/sqrt(d)`` they form a basis of d x d
    Hermitian matrices.
    """

    d: int
    frames: tuple[np.ndarray, ...]

    def __post_init__(self):
        frames = tuple(np.asarray(f, dtype=complex) for f in self.frames)
        object.__setattr__(self, "frames", frames)
        d = self.d
        if sum(len(f) for f in frames) != d * d - 1:
            raise GeamError(f"basis has {sum(len(f) for f in frames)} traceless elements, expected {d * d - 1}")
        els = self.elements()
        if np.max(np.abs(np.trace(els[1:], axis1=1, axis2=2))) > 1e-12:
            raise GeamError("basis elements must be traceless")
        if np.max(np.abs(els - np.conj(np.swapaxes(els, 1, 2)))) > 1e-12:
            raise GeamError("basis elements must be Hermitian")
        flat = els.reshape(d * d, -1)
        dev = np.max(np.abs(flat.conj() @ flat.T - np.eye(d * d)))
        if dev > 1e-10:
            raise GeamError(f"basis is not orthonormal (Gram deviation {dev:.3e})")

    @property
    def partition(self) -> tuple[int, ...]:
        return tuple(len(f) + 1 for f in self.frames)

    @property
    def g0(self) -> np.ndarray:
        return np.eye(self.d, dtype=complex) / math.sqrt(self.d)

    def elements(self) -> np.ndarray:
        """All d^2 elements, identity first."""
        return np.concatenate([self.g0[None]] + [f for f in self.frames if len(f)])

    def frame_sum(self, k: int) -> np.ndarray:
        return self.frames[k].sum(axis=0)

    def conjugate(self) -> "HermitianBasis":
        return HermitianBasis(self.d, tuple(np.conj(f) for f in self.frames))


def gell_mann_matrices(d: int) -> np.ndarray:
    """Generalized Gell-Mann matrices with unit Hilbert-Schmidt norm, shape (d^2-1, d, d)."""
    out = []
    r = 1 / math.sqrt(2)
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = r
            a = np.zeros((d, d), dtype=complex)
            a[j, k] = -1j * r
            a[k, j] = 1j * r
            out += [s, a]
    for l in range(1, d):
        g = np.zeros((d, d), dtype=complex)
        norm = 1 / math.sqrt(l * (l + 1))
        g[np.arange(l), np.arange(l)] = norm
        g[l, l] = -l * norm
        out.append(g)
    return np.array(out)


def gell_mann_basis(d: int, partition, seed=None) -> HermitianBasis:
    """Split the Gell-Mann matrices into frames of sizes ``M_k - 1``.

    With ``seed`` the assignment order is shuffled reproducibly.
    """
    partition = tuple(int(m) for m in partition)
    if sum(m - 1 for m in partition) != d * d - 1:
        raise GeamError(f"partition {partition} does not have sum(M_k - 1) = {d * d - 1}")
    mats = gell_mann_matrices(d)
    if seed is not None:
        mats = mats[make_rng(seed).permutation(len(mats))]
    frames, start = [], 0
    for m in partition:
        frames.append(mats[start:start + m - 1])
        start += m - 1
    return HermitianBasis(d, tuple(frames))


# --------------------------------------------------------------------------
# Rank-one realizations (MUBs and SICs)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(math.isqrt(n)) + 1))


def _joint_eigenbasis(ops) -> np.ndarray:
    # commuting +-1 observables; weights 1, 2, 4.. make the combined spectrum simple
    combo = sum((2 ** i) * op for i, op in enumerate(ops))
    return np.array(hermitian_eig(combo).eigenvectors)


@lru_cache(maxsize=None)
def mub_bases(d: int) -> tuple[np.ndarray, ...]:
    """d + 1 mutually unbiased bases as unitary matrices (columns = vectors).

    Available for d = 2, d = 4 (two-qubit Pauli partition) and odd primes
    (quadratic-phase construction).
    """
    if d == 2:
        return tuple(_joint_eigenbasis([p]) for p in (PAULI_X, PAULI_Y, PAULI_Z))
    if d == 4:
        P = {"I": np.eye(2, dtype=complex), "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
        sets = [("ZI", "IZ"), ("XI", "IX"), ("YI", "IY"), ("XZ", "YX"), ("XY", "YZ")]
        return tuple(_joint_eigenbasis([np.kron(P[s[0]], P[s[1]]) for s in pair]) for pair in sets)
    if _is_prime(d):
        j = np.arange(d)
        w = np.exp(2j * np.pi / d)
        bases = [np.eye(d, dtype=complex)]
        for b in range(d):
            cols = [w ** ((b * j * j + l * j) % d) / math.sqrt(d) for l in range(d)]
            bases.append(np.array(cols).T)
        return tuple(bases)
    raise GeamError(f"no MUB construction available for d = {d}")


def _weyl_heisenberg(d: int) -> list[np.ndarray]:
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b) for a in range(d) for b in range(d)]


def _sic_fiducial_numeric(d: int, seed: int = 0, attempts: int = 50) -> np.ndarray:
    from scipy.optimize import least_squares

    ops = _weyl_heisenberg(d)[1:]
    target = 1.0 / (d + 1)

    def residual(p):
        psi = p[:d] + 1j * p[d:]
        psi = psi / np.linalg.norm(psi)
        return np.array([abs(np.vdot(psi, op @ psi)) ** 2 - target for op in ops])

    rng = make_rng(seed)
    for _ in range(attempts):
        sol = least_squares(residual, rng.standard_normal(2 * d), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.max(np.abs(sol.fun)) < 1e-13:
            psi = sol.x[:d] + 1j * sol.x[d:]
            return psi / np.linalg.norm(psi)
    raise GeamError(f"numerical SIC fiducial search failed for d = {d}")


@lru_cache(maxsize=None)
def sic_vectors(d: int) -> np.ndarray:
    """d^2 SIC vectors as columns: Weyl-Heisenberg orbit of a fiducial.

    Closed-form fiducials for d = 2, 3; other dimensions use a seeded
    least-squares search on the overlap equations.
    """
    if d == 2:
        theta = math.acos(1 / math.sqrt(3))
        psi = np.array([math.cos(theta / 2), np.exp(1j * math.pi / 4) * math.sin(theta / 2)])
    elif d == 3:
        psi = np.array([0, 1, -1], dtype=complex) / math.sqrt(2)
    else:
        psi = _sic_fiducial_numeric(d)
    return np.array([op @ psi for op in _weyl_heisenberg(d)]).T


def basis_from_operators(spec: GeamSpec, frames) -> HermitianBasis:
    """Recover the Hermitian basis that generates given GEAM operators.

    Inverts the construction with all signs +1: ``H = (P - a/d I)/tau``,
    ``G_k = H_{k,M}/(sqrt M + 1)``, ``G_{k,l} = (G_k - H_{k,l})/(sqrt M (sqrt M + 1))``.
    Raises GeamError if the result is not orthonormal.
    """
    d = spec.d
    eye = np.eye(d)
    out = []
    for k, (P, m) in enumerate(zip(frames, spec.M)):
        P = np.asarray(P, dtype=complex)
        a, tau = spec.a[k], spec.tau[k]
        if tau == 0:
            raise GeamError("cannot recover a basis from S = 0 operators")
        H = (P - a / d * eye) / tau
        r = math.sqrt(m)
        gk = H[m - 1] / (r + 1)
        out.append(np.array([(gk - H[l]) / (r * (r + 1)) for l in range(m - 1)]))
    return HermitianBasis(d, tuple(out))


def projective_basis(d: int, kind: str) -> HermitianBasis:
    """Basis for which the mub (or sic) preset yields rank-one operators.

    The same basis gives positive operators for mum:b and gsic:b at every
    admissible b, since shrinking S only pulls the operators toward I.
    """
    if kind == "mub":
        spec = preset_spec("mub", d)
        frames = [spec.gamma[0] * np.einsum("il,jl->lij", u, u.conj()) for u in mub_bases(d)]
    elif kind == "sic":
        spec = preset_spec("sic", d)
        v = sic_vectors(d)
        frames = [np.einsum("il,jl->lij", v, v.conj()) / d]
    else:
        raise GeamError(f"unknown projective kind {kind!r}")
    return basis_from_operators(spec, frames)


# --------------------------------------------------------------------------
# Construction and validation


@dataclass(frozen=True, eq=False)
class Geam:
    """Realized GEAM: ``frames[k]`` has shape ``(M_k, d, d)``."""

    spec: GeamSpec
    basis: HermitianBasis
    signs: tuple[int, ...]
    frames: tuple[np.ndarray, ...]

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def conical(self) -> bool:
        return self.spec.conical

    @property
    def operator_count(self) -> int:
        return sum(len(f) for f in self.frames)

    def operators(self) -> np.ndarray:
        """All operators stacked frame by frame, shape (sum M_k, d, d)."""
        return np.concatenate(self.frames)

    def frame_index(self) -> np.ndarray:
        return np.concatenate([np.full(len(f), k) for k, f in enumerate(self.frames)])

    @cached_property
    def min_eigenvalue(self) -> float:
        return min(float(hermitian_eig(p).eigenvalues[-1]) for p in self.operators())

    def to_dict(self) -> dict:
        out = self.spec.to_dict()
        out["signs"] = list(self.signs)
        return out


def construct_geam(spec: GeamSpec, basis: HermitianBasis, signs=None) -> Geam:
    if basis.d != spec.d or basis.partition != spec.M:
        raise GeamError(f"basis partition {basis.partition} does not match frame sizes {spec.M}")
    signs = (1,) * spec.N if signs is None else tuple(int(s) for s in signs)
    if len(signs) != spec.N or any(s not in (1, -1) for s in signs):
        raise GeamError("signs must be N values in {+1, -1}")
    d = spec.d
    eye = np.eye(d, dtype=complex)
    frames = []
    for k, m in enumerate(spec.M):
        g = basis.frames[k]
        gk = g.sum(axis=0)
        r = math.sqrt(m)
        H = np.empty((m, d, d), dtype=complex)
        H[: m - 1] = gk[None] - r * (r + 1) * g
        H[m - 1] = (r + 1) * gk
        tau = signs[k] * spec.tau[k]
        P = spec.a[k] / d * eye[None] + tau * H
        P = 0.5 * (P + np.conj(np.swapaxes(P, 1, 2)))
        P.flags.writeable = False
        frames.append(P)
    return Geam(spec, basis, signs, tuple(frames))


@dataclass(frozen=True)
class CheckResult:
    deviation: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    checks: dict
    tolerance: float
    min_eigenvalue: float

    TRACE_CHECKS = ("frame_sum", "trace", "purity", "intra_frame", "inter_frame", "count")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def trace_conditions_passed(self) -> bool:
        return all(self.checks[name].passed for name in self.TRACE_CHECKS)

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "min_eigenvalue": self.min_eigenvalue,
            "checks": {k: {"deviation": v.deviation, "pass": v.passed} for k, v in self.checks.items()},
        }


def validate_geam(g: Geam, tol: float = DEFAULT.geam) -> ValidationReport:
    """Measure every defining condition of a GEAM; failures are reported, not raised.

    Checks: frame sums ``gamma_k I``, traces ``a_k``, ``tr P^2 = b_k a_k^2``,
    intra-frame overlaps ``c_k a_k^2``, inter-frame overlaps
    ``a_k a_k' / d``, the operator count ``d^2 + N - 1``, and positivity.
    """
    spec = g.spec
    d = spec.d
    a, b, c = spec.a, spec.b, spec.c
    eye = np.eye(d)
    dev = {}
    dev["frame_sum"] = max(float(np.max(np.abs(P.sum(axis=0) - gm * eye))) for P, gm in zip(g.frames, spec.gamma))
    ops = g.operators()
    idx = g.frame_index()
    dev["trace"] = float(np.max(np.abs(np.trace(ops, axis1=1, axis2=2) - a[idx])))
    flat = ops.reshape(len(ops), -1)
    gram = np.real(flat.conj() @ flat.T)
    same = idx[:, None] == idx[None, :]
    diag = np.eye(len(ops), dtype=bool)
    expected = np.where(
        diag,
        (b * a ** 2)[idx][:, None] * np.ones(len(ops)),
        np.where(same, (c * a ** 2)[idx][:, None] * np.ones(len(ops)), np.outer(a[idx], a[idx]) / d),
    )
    err = np.abs(gram - expected)
    dev["purity"] = float(np.max(err[diag]))
    dev["intra_frame"] = float(np.max(err[same & ~diag], initial=0.0))
    dev["inter_frame"] = float(np.max(err[~same], initial=0.0))
    dev["count"] = float(abs(g.operator_count - (d * d + spec.N - 1)) + abs(sum(spec.M) - g.operator_count))
    lmin = g.min_eigenvalue
    dev["positivity"] = max(0.0, -lmin)
    checks = {k: CheckResult(v, v <= tol) for k, v in dev.items()}
    return ValidationReport(checks, tol, lmin)


def max_feasible_S(N: int, M, gamma, basis: HermitianBasis, signs=None, *, tol: float = 1e-10) -> float:
    """Largest conical S (up to the cap) keeping every P_{k,l} positive.

    Bisection on S; the minimum eigenvalue is concave in sqrt(S), so the
    feasible set is an interval starting at 0.
    """
    d = basis.d
    M = tuple(M)
    gamma = tuple(gamma)
    cap = min(frame_cap(d, m, g) for m, g in zip(M, gamma))

    def feasible(S):
        geam = construct_geam(GeamSpec(d, N, M, gamma, S), basis, signs)
        return geam.min_eigenvalue >= -DEFAULT.positivity

    if feasible(cap):
        return cap
    lo, hi = 0.0, cap
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def scale_to_symmetric(g: Geam) -> tuple[np.ndarray, ...]:
    """Frames ``P_{k,l}/gamma_k`` of the associated generalized symmetric measurement."""
    if not g.spec.uniform_gamma:
        raise GeamError("the symmetric measurement needs gamma_k = 1/N for all k")
    return tuple(P / gm for P, gm in zip(g.frames, g.spec.gamma))


def build_geam(preset: str | GeamSpec, d: int | None = None, *, realization: str = "auto", signs=None, seed=None) -> Geam:
    """Preset string (or spec) to a realized GEAM.

    ``realization``: "gell-mann" uses the Gell-Mann basis (shuffled when
    ``seed`` is given); "projective" uses the MUB/SIC-derived basis; "auto"
    picks the projective basis for MUB/MUM/SIC/GSIC-shaped specs when d >= 3
    and one is available (at d = 2 the Gell-Mann basis is already rank one),
    and Gell-Mann otherwise.
    """
    spec = preset if isinstance(preset, GeamSpec) else parse_preset(preset, d)
    d = spec.d
    kind = None
    if spec.N == d + 1 and spec.M == (d,) * (d + 1):
        kind = "mub"
    elif spec.N == 1:
        kind = "sic"
    if realization == "projective" or (realization == "auto" and kind and d >= 3 and seed is None):
        if kind is None:
            raise GeamError(f"no projective realization for shape N={spec.N}, M={spec.M}")
        try:
            basis = projective_basis(d, kind)
        except GeamError:
            if realization == "projective":
                raise
            basis = gell_mann_basis(d, spec.M, seed)
    elif realization in ("gell-mann", "auto"):
        basis = gell_mann_basis(d, spec.M, seed)
    else:
        raise GeamError(f"unknown realization {realization!r}")
    return construct_geam(spec, basis, signs)


def positive_nm_geam(d: int, N: int, M: int, fraction: float = 0.9, seed=None) -> Geam:
    """A positive (N, M)-POVM realization on the Gell-Mann basis.

    The largest b in the family's range is not positive on every basis, so
    S is set to ``fraction`` times the largest positive S for this basis
    and b follows from S.
    """
    if not 0 < fraction <= 1:
        raise GeamError("fraction must be in (0, 1]")
    base = preset_spec("nm", d, N=N, M=M)
    basis = gell_mann_basis(d, base.M, seed)
    smax = max_feasible_S(N, base.M, base.gamma, basis)
    S = fraction * smax
    b = 1 / d + S * N * M * (d * d - 1) / (d * d)
    return construct_geam(preset_spec("nm", d, N=N, M=M, b=min(b, min(d, M) / d)), basis)
