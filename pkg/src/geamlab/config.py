"""Numerical thresholds shared by every module."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Fixed validation thresholds.

    hermitian_input bounds how far an input may be from Hermitian before it
    is rejected; anything accepted is symmetrized exactly.

    eigen_floor: eigenvalues below it are roundoff and become exact zeros
    before any kernel is evaluated. Kernels behave like lam^e near 0 with
    e possibly small, so a 1e-17 leftover would shift Q_f by ~1e-4.
    """

    hermitian_input: float = 1e-9
    hermitian: float = 1e-12
    psd: float = 1e-10
    trace: float = 1e-12
    purity: float = 1e-10
    reconstruction: float = 1e-10
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    degenerate_rel: float = 1e-9
    eigen_floor: float = 1e-14
    identity: float = 1e-9
    geam: float = 1e-10
    positivity: float = 1e-12


DEFAULT = Tolerances()
