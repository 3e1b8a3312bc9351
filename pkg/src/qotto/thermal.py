"""Gibbs populations and the full-thermalisation Kraus channel.

Temperatures are frequency equivalents ``k_B T / h`` in kHz, so ``gap / kT``
is the dimensionless Boltzmann exponent.  Only the effective spin temperature
of the working qubit is modelled; the heat-bus temperature quoted in peV is
a separate preparation stage and has no role here.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

# cold and hot effective spin temperatures of the working qubit (kHz)
DEFAULT_KT1 = 1.60
DEFAULT_KT2 = 12.21


@dataclass(frozen=True)
class ThermalConfig:
    kT1: float = DEFAULT_KT1
    kT2: float = DEFAULT_KT2

    def __post_init__(self):
        if not (self.kT1 > 0 and self.kT2 > 0):
            raise ValueError(f"temperatures must be positive, got kT1={self.kT1}, kT2={self.kT2}")
        if self.kT2 <= self.kT1:
            warnings.warn(
                f"kT2={self.kT2} <= kT1={self.kT1}: not an engine configuration",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def beta1(self) -> float:
        return 1.0 / self.kT1

    @property
    def beta2(self) -> float:
        return 1.0 / self.kT2

    @property
    def delta_beta(self) -> float:
        return self.beta1 - self.beta2


@dataclass(frozen=True)
class Populations:
    p_ground: float
    p_excited: float

    def __post_init__(self):
        for v in (self.p_ground, self.p_excited):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"population {v} outside [0, 1]")
        if abs(self.p_ground + self.p_excited - 1.0) > 1e-14:
            raise ValueError("populations do not sum to one")

    def __getitem__(self, index: int) -> float:
        """Index 0 is the ground state, 1 the excited state."""
        return (self.p_ground, self.p_excited)[index]

    def as_array(self) -> np.ndarray:
        return np.array([self.p_ground, self.p_excited])

    def density(self) -> np.ndarray:
        return np.diag(self.as_array()).astype(complex)


def gibbs_populations(gap: float, kT: float) -> Populations:
    """Thermal occupations of levels ``-gap/2`` and ``+gap/2``."""
    if not gap > 0:
        raise ValueError(f"gap must be positive, got {gap}")
    if not kT > 0:
        raise ValueError(f"kT must be positive, got {kT}")
    # p_ground >= 1/2, so take the complement on the ground side to keep the
    # excited population's relative precision at large gap/kT
    p_excited = float(expit(-gap / kT))
    return Populations(1.0 - p_excited, p_excited)


@dataclass(frozen=True)
class KrausSet:
    operators: tuple

    def __iter__(self):
        return iter(self.operators)

    def __len__(self):
        return len(self.operators)

    def completeness(self) -> np.ndarray:
        return sum(K.conj().T @ K for K in self.operators)

    def choi(self) -> np.ndarray:
        """Choi matrix ``sum_ij |i><j| (x) E(|i><j|)``."""
        out = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                e_ij = np.zeros((2, 2), dtype=complex)
                e_ij[i, j] = 1.0
                out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = sum(K @ e_ij @ K.conj().T for K in self.operators)
        return out


def kraus_thermalization(p_excited_target: float) -> KrausSet:
    """Generalised amplitude damping that fully thermalises a qubit.

    Parameters
    ----------
    p_excited_target : float
        Excited-state population of the output state.

    Returns
    -------
    KrausSet
        Four operators in the (ground, excited) energy basis.  The induced
        map is constant: every input is sent to ``diag(1 - p, p)``.
    """
    p = float(p_excited_target)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    a, b = math.sqrt(1.0 - p), math.sqrt(p)
    K1 = a * np.array([[1, 0], [0, 0]], dtype=complex)
    K2 = b * np.array([[0, 0], [0, 1]], dtype=complex)
    K3 = a * np.array([[0, 1], [0, 0]], dtype=complex)
    K4 = b * np.array([[0, 0], [-1, 0]], dtype=complex)
    return KrausSet((K1, K2, K3, K4))


def check_density(rho, atol: float = 1e-12) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"density matrix must be 2x2, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > atol:
        raise ValueError(f"density matrix trace {np.trace(rho).real} != 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def apply_channel(rho, ks: KrausSet) -> np.ndarray:
    rho = check_density(rho)
    return sum(K @ rho @ K.conj().T for K in ks)
