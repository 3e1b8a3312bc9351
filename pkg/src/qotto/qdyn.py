"""Driven two-level dynamics for the expansion and compression strokes.

Energies are frequencies (E/h) in kHz and times are in microseconds, so a
Hamiltonian ``H`` acting for ``dt`` contributes the phase
``2*pi * H * dt * 1e-3``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

DEFAULT_STEPS = 100_000

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

# kHz * us -> cycles
_PHASE_UNIT = 2.0 * np.pi * 1e-3

Direction = Literal["expansion", "compression"]


@dataclass(frozen=True)
class DriveProtocol:
    """Linear gap ramp with a quarter-turn of the field axis from x to y.

    ``nu1`` is the gap at the start of the expansion stroke and ``nu2`` the
    gap at its end; a compression protocol with the same parameters runs the
    same ramp backwards with the sign of the Hamiltonian flipped.
    """

    nu1: float
    nu2: float
    tau: float
    direction: Direction = "expansion"

    def __post_init__(self):
        if not (self.nu1 > 0 and self.nu2 > 0):
            raise ValueError(f"gaps must be positive, got nu1={self.nu1}, nu2={self.nu2}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.direction not in ("expansion", "compression"):
            raise ValueError(f"unknown direction {self.direction!r}")

    def gap(self, t):
        """Instantaneous expansion gap nu(t) in kHz."""
        s = np.asarray(t, dtype=float) / self.tau
        return self.nu1 * (1.0 - s) + self.nu2 * s

    def as_direction(self, direction: Direction) -> "DriveProtocol":
        return DriveProtocol(self.nu1, self.nu2, self.tau, direction)

    def hamiltonian(self, t) -> np.ndarray:
        if self.direction == "expansion":
            return hamiltonian_expansion(t, self)
        return hamiltonian_compression(t, self)


@dataclass(frozen=True)
class EigenBasis2:
    ground: np.ndarray
    excited: np.ndarray
    e_ground: float
    e_excited: float

    @property
    def gap(self) -> float:
        return self.e_excited - self.e_ground

    def matrix(self) -> np.ndarray:
        """Columns are (ground, excited)."""
        return np.column_stack([self.ground, self.excited])


@dataclass(frozen=True)
class TransitionProbabilities:
    xi_exp: float
    xi_com: float

    def __post_init__(self):
        for name in ("xi_exp", "xi_com"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    @staticmethod
    def stochastic_matrix(xi: float) -> np.ndarray:
        return np.array([[1.0 - xi, xi], [xi, 1.0 - xi]])


def _check_time(t, tau):
    t_arr = np.asarray(t, dtype=float)
    # allow the endpoint to land a few ulps outside after tau - t
    slack = 4 * np.finfo(float).eps * tau
    if np.any(t_arr < -slack) or np.any(t_arr > tau + slack):
        raise ValueError(f"time {t} outside [0, {tau}]")
    return np.clip(t_arr, 0.0, tau)


def _field_expansion(t, proto: DriveProtocol):
    """Pauli components (hx, hy) of the expansion Hamiltonian."""
    t = _check_time(t, proto.tau)
    half_gap = 0.5 * proto.gap(t)
    angle = np.pi * t / (2.0 * proto.tau)
    return -half_gap * np.cos(angle), -half_gap * np.sin(angle)


def _pauli_matrix(hx, hy, hz=0.0):
    return np.array([[hz, hx - 1j * hy], [hx + 1j * hy, -hz]], dtype=complex)


def hamiltonian_expansion(t: float, proto: DriveProtocol) -> np.ndarray:
    """Expansion Hamiltonian ``-(nu(t)/2)[cos(pi t/2tau) sx + sin(pi t/2tau) sy]``."""
    if proto.direction != "expansion":
        raise ValueError("hamiltonian_expansion needs an expansion protocol")
    hx, hy = _field_expansion(t, proto)
    return _pauli_matrix(float(hx), float(hy))


def hamiltonian_compression(t: float, proto: DriveProtocol) -> np.ndarray:
    """Compression Hamiltonian, ``-H_exp(tau - t)``."""
    t = float(_check_time(t, proto.tau))
    hx, hy = _field_expansion(proto.tau - t, proto)
    return _pauli_matrix(-float(hx), -float(hy))


def _phase_fix(v: np.ndarray) -> np.ndarray:
    k = 0 if abs(v[0]) > 1e-15 else 1
    v = v * (abs(v[k]) / v[k])
    v[k] = abs(v[k])
    return v / np.linalg.norm(v)


def eigensystem(H: np.ndarray) -> EigenBasis2:
    """Closed-form diagonalisation of a Hermitian 2x2 matrix.

    Eigenvectors carry a fixed global phase: the first nonzero component is
    real and positive.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {H.shape}")
    scale = max(np.abs(H).max(), 1.0)
    if np.abs(H - H.conj().T).max() > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    a, d = H[0, 0].real, H[1, 1].real
    b = H[0, 1]
    mean = 0.5 * (a + d)
    half_split = np.hypot(0.5 * (a - d), abs(b))
    if half_split <= 1e-14 * scale:
        raise ValueError("degenerate Hamiltonian: zero gap")

    vecs = []
    for lam in (mean - half_split, mean + half_split):
        c1 = np.array([b, lam - a])
        c2 = np.array([lam - d, np.conj(b)])
        v = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
        vecs.append(_phase_fix(v / np.linalg.norm(v)))
    return EigenBasis2(vecs[0], vecs[1], mean - half_split, mean + half_split)


def _step_unitaries(hx, hy, dt):
    """exp(-i 2pi (hx sx + hy sy) dt) for arrays of field components."""
    r = np.hypot(hx, hy)
    theta = _PHASE_UNIT * r * dt
    c = np.cos(theta)
    s = np.sin(theta)
    with np.errstate(invalid="ignore", divide="ignore"):
        nx = np.where(r > 0, hx / np.where(r > 0, r, 1.0), 0.0)
        ny = np.where(r > 0, hy / np.where(r > 0, r, 1.0), 0.0)
    out = np.empty((hx.size, 2, 2), dtype=complex)
    out[:, 0, 0] = c
    out[:, 1, 1] = c
    out[:, 0, 1] = -1j * s * (nx - 1j * ny)
    out[:, 1, 0] = -1j * s * (nx + 1j * ny)
    return out


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """Time-ordered product ``M[n-1] @ ... @ M[0]`` by pairwise reduction."""
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            mats = np.concatenate([mats, IDENTITY[None]], axis=0)
        mats = np.matmul(mats[1::2], mats[0::2])
    return mats[0]


def _nearest_unitary(U: np.ndarray) -> np.ndarray:
    """Polar projection; removes roundoff drift accumulated over many steps."""
    W, _, Vh = np.linalg.svd(U)
    return W @ Vh


def field_components(t, proto: DriveProtocol):
    """Vectorised (hx, hy) of ``proto``'s Hamiltonian at times ``t``."""
    if proto.direction == "expansion":
        return _field_expansion(t, proto)
    hx, hy = _field_expansion(proto.tau - np.asarray(t, dtype=float), proto)
    return -hx, -hy


def propagate(proto: DriveProtocol, steps: int = DEFAULT_STEPS, *, reverse_time: bool = False) -> np.ndarray:
    """Midpoint-exponential propagator of ``proto`` over ``[0, tau]``.

    With ``reverse_time`` the driving is run backwards, i.e. the generator at
    time ``t`` is ``H(tau - t)``; this is the stroke of the reversed engine.
    """
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps}")
    steps = int(steps)
    dt = proto.tau / steps
    t_mid = (np.arange(steps) + 0.5) * dt
    if reverse_time:
        t_mid = proto.tau - t_mid
    hx, hy = field_components(t_mid, proto)
    return _nearest_unitary(_ordered_product(_step_unitaries(hx, hy, dt)))


def endpoint_bases(proto: DriveProtocol, *, reverse_time: bool = False):
    """Eigenbases of the generator at the start and the end of the stroke."""
    start, end = (proto.tau, 0.0) if reverse_time else (0.0, proto.tau)
    return eigensystem(proto.hamiltonian(start)), eigensystem(proto.hamiltonian(end))


def transition_probability(U: np.ndarray, basis_in: EigenBasis2, basis_out: EigenBasis2) -> float:
    """Flip probability ``|<excited_out| U |ground_in>|^2``."""
    amp = np.vdot(basis_out.excited, U @ basis_in.ground)
    return float(min(abs(amp) ** 2, 1.0))


def transition_matrix(U: np.ndarray, basis_in: EigenBasis2, basis_out: EigenBasis2) -> np.ndarray:
    """``T[a, b] = |<b_out| U |a_in>|^2`` with index 0 = ground, 1 = excited."""
    amps = basis_out.matrix().conj().T @ U @ basis_in.matrix()
    return (np.abs(amps) ** 2).T


def stroke_xi(proto: DriveProtocol, steps: int = DEFAULT_STEPS, *, reverse_time: bool = False) -> float:
    U = propagate(proto, steps, reverse_time=reverse_time)
    b_in, b_out = endpoint_bases(proto, reverse_time=reverse_time)
    return transition_probability(U, b_in, b_out)


def unitarity_defect(U: np.ndarray) -> float:
    return float(np.linalg.norm(U.conj().T @ U - IDENTITY))
