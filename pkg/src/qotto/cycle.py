"""One finite-time Otto cycle under four projective energy measurements.

A history is the tuple of measured levels ``(j, k, l, m)``: ``j`` before the
expansion stroke (gap ``nu1``), ``k`` after it (gap ``nu2``), ``l`` after the
hot thermalisation (gap ``nu2``) and ``m`` after compression (gap ``nu1``).
Each label is ``-1`` for the lower level ``-nu/2`` and ``+1`` for the upper
one.  ``w`` is the extracted work and ``q`` the heat absorbed from the hot
bath, both in kHz.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import qdyn, thermal
from .qdyn import DriveProtocol, TransitionProbabilities
from .thermal import Populations, ThermalConfig

DEFAULT_NU1 = 2.0
DEFAULT_NU2 = 3.6

# Table order: first label slowest, "-" before "+"
HISTORY_LABELS = tuple(itertools.product((-1, 1), repeat=4))


def _level(sign: int) -> int:
    return 0 if sign < 0 else 1


def peak_key(labels) -> tuple[int, int]:
    """Integer coordinates ``(a, b)`` with ``w = (a nu1 + b nu2)/2``, ``q = b nu2/2``.

    Distinct keys never give the same ``(w, q)`` for positive gaps, so peak
    merging on keys is exact.
    """
    j, k, l, m = labels
    return j - m, l - k


def stroke_energies(nu1: float, nu2: float, labels) -> tuple[float, float]:
    """Extracted work and absorbed heat for one history.

    ``w = E_j(nu1) - E_k(nu2) + E_l(nu2) - E_m(nu1)`` and
    ``q = E_l(nu2) - E_k(nu2)``.
    """
    a, b = peak_key(labels)
    return 0.5 * (a * nu1 + b * nu2), 0.5 * b * nu2


@dataclass(frozen=True)
class HistoryRecord:
    labels: tuple
    w: float
    q: float
    prob: float

    @property
    def key(self) -> tuple[int, int]:
        return peak_key(self.labels)


@dataclass(frozen=True)
class PeakSet:
    """Discrete joint distribution of (extracted work, absorbed heat).

    Peaks are sorted by ``(w, q)``; ``keys`` hold the exact integer
    coordinates from :func:`peak_key`.
    """

    w: np.ndarray
    q: np.ndarray
    prob: np.ndarray
    keys: tuple = field(default=())

    def __len__(self):
        return len(self.prob)

    def __iter__(self):
        return iter(zip(self.w.tolist(), self.q.tolist(), self.prob.tolist()))

    def prob_at_key(self, key) -> float:
        try:
            return float(self.prob[self.keys.index(tuple(key))])
        except ValueError:
            return 0.0

    def total(self) -> float:
        return float(self.prob.sum())


def enumerate_histories(
    xi: TransitionProbabilities,
    cold: Populations,
    hot: Populations,
    nu1: float = DEFAULT_NU1,
    nu2: float = DEFAULT_NU2,
) -> list[HistoryRecord]:
    """All 16 measurement histories with their probabilities."""
    T_exp = TransitionProbabilities.stochastic_matrix(xi.xi_exp)
    T_com = TransitionProbabilities.stochastic_matrix(xi.xi_com)
    out = []
    for labels in HISTORY_LABELS:
        j, k, l, m = map(_level, labels)
        prob = cold[j] * T_exp[j, k] * hot[l] * T_com[l, m]
        w, q = stroke_energies(nu1, nu2, labels)
        out.append(HistoryRecord(labels, w, q, float(prob)))
    return out


def peaks_from_keys(key_probs: dict, nu1: float, nu2: float) -> PeakSet:
    """Build a PeakSet from ``{(a, b): prob}``; zero-probability peaks are dropped."""
    items = []
    for key, prob in key_probs.items():
        if prob > 0.0:
            a, b = key
            items.append((0.5 * (a * nu1 + b * nu2), 0.5 * b * nu2, prob, key))
    items.sort(key=lambda it: (it[0], it[1]))
    return PeakSet(
        w=np.array([it[0] for it in items]),
        q=np.array([it[1] for it in items]),
        prob=np.array([it[2] for it in items]),
        keys=tuple(it[3] for it in items),
    )


def discrete_joint(histories, nu1: float = DEFAULT_NU1, nu2: float = DEFAULT_NU2) -> PeakSet:
    """Merge histories with identical (w, q) into peaks."""
    acc: dict = {}
    for h in histories:
        acc[h.key] = acc.get(h.key, 0.0) + h.prob
    return peaks_from_keys(acc, nu1, nu2)


@dataclass(frozen=True)
class CycleResult:
    xi: TransitionProbabilities
    cold: Populations
    hot: Populations
    histories: list
    peaks: PeakSet


def hot_populations_via_channel(rho_after_expansion, nu2: float, kT2: float, basis_hot) -> Populations:
    """Thermalise the post-expansion state with the Kraus channel.

    The channel acts in the eigenbasis of the final expansion Hamiltonian;
    ``basis_hot`` is that basis.
    """
    target = thermal.gibbs_populations(nu2, kT2)
    V = basis_hot.matrix()
    rho_energy = V.conj().T @ rho_after_expansion @ V
    rho_energy = 0.5 * (rho_energy + rho_energy.conj().T)
    out = thermal.apply_channel(rho_energy, thermal.kraus_thermalization(target.p_excited))
    p_exc = float(out[1, 1].real)
    return Populations(1.0 - p_exc, p_exc)


def run_cycle(
    proto: DriveProtocol,
    thermal_cfg: ThermalConfig,
    steps: int = qdyn.DEFAULT_STEPS,
) -> CycleResult:
    """Propagate both strokes and assemble the joint work-heat distribution.

    ``proto`` describes the expansion ramp; the compression stroke is derived
    from it and propagated independently.
    """
    expansion = proto.as_direction("expansion")
    compression = proto.as_direction("compression")

    U_exp = qdyn.propagate(expansion, steps)
    U_com = qdyn.propagate(compression, steps)
    b1, b2 = qdyn.endpoint_bases(expansion)
    c_in, c_out = qdyn.endpoint_bases(compression)

    T_exp = qdyn.transition_matrix(U_exp, b1, b2)
    T_com = qdyn.transition_matrix(U_com, c_in, c_out)
    for name, T in (("expansion", T_exp), ("compression", T_com)):
        if abs(T[0, 1] - T[1, 0]) > 1e-10 or np.abs(T.sum(axis=1) - 1.0).max() > 1e-10:
            raise ArithmeticError(f"{name} transition matrix is not symmetric doubly stochastic")
    xi = TransitionProbabilities(float(T_exp[0, 1]), float(T_com[0, 1]))

    cold = thermal.gibbs_populations(proto.nu1, thermal_cfg.kT1)
    rho1 = b1.matrix() @ cold.density() @ b1.matrix().conj().T
    rho_after = U_exp @ rho1 @ U_exp.conj().T
    hot = hot_populations_via_channel(rho_after, proto.nu2, thermal_cfg.kT2, b2)

    histories = enumerate_histories(xi, cold, hot, proto.nu1, proto.nu2)
    return CycleResult(xi, cold, hot, histories, discrete_joint(histories, proto.nu1, proto.nu2))
