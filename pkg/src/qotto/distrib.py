"""Lorentzian broadening, stochastic-efficiency densities and cycle statistics.

Moments of work and heat are taken on the discrete peak set: a Lorentzian
has no finite variance, so the broadened grid is only used for densities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate

WorkSign = Literal["extracted", "performed"]

DEFAULT_GAMMA = 0.15
DEFAULT_ETA_WINDOW = (-5.0, 5.0)
DEFAULT_ETA_STEP = 1e-3


class SingularityError(ValueError):
    """The closed-form efficiency peak was evaluated on a singular point."""


class QuadratureError(RuntimeError):
    pass


class UndefinedStatisticError(ValueError):
    pass


def lorentzian(x, center, gamma):
    """Unit-area Lorentzian with half width at half maximum ``gamma``."""
    x = np.asarray(x, dtype=float)
    return gamma / (np.pi * ((x - center) ** 2 + gamma * gamma))


def _points(dist):
    """(w, q, prob) arrays from a PeakSet or a sequence of histories."""
    if hasattr(dist, "prob") and hasattr(dist, "w") and np.ndim(dist.prob) == 1:
        return np.asarray(dist.w), np.asarray(dist.q), np.asarray(dist.prob)
    rows = [(h.w, h.q, h.prob) for h in dist]
    w, q, p = (np.array(c, dtype=float) for c in zip(*rows))
    return w, q, p


def _signed(w, work_sign: WorkSign):
    if work_sign == "extracted":
        return w
    if work_sign == "performed":
        return -w
    raise ValueError(f"work_sign must be 'extracted' or 'performed', got {work_sign!r}")


def _check_axis(axis, name):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size < 2 or np.any(np.diff(axis) <= 0):
        raise ValueError(f"{name} must be a strictly increasing 1-D array")
    return axis


def default_w_axis():
    return np.linspace(-8.0, 8.0, 801)


def default_q_axis():
    return np.linspace(-6.0, 6.0, 601)


def default_eta_axis(window=DEFAULT_ETA_WINDOW, step=DEFAULT_ETA_STEP):
    """Cell-centred grid; it never lands on the log singularity at eta = 0."""
    lo, hi = window
    n = int(round((hi - lo) / step))
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


@dataclass(frozen=True)
class BroadenedGrid:
    w_axis: np.ndarray
    q_axis: np.ndarray
    density: np.ndarray  # indexed [i_w, i_q], per kHz^2
    gamma: float

    def integral(self) -> float:
        inner = integrate.trapezoid(self.density, self.q_axis, axis=1)
        return float(integrate.trapezoid(inner, self.w_axis))


def broaden_joint(peaks, gamma: float = DEFAULT_GAMMA, w_axis=None, q_axis=None, work_sign: WorkSign = "extracted") -> BroadenedGrid:
    """Sum of product Lorentzians centred on the discrete peaks."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    w_axis = _check_axis(default_w_axis() if w_axis is None else w_axis, "w_axis")
    q_axis = _check_axis(default_q_axis() if q_axis is None else q_axis, "q_axis")
    w, q, p = _points(peaks)
    w = _signed(w, work_sign)
    Lw = lorentzian(w_axis[None, :], w[:, None], gamma) * p[:, None]
    Lq = lorentzian(q_axis[None, :], q[:, None], gamma)
    return BroadenedGrid(w_axis, q_axis, Lw.T @ Lq, float(gamma))


def efficiency_peak_L(w: float, q: float, gamma: float, eta):
    """Density of ``eta = W/Q`` for independent Lorentzian W and Q.

    ``W`` is centred on ``w`` and ``Q`` on ``q``, both with HWHM ``gamma``.
    The closed form below is written in terms of ``u = -w``, which puts the
    peak at ``eta = w/q``.  It has a genuine log singularity at ``eta = 0``
    and removable 0/0 points where a denominator factor vanishes; both raise
    :class:`SingularityError`.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    e = np.asarray(eta, dtype=float)
    u, g2 = -float(w), float(gamma) ** 2
    q = float(q)
    cross = e * e * q * q + 2 * e * q * u + u * u
    d1 = g2 * (e - 1) ** 2 + cross
    d2 = g2 * (e + 1) ** 2 + cross
    bad = (d1 * d2 < 1e-300) | (e == 0)
    if np.any(bad):
        where = np.atleast_1d(e)[np.atleast_1d(bad)]
        raise SingularityError(f"closed-form efficiency peak is singular at eta={where[:5].tolist()}")
    gq, gu = g2 + q * q, g2 + u * u
    brace = gamma * (-g2 + e * e * gq - u * u) * (np.log(e * e) + np.log(gq) - np.log(gu))
    brace = brace + 2 * np.arctan(q / gamma) * (e * e * q * gq + 2 * e * u * gq + q * gu)
    brace = brace + 2 * np.arctan(u / gamma) * (e * e * u * gq + 2 * e * q * gu + u * gu)
    out = gamma / (np.pi ** 2 * d1 * d2) * brace
    return float(out) if np.ndim(out) == 0 else out


def efficiency_oracle(w: float, q: float, gamma: float, eta: float, epsabs: float = 1e-13) -> float:
    """Quadrature of ``int |Q| Lor(eta Q; w) Lor(Q; q) dQ``.

    Independent check on :func:`efficiency_peak_L`.  The real line is split
    at 0 and at the two Lorentzian centres in Q before integrating.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    eta = float(eta)

    def f(Q):
        return abs(Q) * lorentzian(eta * Q, w, gamma) * lorentzian(Q, q, gamma)

    cuts = {0.0, float(q)}
    if eta != 0.0:
        cuts.add(float(w) / eta)
    cuts = sorted(cuts)
    bounds = [-np.inf, *cuts, np.inf]
    total = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        val, err, info, *msg = integrate.quad(f, a, b, epsabs=epsabs, epsrel=1e-12, limit=400, full_output=1)
        if msg and err > max(1e-10, 1e-8 * abs(val)):
            raise QuadratureError(
                f"quadrature failed on [{a}, {b}] for (w={w}, q={q}, gamma={gamma}, eta={eta}): "
                f"{msg[0]}; estimate {val} +- {err}"
            )
        total += val
    return total


@dataclass(frozen=True)
class EfficiencyDensity:
    eta_axis: np.ndarray
    density: np.ndarray
    window: tuple = DEFAULT_ETA_WINDOW

    def local_maxima(self) -> np.ndarray:
        d = self.density
        idx = np.nonzero((d[1:-1] > d[:-2]) & (d[1:-1] > d[2:]))[0] + 1
        return self.eta_axis[idx]


def efficiency_distribution(dist, gamma: float = DEFAULT_GAMMA, eta_axis=None, window=DEFAULT_ETA_WINDOW) -> EfficiencyDensity:
    """Probability-weighted sum of efficiency peaks.

    ``dist`` is a PeakSet or a list of histories; both give the same density
    since each term depends only on ``(w, q)``.
    """
    eta_axis = _check_axis(default_eta_axis(window) if eta_axis is None else eta_axis, "eta_axis")
    density = np.zeros_like(eta_axis)
    for w, q, p in zip(*_points(dist)):
        if p != 0.0:
            density += p * efficiency_peak_L(w, q, gamma, eta_axis)
    return EfficiencyDensity(eta_axis, density, tuple(window))


def eta_moments(ed: EfficiencyDensity, window=None) -> tuple[float, float]:
    """Mean and standard deviation of eta restricted to ``window``."""
    lo, hi = ed.window if window is None else window
    x = ed.eta_axis
    spacing = np.diff(x).max()
    if spacing > DEFAULT_ETA_STEP * (1 + 1e-9):
        raise ValueError(f"eta grid spacing {spacing} is coarser than {DEFAULT_ETA_STEP}")
    if x[0] > lo + spacing or x[-1] < hi - spacing:
        raise ValueError(f"eta grid [{x[0]}, {x[-1]}] does not cover window [{lo}, {hi}]")
    sel = (x >= lo) & (x <= hi)
    x, d = x[sel], ed.density[sel]
    norm = integrate.trapezoid(d, x)
    mean = integrate.trapezoid(x * d, x) / norm
    var = integrate.trapezoid((x - mean) ** 2 * d, x) / norm
    return float(mean), float(np.sqrt(var))


def pearson(peaks, work_sign: WorkSign = "extracted") -> float:
    """Work-heat correlation coefficient of the discrete distribution."""
    w, q, p = _points(peaks)
    w = _signed(w, work_sign)
    mw, mq = p @ w, p @ q
    cov = p @ ((w - mw) * (q - mq))
    vw = p @ (w - mw) ** 2
    vq = p @ (q - mq) ** 2
    if vw <= 1e-300 or vq <= 1e-300:
        raise UndefinedStatisticError("work or heat has zero variance; correlation undefined")
    rho = cov / np.sqrt(vw * vq)
    return float(np.clip(rho, -1.0, 1.0))


def macroscopic(peaks) -> tuple[float, float, float]:
    """``(<W>, <Q>, <W>/<Q>)`` on the discrete distribution."""
    w, q, p = _points(peaks)
    mean_w, mean_q = float(p @ w), float(p @ q)
    if mean_q == 0.0:
        raise UndefinedStatisticError("mean heat is zero; macroscopic efficiency undefined")
    return mean_w, mean_q, mean_w / mean_q


@dataclass(frozen=True)
class CycleSummary:
    tau: float
    xi_exp: float
    xi_com: float
    pearson: float
    eta_th: float
    mean_eta: float
    std_eta: float
    mean_W: float
    mean_Q: float
    mean_Sigma: float
    ift: float
