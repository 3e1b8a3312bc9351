"""Driving-time sweeps and their CSV/JSON datasets.

Run ``python -m qotto --help`` (or ``qotto-sweep``) for the command line.
Exit status is 0 on success, 1 for a bad configuration, 2 when a cycle
computation fails and 3 for I/O errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import cycle, distrib, fluct, qdyn, thermal

log = logging.getLogger(__name__)

SUMMARY_COLUMNS = (
    "tau_us", "xi_exp", "xi_com", "pearson", "eta_th", "mean_eta", "std_eta",
    "mean_W_khz", "mean_Q_khz", "mean_sigma", "ift",
)


class ConfigError(ValueError):
    pass


class SweepError(RuntimeError):
    def __init__(self, tau, cause):
        super().__init__(f"cycle at tau={tau} us failed: {type(cause).__name__}: {cause}")
        self.tau = tau


def _default_taus():
    return np.linspace(100.0, 700.0, 50).tolist()


@dataclass
class RunConfig:
    nu1_khz: float = cycle.DEFAULT_NU1
    nu2_khz: float = cycle.DEFAULT_NU2
    kT1_khz: float = thermal.DEFAULT_KT1
    kT2_khz: float = thermal.DEFAULT_KT2
    gamma_khz: float = distrib.DEFAULT_GAMMA
    tau_list_us: list = field(default_factory=_default_taus)
    steps: int = qdyn.DEFAULT_STEPS
    work_sign: str = "extracted"
    eta_window: list = field(default_factory=lambda: list(distrib.DEFAULT_ETA_WINDOW))
    eta_step: float = distrib.DEFAULT_ETA_STEP
    w_grid_khz: list = field(default_factory=lambda: [-8.0, 8.0, 0.02])
    q_grid_khz: list = field(default_factory=lambda: [-6.0, 6.0, 0.02])
    write_joint: bool = True
    out_dir: str = "out"
    format: str = "csv"

    def validate(self) -> "RunConfig":
        def positive(name):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                raise ConfigError(f"{name} must be a positive number, got {v!r}")

        for name in ("nu1_khz", "nu2_khz", "kT1_khz", "kT2_khz", "gamma_khz", "eta_step"):
            positive(name)
        if self.eta_step > distrib.DEFAULT_ETA_STEP:
            raise ConfigError(f"eta_step must be at most {distrib.DEFAULT_ETA_STEP}, got {self.eta_step}")
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 1:
            raise ConfigError(f"steps must be a positive integer, got {self.steps!r}")
        if not isinstance(self.tau_list_us, list) or not self.tau_list_us:
            raise ConfigError("tau_list_us must be a nonempty list")
        for t in self.tau_list_us:
            if isinstance(t, bool) or not isinstance(t, (int, float)) or not t > 0 or not math.isfinite(t):
                raise ConfigError(f"tau_list_us entries must be positive numbers, got {t!r}")
        tags = [tau_tag(t) for t in self.tau_list_us]
        if len(set(tags)) != len(tags):
            raise ConfigError("tau_list_us contains duplicate driving times")
        if self.work_sign not in ("extracted", "performed"):
            raise ConfigError(f"work_sign must be 'extracted' or 'performed', got {self.work_sign!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        if not isinstance(self.write_joint, bool):
            raise ConfigError("write_joint must be a boolean")
        if not isinstance(self.out_dir, str) or not self.out_dir:
            raise ConfigError("out_dir must be a nonempty path string")
        lo_hi = self.eta_window
        if not (isinstance(lo_hi, list) and len(lo_hi) == 2 and all(isinstance(v, (int, float)) for v in lo_hi) and lo_hi[0] < lo_hi[1]):
            raise ConfigError(f"eta_window must be [lo, hi] with lo < hi, got {lo_hi!r}")
        for name in ("w_grid_khz", "q_grid_khz"):
            g = getattr(self, name)
            if not (isinstance(g, list) and len(g) == 3 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in g)):
                raise ConfigError(f"{name} must be [min, max, step], got {g!r}")
            if not (g[1] > g[0] and g[2] > 0):
                raise ConfigError(f"{name} needs max > min and step > 0, got {g!r}")
        return self

    @property
    def thermal_config(self) -> thermal.ThermalConfig:
        return thermal.ThermalConfig(self.kT1_khz, self.kT2_khz)

    def axis(self, name) -> np.ndarray:
        lo, hi, step = getattr(self, name)
        n = int(round((hi - lo) / step)) + 1
        return np.linspace(lo, hi, n)

    def eta_axis(self) -> np.ndarray:
        return distrib.default_eta_axis(tuple(self.eta_window), self.eta_step)


def load_config(path=None, **overrides) -> RunConfig:
    """Read a flat JSON object; missing keys take the defaults."""
    data = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    if "tau_list_us" in data and isinstance(data["tau_list_us"], list):
        data["tau_list_us"] = list(data["tau_list_us"])
    return RunConfig(**data).validate()


@dataclass
class TauResult:
    summary: distrib.CycleSummary
    peaks: cycle.PeakSet
    efficiency: distrib.EfficiencyDensity
    ft: fluct.FTReport
    joint: distrib.BroadenedGrid | None = None


def compute_tau(cfg: RunConfig, tau: float, *, with_joint: bool = False) -> TauResult:
    th = cfg.thermal_config
    proto = qdyn.DriveProtocol(cfg.nu1_khz, cfg.nu2_khz, float(tau))
    res = cycle.run_cycle(proto, th, cfg.steps)
    ed = distrib.efficiency_distribution(res.peaks, cfg.gamma_khz, cfg.eta_axis(), tuple(cfg.eta_window))
    mean_eta, std_eta = distrib.eta_moments(ed)
    mean_w, mean_q, eta_th = distrib.macroscopic(res.peaks)
    rev = fluct.reverse_peaks(res.xi, res.cold, res.hot, cfg.nu1_khz, cfg.nu2_khz)
    ft = fluct.detailed_ft_check(res.peaks, rev, th)
    sign = -1.0 if cfg.work_sign == "performed" else 1.0
    summary = distrib.CycleSummary(
        tau=float(tau),
        xi_exp=res.xi.xi_exp,
        xi_com=res.xi.xi_com,
        pearson=distrib.pearson(res.peaks, cfg.work_sign),
        eta_th=eta_th,
        mean_eta=mean_eta,
        std_eta=std_eta,
        mean_W=sign * mean_w,
        mean_Q=mean_q,
        mean_Sigma=ft.mean_sigma,
        ift=ft.ift_value,
    )
    joint = None
    if with_joint:
        joint = distrib.broaden_joint(res.peaks, cfg.gamma_khz, cfg.axis("w_grid_khz"), cfg.axis("q_grid_khz"), cfg.work_sign)
    return TauResult(summary, res.peaks, ed, ft, joint)


def sweep(cfg: RunConfig, *, with_joint: bool = False) -> list[TauResult]:
    """Compute every driving time, sorted ascending in tau."""
    out = []
    for tau in sorted(cfg.tau_list_us):
        try:
            out.append(compute_tau(cfg, tau, with_joint=with_joint))
        except (ValueError, ArithmeticError, RuntimeError) as exc:
            raise SweepError(tau, exc) from exc
    return out


def tau_tag(tau: float) -> str:
    return f"{float(tau):.6f}".rstrip("0").rstrip(".")


def _num(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_num(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _summary_row(s: distrib.CycleSummary):
    return (s.tau, s.xi_exp, s.xi_com, s.pearson, s.eta_th, s.mean_eta, s.std_eta,
            s.mean_W, s.mean_Q, s.mean_Sigma, s.ift)


def _payloads(cfg: RunConfig, r: TauResult):
    sign = -1.0 if cfg.work_sign == "performed" else 1.0
    peaks = [(sign * w, q, p) for w, q, p in r.peaks]
    eta = list(zip(r.efficiency.eta_axis.tolist(), r.efficiency.density.tolist()))
    ft = [(sign * e.w, e.q, e.ln_ratio, e.sigma_prediction, e.residual) for e in r.ft.entries]
    return peaks, eta, ft


def write_outputs(cfg: RunConfig, results: list[TauResult]) -> list[Path]:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.format == "csv":
        for r in results:
            tag = tau_tag(r.summary.tau)
            peaks, eta, ft = _payloads(cfg, r)
            _write_csv(out / f"peaks_tau{tag}.csv", ("w_khz", "q_khz", "prob"), peaks)
            _write_csv(out / f"eta_tau{tag}.csv", ("eta", "density"), eta)
            _write_csv(out / f"ft_tau{tag}.csv", ("w_khz", "q_khz", "ln_ratio", "sigma", "residual"), ft)
            written += [out / f"peaks_tau{tag}.csv", out / f"eta_tau{tag}.csv", out / f"ft_tau{tag}.csv"]
            if r.joint is not None:
                g = r.joint
                W, Q = np.meshgrid(g.w_axis, g.q_axis, indexing="ij")
                rows = zip(W.ravel().tolist(), Q.ravel().tolist(), g.density.ravel().tolist())
                _write_csv(out / f"joint_tau{tag}.csv", ("w_khz", "q_khz", "density"), rows)
                written.append(out / f"joint_tau{tag}.csv")
        _write_csv(out / "summary.csv", SUMMARY_COLUMNS, [_summary_row(r.summary) for r in results])
        written.append(out / "summary.csv")
        return written

    docs = {"peaks": {}, "eta": {}, "ft": {}, "joint": {}}
    for r in results:
        tag = tau_tag(r.summary.tau)
        peaks, eta, ft = _payloads(cfg, r)
        docs["peaks"][tag] = [dict(zip(("w_khz", "q_khz", "prob"), row)) for row in peaks]
        docs["eta"][tag] = {"eta": [e for e, _ in eta], "density": [d for _, d in eta]}
        docs["ft"][tag] = [dict(zip(("w_khz", "q_khz", "ln_ratio", "sigma", "residual"), row)) for row in ft]
        if r.joint is not None:
            docs["joint"][tag] = {
                "w_khz": r.joint.w_axis.tolist(),
                "q_khz": r.joint.q_axis.tolist(),
                "density": r.joint.density.tolist(),
            }
    if not docs["joint"]:
        del docs["joint"]
    docs["summary"] = [dict(zip(SUMMARY_COLUMNS, _summary_row(r.summary))) for r in results]
    for name, doc in docs.items():
        path = out / f"{name}.json"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=1, sort_keys=False)
            fh.write("\n")
        written.append(path)
    return written


def run_sweep(cfg: RunConfig) -> int:
    """Compute and write a full sweep; returns the process exit status."""
    try:
        results = sweep(cfg, with_joint=cfg.write_joint)
    except SweepError as exc:
        log.error("%s", exc)
        return 2
    try:
        write_outputs(cfg, results)
    except OSError as exc:
        log.error("cannot write outputs to %s: %s", cfg.out_dir, exc)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qotto-sweep", description="Sweep the driving time of the qubit Otto engine.")
    p.add_argument("--config", help="JSON config file; missing keys use the defaults")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--tau", dest="tau", type=float, action="append", help="driving time in us (repeatable, replaces the config list)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--work-sign", dest="work_sign", choices=("extracted", "performed"))
    p.add_argument("--steps", type=int)
    p.add_argument("--no-joint", dest="write_joint", action="store_false", default=None, help="skip the broadened joint-density grids")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(
            args.config,
            out_dir=args.out_dir,
            tau_list_us=args.tau,
            format=args.format,
            work_sign=args.work_sign,
            steps=args.steps,
            write_joint=args.write_joint,
        )
    except ConfigError as exc:
        log.error("%s", exc)
        return 1
    except (TypeError, ValueError) as exc:
        log.error("invalid configuration: %s", exc)
        return 1
    log.info("sweeping %d driving times into %s", len(cfg.tau_list_us), cfg.out_dir)
    return run_sweep(cfg)


if __name__ == "__main__":
    sys.exit(main())
