"""Fifty-point driving-time sweep written to disk, then read back.

Equivalent to ``qotto-sweep --no-joint --out-dir sweep_out``.
"""
import csv
import sys
from pathlib import Path

from qotto import cli

out = Path(sys.argv[1] if len(sys.argv) > 1 else "sweep_out")
cfg = cli.load_config(out_dir=str(out), write_joint=False)
status = cli.run_sweep(cfg)
if status:
    sys.exit(status)

with open(out / "summary.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))
print(f"{len(rows)} driving times written to {out}/")
for r in rows[::7]:
    print(f"tau {float(r['tau_us']):7.2f} us  xi {float(r['xi_exp']):.5f}  "
          f"rho {float(r['pearson']):+.4f}  eta_th {float(r['eta_th']):+.4f}  <eta> {float(r['mean_eta']):.4f}")
