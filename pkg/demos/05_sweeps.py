"""Run a parameter sweep from a config file and summarise the CSV.

Equivalent to ``gramclosure sweep --config configs/bimodal_fig2.cfg``.
"""
import collections
import sys
from pathlib import Path

from gramclosure.experiments import load_config, run_sweep, write_csv

root = Path(__file__).resolve().parent.parent
cfg = load_config(root / "configs" / "bimodal_fig2.cfg")
rows = run_sweep(cfg)
out = sys.argv[1] if len(sys.argv) > 1 else "bimodal_fig2.csv"
write_csv(rows, out)
print(f"wrote {len(rows)} rows to {out}")

worst = collections.defaultdict(float)
for r in rows:
    if r.rel_error == r.rel_error:
        worst[(r.closure_name, r.M)] = max(worst[(r.closure_name, r.M)], r.rel_error)
for (name, M), e in sorted(worst.items()):
    print(f"  {name:14s} M={M}: max relative error {e:.3e}")
