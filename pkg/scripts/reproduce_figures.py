#!/usr/bin/env python3
"""Regenerate the main figure datasets as CSV/JSON (plus SVG previews).

Writes one subdirectory per dataset under the chosen output root:

  spectrum_periodic/  real & imaginary eigenvalue sheets vs v (N=30, r=0.5)
  spectrum_open/      same grid on the open chain, with zero-mode flags
  winding/            (<sigma_x>, <sigma_z>) trajectories and winding numbers
  svd_scan/           smallest singular values vs v for N in {10, 20, 30}
  evolve_present/     N=5 quench with the zero mode present (v=0.5)
  evolve_absent/      N=5 quench with the zero mode absent (v=1.5)
  sweep_phase/        2*pi phase sweep around one exceptional point
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path

from nhlab.cli import main as nhlab_main

RUNS = {
    "spectrum_periodic": ("spectrum", {
        "boundary": "periodic", "n_cells": 30, "r": 0.5, "gamma": 1.0,
        "v_grid": {"start": 0.0, "stop": 2.0, "num": 81},
    }),
    "spectrum_open": ("spectrum", {
        "boundary": "open", "n_cells": 30, "r": 0.5, "gamma": 1.0,
        "v_grid": {"start": 0.0, "stop": 2.0, "num": 81},
    }),
    "winding": ("winding", {
        "param_sets": [
            {"v": 0.3, "r": 0.18, "gamma": 1.0, "label": "zero_eps"},
            {"v": 0.3, "r": 0.3, "gamma": 1.0, "label": "one_ep"},
            {"v": 0.3, "r": 1.0, "gamma": 1.0, "label": "two_eps"},
        ],
    }),
    "svd_scan": ("svd-scan", {
        "n_list": [10, 20, 30], "r": 0.5, "gamma": 1.0,
        "v_grid": {"start": 0.0, "stop": 2.0, "num": 201},
    }),
    "evolve_present": ("evolve", {"preset": "zero-mode-present"}),
    "evolve_absent": ("evolve", {"preset": "zero-mode-absent"}),
    "sweep_phase": ("sweep-phase", {
        "v": 0.3, "r": 0.3, "gamma": 1.0, "k": 0.0, "mode": "transport",
    }),
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figure_data", help="output root directory")
    ap.add_argument("--svg", action="store_true", help="also write SVG previews")
    args = ap.parse_args()
    root = Path(args.out)
    root.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        for name, (command, cfg) in RUNS.items():
            cfg_path = Path(tmp) / f"{name}.json"
            cfg_path.write_text(json.dumps({"schema_version": 1} | cfg))
            argv = [command, "--config", str(cfg_path), "--out", str(root / name)]
            if args.svg:
                argv.append("--svg")
            print(f"== {name} ==")
            rc = nhlab_main(argv)
            if rc != 0:
                return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
