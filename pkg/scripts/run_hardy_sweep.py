#!/usr/bin/env python3
"""Weighted-gradient quotient sweep over dimensions and exponents.

Writes one CSV per (n, p) pair plus a summary of measured constants against
the proof bound p/(n-p).
"""

import argparse
import os

from conelab.fieldlib import suite_hardy
from conelab.fields import hardy_quotient
from conelab.geometry import ConeDomain
from conelab.grids import PolarGrid
from conelab.report import write_csv, write_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/hardy")
    ap.add_argument("--nr", type=int, default=600)
    ap.add_argument("--nt", type=int, default=96)
    args = ap.parse_args()

    summary = {}
    for n, p in ((2, 1.0), (3, 1.0), (3, 2.0)):
        grid = PolarGrid.cone(ConeDomain(n), nr=args.nr, nt=args.nt)
        bound = p / (n - p)
        rows = []
        for f in suite_hardy(grid):
            q = hardy_quotient(f, p)
            rows.append({"field": f.name, "quotient": q, "bound": bound,
                         "slack": q / bound})
        write_csv(os.path.join(args.out, f"hardy_n{n}_p{p:g}.csv"), rows,
                  ["field", "quotient", "bound", "slack"])
        summary[f"n{n}_p{p:g}"] = {
            "bound": bound,
            "max_quotient": max(r["quotient"] for r in rows),
            "sharpest_field": max(rows, key=lambda r: r["quotient"])["field"],
        }
    write_json(os.path.join(args.out, "summary.json"), summary)
    for key, s in summary.items():
        print(f"{key}: max {s['max_quotient']:.4f} vs bound {s['bound']:.4f} "
              f"({s['sharpest_field']})")


if __name__ == "__main__":
    main()
