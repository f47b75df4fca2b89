#!/usr/bin/env python3
"""Vertex approximation tables: plain-cutoff convergence below the critical
exponent, the gradient plateau at it, and the logarithmic corrector sweep."""

import argparse
import os

from conelab.density import (approximation_errors, convergence_table,
                             corrector_times_cutoff_norm, log_corrector,
                             vertex_cutoff)
from conelab.fieldlib import make_test_field
from conelab.geometry import ConeDomain
from conelab.grids import PolarGrid
from conelab.report import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/density")
    ap.add_argument("--field", default="lipschitz_compact")
    args = ap.parse_args()

    grid = PolarGrid.cone(ConeDomain(2))
    f = make_test_field(args.field, grid)
    eps = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]

    for p in (1.0, 2.0, 4.0):
        rows = convergence_table(f, p, "plain", eps)
        write_csv(os.path.join(args.out, f"plain_p{p:g}.csv"), rows,
                  ["eps", "l_p_err", "grad_err", "trend"])

    rows = []
    for k in (2.0, 4.0, 8.0, 16.0):
        for e in (1e-2, 1e-4, 1e-6, 1e-8):
            lp, gr = approximation_errors(f, log_corrector(f, e, k), 2.0)
            rows.append({"eps": e, "k": k, "l_p_err": lp, "grad_err": gr,
                         "eta_chi_term": corrector_times_cutoff_norm(f, e, k, 2.0)})
    write_csv(os.path.join(args.out, "corrected_p2.csv"), rows,
              ["eps", "k", "l_p_err", "grad_err", "eta_chi_term"])
    print(f"wrote tables for {f.name} under {args.out}")


if __name__ == "__main__":
    main()
