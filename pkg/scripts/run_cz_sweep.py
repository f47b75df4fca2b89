#!/usr/bin/env python3
"""Calderon-Zygmund decomposition sweep: measured estimate constants across a
geometric level range, with optional Whitney cover dumps."""

import argparse
import os

import numpy as np

from conelab.czd import CZParams, decompose, maximal_function, verify
from conelab.fieldlib import make_test_field
from conelab.geometry import ConeDomain
from conelab.grids import PolarGrid
from conelab.report import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/cz")
    ap.add_argument("--field", default="logcounter")
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--decades", type=int, default=4)
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--dump-cover", action="store_true")
    args = ap.parse_args()

    grid = PolarGrid.cone(ConeDomain(2))
    kw = {"beta": args.beta} if args.field == "logcounter" else {}
    f = make_test_field(args.field, grid, **kw)
    amax = float(maximal_function(f, "plus").max())
    rows = []
    for alpha in np.geomspace(0.5 * amax * 10.0**-args.decades, 0.5 * amax,
                              args.points):
        res = decompose(f, CZParams(alpha=float(alpha)), "plus")
        rep = verify(res)
        rows.append({k: rep[k] for k in
                     ("alpha", "n_balls", "overlap_N", "rec_err", "eg_ratio",
                      "eb_ratio", "eB_ratio", "neighbor_radius_ratio",
                      "mean_comparability")})
        print(f"alpha={alpha:10.3e} balls={rep['n_balls']:6d} "
              f"eg={rep['eg_ratio']:7.2f} eb={rep['eb_ratio']:6.2f} "
              f"N={rep['overlap_N']}")
        if args.dump_cover:
            cover = [{"x_r": r, "x_theta": t, "r_i": ri, "type": ty}
                     for r, t, ri, ty in res.cover_rows()]
            write_csv(os.path.join(args.out, f"cover_a{alpha:.3e}.csv"),
                      cover, ["x_r", "x_theta", "r_i", "type"])
    write_csv(os.path.join(args.out, f"cz_{f.name}.csv"), rows)


if __name__ == "__main__":
    main()
