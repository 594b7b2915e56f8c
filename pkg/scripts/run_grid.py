"""Success rate and median planning time over an (n_theta, n_segments) grid."""
import argparse
import sys

from mmsplan.bench import grid_rows, to_csv
from mmsplan.planner import PlannerParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenes", default="flower")
    ap.add_argument("--ntheta", default="10,20,40,80")
    ap.add_argument("--nsegments", default="256,512,1024,2048,4096")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out")
    args = ap.parse_args()
    grid = [(int(a), int(b)) for a in args.ntheta.split(",") for b in args.nsegments.split(",")]
    rows = grid_rows(args.scenes.split(","), grid, range(args.seeds), PlannerParams())
    text = to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
