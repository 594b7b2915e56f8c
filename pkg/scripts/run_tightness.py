"""Planning time of MMS and PRM as the tunnel robot is scaled up."""
import argparse
import sys

from mmsplan.bench import PRMParams, tightness_rows, to_csv
from mmsplan.planner import PlannerParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ntheta", type=int, default=20)
    ap.add_argument("--nsegments", type=int, default=512)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--budgets", default="1000,2000,4000,8000")
    ap.add_argument("--sample-fraction", type=float, default=0.7)
    ap.add_argument("--no-prm", action="store_true")
    ap.add_argument("--out")
    args = ap.parse_args()
    params = PlannerParams(n_theta=args.ntheta, n_segments=args.nsegments)
    budgets = [int(b) for b in args.budgets.split(",")]
    rows = tightness_rows(
        params,
        list(range(args.seeds)),
        PRMParams(sample_fraction=args.sample_fraction),
        budgets=budgets,
        with_prm=not args.no_prm,
    )
    text = to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
