"""Success probability of the N-photon W input versus N, with the exponential fit.

    python scripts/fig2_sweep.py --max 18 --csv sweep.csv
"""

import argparse
import json

from bellport.cli import format_probability
from bellport.sweep import fit_exponential, sweep_w_success, write_csv


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--min", type=int, default=2)
    parser.add_argument("--max", type=int, default=18)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--csv")
    args = parser.parse_args()

    records = sweep_w_success(args.min, args.max, workers=args.workers)
    fit = fit_exponential(records)
    for r in records:
        marker = "  <- destructive interference" if r.p_suc <= 1e-12 else ""
        print(f"N={r.n:2d}  P_suc={format_probability(r.p_suc):>28}  fit={fit.predict(r.n):.3e}{marker}")
    print(json.dumps(fit.to_json()))
    if args.csv:
        write_csv(records, args.csv)


if __name__ == "__main__":
    main()
