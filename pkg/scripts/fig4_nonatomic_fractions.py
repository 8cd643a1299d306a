"""Empirical share of players per BS vs the non-atomic prediction (K=100, S=6)."""

import csv
import io

from bsgame import empirical_fractions, nonatomic_equilibrium_fractions, params_from_snr

from _common import parser, write

W = (0.25, 0.11, 0.20, 0.05, 0.25, 0.14)


def main():
    args = parser(__doc__, trials=100, seed=1).parse_args()
    params = params_from_snr(100, 6, W, 10.0)
    theory = nonatomic_equilibrium_fractions(params).fractions
    est = empirical_fractions(params, args.seed, args.trials)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["bs", "theoretical", "empirical_mean", "empirical_se"])
    for s in range(params.S):
        out.writerow([s, repr(float(theory[s])), repr(float(est.mean[s])), repr(float(est.stderr[s]))])
        print(f"BS {s}: predicted {theory[s]:.3f}, simulated {est.mean[s]:.3f} +- {est.stderr[s]:.3f}")
    write(args.out_dir, "fig4_nonatomic_fractions.csv", buf.getvalue())


if __name__ == "__main__":
    main()
