"""Network spectral efficiency at the selection NE vs the sharing NE, for S in {2, 4, 8}."""

from bsgame import braess_compare

from _common import parser, write

K_VALUES = list(range(1, 11)) + [15, 20, 30, 40, 50, 60]


def main():
    p = parser(__doc__, trials=200, seed=1)
    p.add_argument("--stations", type=int, nargs="+", default=[2, 4, 8])
    args = p.parse_args()
    for S in args.stations:
        res = braess_compare(S, K_VALUES, args.trials, 10.0, args.seed)
        for K, sel, share in zip(res.axis, res.mean("selection"), res.mean("sharing")):
            print(f"S={S} K={K}: selection {sel:.3f}  sharing {share:.3f}")
        write(args.out_dir, f"fig7_braess_S{S}.csv", res.to_csv())


if __name__ == "__main__":
    main()
