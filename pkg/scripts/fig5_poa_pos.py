"""Mean price of anarchy / stability of the selection game vs K, for S = 2 and S = 3."""

from bsgame import sweep_poa_pos

from _common import parser, write


def main():
    p = parser(__doc__, trials=500, seed=7)
    p.add_argument("--snr-db", type=float, default=10.0)
    args = p.parse_args()
    for S, k_max in ((2, 9), (3, 7)):
        res = sweep_poa_pos(S, range(1, k_max + 1), args.trials, args.snr_db, args.seed)
        for K, poa, pos in zip(res.axis, res.mean("poa"), res.mean("pos")):
            print(f"S={S} K={K}: PoA {poa:.3f}  PoS {pos:.3f}")
        write(args.out_dir, f"fig5_poa_pos_S{S}.csv", res.to_csv())


if __name__ == "__main__":
    main()
