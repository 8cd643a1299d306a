"""Potential per update of the sharing dynamics, round-robin vs random order (K=6, S=3)."""

from bsgame import draw_channels, params_from_snr, run_sharing_dynamics

from _common import parser, write

W = (0.75, 0.21, 0.04)


def main():
    args = parser(__doc__, seed=0).parse_args()
    params = params_from_snr(6, 3, W, 10.0)
    g = draw_channels(params, args.seed)
    for schedule in ("round_robin", "random"):
        _, traj = run_sharing_dynamics(g, params, schedule=schedule, seed=(args.seed, 2))
        print(f"{schedule}: {traj.num_sweeps} sweeps, final potential {traj.potentials[-1]:.6f}")
        write(args.out_dir, f"fig6_sharing_{schedule}.csv", traj.to_csv())


if __name__ == "__main__":
    main()
