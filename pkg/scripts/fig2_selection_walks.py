"""Potential along several random-order selection walks on one channel draw (K=5, S=3)."""

import csv
import io

from bsgame import draw_channels, params_from_snr, run_selection_dynamics
from bsgame.selection import random_profile

from _common import parser, write

W = (0.14, 0.40, 0.46)


def main():
    p = parser(__doc__, seed=7)
    p.add_argument("--walks", type=int, default=6)
    args = p.parse_args()
    params = params_from_snr(5, 3, W, 10.0)
    g = draw_channels(params, (args.seed, 0))
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["walk", "step", "player", "profile_index", "potential", "changed"])
    for walk in range(args.walks):
        start = random_profile(5, 3, (args.seed, 1, walk))
        a, traj = run_selection_dynamics(g, params, start, "random", seed=(args.seed, 2, walk))
        for rec in traj.to_records():
            out.writerow([walk, rec["step"], rec["player"], rec["profile_index"],
                          repr(rec["potential"]), int(rec["changed"])])
        print(f"walk {walk}: {traj.num_changes} changes, final profile {a.tolist()}")
    write(args.out_dir, "fig2_selection_walks.csv", buf.getvalue())
    write(args.out_dir, "fig2_channels.csv", g.to_csv())


if __name__ == "__main__":
    main()
