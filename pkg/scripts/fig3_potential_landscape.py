"""Potential of every pure profile, NE marked, on the same draw as fig2 (K=5, S=3)."""

import csv
import io

from bsgame import draw_channels, enumerate_ne, params_from_snr
from bsgame.selection import all_potentials

from _common import parser, write

W = (0.14, 0.40, 0.46)


def main():
    args = parser(__doc__, seed=7).parse_args()
    params = params_from_snr(5, 3, W, 10.0)
    g = draw_channels(params, (args.seed, 0))
    phi = all_potentials(g, params)
    report = enumerate_ne(g, params)
    ne = set(report.ne_indices)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["profile_index", "potential", "is_ne"])
    for i, v in enumerate(phi):
        out.writerow([i, repr(float(v)), int(i in ne)])
    print(f"{report.count} NE at indices {report.ne_indices}")
    write(args.out_dir, "fig3_potential_landscape.csv", buf.getvalue())


if __name__ == "__main__":
    main()
