"""Small helpers shared by the experiment scripts."""

import argparse
from pathlib import Path


def parser(description: str, trials: int | None = None, seed: int = 0) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out-dir", default="results", help="directory for the CSV output")
    p.add_argument("--seed", type=int, default=seed)
    if trials is not None:
        p.add_argument("--trials", type=int, default=trials)
    return p


def write(out_dir: str, name: str, text: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    target.write_text(text)
    print(f"wrote {target}")
    return target
