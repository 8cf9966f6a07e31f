"""Run every committed config through the CLI and collect the outputs.

    python scripts/reproduce_figures.py [--outdir results] [--only PATTERN] [--threads N]
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import pathlib
import sys
import time

from techfolio.cli import main as cli_main

ROOT = pathlib.Path(__file__).resolve().parent.parent


def configs(pattern: str):
    for path in sorted((ROOT / "configs").glob("*.json")):
        if fnmatch.fnmatch(path.stem, pattern):
            yield path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default=str(ROOT / "results"))
    parser.add_argument("--only", default="*", help="glob on config names")
    parser.add_argument("--threads", type=int, default=0)
    args = parser.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for path in configs(args.only):
        command = json.loads(path.read_text())["command"]
        out = outdir / f"{path.stem}.csv"
        t0 = time.perf_counter()
        status = cli_main(
            [command, "--config", str(path), "--out", str(out), "--threads", str(args.threads)]
        )
        dt = time.perf_counter() - t0
        print(f"{'ok  ' if status == 0 else 'FAIL'} {path.stem:55s} {dt:7.2f}s")
        failures += status != 0
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
