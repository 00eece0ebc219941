#!/usr/bin/env python3
"""Run every bundled scenario fixture and print a verdict table.

Usage: python scripts/run_fixtures.py [fixture.toml ...]
With no arguments, runs everything under fixtures/.
"""
import sys
from pathlib import Path

from cgl_lab.experiments import run_scenario

ROOT = Path(__file__).resolve().parent.parent


def main(argv):
    paths = [Path(p) for p in argv] or sorted((ROOT / "fixtures").glob("*.toml"))
    width = max(len(p.name) for p in paths)
    worst = 0
    for path in paths:
        result = run_scenario(path)
        print(f"{path.name:<{width}}  {result.verdict:<12}  {result.reason}")
        worst = max(worst, result.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
