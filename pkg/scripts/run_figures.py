#!/usr/bin/env python3
"""Write every figure preset's CSV panels into one directory."""

import argparse
import time

from causalwalk.figures import FIGURES, figure_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="figures")
    parser.add_argument("names", nargs="*", default=list(FIGURES))
    args = parser.parse_args()
    for name in args.names:
        t0 = time.perf_counter()
        paths = figure_suite(name, args.outdir)
        print(f"{name}: {len(paths)} file(s) in {time.perf_counter() - t0:.2f} s")
        for p in paths:
            print(f"  {p}")


if __name__ == "__main__":
    main()
