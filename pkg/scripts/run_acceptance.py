#!/usr/bin/env python3
"""Print one PASS/FAIL line per acceptance criterion; exit 1 if any fails."""

import sys

from causalwalk.acceptance import run_all


def main() -> int:
    results = run_all()
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria pass" + (f"; failing: {failed}" if failed else ""))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
