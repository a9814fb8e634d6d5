"""Run every worked-example regression and print a PASS/FAIL line per check."""

import sys

from kaczmarz.reproduce import EXAMPLES, reproduce


def main() -> int:
    failed = 0
    for example in EXAMPLES:
        for check in reproduce(example):
            failed += not check.passed
            value = "" if check.value is None else f"  [{check.value:.3e}]"
            print(f"{'PASS' if check.passed else 'FAIL'}  {example:12s} {check.name}{value}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
