#!/usr/bin/env python3
"""Run all exact-identity suites and print one line per suite."""

import sys

from lindblad_echo.suites import SUITES, run_suite


def main() -> int:
    failed = False
    for name in SUITES:
        result = run_suite(name)
        print(result.summary())
        failed |= not result.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
