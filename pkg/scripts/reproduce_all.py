"""Run every acceptance criterion and print one line per check."""
import sys

from scramble_lab.acceptance import run_all


def main() -> int:
    checks = run_all()
    for c in checks:
        print(c.line(), flush=True)
    passed = sum(c.passed for c in checks)
    print(f"{passed}/{len(checks)} checks passed")
    return 0 if passed == len(checks) else 1


if __name__ == "__main__":
    sys.exit(main())
