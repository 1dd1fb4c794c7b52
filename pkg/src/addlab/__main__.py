"""
CLI entrypoint.

Usage:
  python -m addlab verify --family antisym-subspace --d 8 --n 26 --p 3
  python -m addlab scan --family extension --p-grid 3 --d-grid 4-12

If installed (pip install -e .), you can also run:
  addlab oracle --target antisym-sup --d 5
"""

from __future__ import annotations

import sys

from addlab.cli import run


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
