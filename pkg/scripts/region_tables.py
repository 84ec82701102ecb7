#!/usr/bin/env python3
"""Emit both dependence-region tables (two-point and Gaussian families).

Writes one file per table into --out-dir (default: stdout, tables separated
by a blank line).  Each cell holds the three region memberships decided by
the library's checkers; the two-point table is exact rational arithmetic,
the Gaussian table runs the analytic route with its numeric cross-checks.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from stochorder.cli import main as cli_main


def emit(which: str, fmt: str, out_dir: Path | None) -> None:
    argv = ["table", which, "--format", fmt]
    if out_dir is None:
        code = cli_main(argv)
    else:
        out = out_dir / f"region_{which}.{'md' if fmt == 'md' else fmt}"
        import contextlib
        import io

        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(argv)
        out.write_text(buf.getvalue())
        print(f"wrote {out}")
    if code != 0:
        raise SystemExit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--format", default="csv", choices=["csv", "md", "json"])
    parser.add_argument("--out-dir", type=Path, default=None,
                        help="directory for region_<which>.<ext> files "
                             "(default: print to stdout)")
    args = parser.parse_args()
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    for which in ("bernoulli", "gaussian"):
        emit(which, args.format, args.out_dir)
        if args.out_dir is None:
            print()


if __name__ == "__main__":
    main()
