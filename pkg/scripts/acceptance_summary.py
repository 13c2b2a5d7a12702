"""Run the acceptance tests and print one PASS/FAIL line per criterion.

    python scripts/acceptance_summary.py [--out summary.txt] [-k EXPR]
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", help="also write the lines to this file")
    p.add_argument("-k", dest="expr", help="pytest -k expression to select criteria")
    a = p.parse_args(argv)
    cmd = [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"]
    if a.expr:
        cmd += ["-k", a.expr]
    r = subprocess.run(cmd, cwd=ROOT, capture_output=True, text=True)
    lines = sorted({ln for ln in r.stdout.splitlines() if ln.startswith("criterion")})
    text = "\n".join(lines)
    print(text)
    if a.out:
        Path(a.out).write_text(text + "\n")
    return 0 if lines and all(" PASS " in ln for ln in lines) else 1


if __name__ == "__main__":
    sys.exit(main())
