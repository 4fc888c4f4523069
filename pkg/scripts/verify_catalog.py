"""Run the catalog fact checks and bound checks and print a compact summary (same data as `proplie verify-paper`)."""

import io
import json
import sys
from contextlib import redirect_stdout

from proplie.cli import main as cli_main


def main():
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["verify-paper", "--timing"])
    rep = json.loads(buf.getvalue())
    for c in rep["checks"]:
        print(f"{'ok  ' if c['pass'] else 'FAIL'} {c['check']}: expected {c['expected']}, got {c['got']}")
    print(f"{rep['passed']}/{rep['total']} passed in {rep['elapsed_s']}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
