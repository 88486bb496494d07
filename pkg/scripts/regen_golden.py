"""Rewrite the expected CLI outputs under tests/golden from cases.json.

Review the diff before committing: the golden files are the reference.
"""

from __future__ import annotations

import io
import json
import os
from pathlib import Path

from ghmetrics import cli

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    os.chdir(GOLDEN)
    for case in json.loads(Path("cases.json").read_text()):
        out = io.StringIO()
        code = cli.run(case["argv"], out)
        if code != case["exit"]:
            print(f"{case['name']}: exit {code}, expected {case['exit']}")
        Path(case["expected"]).write_text(out.getvalue())
        print(f"{case['name']}: {json.loads(out.getvalue()).get('value')}")


if __name__ == "__main__":
    main()
