"""Rewrite golden CLI outputs from cases.json. Review the diff before committing."""

import contextlib
import io
import json
import os
from pathlib import Path

from circuitcert.cli import run

HERE = Path(__file__).parent


def capture(args):
    out = io.StringIO()
    cwd = os.getcwd()
    os.chdir(HERE)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
            code = run(args)
    finally:
        os.chdir(cwd)
    return code, out.getvalue()


if __name__ == "__main__":
    for case in json.loads((HERE / "cases.json").read_text()):
        code, text = capture(case["args"])
        (HERE / "golden" / f"{case['name']}.out").write_text(text)
        flag = "" if code == case["exit"] else f"  (expected {case['exit']})"
        print(f"{case['name']}: exit {code}{flag}")
