"""Regenerate tests/golden/*.out.json from the job files next to them.

Run after an intentional change to the report format, then review the diff.
"""

import contextlib
import io
import json
import pathlib

from twistlab.cli import main

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"


def run_job(path: pathlib.Path):
    command = json.loads(path.read_text())["command"]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([command, "-i", str(path)])
    return code, buf.getvalue()


if __name__ == "__main__":
    for job in sorted(GOLDEN.glob("*.job.json")):
        code, out = run_job(job)
        target = job.with_name(job.name.replace(".job.json", ".out.json"))
        target.write_text(out)
        print(f"{job.name}: exit {code}")
