"""Rerun every case in tests/golden/manifest.json and rewrite its golden output and exit code."""

import contextlib
import io
import json
from importlib import resources
from pathlib import Path

from symlin.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run_case(args: list[str], data_dir: str) -> tuple[str, int]:
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main([a.replace("{data}", data_dir) for a in args])
    return out.getvalue(), code


def main_regenerate() -> None:
    manifest_path = GOLDEN / "manifest.json"
    manifest = json.loads(manifest_path.read_text())
    data_dir = str(resources.files("symlin") / "data")
    for case in manifest["cases"]:
        text, code = run_case(case["args"], data_dir)
        (GOLDEN / f"{case['name']}.out").write_text(text)
        case["exit"] = code
        print(f"{case['name']}: exit {code}")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main_regenerate()
