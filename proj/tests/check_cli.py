"""Runs one sideband_lab invocation and checks its exit code and outputs."""

import argparse
import csv
import json
import pathlib
import re
import shutil
import subprocess
import sys


def load_csv(path):
    rows = []
    with open(path, newline="") as f:
        for row in csv.reader(f):
            if row and not row[0].startswith("#"):
                rows.append((float(row[0]), float(row[1])))
    return rows


def check_peaks(path, expected_hz):
    rows = load_csv(path)
    for sign in (-1, 1):
        side = [r for r in rows if sign * r[0] > 0]
        top = max(side, key=lambda r: r[1])
        if abs(top[0] - sign * expected_hz) > 0.01 * expected_hz:
            sys.exit(f"peak on side {sign} at {top[0]} Hz, expected {sign * expected_hz}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--exe", required=True)
    ap.add_argument("--rc", type=int, default=0)
    ap.add_argument("--stderr-regex")
    ap.add_argument("--out")
    ap.add_argument("--expect-file", action="append", default=[])
    ap.add_argument("--peaks-hz", type=float)
    ap.add_argument("--json-key", action="append", default=[],
                    help="FILE:KEY must exist in a JSON output")
    ap.add_argument("args", nargs=argparse.REMAINDER)
    a = ap.parse_args()

    if a.out:
        shutil.rmtree(a.out, ignore_errors=True)
    args = [x for x in a.args if x != "--"]
    proc = subprocess.run([a.exe, *args], capture_output=True, text=True)
    sys.stdout.write(proc.stdout)
    sys.stderr.write(proc.stderr)
    if proc.returncode != a.rc:
        sys.exit(f"exit code {proc.returncode}, expected {a.rc}")
    if a.stderr_regex and not re.search(a.stderr_regex, proc.stderr):
        sys.exit(f"stderr does not match {a.stderr_regex!r}")
    out = pathlib.Path(a.out) if a.out else None
    for name in a.expect_file:
        if not (out / name).is_file():
            sys.exit(f"missing output {name}")
    if a.peaks_hz is not None:
        check_peaks(out / "spectrum.csv", a.peaks_hz)
    for spec in a.json_key:
        name, key = spec.split(":", 1)
        doc = json.loads((out / name).read_text())
        for part in key.split("."):
            if part not in doc:
                sys.exit(f"{name} has no key {key}")
            doc = doc[part]


if __name__ == "__main__":
    main()
