"""Validate the JSON reports of every subcommand against the published schema."""

import json
import os
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

tool, schema_path, out_dir = sys.argv[1:4]
os.makedirs(out_dir, exist_ok=True)
with open(schema_path) as f:
    schema = json.load(f)

sample = os.path.join(out_dir, "sample.txt")
runs = {
    "generate": ["generate", "mt:seed=1", "-n", "2000", "-o", sample],
    "test_file": ["test", sample, "--tests", "uniformity"],
    "test_degenerate": ["test", "lcg:m=10,a=7,c=7,seed=7", "-n", "10000"],
    "spectral": ["spectral", "lcg:m=262144,a=4649,c=819,seed=1", "--dmax", "8", "--cloud", "2",
                 "-n", "1000", "--cloud-out", os.path.join(out_dir, "c2.csv"),
                 "--svg", os.path.join(out_dir, "c2.svg")],
    "sweep": ["sweep", "wh", "--seed-count", "4", "--paths", "200"],
    "period": ["period", "lcg:m=10,a=7,c=7,seed=7", "--brute-cap", "3"],
    "figures": ["figures", "--out-dir", os.path.join(out_dir, "figs"), "-n", "3000"],
}
expected_codes = {"test_degenerate": 1, "spectral": 1, "period": 1}

failed = False
for name, args in runs.items():
    path = os.path.join(out_dir, name + ".json")
    proc = subprocess.run([tool, *args, "--quiet", "--json", path], capture_output=True, text=True)
    if proc.returncode != expected_codes.get(name, 0):
        print(f"{name}: exit {proc.returncode}: {proc.stderr.strip()}")
        failed = True
        continue
    with open(path) as f:
        text = f.read()
    report = json.loads(text)
    try:
        jsonschema.validate(report, schema)
    except jsonschema.ValidationError as e:
        print(f"{name}: {e.message}")
        failed = True
        continue
    if json.dumps(json.loads(text), indent=2, ensure_ascii=False) + "\n" != text:
        print(f"{name}: re-emitted JSON differs")
        failed = True
        continue
    print(f"{name}: ok")

sys.exit(1 if failed else 0)
