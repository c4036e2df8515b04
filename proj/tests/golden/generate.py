"""Regenerates ed_reference.json from the exact-diagonalisation oracle.

Usage (from the repository root, after building):
    python3 tests/golden/generate.py build/hexsse
"""
import json
import os
import subprocess
import sys
import tempfile

GRAPHS = ["ring6", "ladder8", "random10"]
BETAS = [1.0, 3.3]
FIELDS = [0.1, 0.5, 1.0]


def main():
    exe = sys.argv[1] if len(sys.argv) > 1 else "build/hexsse"
    points = []
    with tempfile.TemporaryDirectory() as tmp:
        for name in GRAPHS:
            for beta in BETAS:
                for g in FIELDS:
                    cmd = [exe, "oracle", "ed", "--graph", f"tests/data/{name}.json",
                           "--beta", str(beta), "--g", str(g), "--out", tmp]
                    subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)
                    with open(os.path.join(tmp, "ed_report.json")) as f:
                        report = json.load(f)
                    points.append({
                        "graph": name,
                        "beta": beta,
                        "g": g,
                        "energy_density": report["energy_density"],
                        "command": " ".join(["hexsse"] + cmd[1:-2]),
                    })
    with open("tests/golden/ed_reference.json", "w") as f:
        json.dump({"points": points}, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
