"""Drive the scenario runner end to end from Python.

Everything the CLI does is reachable through qmg.cli.main, which is
what the installed ``qmg`` entry point calls.  This writes a zeno
scenario, runs it, and turns the CSV into plot data with a log-x hint.
"""

import json
import tempfile
from pathlib import Path

from qmg.cli import main


def run() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        scenario = {
            "kind": "zeno",
            "seed": 0,
            "parameters": {
                "initial": ["hermite(0)", "hermite(1)"],
                "total_time": 0.5,
                "n_values": [1, 10, 100, 1000],
            },
        }
        path = tmp_path / "freeze.json"
        path.write_text(json.dumps(scenario, indent=2))
        out = tmp_path / "out"

        print(f"qmg run {path.name} --out out/")
        code = main(["run", str(path), "--out", str(out)])
        print(f"exit code {code}")
        print((out / "zeno.csv").read_text())

        print("qmg plotdata out/zeno.csv --x n --y survival")
        main(["plotdata", str(out / "zeno.csv"), "--x", "n", "--y", "survival"])
        payload = json.loads((out / "zeno.csv.plot.json").read_text())
        print(f"log_x hint: {payload['log_x']} (n spans four decades)")
        print(f"series: {[s['label'] for s in payload['series']]}")

        manifest = json.loads((out / "manifest.json").read_text())
        print(f"manifest outputs: {manifest['outputs']}")


if __name__ == "__main__":
    run()
