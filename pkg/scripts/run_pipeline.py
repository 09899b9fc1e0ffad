#!/usr/bin/env python3
"""End-to-end demo on the shipped survey: compile, explore, optimize.

Writes the compiled network to ./out/network.json and prints the baseline
scenario outlook, a what-if conditioning pass, the greedy target
optimization plan, and the peak availability summary.

    python3 scripts/run_pipeline.py [--policy uniform|confidence_linear]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gridbn.cli import data_path, main as cli_main  # noqa: E402


def run(policy: str) -> int:
    out_dir = Path("out")
    out_dir.mkdir(exist_ok=True)
    network_path = out_dir / "network.json"

    steps = [
        (
            "compile the shipped expert survey",
            [
                "compile",
                "--survey", str(data_path("fixture_survey.json")),
                "--layout", str(data_path("layout_fi2035.json")),
                "--out", str(network_path),
                "--policy", policy,
            ],
        ),
        ("baseline outlook", ["infer", "--network", str(network_path)]),
        (
            "what if both aggregate capacities clear their trigger levels?",
            [
                "infer",
                "--network", str(network_path),
                "--set", "Bulk=ge13",
                "--set", "Balance=ge5",
            ],
        ),
        (
            "greedy plan towards the top-down grid scenario",
            ["optimize", "--network", str(network_path), "--target", "GridManagement=B1"],
        ),
        (
            "capacity, bucket, and availability report",
            ["report", "--network", str(network_path), "--include-import"],
        ),
    ]

    for title, argv in steps:
        print(f"\n=== {title} ===")
        code = cli_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--policy", choices=["uniform", "confidence_linear"], default="confidence_linear"
    )
    sys.exit(run(parser.parse_args().policy))
