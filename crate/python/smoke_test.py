"""Smoke test for the `lcl` extension module.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/py
"""

import json
import pathlib
import sys

import lcl

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def main():
    two = lcl.Problem.load(str(FIXTURES / "two_coloring_binary.json"))
    report = two.classify()
    print("two_coloring_binary:", report["depth"], report["class"])
    assert report["depth"] == "1"

    sinkless = lcl.Problem.load(str(FIXTURES / "sinkless_orientation.json"))
    assert sinkless.classify()["class"] == "O(log n)"

    g = lcl.Tree.rooted_lb(2, 1, 1, 1)
    victim = lcl.estimate(two, g, "parity-victim", 1, 200, 7)
    oracle = lcl.estimate(two, g, "offline-oracle", "n", 50, 7)
    print("parity-victim:", json.dumps(victim))
    print("offline-oracle:", json.dumps(oracle))
    assert victim["p_hat"] >= 0.4
    assert oracle["failures"] == 0

    u = lcl.Tree.unrooted_lb(3, 1, 1, 1)
    labeling = lcl.solve(sinkless, u)
    assert lcl.check(sinkless, u, labeling)["verdict"] == "PASS"
    print("ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
