"""Smoke test for the bwr_py extension module.

Build and copy the extension next to this file first:

    cargo build -p bwr-py --release --features extension-module
    cp target/release/libbwr_py.so python/bwr_py.so
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import bwr_py  # noqa: E402


def main():
    loop = bwr_py.Game(["W"], [(0, 0, 5, None)])
    assert bwr_py.solve(loop)["values"] == [Fraction(5)]

    g = bwr_py.generate("figure1", l=2, d=2)
    res = bwr_py.solve(g)
    assert res["certified"]
    assert res["values"] == [Fraction(0)] * g.n, res["values"]

    g = bwr_py.generate("random", n=5, k=2, d=2, r=2, seed=3)
    back = bwr_py.Game.from_json(g.to_json())
    assert back.to_json() == g.to_json()
    assert bwr_py.solve(g)["values"] == bwr_py.oracle(g)["values"]

    g = bwr_py.generate("tripartite", sizes=(1, 1, 1), d=2, r=2, seed=0)
    value = bwr_py.solve_ergodic(g)["value"]
    assert bwr_py.oracle(g)["values"] == [value] * 3

    two_loops = bwr_py.Game(["W", "B"], [(0, 0, 1, None), (1, 1, 0, None)])
    try:
        bwr_py.solve_ergodic(two_loops)
    except bwr_py.NotErgodicError:
        pass
    else:
        raise AssertionError("two separate loops are not ergodic")

    try:
        bwr_py.oracle(bwr_py.generate("figure1", l=1, d=2), budget=0)
    except bwr_py.BudgetExceededError:
        pass
    else:
        raise AssertionError("budget 0 must be exceeded")

    try:
        bwr_py.Game(["R"], [(0, 0, 0, "1/2")])
    except ValueError:
        pass
    else:
        raise AssertionError("probabilities must sum to 1")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
