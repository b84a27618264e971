"""Smoke test for the voting_power extension module.

Build and stage the module first:

    cargo build --release -p voting-power-py --features extension-module
    cp target/release/libvoting_power_py.so python/voting_power.so

then run `python3 python/smoke_test.py` from the repository root.
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import voting_power as vp  # noqa: E402


def fractions(values):
    return [Fraction(v) for v in values]


def main():
    system = vp.VotingSystem([2, 1, 1], 3, "ge")
    assert system.banzhaf() == ["3/5", "1/5", "1/5"], system.banzhaf()
    assert system.shapley_shubik(engine="enum") == ["2/3", "1/6", "1/6"]
    assert system.shapley_shubik(engine="dp", workers=2) == ["2/3", "1/6", "1/6"]
    assert sum(fractions(system.banzhaf())) == 1
    assert system.is_winning([0, 1]) and not system.is_winning([1, 2])
    assert system.count_winning() == 3
    assert repr(system) == "VotingSystem([3: 2, 1, 1])", repr(system)

    # p/q strings and ints mix freely
    assert vp.index(["1/2", "1/4", 1], "1", mode="gt", kind="ss") == vp.index(
        [2, 1, 4], 4, mode="gt", kind="ss"
    )
    assert vp.normalize([2, 1, 1]) == ["1/2", "1/4", "1/4"]

    try:
        vp.VotingSystem([1], 2).banzhaf()
    except vp.DegenerateSystemError:
        pass
    else:
        raise AssertionError("degenerate system accepted")
    try:
        vp.VotingSystem(["1/0"], 1)
    except vp.VotingPowerError:
        pass
    else:
        raise AssertionError("bad rational accepted")

    six = vp.divisor_report(6)
    assert six["banzhaf"]["values"] == ["7/10", "1/10", "1/10", "1/10"]
    assert six["shapley_shubik"]["values"] == ["3/4", "1/12", "1/12", "1/12"]
    assert vp.VotingSystem.divisor(6).quota == "13/2"
    assert {12, 18, 20} <= set(vp.scan_abundant(100, 6))
    assert vp.compare_pn_mn(12, 31, 37)["counts_equal"]

    trace = vp.iterate(["1/2", "1/4", "1/4"], "ss")
    assert trace["states"][-1] == ["1", "0", "0"]
    assert trace["outcome"] == {"type": "fixed", "state": 2}

    point = vp.ab_family_point(3, 1)
    assert point["valid"] and point["a"] == "1/3" and point["b"] == "2/15"
    weights = [point["a"]] + [point["b"]] * point["m"]
    assert vp.is_fixed_point(weights, "ss") and vp.is_fixed_point(weights, "banzhaf")
    assert not vp.ab_family_point(2, 1)["valid"]
    assert vp.aab_fixed_solutions(8) == ["13/180", "4/45", "1/9"]
    assert "2/15" in vp.ab_fixed_solutions(5)

    report = vp.run_verify("tables32")
    assert report["passed"], report
    assert "erratum" in vp.SUITES

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
