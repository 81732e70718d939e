#!/usr/bin/env python3
"""Exact d_i(T) traces for the GWIN and GWINP instances, independent of the C++ code.

Usage: window_oracle.py PINNED.json [--write]
Checks (or rewrites) the pinned window maxima used by the acceptance binary.
"""
import json
import sys
from fractions import Fraction

SCHEDULE = [4, 8, 16, 32, 64, 128]
HORIZON = 200


def block_ends(n_states, period, c0):
    ends, start = [], 0
    for length in SCHEDULE:
        end = start + length + 2 ** n_states + 1
        while end % period != c0:
            end += 1
        ends.append((start, end))
        start = end
    return ends


def gwin_trace():
    # q1 -> q1 or q2 (player 2 decides), q2 -a1-> q2, q2 -a2-> q3, q3 -> q2. T = {q1, q3}.
    blocks = block_ends(3, 1, 0)
    fire = {end - 1 for _, end in blocks}
    d = {"q1": Fraction(1), "q2": Fraction(0), "q3": Fraction(0)}
    trace = [d["q1"] + d["q3"]]
    for i in range(HORIZON):
        half = d["q1"] / 2
        nxt = {"q1": half, "q2": half + d["q3"], "q3": Fraction(0)}
        if i in fire:
            nxt["q3"] += d["q2"]
        else:
            nxt["q2"] += d["q2"]
        d = nxt
        trace.append(d["q1"] + d["q3"])
    windows = []
    for start, end in blocks:
        if start >= HORIZON:
            break
        hi = min(end, HORIZON)
        windows.append({"first": start + 1, "last": hi, "max": str(max(trace[start + 1:hi + 1]))})
    return windows


def gwinp_max():
    # q1 -> q1 or q2 (player 2 decides), q2 -> q3, q3 -> q2; player 1 has no influence. T = {q1, q3}.
    d = {"q1": Fraction(1), "q2": Fraction(0), "q3": Fraction(0)}
    best = Fraction(0)
    for i in range(1, HORIZON + 1):
        half = d["q1"] / 2
        d = {"q1": half, "q2": half + d["q3"], "q3": d["q2"]}
        if i >= 2:
            best = max(best, d["q1"] + d["q3"])
    return best


def main():
    path = sys.argv[1]
    got = {"schedule": SCHEDULE, "horizon": HORIZON, "gwin_windows": gwin_trace(), "gwinp_max": str(gwinp_max())}
    got["gwinp_gap"] = str(1 - Fraction(got["gwinp_max"]))
    if "--write" in sys.argv:
        with open(path, "w") as f:
            json.dump(got, f, indent=2)
            f.write("\n")
        return 0
    with open(path) as f:
        pinned = json.load(f)
    if pinned != got:
        print("oracle disagrees with pinned values")
        print(json.dumps(got, indent=2))
        return 1
    if Fraction(got["gwinp_gap"]) <= 0:
        print("GWINP gap is not positive")
        return 1
    print("oracle agrees with pinned values")
    return 0


if __name__ == "__main__":
    sys.exit(main())
