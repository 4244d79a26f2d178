#!/usr/bin/env python3
"""Writes synthetic_log.jsonl: 100 labelled diagnosis requests on square tasks.

Mix: 85 on-strategy steps (single, variant, combined, mid-derivation) and
15 deviations (expanded square, derived to zero).
"""
import json
import random
import sys
from pathlib import Path


def lin(a, b):
    ax = "x" if a == 1 else "-x" if a == -1 else f"{a}*x"
    return f"{ax} + {b}" if b > 0 else f"{ax} - {-b}"


def lin_rev(a, b):
    ax = "x" if a == 1 else f"{a}*x"
    if a < 0:
        return f"{b} - {ax[1:]}"
    return f"{b} + {ax}"


def bracket(a, b):
    return "(" + lin(a, b).replace(" ", "") + ")"


def square_task(rng):
    while True:
        a = rng.choice([2, 3, 4, 5, -2, -3])
        b = rng.choice([v for v in range(-9, 10) if v != 0])
        c = rng.randint(1, 9)
        if c != abs(b):
            return a, b, c


def poly(coeffs):
    terms = []
    for power, k in ((2, coeffs[2]), (1, coeffs[1]), (0, coeffs[0])):
        if k == 0:
            continue
        mag = abs(k)
        body = {2: "x^2", 1: "x", 0: ""}[power]
        text = body if mag == 1 and body else f"{mag}*{body}" if body else str(mag)
        if not terms:
            terms.append(("-" if k < 0 else "") + text)
        else:
            terms.append(("- " if k < 0 else "+ ") + text)
    return " ".join(terms) if terms else "0"


def records(rng):
    plan = (["single"] * 25 + ["variant"] * 20 + ["combined"] * 20 + ["midway"] * 20 +
            ["expanded"] * 8 + ["zero"] * 7)
    rng.shuffle(plan)
    for kind in plan:
        a, b, c = square_task(rng)
        task = f"{bracket(a, b)}^2 = {c * c}"
        first = f"{lin(a, b)} = {c} or {lin(a, b)} = {-c}"
        second = f"{a}*x = {c - b} or {a}*x = {-c - b}"
        rec = {"task": task}
        if kind == "single":
            rec.update(input=first, label="correct")
        elif kind == "variant":
            rec.update(input=f"{lin_rev(a, b)} = {-c} or {lin_rev(a, b)} = {c}", label="correct")
        elif kind == "combined":
            rec.update(input=second, label="correct")
        elif kind == "midway":
            rec.update(prev=first, input=second, label="correct")
        elif kind == "expanded":
            rec.update(input=f"{poly([b * b, 2 * a * b, a * a])} = {c * c}", label="deviation-1")
        else:
            rec.update(input=f"{bracket(a, b)}^2 - {c * c} = 0", label="deviation-3")
        yield rec


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("synthetic_log.jsonl")
    rng = random.Random(20261016)
    with out.open("w") as f:
        for rec in records(rng):
            f.write(json.dumps(rec) + "\n")


if __name__ == "__main__":
    main()
