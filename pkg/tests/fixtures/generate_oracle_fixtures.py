"""Regenerate tests/fixtures/oracle.jsonl from the mpmath oracles.

    python3 tests/fixtures/generate_oracle_fixtures.py

Deterministic (fixed seed); takes under a minute.  The test suite only reads
the frozen file.
"""
from __future__ import annotations

import sys
import time
from pathlib import Path

import numpy as np

from hyperfun.oracle import (OraclePrecision, oracle_2f1, oracle_erdelyi, oracle_fa,
                             oracle_gamma, oracle_ha, oracle_ha_continued,
                             oracle_pochhammer, oracle_q, write_fixtures)

OUT = Path(__file__).with_name("oracle.jsonl")
DIGITS = 50
CONTINUED_DIGITS = 30


def r(v: float) -> float:
    """Round to a short decimal so fixture inputs are readable and exact-ish."""
    return float(f"{v:.6g}")


def simplex_point(rng, n: int, radius: float, negative: bool = False) -> list[float]:
    w = rng.dirichlet(np.ones(n + 1))[:n] * radius
    signs = -np.ones(n) if negative else rng.choice([-1.0, 1.0], n)
    return [r(v) for v in w * signs]


def main() -> int:
    rng = np.random.default_rng(20240607)
    recs: list[dict] = []

    def add(function, params, point, value_order, digits=DIGITS):
        if isinstance(value_order, tuple):
            value, order = value_order
        else:
            value, order = value_order, None
        recs.append(dict(function=function, params=params, point=point,
                         order=order, digits=digits, value=value))

    for x in (0.5, 1.0, 6.0, 2.5, -1.5, 0.1, 10.3, 33.7, -0.5, 1e-3):
        add("gamma", {}, {"x": x}, oracle_gamma(x))

    for base, shift in ((0.3, 5), (-2.5, 3), (0.7, -3), (1.5, 0), (-3.0, 2), (2.25, 12), (0.45, -6)):
        add("pochhammer", {"base": base, "shift": shift}, {}, oracle_pochhammer(base, shift))

    # Gauss function inside the unit disk, including points handled by the
    # connection formula; c - a - b kept away from integers
    prec_1d = OraclePrecision(DIGITS, 6000)
    for x in (-0.9, -0.4, 0.3, 0.6, 0.9):
        while True:
            a, b = r(rng.uniform(-1.5, 2.5)), r(rng.uniform(-1.5, 2.5))
            c = r(rng.uniform(0.3, 3.0))
            s = c - a - b
            if abs(s - round(s)) > 0.1:
                break
        add("hyp2f1", {"a": a, "b": b, "c": c}, {"x": [x]}, oracle_2f1(a, b, c, x, prec_1d))

    # Gauss function for large negative x (mpmath's own 2F1)
    for x in (-3.0, -30.0, -300.0):
        a, b, c = r(rng.uniform(0.1, 1.5)), r(rng.uniform(0.1, 1.5)), r(rng.uniform(0.5, 2.5))
        add("hyp2f1", {"a": a, "b": b, "c": c}, {"x": [x]},
            oracle_ha_continued(a, (b,), (c,), (x,), (), OraclePrecision(DIGITS)))

    prec_fa = OraclePrecision(DIGITS, 400)
    for n, radius, count in ((2, 0.5, 6), (3, 0.45, 5)):
        for _ in range(count):
            a = r(rng.uniform(0.1, 2.0))
            b = [r(v) for v in rng.uniform(0.1, 2.0, n)]
            c = [r(v) for v in rng.uniform(0.3, 2.5, n)]
            x = simplex_point(rng, n, radius)
            add("lauricella_fa", {"a": a, "b": b, "c": c}, {"x": x}, oracle_fa(a, b, c, x, prec_fa))

    prec_ha = OraclePrecision(DIGITS, 300)
    for n, p in ((1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (1, 3), (2, 1), (1, 1)):
        a = r(rng.uniform(0.15, 0.85))
        b = [r(v) for v in rng.uniform(0.1, 1.5, n)]
        c = [r(v) for v in rng.uniform(0.3, 2.0, n)]
        xi = simplex_point(rng, n, 0.4)
        eta = [r(v) for v in rng.uniform(-0.5, 0.5, p)]
        add("ha", {"a": a, "b": b, "c": c}, {"xi": xi, "eta": eta},
            oracle_ha(a, b, c, xi, eta, prec_ha))

    for eps in (0.05, 0.01):
        a, b1, c1, x, y = 0.35, 0.6, 1.3, 0.25, 0.4
        big = 1.0 / eps
        add("erdelyi_h", {"a": a, "b": [b1, big], "d": [big], "c": [c1]},
            {"xi": [x], "eta": [y * eps * eps]},
            oracle_erdelyi(a, (b1, big), (big,), (c1,), (x,), (y * eps * eps,), prec_ha))

    prec_cont = OraclePrecision(CONTINUED_DIGITS)
    for n, xi in ((1, [-0.8]), (1, [-7.5]), (1, [-60.0]),
                  (2, [-0.6, -1.4]), (2, [-4.0, -0.3]), (2, [-18.0, -9.0])):
        a = r(rng.uniform(0.2, 0.8))
        b = [r(v) for v in rng.uniform(0.2, 0.7, n)]
        c = [r(bi + v) for bi, v in zip(b, rng.uniform(0.3, 1.2, n))]
        eta = [r(rng.uniform(-0.6, 0.6))]
        add("ha_continued", {"a": a, "b": b, "c": c}, {"xi": xi, "eta": eta},
            oracle_ha_continued(a, b, c, xi, eta, prec_cont), CONTINUED_DIGITS)
        print(f"  continued n={n} xi={xi} done", file=sys.stderr)

    q_cases = [
        (3, [0.25], [1.0], [0.5, 0.0, 0.0], [0.6, 0.1, 0.0]),
        (3, [0.2], [-1.0], [0.3, 0.2, -0.1], [0.25, 0.1, 0.05]),
        (4, [0.2, 0.35], [0.5, 0.5], [0.05, 0.045, 0.2, 0.02], [0.01, 0.012, 0.1, -0.05]),
        (4, [0.3, 0.15], [0.0], [0.4, 0.3, 0.1, 0.0], [0.35, 0.5, 0.0, 0.2]),
    ]
    for m, alpha, lam, x, x0 in q_cases:
        for k in range(len(alpha) + 1):
            add("q_k", {"m": m, "alpha": alpha, "lambda_sq": lam, "k": k}, {"x": x, "x0": x0},
                oracle_q(m, alpha, lam, x, x0, k, prec_cont), CONTINUED_DIGITS)

    write_fixtures(OUT, recs)
    print(f"wrote {len(recs)} records to {OUT}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    t0 = time.time()
    rc = main()
    print(f"{time.time() - t0:.1f} s", file=sys.stderr)
    sys.exit(rc)
