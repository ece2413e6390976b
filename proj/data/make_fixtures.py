#!/usr/bin/env python3
"""Regenerates the synthetic well fixtures in this directory.

Both files sample one b = 0.1 hyperbolic decline chosen so that the rate falls
from 11.339 to 2.6755 mmscf/d by 2017-08-06 and, continued, reaches the
0.03 mmscf/d abandonment rate on 2021-01-18.

well5_synthetic.csv: daily rates up to 2017-08-06 with 2% log-normal noise. The
cumulative column includes earlier production and ends at 10941.9205 mmscf.

well5_holdout.csv: monthly rates after 2017-08-06, noiseless, ending with the
first record below the abandonment rate on 2021-01-18.
"""
import datetime as dt
import math
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent
END = dt.date(2017, 8, 6)
ABANDON = dt.date(2021, 1, 18)
QI, Q_END, Q_AB, B = 11.339, 2.6755, 0.03, 0.1
NP_END = 10941.9205


def main() -> None:
    life = (ABANDON - END).days
    # Decline at the last record that reaches Q_AB after `life` days, then
    # the matching initial decline and history length.
    d_end = ((Q_END / Q_AB) ** B - 1.0) / (B * life)
    di = d_end * (QI / Q_END) ** B
    days = round(((QI / Q_END) ** B - 1.0) / (B * di))
    di = ((QI / Q_END) ** B - 1.0) / (B * days)
    start = END - dt.timedelta(days=days)

    def rate(t):
        return QI * (1.0 + B * di * t) ** (-1.0 / B)

    rng = np.random.default_rng(20170806)
    rates = [rate(t) * math.exp(rng.normal(0.0, 0.02)) for t in range(days)] + [Q_END]
    # Trapezoidal running total, offset so the last row carries NP_END.
    cum = [0.0]
    for a, b in zip(rates, rates[1:]):
        cum.append(cum[-1] + 0.5 * (a + b))
    offset = NP_END - cum[-1]
    with open(HERE / "well5_synthetic.csv", "w", newline="\n") as f:
        f.write("date,rate_mmscfd,cumulative_mmscf\n")
        for t, (q, c) in enumerate(zip(rates, cum)):
            f.write(f"{start + dt.timedelta(days=t)},{q:.4f},{c + offset:.4f}\n")

    def future(t):
        return Q_END * (1.0 + B * d_end * t) ** (-1.0 / B)

    with open(HERE / "well5_holdout.csv", "w", newline="\n") as f:
        f.write("date,rate_mmscfd\n")
        day = 30
        while day < life:
            f.write(f"{END + dt.timedelta(days=day)},{future(day):.4f}\n")
            day += 30
        f.write(f"{ABANDON},{0.9967 * Q_AB:.4f}\n")


if __name__ == "__main__":
    main()
