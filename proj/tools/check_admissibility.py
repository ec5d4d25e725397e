#!/usr/bin/env python3
"""Cross-check of the admissibility golden table with exact fractions.

Each hypothesis system is re-derived here from the printed statements,
independently of the C++ implementation, and compared with the verdicts and
violated-condition labels stored in data/admissibility_golden.tsv.
Exit status 0 when every row agrees.
"""
import csv
import sys
from fractions import Fraction as F
from pathlib import Path

INF = None  # sentinel for an infinite exponent


def val(text):
    text = text.strip()
    if text == "":
        return "absent"
    if text == "inf":
        return INF
    return F(text)


def inv(x):
    return F(0) if x is INF else 1 / x


def open_exp(x):
    """(1 < x < inf holds, x usable as a finite positive number)."""
    if x is INF:
        return False, False
    return x > 1, x > 0


def check(th, n, s, p, q, r, a, b, g, c):
    v = []

    def need(ok, label):
        if not ok:
            v.append(label)

    need(n >= 1, "n ≥ 1")
    if v:
        return v
    N = F(n)
    if th == "Sobolev_1_1":
        need(s is not INF and s > 0, "s > 0")
        ok, pos = open_exp(p)
        need(ok, "1 < p < ∞")
        if not pos or s is INF:
            return v
        need(s * p < N, "sp < n")
        need(q is INF or p <= q, "p ≤ q")
        if s * p < N:
            pstar = N * p / (N - s * p)
            need(q is not INF and q <= pstar, "q ≤ p*")
    elif th == "HLS_2_1":
        need(s is not INF and 0 < s < N, "0 < s < n")
        ok, pos = open_exp(p)
        need(ok, "1 < p < ∞")
        qpos = q is INF or q > 0
        need(qpos, "q > 0")
        if not pos or not qpos or s is INF:
            return v
        need(inv(q) == 1 / p - s / N, "1/q = 1/p − s/n")
    elif th in ("SteinWeiss_2_2", "RadialSW_2_3", "RadialSW_qinf_2_4"):
        radial_p1 = th == "RadialSW_2_3"
        need(s is not INF and 0 < s < N, "0 < s < n")
        if radial_p1:
            need(p is not INF and p >= 1, "1 ≤ p < ∞")
            pos = p is not INF and p > 0
        else:
            ok, pos = open_exp(p)
            need(ok, "1 < p < ∞")
        qpos = q is INF or q > 0
        need(qpos, "q > 0")
        if not (pos and qpos) or s is INF or a is INF or b is INF:
            return v
        ip, iq = 1 / p, inv(q)
        if th == "RadialSW_qinf_2_4":
            need(q is INF, "q = ∞")
        need(a < N * (1 - ip), "α < n/p′")
        need(b < N * iq, "β < n/q")
        if th == "SteinWeiss_2_2":
            need(a + b >= 0, "α+β ≥ 0")
        elif th == "RadialSW_2_3":
            if p == 1:
                need(a + b > (N - 1) * (iq - ip), "α+β > (n−1)(1/q − 1/p)")
            else:
                need(a + b >= (N - 1) * (iq - ip), "α+β ≥ (n−1)(1/q − 1/p)")
        need(iq == ip + (a + b - s) / N, "1/q = 1/p + (α+β−s)/n")
        if th == "RadialSW_qinf_2_4":
            need(a + b > (N - 1) * (ip - iq), "α+β > (n−1)(1/p − 1/q)")
        else:
            need(q is INF or p <= q, "p ≤ q")
            need(q is not INF, "q < ∞")
    elif th == "Strauss_5_2":
        ok, pos = open_exp(p)
        need(ok, "1 < p < ∞")
        if not pos or s is INF:
            if s is INF:
                v.append("s < n")
            return v
        need(1 / p < s, "1/p < s")
        need(s < N, "s < n")
    elif th in ("Ni_6_1", "NiBall_8_1"):
        ok, pos = open_exp(p)
        need(ok, "1 < p < ∞")
        if not pos or s is INF:
            if s is INF:
                v.append("s < n/p")
            return v
        need(1 / p < s, "1/p < s")
        need(s < N / p, "s < n/p")
    elif th in ("Critical_6_2", "CriticalBall_8_2"):
        ok, pos = open_exp(p)
        need(ok, "1 < p < ∞")
        need(s is not INF and s > 0, "s > 0")
        if not pos or s is INF or c is INF:
            if c is INF:
                v.append("c finite")
            return v
        need(s < N / p, "s < n/p")
        need(c > -N, "c > −n")
        need((1 - s * p) * c <= (N - 1) * p * s, "(1−sp)c ≤ (n−1)ps")
    elif th == "WeightedConv_6_3":
        oks = [open_exp(p), open_exp(q), open_exp(r)]
        for (ok, _), label in zip(oks, ["1 < p < ∞", "1 < q < ∞", "1 < r < ∞"]):
            need(ok, label)
        if not all(pos for _, pos in oks) or INF in (a, b, g):
            return v
        ip, iq, ir = 1 / p, 1 / q, 1 / r
        need(ir == ip + iq + (a + b + g) / N - 1, "1/r = 1/p + 1/q + (α+β+γ)/n − 1")
        need(ir <= ip + iq, "1/r ≤ 1/p + 1/q")
        need(a < N * (1 - ip), "α < n/p′")
        need(b < N * (1 - iq), "β < n/q′")
        need(g < N * ir, "γ < n/r")
        need(a + b >= (N - 1) * (1 - ip - iq), "α+β ≥ (n−1)(1 − 1/p − 1/q)")
        need(b + g >= (N - 1) * (ir - iq), "β+γ ≥ (n−1)(1/r − 1/q)")
        need(g + a >= (N - 1) * (ir - ip), "γ+α ≥ (n−1)(1/r − 1/p)")
        need(max(a, b, g) > 0 or a == b == g == 0, "max{α,β,γ} > 0 or α=β=γ=0")
    elif th == "WeightedEmb_6_4":
        ok, pos = open_exp(p)
        need(ok, "1 < p < ∞")
        need(s is not INF and s > 0, "s > 0")
        if not pos or s is INF or c is INF:
            if c is INF:
                v.append("c finite")
            return v
        sub = s < N / p
        need(sub, "s < n/p")
        need(r is INF or p <= r, "p ≤ r")
        if sub:
            pc = p * (N + c) / (N - s * p)
            need(r is not INF and r <= pc, "r ≤ p*_c")
        need(-(s * p) < c, "−sp < c")
        need(r is not INF and c < (N - 1) * (r - p) / p, "c < (n−1)(r−p)/p")
    else:
        raise SystemExit(f"unknown theorem {th}")
    return v


def main():
    path = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "admissibility_golden.tsv"
    bad = 0
    count = {}
    with open(path, encoding="utf-8") as fh:
        for row in csv.DictReader(fh, delimiter="\t"):
            args = [val(row[k]) for k in ("s", "p", "q", "r", "alpha", "beta", "gamma", "c")]
            got = check(row["theorem"], int(row["n"]), *args)
            want = [x for x in row["violated"].split(" | ") if x]
            adm = row["admissible"] == "yes"
            count[row["theorem"]] = count.get(row["theorem"], 0) + 1
            if got != want or adm != (not got):
                bad += 1
                print(f"MISMATCH {row['theorem']} {dict(row)}: computed {got}")
    print(f"{sum(count.values())} rows, {len(count)} theorems, {bad} mismatches")
    for th, k in sorted(count.items()):
        if k < 6:
            print(f"too few rows for {th}: {k}")
            bad += 1
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
