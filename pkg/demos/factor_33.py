"""Factor N = 33 with a = 5 by spotting a repetition in the power table.

No diffusion is needed here: 5 has order 10 mod 33, so the squares
5, 5^2, 5^4, ... cycle within the first few entries and hand over an odd
multiple q of the order's odd part directly.
"""

import argparse

from diffusion_factor.cayley import build_power_table, find_repetition
from diffusion_factor.factor import factor_once


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=33)
    parser.add_argument("--a", type=int, default=5)
    args = parser.parse_args()

    table = build_power_table(args.a, args.n)
    print(f"M = {table.M}")
    for t, (plus, minus) in enumerate(zip(table.plus_powers, table.minus_powers)):
        print(f"  t={t}:  a^(2^t) = {plus:4d}   a^(-2^t) = {minus:4d}")

    w = find_repetition(table)
    if w is None:
        print("no repetition; the diffusion walk would be needed")
        return
    kind = "+" if w.sign > 0 else "-"
    print(f"repetition: a^(2^{w.l}) == a^({kind}2^{w.l_prime})  ->  q = {w.q}")

    out = factor_once(args.n, args.a)
    print(f"s = {out.s}, x = a^(2^(s-1) q) = {out.x}")
    if out.found:
        print(f"{args.n} = {out.divisor} x {out.cofactor}")
    else:
        print(f"no divisor ({out.reason.value})")


if __name__ == "__main__":
    main()
