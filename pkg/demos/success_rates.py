"""Run the pipeline for every a in 1..N and compare with the bound 1 - (m+1)/2^m."""

import argparse

from diffusion_factor.factor import exhaustive_success_rate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("moduli", nargs="*", type=int, default=[33, 35, 105, 1363])
    args = parser.parse_args()

    for n in args.moduli:
        rate = exhaustive_success_rate(n)
        print(f"N={n}: m={rate.distinct_primes}, bound {rate.bound}, "
              f"units {rate.rate_over_units}, all a {rate.rate_over_all}")
        for key, count in rate.histogram.items():
            print(f"    {key:26s} {count}")


if __name__ == "__main__":
    main()
