"""Print rank and nullity of the dual-number coefficient matrix C for even m."""

import argparse

from twistlab.dualnum import rank_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=10)
    args = ap.parse_args()
    print(f"{'m':>4} {'rank':>5} {'nullity':>8}")
    for row in rank_table(range(2, args.m_max + 1, 2)):
        print(f"{row['m']:>4} {row['rank']:>5} {row['nullity']:>8}")


if __name__ == "__main__":
    main()
