"""Report the X-degree at which detect_obstruction refutes sample obstructed matrices."""

import argparse

from twistlab.coeffring import QQ
from twistlab.planes import classify_almost_null, detect_obstruction
from twistlab.polyalg import BiPoly

SAMPLES = {
    "simple root (q01=1, q02=-1, q12=1)": {(0, 1): 1, (0, 2): -1, (1, 2): 1},
    "YX = Y^2 (q02=1)": {(0, 2): 1},
    "YX = Y + X Y^2 (q01=1, q12=1)": {(0, 1): 1, (1, 2): 1},
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=10, help="largest X-degree scanned")
    args = ap.parse_args()
    for name, q in SAMPLES.items():
        q = BiPoly(QQ, q)
        verdict = classify_almost_null(q).status
        rep = detect_obstruction(q, N=args.degree)
        if rep.status == "Refuted":
            w = rep.witness
            found = f"refuted at m={w['m']} (alpha_{w['n']}(X^{w['m']}) != 0)"
        else:
            found = rep.status
        print(f"{name}: {verdict}; {found}")


if __name__ == "__main__":
    main()
