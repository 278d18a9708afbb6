"""Leading a1-order term of (q - p)(Delta^k) mod 2, computed from curve discriminants.

p(Delta) is the discriminant a3^3 (a1^3 - 27 a3) of y^2 + a1 xy + a3 y = x^3 and
q(Delta) is, up to an odd unit, the discriminant a3 (a1^3 - 27 a3)^3 of the
3-isogenous curve.  Uses sympy only.

    python3 scripts/qp_oracle.py 64 tests/data/qp_oracle.json
"""
import argparse
import json

from sympy import Poly, symbols

a1, a3 = symbols("a1 a3")


def leading_terms(kmax: int):
    p = Poly(a3**3 * (a1**3 - 27 * a3), a1, a3, modulus=2)
    q = Poly(a3 * (a1**3 - 27 * a3) ** 3, a1, a3, modulus=2)
    pk = qk = Poly(1, a1, a3, modulus=2)
    out = {}
    for k in range(1, kmax + 1):
        pk, qk = pk * p, qk * q
        diff = qk - pk
        out[k] = list(min(diff.monoms())) if not diff.is_zero else None
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("kmax", type=int)
    ap.add_argument("out")
    args = ap.parse_args()
    doc = {
        "method": "mod-2 difference of Delta^k for the level-3 curve and its 3-isogenous curve; lowest a1 power",
        "leading": {str(k): v for k, v in leading_terms(args.kmax).items()},
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
