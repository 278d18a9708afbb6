"""Run the bar-complex oracle over a window and write the dimension table as JSON.

    python3 scripts/freeze_oracle.py A1 12 8 tests/data/oracle_A1.json

The file is rewritten after every filtration so long runs keep partial output.
"""
import argparse
import json
import time

from sseqbench.cobar import BarComplex
from sseqbench.steenrod import algebra_by_name


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("algebra")
    ap.add_argument("max_stem", type=int)
    ap.add_argument("max_filtration", type=int)
    ap.add_argument("out")
    args = ap.parse_args()
    alg = algebra_by_name(args.algebra)
    bar = BarComplex(alg)
    dims = []
    start = time.time()
    for s in range(args.max_filtration + 1):
        row = [bar.ext_dim(s, stem + s) for stem in range(args.max_stem + 1)]
        dims.append(row)
        doc = {
            "algebra": alg.name,
            "method": "normalized bar complex, sparse GF(2) rank",
            "max_stem": args.max_stem,
            "max_filtration": s,
            "dims": dims,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
            fh.write("\n")
        print(s, row, f"{time.time() - start:.1f}s", flush=True)


if __name__ == "__main__":
    main()
