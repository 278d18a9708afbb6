"""Write the F_2-synthetic sphere fixture read by the lift scripts.

    python3 scripts/build_sphere_fixture.py [fixtures dir]

Only the cells a lift script inspects are transcribed.  Every class has order
2; tau-power torsion is declared per class or per cell.
"""
import sys
from pathlib import Path

from sseqbench.chart import BiDegree, Chart, ProductEntry, validate
from sseqbench.groups import PresentedAbGroup
from sseqbench.moore import PeriodicClass, tau_name

ASS = "E_2 and E_infinity of the Adams SS for S (isaksenwangxu ASS charts)"
IMJ = "image-of-J / mu-family member, bidegree from its family formula (adamsperiodicity Th.1.2)"


def build():
    cells: dict[BiDegree, list[str]] = {}
    prov = {}
    products = []
    tau_torsion = []

    def add(s, f, name, why, torsion=False):
        cells.setdefault(BiDegree(s, f), []).append(name)
        prov[name] = why
        if torsion:
            tau_torsion.append(name)

    def h0(x, y=None):
        products.append(ProductEntry("h0", x, {y: 1} if y else {}, provenance=ASS))

    def imj(t, fam, stem, chain=0):
        """tau^t x for a family member x, with its h0-multiples up to h0^chain x."""
        x = PeriodicClass(fam, stem)
        bd = x.bidegree.shift(0, -t)
        names = [tau_name(t, x)]
        for k in range(1, chain + 1):
            hk = "h0" if k == 1 else f"h0^{k}"
            names.append(f"tau^{t}.{hk}{x.name}" if t else f"{hk}{x.name}")
        for k, n in enumerate(names):
            add(bd.stem, bd.filtration + k, n, IMJ)
        for a, b in zip(names, names[1:]):
            h0(a, b)
        h0(names[-1])
        return names[0]

    add(0, 0, "1", "unit")
    add(0, 1, "h0", ASS)
    add(7, 2, "j'_7", ASS + "; h0h3")
    add(7, 3, "h0j'_7", ASS + "; h0^2h3")
    add(8, 3, "j_8", ASS + "; c0")
    add(16, 7, "j_16", ASS + "; P c0")
    add(9, 5, "mu_9", ASS + "; P h1")
    add(17, 9, "mu_17", ASS + "; P^2 h1")
    h0("1", "h0")
    h0("mu_9")
    h0("mu_17")
    h0("j_8")
    h0("j_16")
    h0("j'_7", "h0j'_7")
    products += [
        ProductEntry("j'_7", "1", {"j'_7": 1}, provenance="unit"),
        ProductEntry("j'_7", "h0", {"h0j'_7": 1}, provenance=ASS),
        ProductEntry("j'_7", "mu_9", {}, provenance="mu-family is h0-torsion"),
    ]

    # stem 47 argument, M(h0^3)
    add(47, 10, "y47", ASS + "; F_2-synthetic lift of x47, filtration >= 10 by inspection")
    add(47, 11, "tau^2.PDh1d0", ASS)
    h0("y47", "tau^2.PDh1d0")
    h0("tau^2.PDh1d0")
    imj(12, "j'", 47, chain=2)
    imj(11, "j", 48)
    imj(12, "j'", 55, chain=2)
    add(55, 14, "[il]", ASS + "; the class labelled il, tau-power torsion", torsion=True)
    imj(11, "j", 56)

    # stem 54 argument, M(h0^2)
    add(54, 9, "h0h5i", ASS + "; only tau-free class in stem 54 supporting 2")
    add(54, 10, "h0^2h5i", ASS)
    h0("h0h5i", "h0^2h5i")
    h0("h0^2h5i")
    imj(15, "j", 55)
    imj(12, "j", 63)

    # stem 71 argument, M(h0^3)
    add(71, 13, "y71", ASS + "; F_2-synthetic lift of x71, filtration >= 13 as it supports 4")
    add(71, 14, "h0y71", ASS)
    add(71, 15, "h0^2y71", ASS)
    h0("y71", "h0y71")
    h0("h0y71", "h0^2y71")
    h0("h0^2y71")
    imj(21, "j'", 71, chain=2)
    imj(20, "j", 72)
    imj(21, "j'", 79, chain=2)
    imj(20, "j", 80)

    # stem 80 argument, M(h0)
    add(80, 16, "g^4", ASS + "; F_2-synthetic lift of kbar^4")
    h0("g^4")
    imj(23, "j", 80)
    imj(23, "j", 88)
    imj(24, "j", 81)
    imj(25, "mu", 81)
    imj(24, "j", 89)
    imj(25, "mu", 89)

    # cells that only contribute tau-power torsion (by inspection of the charts)
    torsion_cells = [[48, 9], [55, 8], [56, 13], [62, 13], [63, 12], [72, 12], [81, 15], [89, 19]]

    groups = {bd: PresentedAbGroup([(n, 2) for n in names]) for bd, names in cells.items()}
    chart = Chart("S_F2", (0, 100, 0, 50), groups, [], products, None, None, provenance=prov)
    chart.meta = {
        "tau_torsion": tau_torsion,
        "tau_torsion_cells": torsion_cells,
        "note": "minimal transcription: only the cells read by the lift scripts",
    }
    return chart


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "src/sseqbench/fixtures")
    (root / "sphere").mkdir(parents=True, exist_ok=True)
    chart = build()
    rep = validate(chart)
    if not rep.ok:
        raise SystemExit(rep.text())
    chart.save(root / "sphere/sphere.json")
    print(len(chart.cells), "cells")


if __name__ == "__main__":
    main()
