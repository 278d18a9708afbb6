"""Write the chart fixtures: TMF (sparse), TMF0(3), the q - p map, KO and the J0(3) fibre.

    python3 scripts/build_tmf_fixture.py [fixtures dir]

The TMF chart holds only the cells that the detection differentials and the
zero-line checks read.  Each cell carries its citation.
"""
import json
import sys
from pathlib import Path

from sseqbench.chart import BiDegree, Chart, Differential, ProductEntry, validate
from sseqbench.groups import PresentedAbGroup
from sseqbench.ko import ko_chart
from sseqbench.spectral_maps import ChartMap, MapComponent, build_fiber_chart, qp_leading_term

WINDOW = (0, 200, 0, 25)
MAX_PAGE = 23
BAUER = "E_2 of the descent SS for TMF (bauer Sec.7; brunerrognes Ch.9)"
DIFF = "differential pattern of TMF at 2 (brunerrognes Th.11.61; smfcomputation Pr.6.19)"
HUR = "q and p are ring maps, so q - p kills the unit image; class is in the synthetic Hurewicz image (hurewicztmf Th.1.2)"


def delta_name(k):
    return "Delta" if k == 1 else f"Delta^{k}"


def tmf_chart():
    cells = {}
    prov = {}

    def add(stem, filt, name, order, why):
        cells[BiDegree(stem, filt)] = PresentedAbGroup.cyclic(name, order)
        prov[name] = why

    add(0, 0, "1", 0, "unit")
    add(8, 0, "c4", 0, "modular form c4 (zero line, torsion free)")
    add(12, 0, "c6", 0, "modular form c6 (zero line, torsion free)")
    add(1, 1, "h1", 2, BAUER)
    add(3, 1, "h2", 4, BAUER)
    add(8, 2, "c", 2, BAUER + "; detects eps")
    add(14, 2, "d", 2, BAUER + "; detects kappa")
    add(20, 4, "g", 4, BAUER + "; detects kbar")
    add(22, 4, "cd", 2, BAUER)
    for k in range(1, 8):
        add(24 * k, 0, delta_name(k), 0, "discriminant power, zero line")
    eta = {2: 1, 3: 2, 5: 1, 6: 2, 7: 2}
    for k, top in eta.items():
        add(24 * k + 1, 1, f"h1{delta_name(k)}", 2, BAUER)
        if top == 2:
            add(24 * k + 2, 2, f"h1^2{delta_name(k)}", 2, BAUER)
    for k in (0, 1, 2, 4, 5, 6):
        add(24 * k + 23, 5, "h2g" + (delta_name(k) if k else ""), 4, BAUER)
    for k in (3, 5, 6):
        add(24 * k + 23, 7, f"h1^3g{delta_name(k)}", 2, BAUER)
    for name, (s, f) in {
        "cg^2": (48, 10),
        "cg^2Delta": (72, 10),
        "h1cg^2Delta": (73, 11),
        "g^6": (120, 24),
        "cg^2Delta^4": (144, 10),
        "h1g^6Delta": (145, 25),
        "cg^2Delta^5": (168, 10),
        "h1cg^2Delta^5": (169, 11),
    }.items():
        add(s, f, name, 2, BAUER)

    diffs = []

    def d(r, src, images):
        s = BiDegree(*src)
        diffs.append(Differential(r, s, s.shift(-1, r), images, DIFF))

    for k in (1, 2, 3, 5, 6, 7):
        tgt = "h2g" + (delta_name(k - 1) if k > 1 else "")
        d(5, (24 * k, 0), {delta_name(k): {tgt: k % 4}})
    d(7, (96, 0), {"Delta^4": {"h1^3gDelta^3": 1}})
    d(7, (144, 0), {"2*Delta^6": {"h1^3gDelta^5": 1}})
    d(7, (168, 0), {"4*Delta^7": {"h1^3gDelta^6": 1}})
    d(9, (49, 1), {"h1Delta^2": {"cg^2": 1}})
    d(9, (73, 1), {"h1Delta^3": {"cg^2Delta": 1}})
    d(9, (74, 2), {"h1^2Delta^3": {"h1cg^2Delta": 1}})
    d(9, (145, 1), {"h1Delta^6": {"cg^2Delta^4": 1}})
    d(9, (169, 1), {"h1Delta^7": {"cg^2Delta^5": 1}})
    d(9, (170, 2), {"h1^2Delta^7": {"h1cg^2Delta^5": 1}})
    d(23, (121, 1), {"h1Delta^5": {"g^6": 1}})
    d(23, (146, 2), {"h1^2Delta^6": {"h1g^6Delta": 1}})

    prods = [
        ProductEntry("h2", "g", {"h2g": 1}, provenance=BAUER),
        ProductEntry("c", "d", {"cd": 1}, provenance=BAUER),
        ProductEntry("h1", "h1Delta^6", {"h1^2Delta^6": 1}, provenance=BAUER),
    ]
    for k, top in eta.items():
        prods.append(ProductEntry("h1", delta_name(k), {f"h1{delta_name(k)}": 1}, provenance=BAUER))
    chart = Chart("TMF", WINDOW, cells, diffs, prods, MAX_PAGE, "even", provenance=prov)
    chart.meta = {"note": "sparse window: only cells read by the detection checks and the zero line"}
    return chart


def tmf03_chart():
    cells = {BiDegree(0, 0): PresentedAbGroup.cyclic("1", 0)}
    prov = {"1": "unit"}
    why = "E_2 of the descent SS for TMF0(3), Z_(2)[a1, a3][Delta^-1] on the zero line (levelonethree Sec.8)"
    for k in range(1, 8):
        lead = qp_leading_term(k).name()
        cells[BiDegree(24 * k, 0)] = PresentedAbGroup.cyclic(lead, 0)
        prov[lead] = why
    for k, top in {2: 1, 3: 2, 5: 1, 6: 2, 7: 2}.items():
        lead = qp_leading_term(k).name()
        cells[BiDegree(24 * k + 1, 1)] = PresentedAbGroup.cyclic(f"h1.{lead}", 2)
        prov[f"h1.{lead}"] = "eta times the zero line, nonzero by inspection (levelonethree Pr.8.1)"
        if top == 2:
            cells[BiDegree(24 * k + 2, 2)] = PresentedAbGroup.cyclic(f"h1^2.{lead}", 2)
            prov[f"h1^2.{lead}"] = "eta^2 times the zero line, nonzero by inspection (levelonethree Pr.8.1)"
    return Chart("TMF0(3)", WINDOW, cells, [], [], MAX_PAGE, "even", provenance=prov)


def qp_map(tmf, tmf03):
    comps = {}
    for k in range(1, 8):
        lt = qp_leading_term(k)
        bd = BiDegree(24 * k, 0)
        comps[bd] = MapComponent(
            bd,
            {delta_name(k): {lt.name(): 1}},
            None,
            f"(q - p)(Delta^{k}) = {lt} mod 2 (levelonethree Pr.8.1); reduction is iso on the zero line",
        )
    for k, top in {2: 1, 3: 2, 5: 1, 6: 2, 7: 2}.items():
        lead = qp_leading_term(k).name()
        for i in range(1, top + 1):
            bd = BiDegree(24 * k + i, i)
            src = ("h1" if i == 1 else "h1^2") + delta_name(k)
            tgt = ("h1." if i == 1 else "h1^2.") + lead
            comps[bd] = MapComponent(
                bd,
                {src: {tgt: 1}},
                22,
                "q - p is S-linear: (q - p)(eta^i Delta^k) = eta^i (q - p)(Delta^k), nonzero by inspection (levelonethree Pr.8.1)",
            )
    for bd, cell in tmf.cells.items():
        if bd in comps or bd.filtration == 0 and bd.stem:
            continue
        comps[bd] = MapComponent(bd, {}, None, "unit" if bd.stem == 0 else HUR, zero=True)
    return ChartMap(
        "qp3",
        tmf,
        tmf03,
        comps,
        {},
        {"fiber_even": True, "fiber_parity": "even", "zero_line": [0], "connective": True},
        "q - p : TMF -> TMF0(3), represented by leading terms and declared nonvanishing",
    )


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "src/sseqbench/fixtures")
    (root / "tmf").mkdir(parents=True, exist_ok=True)
    (root / "ko").mkdir(parents=True, exist_ok=True)
    tmf = tmf_chart()
    tmf03 = tmf03_chart()
    for c in (tmf, tmf03):
        rep = validate(c)
        if not rep.ok:
            raise SystemExit(rep.text())
    tmf.save(root / "tmf/tmf.json")
    tmf03.save(root / "tmf/tmf03.json")
    qp = qp_map(tmf, tmf03)
    problems = qp.check()
    if problems:
        raise SystemExit("\n".join(problems))
    qp.save(root / "tmf/qp.json", "tmf.json", "tmf03.json")
    fib = build_fiber_chart(qp)
    j03 = fib.chart
    j03.name = "J0(3)"
    j03.meta = {"undetermined": [bd.as_list() for bd in fib.undetermined], "built_from": "qp.json"}
    j03.provenance = {n: "kernel of q - p" for n in fib.lift_names()}
    j03.provenance.update({n: "boundary of a cokernel class of q - p" for n in fib.boundary_names()})
    j03.save(root / "tmf/j03.json")
    ko = ko_chart()
    ko.save(root / "ko/ko.json")
    print(json.dumps({"tmf cells": len(tmf.cells), "tmf03 cells": len(tmf03.cells), "j03 cells": len(j03.cells)}))


if __name__ == "__main__":
    main()
