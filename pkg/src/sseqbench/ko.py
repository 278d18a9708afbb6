"""KO_BP from its E_2 presentation Z[u^{+-2}, eta]/(2 eta).

u^{2k} eta^j sits at (4k + j, j); the only differential is
d_3(u^{2k} eta^j) = k u^{2k-2} eta^{j+3}.  The Adams operation psi^N acts by
N^{2k} on u^{2k} and fixes eta.
"""
from __future__ import annotations

from .chart import BiDegree, Chart, Differential, ProductEntry
from .groups import PresentedAbGroup


def monomial(k: int, j: int) -> str:
    u = "" if k == 0 else ("u^2" if k == 1 else f"u^{2 * k}")
    e = "" if j == 0 else ("eta" if j == 1 else f"eta^{j}")
    return (u + e) or "1"


def ko_classes(stems=(0, 8), filts=(0, 4)):
    """(k, j) for every E_2 class in the window."""
    s0, s1 = stems
    f0, f1 = filts
    out = []
    for j in range(max(f0, 0), f1 + 1):
        for stem in range(s0, s1 + 1):
            if (stem - j) % 4 == 0:
                out.append(((stem - j) // 4, j))
    return sorted(out, key=lambda kj: (4 * kj[0] + kj[1], kj[1]))


def ko_chart(stems=(0, 8), filts=(0, 4)) -> Chart:
    cls = ko_classes(stems, filts)
    have = set(cls)
    cells = {}
    for k, j in cls:
        cells[BiDegree(4 * k + j, j)] = PresentedAbGroup.cyclic(monomial(k, j), 0 if j == 0 else 2)
    diffs = []
    for k, j in cls:
        if k % 2 and (k - 1, j + 3) in have:
            src = BiDegree(4 * k + j, j)
            diffs.append(Differential(3, src, src.shift(-1, 3), {monomial(k, j): {monomial(k - 1, j + 3): 1}}))
    prods = []
    for k, j in cls:
        if (k, j + 1) in have:
            prods.append(ProductEntry("eta", monomial(k, j), {monomial(k, j + 1): 1}))
        if (k + 1, j) in have and (k, j) != (0, 0):
            prods.append(ProductEntry("u^2", monomial(k, j), {monomial(k + 1, j): 1}))
    have_eta = (0, 1) in have
    have_u = (1, 0) in have
    prods = [p for p in prods if (p.left == "eta" and have_eta) or (p.left == "u^2" and have_u)]
    s0, s1 = stems
    f0, f1 = filts
    return Chart(
        "KO",
        (s0, s1, f0, f1),
        cells,
        diffs,
        prods,
        max_page=3,
        parity=None,
        provenance={"d3": "d3(u^2k eta^j) = k u^(2k-2) eta^(j+3)", "E2": "Z[u^+-2, eta]/(2 eta)"},
    )


def psi_scalar(N: int, k: int, j: int) -> int:
    """psi^N on u^{2k} eta^j: u^{2k} lives in stem 4k, so the weight is N^{2k}."""
    return N ** (2 * k) if j == 0 else 1
