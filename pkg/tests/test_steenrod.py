import importlib.util
from pathlib import Path

import pytest

from sseqbench.steenrod import algebra_by_name, milnor_product, subalgebra_A

spec = importlib.util.spec_from_file_location("adem_oracle", Path(__file__).parents[1] / "scripts/adem_oracle.py")
adem = importlib.util.module_from_spec(spec)
spec.loader.exec_module(adem)


@pytest.mark.parametrize("n,dim,top", [(0, 2, 1), (1, 8, 6), (2, 64, 23)])
def test_dimensions(n, dim, top):
    alg = subalgebra_A(n)
    assert len(alg.basis) == dim
    assert alg.top_degree == top


@pytest.mark.parametrize("n", [0, 1, 2])
def test_graded_dims_match_admissible_basis(n):
    alg = subalgebra_A(n)
    other = adem.SubAlgebra(n)
    for d in range(alg.top_degree + 1):
        assert alg.dim(d) == len(other.basis.get(d, [])), d


@pytest.mark.parametrize("name", ["A0", "A1", "A2"])
def test_associative_and_unital(name):
    assert algebra_by_name(name).check() == []


def test_adem_relations_in_milnor_basis():
    sq1, sq2 = (1,), (2,)
    assert milnor_product(sq1, sq1) == frozenset()
    # Sq^2 Sq^2 = Sq^3 Sq^1, which is P(1,1) in the Milnor basis
    assert milnor_product(sq1, sq2) == frozenset({(3,)})
    assert milnor_product(sq2, sq2) == frozenset({(1, 1)})
    assert milnor_product((2,), (1,)) == frozenset({(3,), (0, 1)})


def test_round_trip(tmp_path):
    alg = algebra_by_name("A1")
    alg.save(tmp_path / "a1.json")
    again = type(alg).load(tmp_path / "a1.json")
    nonzero = {k: v for k, v in alg.mult.items() if v}
    assert again.basis == alg.basis and again.mult == nonzero


def test_unknown_algebra():
    with pytest.raises(KeyError):
        algebra_by_name("A9")
