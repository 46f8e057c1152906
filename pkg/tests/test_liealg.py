import json
import random
from fractions import Fraction

import pytest

from kzfusion.errors import KzFusionError
from kzfusion.exact import ExactMatrix, scalar
from kzfusion.gmodules import WeightModule
from kzfusion.liealg import (
    SimpleLieAlgebra,
    adjoint_probe,
    algebra_from_dict,
    algebra_to_dict,
    casimir_on_probe,
    check_lemma1,
    check_lemma2,
    load_algebra,
    sl2,
)


def test_defining_brackets(alg):
    e, h, f = (alg.basis_vector(i) for i in range(3))
    assert alg.bracket(e, f) == h
    assert alg.bracket(h, e) == tuple(scalar(2) * c for c in e)
    assert alg.bracket(h, f) == tuple(scalar(-2) * c for c in f)


def test_bracket_antisymmetry_random(alg):
    rng = random.Random(3)
    for _ in range(10):
        x = tuple(scalar(rng.randint(-4, 4)) for _ in range(3))
        assert all(not c for c in alg.bracket(x, x))


def test_dual_pairs(alg):
    pairs = alg.dual_pairs()
    # (e, f), (h, h/2), (f, e)
    assert pairs[0][1] == (scalar(0), scalar(0), scalar(1))
    assert pairs[1][1] == (scalar(0), scalar(Fraction(1, 2)), scalar(0))
    assert pairs[2][1] == (scalar(1), scalar(0), scalar(0))
    for a, (xa, xd_a) in enumerate(pairs):
        for b, (xb, xd_b) in enumerate(pairs):
            assert alg.pairing(xa, xd_b) == scalar(1 if a == b else 0)


def test_casimir_expression_is_ef_hh_fe(alg):
    # sum_{ij} c_ij x_i x_j with coefficients 1, 1/2, 1 on ef, hh, fe
    expect = {(0, 2): scalar(1), (1, 1): scalar(Fraction(1, 2)), (2, 0): scalar(1)}
    assert {(i, j): c for i, j, c in alg.casimir_pairs()} == expect


def test_casimir_on_adjoint_is_twice_dual_coxeter(alg):
    cas = casimir_on_probe(alg, adjoint_probe(alg))
    assert cas == ExactMatrix.identity(3).scale(4)


def test_lemma_checks_on_probes(alg):
    probes = [
        adjoint_probe(alg),
        WeightModule.finite_irreducible(alg, 1).to_probe(),
        WeightModule.finite_irreducible(alg, 2).to_probe(),
    ]
    for probe in probes:
        probe.validate(alg)
    for g in [alg.basis_vector(i) for i in range(3)]:
        assert check_lemma1(alg, g, probes)
        assert check_lemma2(alg, g, probes)
    zero = (scalar(0),) * 3
    assert check_lemma1(alg, zero, probes)
    assert check_lemma2(alg, zero, probes)


def test_lemma_checks_detect_wrong_dual_coxeter(alg):
    broken = SimpleLieAlgebra(
        alg.names, alg._brackets, alg.gram, dual_coxeter=3,
        weight_shifts=alg.weight_shifts, transpose_perm=alg.transpose_perm,
    )
    probes = [adjoint_probe(broken)]
    assert not check_lemma2(broken, broken.basis_vector(0), probes)


def test_canonical_element_independent_of_dual_pair_choice(alg):
    # sum_a x_a (x) x^a equals sum_a x^a (x) x_a as an operator on L1 (x) L1
    probe = WeightModule.finite_irreducible(alg, 1).to_probe()
    n = probe.dim
    one = ExactMatrix.zeros(n * n, n * n)
    two = ExactMatrix.zeros(n * n, n * n)
    for xa, xd in alg.dual_pairs():
        one = one + probe.act_element(xa).kron(probe.act_element(xd))
        two = two + probe.act_element(xd).kron(probe.act_element(xa))
    assert one == two


def _corrupt(alg, brackets=None, gram=None, transpose=None):
    return SimpleLieAlgebra(
        alg.names,
        brackets if brackets is not None else alg._brackets,
        gram if gram is not None else alg.gram,
        alg.dual_coxeter,
        weight_shifts=alg.weight_shifts,
        transpose_perm=transpose if transpose is not None else alg.transpose_perm,
    )


def test_validate_rejects_corrupted_structure_constants(alg):
    bad = dict(alg._brackets)
    bad[(0, 2)] = ((1, scalar(2)),)  # [e,f] = 2h breaks antisymmetry vs (2,0)
    with pytest.raises(KzFusionError):
        _corrupt(alg, brackets=bad).validate()
    bad = dict(alg._brackets)
    bad[(1, 0)] = ((0, scalar(3)),)
    bad[(0, 1)] = ((0, scalar(-3)),)  # antisymmetric but Jacobi-breaking
    with pytest.raises(KzFusionError):
        _corrupt(alg, brackets=bad).validate()


def test_validate_rejects_bad_form(alg):
    with pytest.raises(KzFusionError):
        _corrupt(alg, gram=ExactMatrix([[0, 0, 1], [0, 2, 0], [2, 0, 0]])).validate()
    with pytest.raises(KzFusionError):
        _corrupt(alg, gram=ExactMatrix([[0, 0, 0], [0, 2, 0], [0, 0, 0]])).validate()


def test_validate_rejects_bad_transpose(alg):
    with pytest.raises(KzFusionError):
        _corrupt(alg, transpose=(1, 0, 2)).validate()


def test_config_roundtrip_json(alg, tmp_path):
    path = tmp_path / "sl2.json"
    path.write_text(json.dumps(algebra_to_dict(alg)))
    loaded = load_algebra(path)
    loaded.validate()
    assert loaded.names == alg.names
    assert loaded.gram == alg.gram
    assert loaded.dual_coxeter == alg.dual_coxeter
    assert loaded._brackets == alg._brackets


def test_config_toml_with_autofilled_antisymmetry(tmp_path):
    # only one order of each bracket given; the loader fills the other
    text = """
basis = ["e", "h", "f"]
brackets = [["e", "f", "h", "1"], ["h", "e", "e", "2"], ["h", "f", "f", "-2"]]
gram = [["0", "0", "1"], ["0", "2", "0"], ["1", "0", "0"]]
dual_coxeter = "2"
weights = ["2", "0", "-2"]
transpose = ["f", "h", "e"]
"""
    path = tmp_path / "sl2.toml"
    path.write_text(text)
    loaded = load_algebra(path)
    loaded.validate()
    assert loaded.bracket_basis(2, 0) == ((1, scalar(-1)),)


def test_builtin_selector():
    assert load_algebra("builtin:sl2").names == ("e", "h", "f")
    with pytest.raises(KzFusionError):
        load_algebra("builtin:e8")


def test_probe_validate_rejects_non_representation(alg):
    probe = WeightModule.finite_irreducible(alg, 1).to_probe()
    mats = list(probe.matrices)
    mats[0] = mats[0].scale(2)
    from kzfusion.liealg import ProbeRep

    with pytest.raises(KzFusionError):
        ProbeRep("broken", mats).validate(alg)
