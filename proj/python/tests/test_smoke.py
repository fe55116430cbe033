import pytest

import tkc

PHI1 = """
(declare-fun x () Real)
(assert (or (<= x 0) (= x 1)))
"""

PHI2 = "(declare-fun x () Real)\n(assert (= (not (<= x 0)) (= x 1)))"


def test_atoms_in_first_occurrence_order():
    p = tkc.Problem.from_smt2(PHI1)
    assert p.atoms() == ["x <= 0", "x = 1"]


def test_tred_queries():
    a = tkc.Problem.from_smt2(PHI1).build("tred")
    assert a.mode == "tReduced"
    assert a.lemmas() == [[-1, -2]]
    assert a.consistent()
    assert a.count() == 2
    assert a.count_assume([1]) == 1
    assert a.models() == [[1, -2], [-1, 2]]
    assert a.entails_clause([1, 2])
    with pytest.raises(tkc.ModeViolation):
        a.valid()


def test_text_queries():
    a = tkc.Problem.from_smt2(PHI1).build("text")
    assert not a.valid()
    assert a.implicant([1])
    assert not a.implicant([-1, -2])
    with pytest.raises(tkc.ModeViolation):
        a.count()


def test_obdd_equivalence():
    p = tkc.Problem.from_smt2(PHI1)
    a, b = p.build_pair(p.related(PHI2))
    assert a.equivalent(b)
    assert a.entails(b)
    with pytest.raises(tkc.UnsupportedQuery):
        p.build("tred").equivalent(a)


def test_generated_instances_agree_with_the_oracle():
    for seed in range(1, 21):
        p = tkc.Problem.generate(bool_atoms=2, lra_atoms=4, vars=2, depth=3, seed=seed)
        red = p.build("tred")
        assert red.count() == p.oracle_count()
        assert red.models() == p.oracle_models()
        assert red.consistent() == p.oracle_consistent()
        assert p.build("text").valid() == p.oracle_valid()


def test_save_and_load(tmp_path):
    a = tkc.Problem.from_smt2(PHI1).build("tred")
    nnf, mp = str(tmp_path / "f.nnf"), str(tmp_path / "f.map")
    a.save(nnf, mp)
    b = tkc.load_artifact(nnf, mp)
    assert b.count() == 2
    assert b.models() == a.models()
    assert b.atoms() == a.atoms()


def test_errors():
    with pytest.raises(tkc.ParseError):
        tkc.Problem.from_smt2("(assert (<= y")
    with pytest.raises(tkc.Error):
        tkc.Problem.from_smt2(PHI1).build("bogus")
    with pytest.raises(tkc.Error):
        tkc.Problem.from_smt2(PHI1).related("(declare-fun z () Real)\n(assert (<= z 3))")
