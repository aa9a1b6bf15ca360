import random

import pytest

from threemove.braids import BraidWord, braid_closure
from threemove.diagrams import LinkDiagram, mirror, parse_pd, enumerate_orientations
from threemove.invariants import (
    DELTA,
    JonesPolynomial,
    LaurentPoly,
    jones,
    kauffman_bracket,
    palindromic,
    writhe,
)

from conftest import TREFOIL_PD, random_braid_diagram


def test_bracket_unknot():
    assert kauffman_bracket(LinkDiagram((), 0, unknotted_extras=1)) == LaurentPoly({0: 1})


def test_bracket_unlink():
    assert kauffman_bracket(LinkDiagram((), 0, unknotted_extras=2)) == DELTA


def test_bracket_positive_kink():
    assert kauffman_bracket(parse_pd("PD[X[1,1,2,2]]")) == LaurentPoly({3: -1})


def test_bracket_kink_framing_law():
    rng = random.Random(5)
    from threemove.rewrite import R1_UP, enumerate_moves

    for _ in range(12):
        d = random_braid_diagram(rng, max_index=3, max_len=6)
        if d.crossing_count > 10 or not d.crossings:
            continue
        b = kauffman_bracket(d)
        for _site, nd in enumerate_moves(d, {R1_UP})[:6]:
            kinked = kauffman_bracket(nd)
            assert kinked in (b.shifted(3, -1), b.shifted(-3, -1))


def test_jones_right_trefoil():
    j = jones(braid_closure(BraidWord(2, (1, 1, 1))))
    assert j.t_int_coefficients() == {4: -1, 3: 1, 1: 1}


def test_jones_left_trefoil():
    j = jones(braid_closure(BraidWord(2, (-1, -1, -1))))
    assert j.t_int_coefficients() == {-4: -1, -3: 1, -1: 1}


def test_jones_unknot():
    j = jones(braid_closure(BraidWord(1, ())))
    assert j.t_int_coefficients() == {0: 1}


def test_jones_mirror_substitutes_inverse():
    rng = random.Random(9)
    for _ in range(20):
        d = random_braid_diagram(rng, max_index=4, max_len=10, oriented=True)
        if d.crossing_count > 12:
            continue
        m = mirror(d)
        assert jones(m) == jones(d).substitute_inverse()


def test_jones_hopf_half_integer_exponents():
    j = jones(braid_closure(BraidWord(2, (1, 1))))
    coeffs = j.t_coefficients()
    assert any(e.denominator == 2 for e in coeffs)
    with pytest.raises(ValueError):
        j.t_int_coefficients()


def test_writhe_of_braid_closure_is_exponent_sum():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(2, 5)
        letters = tuple(rng.choice([i for i in range(-(n - 1), n) if i != 0])
                        for _ in range(rng.randint(1, 12)))
        w = BraidWord(n, letters)
        assert writhe(braid_closure(w)) == w.exponent_sum()


def test_palindromic():
    assert palindromic(JonesPolynomial(LaurentPoly({0: 1})))
    trefoil = jones(braid_closure(BraidWord(2, (1, 1, 1))))
    assert not palindromic(trefoil)
    symmetric = JonesPolynomial(trefoil.apoly + trefoil.substitute_inverse().apoly)
    assert palindromic(symmetric)


def test_jones_orientation_reversal_overall():
    # Reversing every component leaves the Jones polynomial unchanged.
    d = parse_pd(TREFOIL_PD)
    orientations = enumerate_orientations(d)
    assert len({jones(o) for o in orientations}) == 1


def test_bracket_crossing_limit():
    too_big = braid_closure(BraidWord(2, (1,) * 25)).unoriented()
    with pytest.raises(ValueError):
        kauffman_bracket(too_big)


def test_jones_isotopy_classes_of_survivors():
    """The six surviving links fall into three isotopy classes by Jones."""
    from conftest import L_SERIES
    from threemove.diagrams import native_orientation, parse_pd

    j = {name: jones(native_orientation(parse_pd(text)))
         for name, text in L_SERIES.items()}
    assert j["L235"] == j["L298"]
    assert j["L176"] == j["L246"] == j["L249"]
    assert len({j["L235"], j["L176"], j["L270"]}) == 3
