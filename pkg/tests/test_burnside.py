import random

import pytest

from threemove.braids import BraidWord, CHEN_WORD, braid_closure
from threemove.burnside import (
    closed_form_exponent,
    core_presentation,
    burnside3_order,
    e3_enumerate,
    e3_inverse,
    e3_multiply,
    e3_space,
    fox_coloring_dim,
    normal_closure,
)
from threemove.diagrams import LinkDiagram, parse_pd

from conftest import TREFOIL_PD, random_braid_diagram


def rand_elt(sp, rng):
    x = sp.identity()
    x.vec[:] = [rng.randrange(3) for _ in range(sp.dim)]
    return x


def test_exponent_three_laws():
    rng = random.Random(0)
    for r in (2, 3, 4, 5, 6):
        sp = e3_space(r)
        for _ in range(200):
            x, y, z = (rand_elt(sp, rng) for _ in range(3))
            assert e3_multiply(e3_multiply(x, x), x).is_identity()
            xy = e3_multiply(x, y)
            assert e3_multiply(e3_multiply(xy, xy), xy).is_identity()
            assert e3_multiply(e3_multiply(x, y), z) == e3_multiply(
                x, e3_multiply(y, z))
            assert e3_multiply(x, e3_inverse(x)).is_identity()
            assert e3_multiply(sp.identity(), y) == y


def test_free_enumeration_counts():
    assert e3_enumerate(1) == 3
    assert e3_enumerate(2) == 27
    assert e3_enumerate(3) == 3 ** 7


def test_collection_against_coset_enumeration_oracle():
    """Cross-check the collection formulas against an independent model.

    The exponent-3 group on r generators is enumerated with the Todd-Coxeter
    engine from cube relators; its regular multiplication must agree with the
    normal-form product under the element <-> coset dictionary.
    """
    from threemove.groups import Presentation, coset_enumeration, _coset_words

    def cube_presentation(r, words):
        rels = [w * 3 for w in words]
        return Presentation(r, tuple(rels))

    # r = 2: cubes of enough short words present the 27-element group.
    p2 = cube_presentation(2, [(1,), (2,), (1, 2), (1, -2)])
    t2 = coset_enumeration(p2)
    assert t2.degree == 27
    _check_dictionary(t2, 2, samples=None)

    # r = 3: order 3^7; sample products.
    words3 = [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, -2), (1, -3),
              (2, -3), (1, 2, 3), (1, 2, -3), (1, -2, 3), (1, -2, -3),
              (1, 3, 2), (2, 1, 3)]
    p3 = cube_presentation(3, words3)
    t3 = coset_enumeration(p3, max_cosets=500_000)
    assert t3.degree == 3 ** 7
    _check_dictionary(t3, 3, samples=10_000)


def _check_dictionary(table, r, samples):
    from threemove.groups import _coset_words

    sp = e3_space(r)
    words = _coset_words(table, set(range(1, table.degree + 1)))
    elt_of_coset = {}
    key_to_coset = {}
    for c in range(1, table.degree + 1):
        x = sp.from_word(words[c])
        elt_of_coset[c] = x
        key = x.key()
        assert key not in key_to_coset, "normal forms collide"
        key_to_coset[key] = c
    rng = random.Random(42)
    cosets = list(range(1, table.degree + 1))
    if samples is None:
        pairs = [(a, b) for a in cosets for b in cosets]
    else:
        pairs = [(rng.choice(cosets), rng.choice(cosets)) for _ in range(samples)]
    for a, b in pairs:
        product = table.apply(a, words[b])
        expected = key_to_coset[e3_multiply(elt_of_coset[a], elt_of_coset[b]).key()]
        assert product == expected


def test_core_presentation_counts():
    t = parse_pd(TREFOIL_PD)
    unreduced = core_presentation(t, reduced=False)
    assert unreduced.generator_count == 3
    assert len(unreduced.relators) == 3
    reduced = core_presentation(t)
    assert reduced.generator_count == 2

    unknot = LinkDiagram((), 0, unknotted_extras=1)
    pres = core_presentation(unknot, reduced=False)
    assert pres.generator_count == 1 and pres.relators == ()

    chen = braid_closure(CHEN_WORD).unoriented()
    pres = core_presentation(chen, reduced=False)
    assert pres.generator_count == 20
    assert len(pres.relators) == 20
    assert core_presentation(chen).generator_count == 19


def test_fox_coloring_dims():
    assert fox_coloring_dim(LinkDiagram((), 0, unknotted_extras=1)) == 1
    assert fox_coloring_dim(parse_pd(TREFOIL_PD)) == 2
    assert fox_coloring_dim(braid_closure(BraidWord(2, (1, 1, 1))).unoriented()) == 2


def test_normal_closure_degenerate_cases():
    sp = e3_space(3)
    empty = normal_closure(sp, [])
    assert empty.total_dim() == 0
    full = normal_closure(sp, [sp.generator(k) for k in range(3)])
    assert full.total_dim() == sp.dim


def test_normal_closure_trefoil_hand_case():
    # Reduced trefoil relators in the rank-2 group span a codimension-1
    # subgroup: the quotient has order 3.
    pres = core_presentation(parse_pd(TREFOIL_PD))
    sp = e3_space(2)
    images = [sp.from_word(w) for w in pres.relators if w]
    sub = normal_closure(sp, images)
    assert sp.dim - sub.total_dim() == 1


def test_burnside_trivial_links_closed_form():
    for k, expected in ((1, 0), (2, 1), (3, 3), (4, 7), (5, 14)):
        cert = burnside3_order(LinkDiagram((), 0, unknotted_extras=k))
        assert cert.exponent == expected == closed_form_exponent(k - 1)
        assert cert.matches_trivial_link()


def test_burnside_trefoil():
    assert burnside3_order(parse_pd(TREFOIL_PD)).exponent == 1


def test_burnside_chen_certificate():
    cert = burnside3_order(braid_closure(CHEN_WORD).unoriented())
    assert cert.exponent == 10
    assert not cert.matches_trivial_link()


def test_burnside_generator_cap():
    too_big = braid_closure(BraidWord(2, (1,) * 27)).unoriented()
    with pytest.raises(ValueError):
        burnside3_order(too_big)


def test_reduced_choice_does_not_matter():
    # Killing a different over-arc must give the same quotient order: compare
    # against relabeled diagrams whose lowest arc lies on another over-arc.
    from threemove.diagrams import relabel

    rng = random.Random(3)
    for _ in range(15):
        d = random_braid_diagram(rng, max_index=3, max_len=7)
        if not d.crossings:
            continue
        base = burnside3_order(d).exponent
        perm = list(range(1, d.arc_count + 1))
        rng.shuffle(perm)
        arc_perm = {a: perm[a - 1] for a in range(1, d.arc_count + 1)}
        assert burnside3_order(relabel(d, arc_perm)).exponent == base


def test_fox_dim_matches_burnside_weight_one_layer():
    rng = random.Random(14)
    for _ in range(20):
        d = random_braid_diagram(rng, max_index=4, max_len=8)
        pres = core_presentation(d)
        sp = e3_space(pres.generator_count)
        images = [sp.from_word(w) for w in pres.relators if w]
        sub = normal_closure(sp, images)
        d1 = sub.dims()[0]
        assert fox_coloring_dim(d) == 1 + (sp.dim1 - d1)
