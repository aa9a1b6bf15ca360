import random

import pytest

from threemove.diagrams import (
    DiagramError,
    LinkDiagram,
    components,
    diagram_line,
    enumerate_orientations,
    format_pd,
    mirror,
    native_orientation,
    parse_pd,
    reflect,
    relabel,
    faces,
    signature,
)

from conftest import L_SERIES, TREFOIL_PD, random_braid_diagram


def test_parse_trefoil():
    d = parse_pd(TREFOIL_PD)
    assert d.crossing_count == 3
    assert d.arc_count == 6
    assert components(d)[1] == 1


def test_parse_l235_succeeds():
    d = parse_pd(L_SERIES["L235"])
    assert d.crossing_count == 20
    assert d.arc_count == 40
    assert components(d)[1] == 5


def test_parse_degenerate_kink():
    d = parse_pd("PD[X[1,1,2,2]]")
    assert d.crossing_count == 1


@pytest.mark.parametrize("text", [
    "",
    "X[1,2,3,4]",
    "PD[]",
    "PD[X[1,2,3]]",
    "PD[X[0,1,1,2],X[2,0,..]]",
    "PD[X[1,4,2,5],X[3,6,4,1]]",          # labels not paired
    "PD[X[1,1,3,3]]",                      # gap: label 2 missing
    "PD[X[1,1,2,2]X[3,3,4,4]]",            # missing comma
])
def test_parse_rejects(text):
    with pytest.raises(DiagramError):
        parse_pd(text)


def test_format_round_trip():
    d = parse_pd(L_SERIES["L270"])
    assert signature(parse_pd(format_pd(d))) == signature(d)
    line = diagram_line(d)
    assert line.split()[0] == signature(d)


def test_components_of_extras():
    d = LinkDiagram((), 0, unknotted_extras=3)
    assert components(d)[1] == 3


def test_face_count_euler():
    for text in (TREFOIL_PD, L_SERIES["L176"]):
        d = parse_pd(text)
        assert len(faces(d)) == d.crossing_count + 2


def test_mirror_involution():
    d = parse_pd(L_SERIES["L246"])
    # Double mirror re-presents each crossing with the other under-in slot.
    assert mirror(mirror(d)).crossings == tuple(
        (c, e, a, b) for a, b, c, e in d.crossings)
    assert signature(mirror(mirror(d))) == signature(d)
    assert reflect(reflect(d)) == d


def test_signature_folds_mirror_and_reflection():
    d = parse_pd(TREFOIL_PD)
    assert signature(mirror(d)) == signature(d)
    assert signature(reflect(d)) == signature(d)


def test_signature_relabel_invariance():
    rng = random.Random(7)
    checked = 0
    while checked < 1000:
        d = random_braid_diagram(rng, max_index=4, max_len=12)
        if not d.crossings:
            continue
        sig = signature(d)
        for _ in range(10):
            perm = list(range(1, d.arc_count + 1))
            rng.shuffle(perm)
            arc_perm = {a: perm[a - 1] for a in range(1, d.arc_count + 1)}
            order = list(range(d.crossing_count))
            rng.shuffle(order)
            assert signature(relabel(d, arc_perm, order)) == sig
            checked += 1


def test_signature_distinguishes_crossing_counts():
    t = parse_pd(TREFOIL_PD)
    fig8 = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]")
    assert signature(t) != signature(fig8)


def test_trefoil_pd_matches_sigma1_cubed_closure():
    from threemove.braids import BraidWord, braid_closure

    closure = braid_closure(BraidWord(2, (1, 1, 1))).unoriented()
    assert signature(closure) == signature(parse_pd(TREFOIL_PD))


def test_orientation_counts():
    t = parse_pd(TREFOIL_PD)
    assert len(enumerate_orientations(t)) == 1
    l235 = parse_pd(L_SERIES["L235"])
    assert len(enumerate_orientations(l235)) == 16


def test_orientation_validation():
    t = parse_pd(TREFOIL_PD)
    o = enumerate_orientations(t)[0]
    assert o.oriented
    # Mangling one head must fail validation.
    heads = list(o.orientation)
    heads[1] = (0, 0) if heads[1] != (0, 0) else (0, 2)
    with pytest.raises(DiagramError):
        LinkDiagram(o.crossings, o.arc_count, orientation=tuple(heads))


def test_native_orientation_runs_on_l_series():
    for text in L_SERIES.values():
        o = native_orientation(parse_pd(text))
        assert o.oriented


def test_hopf_orientations_flip_signs():
    from threemove.diagrams import crossing_sign

    hopf = parse_pd("PD[X[1,3,2,4],X[4,2,3,1]]")
    o1, o2 = enumerate_orientations(hopf)
    signs1 = [crossing_sign(o1, 0), crossing_sign(o1, 1)]
    signs2 = [crossing_sign(o2, 0), crossing_sign(o2, 1)]
    assert signs1 == [-s for s in signs2]
