"""Conversion of oriented diagrams to braid words (Vogel's algorithm).

Smoothing every crossing of an oriented diagram in the orientation-respecting
way yields the Seifert circles.  The diagram is a closed-braid form exactly
when every face of the circle arrangement is coherent: no face may carry two
arcs of distinct circles inducing the same orientation on its boundary.  Each
incoherent face admits a Vogel move, a Reidemeister 2 push of one witness arc
over the other, which strictly simplifies the arrangement; once every face is
coherent the circles form a single nested chain and the braid word can be
read off combinatorially: strand i is the i-th circle of the chain, every
crossing joins adjacent circles, and a radial seam through the annuli cuts
each circle's cyclic crossing order into the braid's time order.

Faces of the arrangement are computed from the diagram's faces by merging,
at every crossing, the two corner regions that the smoothing opens into each
other.  All steps are deterministic (first incoherent face in a fixed face
enumeration, lexicographically least witness arcs), so a diagram always
yields the same word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braids import BraidWord
from .diagrams import (
    DiagramError,
    Half,
    LinkDiagram,
    arc_ends,
    crossing_sign,
    faces,
    in_slots,
    mate,
)


class BraidingError(RuntimeError):
    """The move bound was exhausted before reaching a braid form."""


# ---------------------------------------------------------------------------
# Seifert structure of an oriented diagram


@dataclass
class SeifertStructure:
    circle_of_arc: dict[int, int]          # arc -> circle id (min arc on it)
    circles: dict[int, list[int]]          # circle id -> arcs in cyclic order
    arr_face_of: list[int]                 # diagram face index -> arrangement face id
    arr_faces: dict[int, list[int]]        # arrangement face id -> diagram faces
    flags: dict[int, dict[int, int]]       # arr face -> {circle: +1 (with) / -1}
    diagram_faces: list[tuple[Half, ...]]


def _strand_continuation(d: LinkDiagram, ci: int, slot: int) -> int:
    """Outgoing slot of the Seifert strand entering crossing ci at ``slot``."""
    su, so = in_slots(d, ci)
    if slot == su:
        return (so + 2) % 4
    if slot == so:
        return (su + 2) % 4
    raise ValueError(f"slot {slot} is not incoming at crossing {ci}")


def seifert_structure(d: LinkDiagram) -> SeifertStructure:
    if d.orientation is None:
        raise DiagramError("Seifert structure requires an oriented diagram")
    ends = arc_ends(d)

    # Trace the circles arc by arc, following the orientation.
    circle_of_arc: dict[int, int] = {}
    circles: dict[int, list[int]] = {}
    for a0 in range(1, d.arc_count + 1):
        if a0 in circle_of_arc:
            continue
        cycle = []
        a = a0
        while a not in circle_of_arc:
            circle_of_arc[a] = a0  # provisional id, fixed below
            cycle.append(a)
            ci, s = d.orientation[a]
            out = _strand_continuation(d, ci, s)
            a = d.crossings[ci][out]
        cid = min(cycle)
        for b in cycle:
            circle_of_arc[b] = cid
        k = cycle.index(cid)
        circles[cid] = cycle[k:] + cycle[:k]

    dfaces = faces(d)
    face_of_half: dict[Half, int] = {}
    for fi, f in enumerate(dfaces):
        for h in f:
            face_of_half[h] = fi

    def face_of_corner(ci: int, k: int) -> int:
        # Corner between slots k and k+1 belongs to the face whose orbit
        # contains the half-edge (ci, k+1).
        return face_of_half[(ci, (k + 1) % 4)]

    # Merge the two corners the smoothing opens into each other.
    parent = list(range(len(dfaces)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ci in range(len(d.crossings)):
        su, so = in_slots(d, ci)
        hugged = set()
        for sin in (su, so):
            sout = _strand_continuation(d, ci, sin)
            corner = sin if (sin + 1) % 4 == sout else sout
            hugged.add(corner)
        merged = [k for k in range(4) if k not in hugged]
        fa = find(face_of_corner(ci, merged[0]))
        fb = find(face_of_corner(ci, merged[1]))
        if fa != fb:
            parent[max(fa, fb)] = min(fa, fb)

    arr_face_of = [find(fi) for fi in range(len(dfaces))]
    arr_faces: dict[int, list[int]] = {}
    for fi, af in enumerate(arr_face_of):
        arr_faces.setdefault(af, []).append(fi)

    # Orientation flag of each circle on each arrangement face.
    flags: dict[int, dict[int, int]] = {af: {} for af in arr_faces}
    for fi, f in enumerate(dfaces):
        af = arr_face_of[fi]
        for h in f:
            ci, s = h
            arc = d.crossings[ci][s]
            with_arc = d.orientation[arc] == mate(d, h, ends)
            flag = 1 if with_arc else -1
            prev = flags[af].setdefault(circle_of_arc[arc], flag)
            if prev != flag:
                raise AssertionError(
                    "inconsistent circle orientation on an arrangement face"
                )
    return SeifertStructure(circle_of_arc, circles, arr_face_of, arr_faces,
                            flags, dfaces)


# ---------------------------------------------------------------------------
# Vogel moves


def _incoherent_witnesses(d: LinkDiagram, st: SeifertStructure):
    """First incoherent diagram face with its two witness arcs, or None.

    A face is incoherent when its boundary carries arcs of two distinct
    Seifert circles inducing the same orientation along the face; such arcs
    border one face of the actual diagram, so pushing one over the other is a
    planar Reidemeister 2.  Returns (arc1, arc2, flag).
    """
    ends = arc_ends(d)
    for f in st.diagram_faces:
        sides: dict[int, list[tuple[int, int]]] = {}  # flag -> (arc, circle)
        for h in f:
            ci, s = h
            arc = d.crossings[ci][s]
            flag = 1 if d.orientation[arc] == mate(d, h, ends) else -1
            sides.setdefault(flag, []).append((arc, st.circle_of_arc[arc]))
        for flag in (1, -1):
            occurrences = sorted(sides.get(flag, ()))
            for i, (a1, c1) in enumerate(occurrences):
                for a2, c2 in occurrences[i + 1:]:
                    if c1 != c2:
                        return a1, a2, flag
    return None


def _vogel_move(d: LinkDiagram, arc1: int, arc2: int, flag: int) -> LinkDiagram:
    """Reidemeister 2 push of arc1 over arc2 across their shared face.

    The two arcs are anti-parallel across the face; the push splits arc1 into
    p, q, r and arc2 into t, u, v (in orientation order) and inserts crossings
    X and Y whose slot tables depend only on which side of arc1 the face lies,
    i.e. on the shared orientation flag.
    """
    n = d.arc_count
    p, q, r = arc1, n + 1, n + 2
    t, u, v = arc2, n + 3, n + 4
    heads = list(d.orientation)
    heads.extend([None] * 4)
    old_head1 = heads[arc1]
    old_head2 = heads[arc2]

    # Face orbits keep the face on the right of the walking direction, so
    # flag +1 (arc traversed with its orientation) puts the face on the arc's
    # right-hand side; the finger leaves and lands accordingly.
    xi = len(d.crossings)
    yi = xi + 1
    if flag == 1:
        x_cross = (u, p, v, q)
        y_cross = (t, r, u, q)
        heads[p] = (xi, 1)
        heads[q] = (yi, 3)
        heads[u] = (xi, 0)
        heads[t] = (yi, 0)
    else:
        x_cross = (u, q, v, p)
        y_cross = (t, q, u, r)
        heads[p] = (xi, 3)
        heads[q] = (yi, 1)
        heads[u] = (xi, 0)
        heads[t] = (yi, 0)
    heads[r] = old_head1
    heads[v] = old_head2

    # Rewire the original head attachments: the tail halves keep labels p, t.
    crossings = [list(cr) for cr in d.crossings]
    hc1, hs1 = old_head1
    crossings[hc1][hs1] = r
    hc2, hs2 = old_head2
    crossings[hc2][hs2] = v
    crossings.append(list(x_cross))
    crossings.append(list(y_cross))
    return LinkDiagram(tuple(tuple(cr) for cr in crossings), n + 4,
                       d.unknotted_extras, orientation=tuple(heads))


# ---------------------------------------------------------------------------
# reading the braid word off a coherent diagram


def _chain_order(st: SeifertStructure) -> list[int]:
    """Circles ordered along the nesting chain of arrangement faces."""
    circles = sorted(st.circles)
    if len(circles) == 1:
        return circles
    # Arrangement faces with their incident circles form a path.
    incidence = {af: sorted(fl) for af, fl in st.flags.items()}
    for af, cs in incidence.items():
        if len(cs) > 2:
            raise AssertionError("incoherent arrangement survived (face with >2 circles)")
    ends = [af for af, cs in incidence.items() if len(cs) == 1]
    if len(ends) != 2:
        raise AssertionError(f"arrangement faces do not form a chain ({len(ends)} ends)")
    # Start from the end whose circle carries the smallest arc.
    start = min(ends, key=lambda af: incidence[af][0])
    order = []
    prev_face = None
    face = start
    while True:
        cs = [c for c in incidence[face] if not order or c != order[-1]]
        if not cs:
            break
        circle = cs[0]
        order.append(circle)
        nxt = [af for af, fl in st.flags.items() if circle in fl and af != face]
        if not nxt:
            break
        face = nxt[0]
    if len(order) != len(circles):
        raise AssertionError("chain walk missed circles (diagram disconnected?)")
    return order


def _circle_crossing_sequence(d: LinkDiagram, st: SeifertStructure,
                              circle: int, start_arc: int) -> list[int]:
    """Crossings met walking the circle from start_arc along the orientation."""
    seq = []
    arcs = st.circles[circle]
    k = arcs.index(start_arc)
    ordered = arcs[k:] + arcs[:k]
    for a in ordered:
        ci, _s = d.orientation[a]
        seq.append(ci)
    return seq


def _read_braid(d: LinkDiagram, st: SeifertStructure) -> BraidWord:
    chain = _chain_order(st)
    n = len(chain)
    strand = {c: i + 1 for i, c in enumerate(chain)}
    if not d.crossings:
        return BraidWord(max(n, 1) + d.unknotted_extras)

    ends = arc_ends(d)
    face_of_half: dict[Half, int] = {}
    for fi, f in enumerate(st.diagram_faces):
        for h in f:
            face_of_half[h] = fi

    def side_faces(arc: int) -> tuple[int, int]:
        h1, h2 = ends[arc]
        return face_of_half[h1], face_of_half[h2]

    # Radial seam: one arc per circle, consecutive seam arcs sharing a
    # diagram face of the annulus between their circles.
    seam: dict[int, int] = {}
    outer_face_arr = next(
        af for af, fl in st.flags.items()
        if len(fl) == 1 and chain[0] in fl
    )
    seam[chain[0]] = min(st.circles[chain[0]])
    current_arc = seam[chain[0]]
    for i in range(1, n):
        f1, f2 = side_faces(current_arc)
        inner = f1 if st.arr_face_of[f1] != outer_face_arr else f2
        nxt_arc = None
        for h in st.diagram_faces[inner]:
            ci, s = h
            arc = d.crossings[ci][s]
            if st.circle_of_arc[arc] == chain[i]:
                nxt_arc = arc
                break
        if nxt_arc is None:
            raise AssertionError("seam walk found no arc of the next circle")
        seam[chain[i]] = nxt_arc
        # Next step leaves the annulus just traversed behind.
        outer_face_arr = st.arr_face_of[inner]
        current_arc = nxt_arc

    sequences = {
        c: _circle_crossing_sequence(d, st, c, seam[c]) for c in chain
    }

    # Annulus index and sign per crossing; check adjacency in the chain.
    letter_of: dict[int, int] = {}
    for ci, cr in enumerate(d.crossings):
        su, so = in_slots(d, ci)
        c_a = st.circle_of_arc[cr[su]]
        c_b = st.circle_of_arc[cr[so]]
        ia, ib = strand[c_a], strand[c_b]
        if abs(ia - ib) != 1:
            raise AssertionError("crossing joins non-adjacent circles")
        letter_of[ci] = min(ia, ib) * crossing_sign(d, ci)

    # Topological sort of the crossing times along the cut circles.
    succ: dict[int, list[int]] = {ci: [] for ci in range(len(d.crossings))}
    indeg = {ci: 0 for ci in range(len(d.crossings))}
    for c in chain:
        seq = sequences[c]
        for a, b in zip(seq, seq[1:]):
            succ[a].append(b)
            indeg[b] += 1
    pos_key = {}
    for c in chain:
        for k, ci in enumerate(sequences[c]):
            key = (strand[c], k)
            if ci not in pos_key or key < pos_key[ci]:
                pos_key[ci] = key
    import heapq

    ready = [(pos_key[ci], ci) for ci in indeg if indeg[ci] == 0]
    heapq.heapify(ready)
    letters = []
    while ready:
        _, ci = heapq.heappop(ready)
        letters.append(letter_of[ci])
        for nb in succ[ci]:
            indeg[nb] -= 1
            if indeg[nb] == 0:
                heapq.heappush(ready, (pos_key[nb], nb))
    if len(letters) != len(d.crossings):
        raise AssertionError("crossing time order contains a cycle")
    return BraidWord(n + d.unknotted_extras, tuple(letters))


# ---------------------------------------------------------------------------
# driver


def _connected_parts(d: LinkDiagram) -> list[list[int]]:
    """Connected components of the crossing graph (shared arcs as edges)."""
    ends = arc_ends(d)
    adj: dict[int, set[int]] = {ci: set() for ci in range(len(d.crossings))}
    for a, ((c1, _s1), (c2, _s2)) in ends.items():
        if c1 != c2:
            adj[c1].add(c2)
            adj[c2].add(c1)
    seen = set()
    parts = []
    for start in range(len(d.crossings)):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        parts.append(sorted(comp))
    return parts


def _sub_diagram(d: LinkDiagram, crossing_ids: list[int]) -> LinkDiagram:
    arc_map: dict[int, int] = {}
    crossings = []
    heads: list[Half | None] = [None]
    for new_ci, ci in enumerate(crossing_ids):
        row = []
        for s in range(4):
            a = d.crossings[ci][s]
            if a not in arc_map:
                arc_map[a] = len(arc_map) + 1
                heads.append(None)
            row.append(arc_map[a])
        crossings.append(tuple(row))
    index_of = {ci: k for k, ci in enumerate(crossing_ids)}
    for a, na in arc_map.items():
        ci, s = d.orientation[a]
        heads[na] = (index_of[ci], s)
    return LinkDiagram(tuple(crossings), len(arc_map), 0, orientation=tuple(heads))


def vogel_traczyk(d: LinkDiagram, max_moves: int | None = None) -> BraidWord:
    """Braid word whose closure is ambient-isotopic to the oriented diagram.

    Split diagrams are braided part by part and composed side by side;
    zero-crossing components become idle strands.  When the input's Seifert
    circles are already coherently nested no Vogel move fires and the letter
    count equals the crossing count.
    """
    if d.orientation is None:
        raise DiagramError("vogel_traczyk requires an oriented diagram")
    parts = _connected_parts(d)
    if len(parts) > 1 or d.unknotted_extras:
        words = [vogel_traczyk(_sub_diagram(d, part), max_moves) for part in parts]
        index = sum(w.index for w in words) + d.unknotted_extras
        letters: list[int] = []
        shift = 0
        for w in words:
            letters.extend(x + shift if x > 0 else x - shift for x in w.letters)
            shift += w.index
        return BraidWord(max(index, 1), tuple(letters))
    if not d.crossings:
        return BraidWord(1)

    if max_moves is None:
        max_moves = 4 * (len(d.crossings) + d.arc_count) ** 2 + 16
    current = d
    for _ in range(max_moves + 1):
        st = seifert_structure(current)
        found = _incoherent_witnesses(current, st)
        if found is None:
            return _read_braid(current, st)
        current = _vogel_move(current, *found)
    raise BraidingError(f"no braid form within {max_moves} Vogel moves")
