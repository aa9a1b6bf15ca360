"""Diagram rewriting: Reidemeister moves, 3-moves, and exclusion searches.

Moves are generated from the face structure: monogons give R1 removals,
two-sided faces give R2 removals (same strand over at both crossings) or mark
clasps, three-sided faces with one side fully over and one fully under give R3
slides, and stacked clasp pairs are twist regions where three identical
half-twists can be removed (or inserted, for the reduction driver).

Every surgery rebuilds a validated diagram; searches deduplicate by canonical
signature, so a diagram, its mirror and its reflection occupy one search node.
Additions (R1+, R2+, twist insertion) act on arc sides of a common face, which
keeps every patch planar.  Pushes of an arc across itself are not generated;
the searches only ever use reachable bigons as exclusion evidence, so a
sparser move set errs on the safe side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import (
    LinkDiagram,
    arc_ends,
    faces,
    mate,
    signature,
)

R1_UP = "R1+"
R1_DOWN = "R1-"
R2_UP = "R2+"
R2_DOWN = "R2-"
R3 = "R3"
THREE_ADD = "THREE_ADD"
THREE_REMOVE = "THREE_REMOVE"

ALL_KINDS = frozenset({R1_UP, R1_DOWN, R2_UP, R2_DOWN, R3, THREE_ADD, THREE_REMOVE})
REIDEMEISTER = frozenset({R1_UP, R1_DOWN, R2_UP, R2_DOWN, R3})


class SearchLimitExceeded(RuntimeError):
    """A search ran out of its node budget (inconclusive)."""


@dataclass(frozen=True)
class MoveSite:
    kind: str
    location: tuple

    def __str__(self):
        loc = ",".join(str(x) for x in self.location)
        return f"{self.kind}@{loc}"


@dataclass(frozen=True)
class SearchLimits:
    max_extra_crossings: int = 2
    max_nodes: int = 100_000
    max_depth: int | None = None

    def __post_init__(self):
        if self.max_extra_crossings < 0 or self.max_nodes <= 0:
            raise ValueError("bounds must be positive where required")


# ---------------------------------------------------------------------------
# rebuilding helper


def _finalize(rows: list, extras: int, joins=()) -> LinkDiagram:
    """Assemble a diagram from crossing rows, splicing joined label pairs.

    A join closing a cycle of labels is a strand that lost all its crossings:
    it becomes a zero-crossing circle counted in ``unknotted_extras``.
    Labels are renumbered in order of appearance.
    """
    limit = 0
    for cr in rows:
        limit = max(limit, max(cr))
    for x, y in joins:
        limit = max(limit, x, y)
    parent = list(range(limit + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    loops = 0
    for x, y in joins:
        rx, ry = find(x), find(y)
        if rx == ry:
            loops += 1
        else:
            parent[max(rx, ry)] = min(rx, ry)
    renumber: dict[int, int] = {}
    out = []
    for cr in rows:
        row = []
        for a in cr:
            r = find(a)
            if r not in renumber:
                renumber[r] = len(renumber) + 1
            row.append(renumber[r])
        out.append(tuple(row))
    return LinkDiagram(tuple(out), len(renumber), extras + loops)


def _fresh_labels(d: LinkDiagram, count: int) -> list[int]:
    return list(range(d.arc_count + 1, d.arc_count + count + 1))


def has_reducing_face(d: LinkDiagram) -> bool:
    """True when the diagram has a one- or two-sided face.

    Any such face certifies reducibility: monogons and coherent bigons drop
    crossings by Reidemeister moves, clasp bigons by a 3-move.
    """
    return any(len(f) <= 2 for f in faces(d))


# ---------------------------------------------------------------------------
# move families


def _r1_down_sites(d: LinkDiagram, face_list):
    out = []
    for f in face_list:
        if len(f) != 1:
            continue
        ci, s = f[0]
        y = d.crossings[ci][(s + 1) % 4]
        z = d.crossings[ci][(s + 2) % 4]
        rows = [d.crossings[k] for k in range(len(d.crossings)) if k != ci]
        out.append((MoveSite(R1_DOWN, (ci,)),
                    _finalize(rows, d.unknotted_extras, [(y, z)])))
    return out


def _r1_up_sites(d: LinkDiagram):
    out = []
    ends = arc_ends(d)
    for a in range(1, d.arc_count + 1):
        loop_label, tail = _fresh_labels(d, 2)
        hc, hs = ends[a][1]
        for lp in range(4):
            cross = [0, 0, 0, 0]
            cross[lp] = loop_label
            cross[(lp + 1) % 4] = loop_label
            cross[(lp + 2) % 4] = a
            cross[(lp + 3) % 4] = tail
            rows = [list(cr) for cr in d.crossings]
            rows[hc][hs] = tail
            rows.append(cross)
            out.append((MoveSite(R1_UP, (a, lp)),
                        _finalize(rows, d.unknotted_extras)))
    if d.unknotted_extras:
        loop_label, other = _fresh_labels(d, 2)
        for lp in range(2):
            cross = [0, 0, 0, 0]
            cross[lp] = loop_label
            cross[(lp + 1) % 4] = loop_label
            cross[(lp + 2) % 4] = other
            cross[(lp + 3) % 4] = other
            rows = [list(cr) for cr in d.crossings] + [cross]
            out.append((MoveSite(R1_UP, (0, lp)),
                        _finalize(rows, d.unknotted_extras - 1)))
    return out


def _r2_down_sites(d: LinkDiagram, face_list):
    out = []
    for f in face_list:
        if len(f) != 2:
            continue
        (c1, s1), (c2, s2) = f
        if c1 == c2:
            continue  # doubled kink, not an R2 pair
        if (s1 % 2) != ((s2 - 1) % 4) % 2:
            continue  # clasp: the strands alternate
        rows = [d.crossings[k] for k in range(len(d.crossings))
                if k not in (c1, c2)]
        joins = [
            (d.crossings[c1][(s1 + 2) % 4], d.crossings[c2][(s2 + 1) % 4]),
            (d.crossings[c1][(s1 + 1) % 4], d.crossings[c2][(s2 + 2) % 4]),
        ]
        out.append((MoveSite(R2_DOWN, (c1, c2)),
                    _finalize(rows, d.unknotted_extras, joins)))
    return out


def _face_pair_sites(d: LinkDiagram, face_list):
    """Pairs of distinct-arc sides of one face, with their travel targets."""
    ends = arc_ends(d)
    for fi, f in enumerate(face_list):
        for i in range(len(f)):
            xi = f[i]
            x = d.crossings[xi[0]][xi[1]]
            for j in range(i + 1, len(f)):
                yj = f[j]
                y = d.crossings[yj[0]][yj[1]]
                if x == y:
                    continue
                yield fi, i, j, x, y, mate(d, xi, ends), mate(d, yj, ends)


def _r2_up_sites(d: LinkDiagram, face_list):
    out = []
    for fi, i, j, x, y, hx, hy in _face_pair_sites(d, face_list):
        q, r, u, v = _fresh_labels(d, 4)
        p, t = x, y
        for over_first, xc, yc in (
            (1, (u, p, v, q), (t, r, u, q)),
            (0, (p, v, q, u), (r, u, q, t)),
        ):
            rows = [list(cr) for cr in d.crossings]
            rows[hx[0]][hx[1]] = r
            rows[hy[0]][hy[1]] = v
            rows.extend([list(xc), list(yc)])
            out.append((MoveSite(R2_UP, (fi, i, j, over_first)),
                        _finalize(rows, d.unknotted_extras)))
    return out


def _r3_sites(d: LinkDiagram, face_list):
    out = []
    ends = arc_ends(d)
    for f in face_list:
        if len(f) != 3:
            continue
        if len({h[0] for h in f}) != 3:
            continue
        sides = []
        movable = False
        for h in f:
            arc = d.crossings[h[0]][h[1]]
            e1, e2 = ends[arc]
            if (e1[1] % 2) == (e2[1] % 2):
                movable = True
            sides.append((arc, e1, e2))
        if not movable:
            continue  # cyclic over/under pattern admits no slide
        rows = [list(cr) for cr in d.crossings]
        for arc, e1, e2 in sides:
            o1 = d.crossings[e1[0]][(e1[1] + 2) % 4]
            o2 = d.crossings[e2[0]][(e2[1] + 2) % 4]
            # The triangle side trades places with its strand's outer arcs.
            rows[e1[0]][e1[1]] = o2
            rows[e2[0]][e2[1]] = o1
            rows[e1[0]][(e1[1] + 2) % 4] = arc
            rows[e2[0]][(e2[1] + 2) % 4] = arc
        nd = LinkDiagram(tuple(tuple(r) for r in rows), d.arc_count,
                         d.unknotted_extras)
        out.append((MoveSite(R3, tuple(sorted(h[0] for h in f))), nd))
    return out


def _clasp_faces(d: LinkDiagram, face_list):
    clasps = []
    for f in face_list:
        if len(f) != 2:
            continue
        (c1, s1), (c2, s2) = f
        if c1 == c2:
            continue
        if (s1 % 2) != ((s2 - 1) % 4) % 2:
            clasps.append(f)
    return clasps


def _trace_exit_slot(d: LinkDiagram, ends, start, target, outer_slots):
    """Follow a strand from an entry half-edge until it exits ``target``.

    Returns the exit slot at ``target`` (which must be one of its outer
    slots) or None when the strand leaves the expected twist region.
    """
    ci, s = start
    for _ in range(8):
        exit_slot = (s + 2) % 4
        if ci == target and exit_slot in outer_slots:
            return exit_slot
        ci, s = mate(d, (ci, exit_slot), ends)
    return None


def _three_remove_sites(d: LinkDiagram, face_list):
    out = []
    ends = arc_ends(d)
    clasps = _clasp_faces(d, face_list)
    oriented_clasps = []
    for f in clasps:
        h1, h2 = f
        oriented_clasps.append((h1, h2))
        oriented_clasps.append((h2, h1))
    seen = set()
    for end_a, mid_a in oriented_clasps:
        for mid_b, end_b in oriented_clasps:
            if mid_a[0] != mid_b[0]:
                continue
            if end_a[0] == end_b[0] or end_a[0] == mid_a[0]:
                continue
            slots_a = {(mid_a[1] - 1) % 4, mid_a[1]}
            slots_b = {(mid_b[1] - 1) % 4, mid_b[1]}
            if slots_a & slots_b:
                continue
            c1, cm, c3 = end_a[0], mid_a[0], end_b[0]
            key = tuple(sorted((c1, cm, c3)))
            if key in seen:
                continue
            outs1 = [(end_a[1] + 1) % 4, (end_a[1] + 2) % 4]
            outs3 = [(end_b[1] + 1) % 4, (end_b[1] + 2) % 4]
            exit_slot = _trace_exit_slot(d, ends, (c1, outs1[0]), c3, set(outs3))
            if exit_slot is None:
                continue
            seen.add(key)
            other_slot = outs3[0] if outs3[1] == exit_slot else outs3[1]
            l_a = d.crossings[c1][outs1[0]]
            l_b = d.crossings[c1][outs1[1]]
            q_trace = d.crossings[c3][exit_slot]
            q_other = d.crossings[c3][other_slot]
            rows = [d.crossings[k] for k in range(len(d.crossings))
                    if k not in (c1, cm, c3)]
            # Removing three half-twists joins each end with the one its
            # strand would NOT reach through the twist (the twist swaps sides).
            joins = [(l_a, q_other), (l_b, q_trace)]
            out.append((MoveSite(THREE_REMOVE, (c1, cm, c3)),
                        _finalize(rows, d.unknotted_extras, joins)))
    return out


def _three_add_sites(d: LinkDiagram, face_list):
    out = []
    for fi, i, j, x, y, hx, hy in _face_pair_sites(d, face_list):
        x1, x2, y1, y2, y3, y4 = _fresh_labels(d, 6)
        # Three half-twists between two face arcs reconnect the strands: the
        # strand entering at x's tail leaves at y's tail slot, and the strand
        # from y's old head runs to x's old head.  Both run parallel through
        # the twist box; tuples are its three crossings, easternmost first.
        base = [
            (y1, x1, y2, x),
            (x1, y3, x2, y2),
            (y3, y, y4, x2),
        ]
        flipped = [cr[1:] + cr[:1] for cr in base]
        for chirality, tuples in ((0, base), (1, flipped)):
            rows = [list(cr) for cr in d.crossings]
            rows[hx[0]][hx[1]] = y4
            rows[hy[0]][hy[1]] = y1
            rows.extend([list(cr) for cr in tuples])
            out.append((MoveSite(THREE_ADD, (fi, i, j, chirality)),
                        _finalize(rows, d.unknotted_extras)))
    return out


def enumerate_moves(d: LinkDiagram, kinds=ALL_KINDS):
    """All applicable move sites of the requested kinds with their results."""
    kinds = frozenset(kinds)
    unknown = kinds - ALL_KINDS
    if unknown:
        raise ValueError(f"unknown move kinds {sorted(unknown)}")
    face_list = faces(d)
    out = []
    if R1_DOWN in kinds:
        out.extend(_r1_down_sites(d, face_list))
    if R2_DOWN in kinds:
        out.extend(_r2_down_sites(d, face_list))
    if THREE_REMOVE in kinds:
        out.extend(_three_remove_sites(d, face_list))
    if R3 in kinds:
        out.extend(_r3_sites(d, face_list))
    if R1_UP in kinds:
        out.extend(_r1_up_sites(d))
    if R2_UP in kinds:
        out.extend(_r2_up_sites(d, face_list))
    if THREE_ADD in kinds:
        out.extend(_three_add_sites(d, face_list))
    return out


# ---------------------------------------------------------------------------
# searches


@dataclass
class SearchStats:
    expanded: int = 0
    enqueued: int = 1


def _bfs(start: LinkDiagram, kinds, accept, crossing_bound,
         limits: SearchLimits):
    """Signature-deduplicated BFS.

    Returns (witness, final_diagram, stats); witness is None when the
    reachable space is exhausted without an accepted diagram.  Raises
    :class:`SearchLimitExceeded` on budget exhaustion.
    """
    stats = SearchStats()
    start_sig = signature(start)
    parents: dict[str, tuple[str, MoveSite] | None] = {start_sig: None}
    if accept(start):
        return [], start, stats
    frontier = [(start, start_sig)]
    depth = 0
    while frontier:
        if limits.max_depth is not None and depth >= limits.max_depth:
            break
        nxt = []
        for diag, sig in frontier:
            stats.expanded += 1
            if stats.expanded > limits.max_nodes:
                raise SearchLimitExceeded(
                    f"node limit {limits.max_nodes} exceeded")
            for site, nd in enumerate_moves(diag, kinds):
                if crossing_bound is not None and nd.crossing_count > crossing_bound:
                    continue
                nsig = signature(nd)
                if nsig in parents:
                    continue
                parents[nsig] = (sig, site)
                stats.enqueued += 1
                if accept(nd):
                    witness = []
                    cur = nsig
                    while parents[cur] is not None:
                        prev, st = parents[cur]
                        witness.append(st)
                        cur = prev
                    witness.reverse()
                    return witness, nd, stats
                nxt.append((nd, nsig))
        frontier = nxt
        depth += 1
    return None, start, stats


def r3_bigon_search(d: LinkDiagram, limits: SearchLimits = SearchLimits()):
    """Search the R3-orbit of d for a diagram with a reducing face.

    The orbit is finite (R3 keeps the crossing count), so this either returns
    a move witness (possibly empty) or None after exhausting the orbit; the
    node budget turns runaway orbits into :class:`SearchLimitExceeded`.
    """
    witness, _nd, _stats = _bfs(d, frozenset({R3}), has_reducing_face, None,
                                limits)
    return witness


def full_reduction_search(d: LinkDiagram, limits: SearchLimits = SearchLimits()):
    """Search all Reidemeister moves within a crossing budget for a reduction.

    Succeeds on any reachable diagram with the original crossing count and a
    reducing face, or outright fewer crossings.
    """
    c = d.crossing_count
    bound = c + limits.max_extra_crossings

    def accept(nd: LinkDiagram) -> bool:
        return nd.crossing_count < c or (
            nd.crossing_count == c and has_reducing_face(nd))

    witness, _nd, _stats = _bfs(d, REIDEMEISTER, accept, bound, limits)
    return witness


@dataclass(frozen=True)
class ReductionOutcome:
    status: str  # "trivial" | "stuck" | "limit"
    diagram: LinkDiagram
    components: int | None = None
    moves: tuple[MoveSite, ...] = ()


def three_move_reduce(d: LinkDiagram,
                      limits: SearchLimits = SearchLimits()) -> ReductionOutcome:
    """Greedily reduce with Reidemeister moves and 3-moves.

    Repeated breadth-first rounds (twist insertion allowed, crossing budget
    from the limits) each hunt for any strictly smaller diagram.  Reports the
    trivial link with its component count at zero crossings, the stuck minimal
    representative when a round exhausts, or a limit outcome.
    """
    from .diagrams import components as diagram_components

    current = d.unoriented() if d.oriented else d
    trail: list[MoveSite] = []
    nodes_left = limits.max_nodes
    while current.crossing_count > 0:
        c = current.crossing_count
        bound = c + limits.max_extra_crossings
        inner = SearchLimits(limits.max_extra_crossings, max(nodes_left, 1),
                             limits.max_depth)
        try:
            witness, smaller, stats = _bfs(
                current, ALL_KINDS,
                lambda nd: nd.crossing_count < c, bound, inner)
        except SearchLimitExceeded:
            return ReductionOutcome("limit", current, None, tuple(trail))
        nodes_left -= stats.expanded
        if witness is None:
            return ReductionOutcome("stuck", current, None, tuple(trail))
        trail.extend(witness)
        current = smaller
        if nodes_left <= 0 and current.crossing_count > 0:
            return ReductionOutcome("limit", current, None, tuple(trail))
    _parts, k = diagram_components(current)
    return ReductionOutcome("trivial", current, k, tuple(trail))


def format_witness(moves) -> str:
    """Witness serialization: `<kind>@<location>` per move."""
    return " ".join(str(m) for m in moves)
