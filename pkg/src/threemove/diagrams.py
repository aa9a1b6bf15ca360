"""Link diagrams as combinatorial objects built on PD codes.

A diagram is a list of crossings, each holding four arc labels in
counterclockwise order around the crossing.  Slots 0 and 2 carry the
under-strand (the strand entering at slot 0 in the source PD text), slots 1
and 3 the over-strand.  Labels are the edges of the underlying 4-valent plane
graph: every label appears exactly twice over all slots.  Closed components
with no crossings cannot be written in PD and are carried as an explicit
counter (``unknotted_extras``).

The slot convention matches the Mathematica PD codes this package consumes:
``X[a,b,c,d]`` lists the arcs counterclockwise starting from the incoming
under-strand.  Everything downstream (signs, smoothings, signatures) is pinned
to that reading by the golden tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

Half = tuple[int, int]  # (crossing index, slot 0..3)

_PD_RE = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


class DiagramError(ValueError):
    """Raised for malformed PD text or invalid diagram data."""


@dataclass(frozen=True)
class LinkDiagram:
    """An unoriented (or oriented) link diagram over numbered arcs.

    ``crossings[i]`` is the 4-tuple of arc labels at crossing ``i`` in
    counterclockwise order, under-strand on slots 0/2.  ``orientation``, when
    present, maps each arc label to the half-edge ``(crossing, slot)`` that the
    arc points into; index 0 of the tuple is unused padding.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    arc_count: int
    unknotted_extras: int = 0
    orientation: tuple[Half | None, ...] | None = None

    def __post_init__(self):
        validate(self)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def oriented(self) -> bool:
        return self.orientation is not None

    def unoriented(self) -> "LinkDiagram":
        if self.orientation is None:
            return self
        return LinkDiagram(self.crossings, self.arc_count, self.unknotted_extras)


def validate(d: LinkDiagram) -> None:
    """Check the PD invariants; raise :class:`DiagramError` on violation.

    Every label in ``1..arc_count`` must occur exactly twice across all slots
    (an arc may enter the same crossing twice; such degenerate kink arcs arise
    mid-search and are legal).
    """
    if d.arc_count < 0 or d.unknotted_extras < 0:
        raise DiagramError("negative counts")
    if d.arc_count == 0 and d.crossings:
        raise DiagramError("crossings without arcs")
    seen = [0] * (d.arc_count + 1)
    for cr in d.crossings:
        if len(cr) != 4:
            raise DiagramError(f"crossing {cr!r} does not have 4 slots")
        for a in cr:
            if not 1 <= a <= d.arc_count:
                raise DiagramError(f"arc label {a} outside 1..{d.arc_count}")
            seen[a] += 1
    for a in range(1, d.arc_count + 1):
        if seen[a] != 2:
            raise DiagramError(f"arc {a} appears {seen[a]} times (expected 2)")
    if d.orientation is not None:
        if len(d.orientation) != d.arc_count + 1:
            raise DiagramError("orientation table has wrong length")
        ends = arc_ends(d)
        for a in range(1, d.arc_count + 1):
            head = d.orientation[a]
            if head not in ends[a]:
                raise DiagramError(f"orientation head of arc {a} is not an end of it")
        for ci, cr in enumerate(d.crossings):
            for pair in ((0, 2), (1, 3)):
                inflow = sum(1 for s in pair if _is_head(d, cr[s], (ci, s)))
                if inflow != 1:
                    raise DiagramError(
                        f"crossing {ci}: strand {pair} has {inflow} incoming ends"
                    )


def _is_head(d: LinkDiagram, arc: int, half: Half) -> bool:
    head = d.orientation[arc]
    if head != half:
        return False
    # A degenerate arc can occupy both slots of a strand at one crossing; the
    # stored head singles out exactly one of its two ends.
    return True


def arc_ends(d: LinkDiagram) -> dict[int, tuple[Half, ...]]:
    """Map each arc label to its two half-edge occurrences, in scan order."""
    ends: dict[int, list[Half]] = {a: [] for a in range(1, d.arc_count + 1)}
    for ci, cr in enumerate(d.crossings):
        for s, a in enumerate(cr):
            ends[a].append((ci, s))
    return {a: tuple(v) for a, v in ends.items()}


def mate(d: LinkDiagram, half: Half, ends: dict[int, tuple[Half, ...]] | None = None) -> Half:
    """The other end of the arc incident at ``half``."""
    if ends is None:
        ends = arc_ends(d)
    ci, s = half
    arc = d.crossings[ci][s]
    e0, e1 = ends[arc]
    return e1 if half == e0 else e0


def parse_pd(text: str) -> LinkDiagram:
    """Parse a Mathematica-style ``PD[X[a,b,c,d], ...]`` expression.

    Whitespace and line breaks are arbitrary.  Labels must cover ``1..max``
    with no gaps and each label must appear exactly twice.
    """
    stripped = text.strip()
    if not stripped:
        raise DiagramError("empty PD text")
    body = re.sub(r"\s+", "", stripped)
    m = re.fullmatch(r"PD\[(.*)\]", body)
    if not m:
        raise DiagramError("PD text must be of the form PD[X[...],...]")
    inner = m.group(1)
    crossings = []
    pos = 0
    for xm in _PD_RE.finditer(inner):
        head = inner[pos:xm.start()]
        expected = "" if not crossings else ","
        if head != expected:
            raise DiagramError(f"unexpected text {head!r} in PD expression")
        crossings.append(tuple(int(g) for g in xm.groups()))
        pos = xm.end()
    if inner[pos:] not in ("",):
        raise DiagramError(f"unexpected trailing text {inner[pos:]!r} in PD expression")
    if not crossings:
        raise DiagramError("PD expression lists no crossings")
    labels = {a for cr in crossings for a in cr}
    if 0 in labels:
        raise DiagramError("arc label 0 is not allowed")
    arc_count = max(labels)
    if labels != set(range(1, arc_count + 1)):
        missing = sorted(set(range(1, arc_count + 1)) - labels)
        raise DiagramError(f"gaps in arc labels: missing {missing}")
    return LinkDiagram(tuple(crossings), arc_count)


def format_pd(d: LinkDiagram) -> str:
    """Inverse of :func:`parse_pd` (ignores orientation and extras)."""
    if not d.crossings:
        raise DiagramError("0-crossing diagrams have no PD form")
    return "PD[" + ",".join(f"X[{a},{b},{c},{e}]" for a, b, c, e in d.crossings) + "]"


def diagram_line(d: LinkDiagram) -> str:
    """One-line external format ``<signature> <pd-text>``."""
    pd = format_pd(d) if d.crossings else "PD[]"
    return f"{signature(d)} {pd}"


# ---------------------------------------------------------------------------
# components and orientations


def components(d: LinkDiagram) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Partition arcs into closed-curve components.

    Returns ``(parts, count)`` where ``parts`` groups arc labels by component
    (each part sorted, parts ordered by smallest arc) and ``count`` includes
    the zero-crossing extras.
    """
    parent = list(range(d.arc_count + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for cr in d.crossings:
        union(cr[0], cr[2])
        union(cr[1], cr[3])
    groups: dict[int, list[int]] = {}
    for a in range(1, d.arc_count + 1):
        groups.setdefault(find(a), []).append(a)
    parts = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=min))
    return parts, len(parts) + d.unknotted_extras


def _orient_component(d: LinkDiagram, ends, start_arc: int) -> dict[int, Half]:
    """Walk one component assigning a head end to each of its arcs."""
    heads: dict[int, Half] = {}
    arc = start_arc
    head = min(ends[arc])
    while arc not in heads:
        heads[arc] = head
        ci, s = head
        out_slot = (s + 2) % 4
        arc = d.crossings[ci][out_slot]
        e0, e1 = ends[arc]
        # The continuing arc leaves at (ci, out_slot); its head is the other end.
        head = e1 if (ci, out_slot) == e0 else e0
    return heads


def enumerate_orientations(d: LinkDiagram) -> list[LinkDiagram]:
    """All orientations of ``d`` up to global reversal.

    The component containing the smallest arc keeps a fixed direction; each
    further crossing-bearing component is reversed according to the bits of an
    ascending mask, so the output order is deterministic (mask 0 first).
    Zero-crossing extras carry no orientation data.
    """
    parts, _ = components(d)
    ends = arc_ends(d)
    if not parts:
        return [LinkDiagram(d.crossings, d.arc_count, d.unknotted_extras,
                            orientation=(None,))]
    base = [_orient_component(d, ends, p[0]) for p in parts]
    out = []
    for mask in range(1 << (len(parts) - 1)):
        heads: list[Half | None] = [None] * (d.arc_count + 1)
        for i, comp_heads in enumerate(base):
            flip = i > 0 and (mask >> (i - 1)) & 1
            for arc, head in comp_heads.items():
                if flip:
                    e0, e1 = ends[arc]
                    head_in = e1 if head == e0 else e0
                else:
                    head_in = head
                heads[arc] = head_in
        out.append(LinkDiagram(d.crossings, d.arc_count, d.unknotted_extras,
                               orientation=tuple(heads)))
    return out


def native_orientation(d: LinkDiagram) -> LinkDiagram:
    """Orientation implied by sequential arc numbering.

    Mathematica-style PD codes number arcs consecutively along each component;
    directing every arc toward its successor label (wrapping at the component
    maximum) recovers the orientation the code was written with.  Raises
    :class:`DiagramError` when the numbering does not define one.
    """
    parts, _ = components(d)
    ends = arc_ends(d)
    heads: list[Half | None] = [None] * (d.arc_count + 1)
    for part in parts:
        labels = set(part)
        lo = min(part)
        for a in part:
            succ = a + 1 if a + 1 in labels else lo
            cands = [
                (ci, s)
                for (ci, s) in ends[a]
                if d.crossings[ci][(s + 2) % 4] == succ
            ]
            if len(cands) != 1:
                raise DiagramError(
                    f"arc numbering does not orient arc {a} uniquely"
                )
            heads[a] = cands[0]
    return LinkDiagram(d.crossings, d.arc_count, d.unknotted_extras,
                       orientation=tuple(heads))


def in_slots(d: LinkDiagram, ci: int) -> tuple[int, int]:
    """(under_in_slot, over_in_slot) of crossing ``ci`` in an oriented diagram."""
    if d.orientation is None:
        raise DiagramError("diagram is not oriented")
    cr = d.crossings[ci]
    su = so = -1
    for s in (0, 2):
        if d.orientation[cr[s]] == (ci, s):
            su = s
    for s in (1, 3):
        if d.orientation[cr[s]] == (ci, s):
            so = s
    if su < 0 or so < 0:
        raise DiagramError(f"crossing {ci} lacks incoming strands")
    return su, so


def crossing_sign(d: LinkDiagram, ci: int) -> int:
    """Sign of an oriented crossing: +1 when the over-strand enters one slot
    clockwise of the under-strand's entry (right-handed frame)."""
    su, so = in_slots(d, ci)
    return 1 if so == (su + 3) % 4 else -1


# ---------------------------------------------------------------------------
# mirror / reflect


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Swap over- and under-strands at every crossing (an involution)."""
    rotated = tuple((b, c, e, a) for a, b, c, e in d.crossings)
    orientation = None
    if d.orientation is not None:
        remap = [None] * (d.arc_count + 1)
        for a in range(1, d.arc_count + 1):
            ci, s = d.orientation[a]
            remap[a] = (ci, (s - 1) % 4)
        orientation = tuple(remap)
    return LinkDiagram(rotated, d.arc_count, d.unknotted_extras, orientation)


def reflect(d: LinkDiagram) -> LinkDiagram:
    """Reverse the plane embedding (rotation orders), keeping over/under."""
    flipped = tuple((a, e, c, b) for a, b, c, e in d.crossings)
    orientation = None
    if d.orientation is not None:
        sw = {0: 0, 1: 3, 2: 2, 3: 1}
        remap = [None] * (d.arc_count + 1)
        for a in range(1, d.arc_count + 1):
            ci, s = d.orientation[a]
            remap[a] = (ci, sw[s])
        orientation = tuple(remap)
    return LinkDiagram(flipped, d.arc_count, d.unknotted_extras, orientation)


# ---------------------------------------------------------------------------
# faces


def faces(d: LinkDiagram) -> list[tuple[Half, ...]]:
    """Faces of the diagram on the sphere, from the rotation system.

    Each face is the orbit of ``h -> rot(mate(h))`` and is returned as the
    tuple of half-edges visited; the face of length k has k arc sides.  The
    list is ordered by each face's minimal half-edge.
    """
    ends = arc_ends(d)
    seen = set()
    out = []
    for ci in range(len(d.crossings)):
        for s in range(4):
            h = (ci, s)
            if h in seen:
                continue
            orbit = []
            cur = h
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                mc, ms = mate(d, cur, ends)
                cur = (mc, (ms + 1) % 4)
            out.append(tuple(orbit))
    out.sort(key=lambda f: min(f))
    return out


# ---------------------------------------------------------------------------
# canonical signature


def _encode_from(crossings, mates, start: int, phase: int) -> bytes:
    """Canonical byte encoding of one rooted traversal.

    Crossings are numbered in discovery order, arcs on first sight; each
    discovered crossing carries a phase in {0, 2} chosen so that the half-edge
    it was entered through normalizes to slot 0 or 1 (phases of 0/2 preserve
    which strand is the under-strand).
    """
    n = len(crossings)
    order = [-1] * n            # crossing -> discovery index
    phases = [0] * n
    disc = [start]
    order[start] = 0
    phases[start] = phase
    arc_num: dict[int, int] = {}
    out = bytearray()
    i = 0
    while i < len(disc):
        ci = disc[i]
        p = phases[ci]
        cr = crossings[ci]
        for k in range(4):
            s = (p + k) % 4
            arc = cr[s]
            num = arc_num.get(arc)
            if num is None:
                num = len(arc_num) + 1
                arc_num[arc] = num
            out.append(num)
            mc, ms = mates[(ci, s)]
            if order[mc] < 0:
                order[mc] = len(disc)
                phases[mc] = 0 if ms in (0, 1) else 2
                disc.append(mc)
        i += 1
    return bytes(out)


def _mates_table(crossings) -> dict[Half, Half]:
    where: dict[int, list[Half]] = {}
    for ci, cr in enumerate(crossings):
        for s, a in enumerate(cr):
            where.setdefault(a, []).append((ci, s))
    table = {}
    for pair in where.values():
        h0, h1 = pair
        table[h0] = h1
        table[h1] = h0
    return table


def signature(d: LinkDiagram) -> str:
    """Canonical hex signature, constant on each sphere-isomorphism class.

    Folds in arc/crossing relabeling, the choice of traversal root, the
    reflection of the embedding, and the mirror (over/under swap): a diagram,
    its mirror and its reflection all share one signature.  Chirality-aware
    stages must therefore work with diagrams, never signatures.
    """
    if not d.crossings:
        return f"U{d.unknotted_extras}"
    variants = []
    for dv in (d, mirror(d), reflect(d), reflect(mirror(d))):
        variants.append((dv.crossings, _mates_table(dv.crossings)))
    best: bytes | None = None
    for crossings, mates in variants:
        for start in range(len(crossings)):
            for phase in (0, 2):
                enc = _encode_from(crossings, mates, start, phase)
                if best is None or enc < best:
                    best = enc
    tag = f"x{d.unknotted_extras}" if d.unknotted_extras else ""
    return best.hex() + tag


def relabel(d: LinkDiagram, arc_perm: dict[int, int] | None = None,
            crossing_order: list[int] | None = None) -> LinkDiagram:
    """Rename arcs and/or reorder crossings (signature-preserving)."""
    if arc_perm is None:
        arc_perm = {a: a for a in range(1, d.arc_count + 1)}
    order = crossing_order if crossing_order is not None else list(range(len(d.crossings)))
    crossings = tuple(
        tuple(arc_perm[a] for a in d.crossings[ci]) for ci in order
    )
    return LinkDiagram(crossings, d.arc_count, d.unknotted_extras)
