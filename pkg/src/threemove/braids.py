"""Braid words, closures, Seifert circles and braid-level 3-moves.

Letters are nonzero signed integers: letter ``i > 0`` is the generator on
strand positions (i, i+1) whose crossing is positively signed under the braid
orientation (all strands running the same way), and ``-i`` its inverse.  With
this convention the closure of ``n=2  1 1 1`` is the right-handed trefoil.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import Half, LinkDiagram, enumerate_orientations, in_slots


class BraidError(ValueError):
    """Raised for malformed braid words."""


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on ``index`` strands."""

    index: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.index < 1:
            raise BraidError("braid index must be >= 1")
        for x in self.letters:
            if x == 0 or abs(x) >= self.index:
                raise BraidError(f"letter {x} invalid for index {self.index}")

    def __len__(self) -> int:
        return len(self.letters)

    def exponent_sum(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)


def parse_braid(text: str) -> BraidWord:
    """Parse ``n=<index> <letters...>`` (whitespace separated)."""
    tokens = text.split()
    if not tokens or not tokens[0].startswith("n="):
        raise BraidError("braid text must start with n=<index>")
    try:
        index = int(tokens[0][2:])
    except ValueError as exc:
        raise BraidError(f"bad index in {tokens[0]!r}") from exc
    try:
        letters = tuple(int(t) for t in tokens[1:])
    except ValueError as exc:
        raise BraidError("letters must be integers") from exc
    return BraidWord(index, letters)


def format_braid(w: BraidWord) -> str:
    return " ".join([f"n={w.index}"] + [str(x) for x in w.letters])


def braid_mirror(w: BraidWord) -> BraidWord:
    """Negate every letter (the closure of the mirror word is the mirror link)."""
    return BraidWord(w.index, tuple(-x for x in w.letters))


def braid_inverse(w: BraidWord) -> BraidWord:
    return BraidWord(w.index, tuple(-x for x in reversed(w.letters)))


def braid_concat(u: BraidWord, v: BraidWord) -> BraidWord:
    if u.index != v.index:
        raise BraidError("cannot concatenate words of different index")
    return BraidWord(u.index, u.letters + v.letters)


def braid_permutation(w: BraidWord) -> tuple[int, ...]:
    """Image of the word in the symmetric group.

    Returns ``perm`` with ``perm[p-1]`` the final position of the strand that
    starts at position ``p`` (1-based positions).
    """
    pos = list(range(w.index + 1))  # pos[p] = current position of strand p
    where = list(range(w.index + 1))  # where[q] = strand currently at position q
    for x in w.letters:
        i = abs(x)
        a, b = where[i], where[i + 1]
        where[i], where[i + 1] = b, a
        pos[a], pos[b] = i + 1, i
    return tuple(pos[1:])


def permutation_cycles(perm: tuple[int, ...]) -> int:
    """Number of cycles of a permutation given as a 1-based image tuple."""
    n = len(perm)
    seen = [False] * (n + 1)
    count = 0
    for p in range(1, n + 1):
        if seen[p]:
            continue
        count += 1
        q = p
        while not seen[q]:
            seen[q] = True
            q = perm[q - 1]
    return count


def braid_closure(w: BraidWord) -> LinkDiagram:
    """Standard closure of a braid word as an oriented PD diagram.

    The crossing count equals the letter count; strands carrying no letters
    close into zero-crossing circles and are counted in ``unknotted_extras``.
    The diagram carries the braid orientation.
    """
    n = w.index
    if not w.letters:
        return LinkDiagram((), 0, unknotted_extras=n, orientation=(None,))

    # Temporary arc ids: the top arcs of the n positions, then two fresh arcs
    # per letter.  The closure then identifies each bottom arc with the top
    # arc of the same position.
    top = list(range(1, n + 1))
    cur = list(top)
    next_arc = n + 1
    raw_crossings: list[tuple[int, int, int, int]] = []
    raw_heads: dict[int, Half] = {}
    for x in w.letters:
        i = abs(x)
        u, v = cur[i - 1], cur[i]  # incoming left / right arcs
        nw_out, ne_out = next_arc, next_arc + 1  # outgoing left / right arcs
        next_arc += 2
        ci = len(raw_crossings)
        if x > 0:
            # under-strand NW->SE, over-strand NE->SW; slots CCW from under-in.
            raw_crossings.append((u, nw_out, ne_out, v))
            raw_heads[u] = (ci, 0)
            raw_heads[v] = (ci, 3)
        else:
            raw_crossings.append((v, u, nw_out, ne_out))
            raw_heads[v] = (ci, 0)
            raw_heads[u] = (ci, 1)
        cur[i - 1], cur[i] = nw_out, ne_out

    # Close up: bottom arc of each position is the same arc as its top arc.
    parent = list(range(next_arc))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in range(n):
        ra, rb = find(top[p]), find(cur[p])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    used: list[int] = []
    seen = set()
    extras = 0
    for p in range(n):
        if cur[p] == top[p]:  # no letter ever touched this position
            extras += 1
    for cr in raw_crossings:
        for a in cr:
            r = find(a)
            if r not in seen:
                seen.add(r)
                used.append(r)
    renumber = {r: k + 1 for k, r in enumerate(sorted(used))}
    crossings = tuple(
        tuple(renumber[find(a)] for a in cr) for cr in raw_crossings
    )
    heads: list[Half | None] = [None] * (len(used) + 1)
    for a, half in raw_heads.items():
        heads[renumber[find(a)]] = half
    return LinkDiagram(crossings, len(used), unknotted_extras=extras,
                       orientation=tuple(heads))


# ---------------------------------------------------------------------------
# Seifert circles


def seifert_circles(d: LinkDiagram) -> int:
    """Number of circles after the orientation-respecting smoothing."""
    if d.orientation is None:
        raise ValueError("seifert_circles requires an oriented diagram")
    parent = list(range(d.arc_count + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for ci, cr in enumerate(d.crossings):
        su, so = in_slots(d, ci)
        union(cr[su], cr[(so + 2) % 4])
        union(cr[so], cr[(su + 2) % 4])
    circles = len({find(a) for a in range(1, d.arc_count + 1)})
    return circles + d.unknotted_extras


def min_seifert_over_orientations(d: LinkDiagram) -> int:
    """Minimum Seifert-circle count over all orientations of ``d``."""
    return min(seifert_circles(o) for o in enumerate_orientations(d))


# ---------------------------------------------------------------------------
# braid-level 3-move


def braid_three_move(w: BraidWord, position: int, direction: int) -> BraidWord:
    """Change the twist region at ``position`` by three half-twists.

    The maximal run of identical letters through ``position`` with signed
    exponent e is replaced by the run with exponent e + direction, where
    ``direction`` is +3 or -3 (so a single positive letter becomes a double
    negative one, and three equal letters can vanish entirely).
    """
    if direction not in (3, -3):
        raise ValueError("direction must be +3 or -3")
    if not 0 <= position < len(w.letters):
        raise IndexError("position outside the word")
    letter = w.letters[position]
    lo = position
    while lo > 0 and w.letters[lo - 1] == letter:
        lo -= 1
    hi = position
    while hi + 1 < len(w.letters) and w.letters[hi + 1] == letter:
        hi += 1
    run = hi - lo + 1
    e = run if letter > 0 else -run
    new_e = e + direction
    gen = abs(letter)
    replacement = tuple([gen if new_e > 0 else -gen] * abs(new_e))
    return BraidWord(w.index, w.letters[:lo] + replacement + w.letters[hi + 1:])


def free_reduce(w: BraidWord) -> BraidWord:
    """Cancel adjacent inverse pairs (used by tests on 3-move round-trips)."""
    out: list[int] = []
    for x in w.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return BraidWord(w.index, tuple(out))


CHEN_WORD = BraidWord(5, (2, -1, 2, 3, -4) * 4)
"""Closure is the 20-crossing five-braid counterexample link."""
