"""Core groups of diagrams and third-Burnside-group certificates over GF(3).

The free exponent-3 group on r generators is nilpotent of class <= 3 and has
order 3^(r + C(r,2) + C(r,3)).  Its elements have a unique normal form

    g_1^a_1 ... g_r^a_r  *  prod_{i<j} [g_i,g_j]^b_ij  *
    prod_{i<j<k} [[g_i,g_j],g_k]^c_ijk

with exponents in GF(3): weight-2 commutators commute with each other, weight-3
commutators are central, triple commutators are fully antisymmetric and vanish
on a repeated entry (the 2-Engel law of exponent-3 groups).  Multiplication is
done by collecting the right factor's generator letters one at a time; moving
a letter g_k left past the tail g_{k+1}^a_{k+1} ... g_r^a_r contributes
-a_m to b_km and -a_m a_m' to c_kmm', and past the weight-2 section
contributes [u_pq, g_k]^b_pq to the centre.  These are the only corrections
(repeated-entry commutators vanish), and the exhaustive cross-check against an
independent coset-enumeration model at r = 2, 3 pins them.

A link diagram D yields its core group: one generator per over-arc, one
relation b a^-1 b c^-1 per crossing (b the over-arc, a and c the under-arcs).
The certificate computed here is the exponent e with |quotient| = 3^e of the
reduced core group by all cubes, obtained by a graded normal-closure
computation inside the free exponent-3 group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .diagrams import LinkDiagram

MAX_REDUCED_GENERATORS = 24


# ---------------------------------------------------------------------------
# the relatively free exponent-3 class-3 group


class E3Space:
    """Index bookkeeping and collection tables for fixed generator count r.

    The flat coordinate vector of an element is [deg1 | deg2 | deg3]:
    deg1[i] for generators (0-based), deg2 at pair_index(i,j) for i<j in
    lexicographic order, deg3 at triple_index(i,j,k) likewise.
    """

    def __init__(self, r: int):
        self.r = r
        self.dim1 = r
        self.dim2 = comb(r, 2)
        self.dim3 = comb(r, 3)
        self.dim = self.dim1 + self.dim2 + self.dim3

        self._pair_index = {}
        idx = 0
        for i in range(r):
            for j in range(i + 1, r):
                self._pair_index[(i, j)] = idx
                idx += 1
        self._triple_index = {}
        idx = 0
        for i in range(r):
            for j in range(i + 1, r):
                for k in range(j + 1, r):
                    self._triple_index[(i, j, k)] = idx
                    idx += 1

        # Contiguous blocks: pairs (k, m>k) and triples (k, m, m') with m>k.
        self.b_start = [self._pair_index.get((k, k + 1), self.dim2) for k in range(r)]
        self.c_start = [
            self._triple_index.get((k, k + 1, k + 2), self.dim3) for k in range(r)
        ]
        # Upper-triangle index pairs of the suffix following k, in block order.
        self._triu = [np.triu_indices(r - 1 - k, 1) for k in range(r)]

        # Action of moving g_k past the weight-2 section: [u_pq, g_k] resolved
        # into the ascending basis (zero when k in {p, q}).
        self._comm_pairs = []
        self._comm_targets = []
        self._comm_signs = []
        for k in range(r):
            pairs, targets, signs = [], [], []
            for (p, q), pi in self._pair_index.items():
                if k == p or k == q:
                    continue
                if k > q:
                    t, s = (p, q, k), 1
                elif k < p:
                    t, s = (k, p, q), 1
                else:
                    t, s = (p, k, q), -1
                pairs.append(pi)
                targets.append(self._triple_index[t])
                signs.append(s)
            self._comm_pairs.append(np.array(pairs, dtype=np.int64))
            self._comm_targets.append(np.array(targets, dtype=np.int64))
            self._comm_signs.append(np.array(signs, dtype=np.int64))

    def pair_index(self, i: int, j: int) -> int:
        return self._pair_index[(i, j)]

    def triple_index(self, i: int, j: int, k: int) -> int:
        return self._triple_index[(i, j, k)]

    def identity(self) -> "E3":
        return E3(self, np.zeros(self.dim, dtype=np.int64))

    def generator(self, k: int) -> "E3":
        x = self.identity()
        x.vec[k] = 1
        return x

    def from_word(self, word: tuple[int, ...]) -> "E3":
        """Evaluate a word of signed 1-based generator letters."""
        x = self.identity()
        for letter in word:
            k = abs(letter) - 1
            times = 1 if letter > 0 else 2  # g^-1 = g^2
            for _ in range(times):
                _mult_letter(self, x.vec, k)
        return x


@lru_cache(maxsize=None)
def e3_space(r: int) -> E3Space:
    return E3Space(r)


@dataclass
class E3:
    """Element of the free exponent-3 class-3 group in flat normal form."""

    space: E3Space
    vec: np.ndarray  # int64, values 0..2

    def copy(self) -> "E3":
        return E3(self.space, self.vec.copy())

    def is_identity(self) -> bool:
        return not self.vec.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, E3)
            and self.space.r == other.space.r
            and np.array_equal(self.vec, other.vec)
        )

    def key(self) -> bytes:
        return self.vec.astype(np.int8).tobytes()

    @property
    def deg1(self) -> np.ndarray:
        return self.vec[: self.space.dim1]

    @property
    def deg2(self) -> np.ndarray:
        return self.vec[self.space.dim1 : self.space.dim1 + self.space.dim2]

    @property
    def deg3(self) -> np.ndarray:
        return self.vec[self.space.dim1 + self.space.dim2 :]


def _mult_letter(sp: E3Space, vec: np.ndarray, k: int) -> None:
    """In place: vec <- normal form of vec * g_k."""
    r = sp.r
    d1, d2 = sp.dim1, sp.dim2
    a = vec[:d1]
    b = vec[d1 : d1 + d2]
    c = vec[d1 + d2 :]
    # g_k passes the weight-2 section: central corrections [u_pq, g_k]^b_pq.
    pairs = sp._comm_pairs[k]
    if pairs.size:
        c[sp._comm_targets[k]] += sp._comm_signs[k] * b[pairs]
    # g_k passes generator blocks g_m^a_m with m > k.
    suf = a[k + 1 :]
    if suf.size:
        b[sp.b_start[k] : sp.b_start[k] + (r - 1 - k)] -= suf
        iu, ju = sp._triu[k]
        if iu.size:
            width = comb(r - 1 - k, 2)
            c[sp.c_start[k] : sp.c_start[k] + width] -= suf[iu] * suf[ju]
    a[k] += 1
    vec %= 3


def e3_multiply(x: E3, y: E3) -> E3:
    """Collected product in the free exponent-3 class-3 group."""
    if x.space.r != y.space.r:
        raise ValueError("elements live in groups of different rank")
    sp = x.space
    z = x.copy()
    ya = y.deg1
    for k in range(sp.r):
        for _ in range(int(ya[k])):
            _mult_letter(sp, z.vec, k)
    z.vec[sp.dim1 :] += y.vec[sp.dim1 :]
    z.vec %= 3
    return z


def e3_inverse(x: E3) -> E3:
    """x^-1 = x^2 (exponent 3)."""
    return e3_multiply(x, x)


def e3_commutator(x: E3, y: E3) -> E3:
    return e3_multiply(e3_multiply(e3_inverse(x), e3_inverse(y)),
                       e3_multiply(x, y))


def e3_enumerate(r: int) -> int:
    """Number of distinct elements reachable from the generators (test aid)."""
    sp = e3_space(r)
    gens = [sp.generator(k) for k in range(r)]
    seen = {sp.identity().key()}
    frontier = [sp.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = e3_multiply(x, g)
                kb = y.key()
                if kb not in seen:
                    seen.add(kb)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


# ---------------------------------------------------------------------------
# graded normal closure


class GradedSubspace:
    """Echelonized layers of a normal subgroup of the exponent-3 group.

    Weight-1 leading elements are kept as full group elements (their tails
    matter when reducing); everything inside the derived part is an honest
    GF(3) vector space spanned by rows over the (deg2 | deg3) coordinates.
    """

    def __init__(self, space: E3Space):
        self.space = space
        self.deg1_basis: dict[int, E3] = {}  # pivot generator index -> element
        ncols = space.dim2 + space.dim3
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self._ncols = ncols

    def dims(self) -> tuple[int, int, int]:
        d2 = sum(1 for p in self.pivots if p < self.space.dim2)
        d3 = len(self.pivots) - d2
        return len(self.deg1_basis), d2, d3

    def total_dim(self) -> int:
        return len(self.deg1_basis) + len(self.pivots)

    # -- internal --

    def _reduce_row(self, row: np.ndarray) -> np.ndarray:
        for piv, basis_row in zip(self.pivots, self.rows):
            v = row[piv]
            if v:
                row = (row - v * basis_row) % 3
        return row

    def _insert_row(self, row: np.ndarray) -> list[np.ndarray]:
        """Echelon-insert; returns centre rows newly spanned (for closure)."""
        row = self._reduce_row(row % 3)
        if not row.any():
            return []
        piv = int(np.nonzero(row)[0][0])
        if row[piv] == 2:
            row = (2 * row) % 3
        # Keep pivot lists sorted for deterministic reduction.
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.pivots.insert(pos, piv)
        self.rows.insert(pos, row)
        new = [row]
        sp = self.space
        if piv < sp.dim2:
            # Normality: commutators of this coset with every generator are
            # linear images of the deg2 part.
            b = row[: sp.dim2]
            for k in range(sp.r):
                pairs = sp._comm_pairs[k]
                if not pairs.size:
                    continue
                img = np.zeros(self._ncols, dtype=np.int64)
                img[sp.dim2 + sp._comm_targets[k]] = (sp._comm_signs[k] * b[pairs]) % 3
                if img.any():
                    new.extend(self._insert_row(img))
        return new


def normal_closure(space: E3Space, relator_images: list[E3]) -> GradedSubspace:
    """Smallest normal subgroup containing the given elements.

    Closure under conjugation is achieved by adding, for every basis element,
    its commutators with all ambient generators ([x, g] for weight-1 leading
    x as group elements; the induced linear maps for derived-part rows).
    """
    sub = GradedSubspace(space)
    gens = [space.generator(k) for k in range(space.r)]
    work = [x.copy() for x in relator_images]
    while work:
        x = work.pop()
        # Reduce the weight-1 part with group divisions.
        for piv in sorted(sub.deg1_basis):
            v = int(x.deg1[piv])
            if v:
                e = sub.deg1_basis[piv]
                x = e3_multiply(x, e3_inverse(e) if v == 1 else e)
        if x.deg1.any():
            piv = int(np.nonzero(x.deg1)[0][0])
            if x.deg1[piv] == 2:
                x = e3_multiply(x, x)
            sub.deg1_basis[piv] = x
            for g in gens:
                work.append(e3_commutator(x, g))
        else:
            sub._insert_row(x.vec[space.dim1 :].copy())
    return sub


# ---------------------------------------------------------------------------
# core groups of diagrams


@dataclass(frozen=True)
class CoreGroupPresentation:
    """Arc-generated presentation with one relation per crossing.

    ``arc_classes[g]`` lists the PD labels forming over-arc generator ``g``
    (empty tuple for a zero-crossing component); ``relators`` are words of
    signed 1-based generator indices.  In the reduced form the over-arc
    containing the lowest PD label is set to the identity and dropped, and
    ``killed_class`` records its labels.
    """

    generator_count: int
    relators: tuple[tuple[int, ...], ...]
    arc_classes: tuple[tuple[int, ...], ...]
    reduced: bool
    killed_class: tuple[int, ...] | None = None


def _over_arc_classes(d: LinkDiagram) -> tuple[list[tuple[int, ...]], dict[int, int]]:
    """Merge PD labels along over-strands; returns (classes, label -> class)."""
    parent = list(range(d.arc_count + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cr in d.crossings:
        ra, rb = find(cr[1]), find(cr[3])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for a in range(1, d.arc_count + 1):
        groups.setdefault(find(a), []).append(a)
    classes = [tuple(sorted(g)) for g in sorted(groups.values(), key=min)]
    label_to_class = {}
    for gi, cls in enumerate(classes):
        for a in cls:
            label_to_class[a] = gi
    return classes, label_to_class


def core_presentation(d: LinkDiagram, reduced: bool = True) -> CoreGroupPresentation:
    """Presentation of the core group of the diagram.

    Generators are the over-arcs of D (plus one free generator per
    zero-crossing component); each crossing contributes the relator
    b a^-1 b c^-1 with b the over-arc and a, c the under-arcs.
    """
    classes, label_to_class = _over_arc_classes(d)
    classes = list(classes) + [()] * d.unknotted_extras
    killed = None
    if reduced and classes:
        killed = classes.pop(0)  # class containing the lowest label

    def gen_of(label: int) -> int | None:
        gi = label_to_class[label]
        if killed is not None:
            if gi == 0:
                return None
            return gi - 1
        return gi

    relators = []
    for cr in d.crossings:
        b = gen_of(cr[1])
        a = gen_of(cr[0])
        c = gen_of(cr[2])
        word = []
        for g, sign in ((b, 1), (a, -1), (b, 1), (c, -1)):
            if g is not None:
                word.append(sign * (g + 1))
        relators.append(tuple(word))
    return CoreGroupPresentation(
        generator_count=len(classes),
        relators=tuple(relators),
        arc_classes=tuple(classes),
        reduced=bool(reduced and killed is not None),
        killed_class=killed,
    )


def fox_coloring_dim(d: LinkDiagram) -> int:
    """GF(3) dimension of the Fox 3-coloring space (unreduced).

    Solves 2b - a - c = 0 over the over-arcs; the number of 3-colorings of the
    diagram is 3^dim.  Invariant under Reidemeister moves and 3-moves.
    """
    classes, label_to_class = _over_arc_classes(d)
    nvars = len(classes) + d.unknotted_extras
    if not d.crossings:
        return nvars
    rows = np.zeros((len(d.crossings), nvars), dtype=np.int64)
    for ri, cr in enumerate(d.crossings):
        rows[ri, label_to_class[cr[1]]] += 2
        rows[ri, label_to_class[cr[0]]] -= 1
        rows[ri, label_to_class[cr[2]]] -= 1
    rows %= 3
    rank = _gf3_rank(rows)
    return nvars - rank


def _gf3_rank(m: np.ndarray) -> int:
    m = m.copy() % 3
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        piv = None
        for rr in range(rank, rows):
            if m[rr, col]:
                piv = rr
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        if m[rank, col] == 2:
            m[rank] = (2 * m[rank]) % 3
        for rr in range(rows):
            if rr != rank and m[rr, col]:
                m[rr] = (m[rr] - m[rr, col] * m[rank]) % 3
        rank += 1
        if rank == rows:
            break
    return rank


def closed_form_exponent(r: int) -> int:
    """log_3 of |free exponent-3 group on r generators|."""
    return r + comb(r, 2) + comb(r, 3)


@dataclass(frozen=True)
class BurnsideCertificate:
    exponent: int
    layer_dims: tuple[int, int, int]
    generator_count: int

    def matches_trivial_link(self) -> bool:
        """Whether 3^exponent equals the order for some trivial link."""
        r = 0
        while closed_form_exponent(r) <= self.exponent:
            if closed_form_exponent(r) == self.exponent:
                return True
            r += 1
        return False


def burnside3_order(d: LinkDiagram) -> BurnsideCertificate:
    """Exponent e with |third Burnside group of d| = 3^e.

    Works in the free exponent-3 group on the reduced arc generators: the
    quotient order is 3^(full dimension - dim of the normal closure of the
    crossing relators).  Limited to 24 reduced generators (the weight-3 layer
    grows as C(r,3)).
    """
    pres = core_presentation(d, reduced=True)
    r = pres.generator_count
    if r > MAX_REDUCED_GENERATORS:
        raise ValueError(
            f"diagram needs {r} reduced generators "
            f"(limit {MAX_REDUCED_GENERATORS})"
        )
    sp = e3_space(r)
    images = [sp.from_word(w) for w in pres.relators if w]
    sub = normal_closure(sp, images)
    d1, d2, d3 = sub.dims()
    e = sp.dim - (d1 + d2 + d3)
    quotient_dims = (sp.dim1 - d1, sp.dim2 - d2, sp.dim3 - d3)
    return BurnsideCertificate(e, quotient_dims, r)
