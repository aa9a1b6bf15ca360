"""Finitely presented groups, coset enumeration and conjugacy testing.

The enumerator is a standard HLT-style Todd-Coxeter: scan every relator at
every live coset, filling gaps with new cosets, processing coincidences with a
union-find merge queue.  Completed tables are compacted to numpy arrays and
can be cached to disk; the regular table (trivial subgroup) of a finite
quotient doubles as a faithful permutation representation on which conjugacy
classes are computed by orbit flooding under generator conjugation.

Words are tuples of signed 1-based generator numbers (3 means the third
generator, -3 its inverse).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

Word = tuple[int, ...]


class EnumerationLimit(RuntimeError):
    """Coset limit exceeded: inconclusive, not a disproof of finiteness."""


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        for rel in self.relators:
            for g in rel:
                if g == 0 or abs(g) > self.generator_count:
                    raise ValueError(f"bad generator {g} in relator {rel}")


def braid_quotient_presentation(n: int) -> Presentation:
    """The quotient of the braid group on n strands by the cube of a generator.

    Generators s_1 .. s_{n-1}; far commutators, adjacent braid relations, and
    s_1^3.  Since all braid generators are conjugate, every s_i^3 dies in the
    quotient; only one cube relator is needed.
    """
    if n < 2:
        raise ValueError("need at least 2 strands")
    rels: list[Word] = []
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append((i, j, -i, -j))
    for i in range(1, n - 1):
        rels.append((i, i + 1, i, -(i + 1), -i, -(i + 1)))
    rels.append((1, 1, 1))
    return Presentation(n - 1, tuple(rels))


def _columns(word: Word) -> tuple[int, ...]:
    return tuple(2 * (abs(g) - 1) + (0 if g > 0 else 1) for g in word)


@dataclass
class CosetTable:
    """Complete coset table: right action of the generators on the cosets.

    ``table[c, 2k]`` is the image of coset c (1-based) under generator k+1,
    ``table[c, 2k+1]`` under its inverse; row 0 is padding.
    """

    generator_count: int
    degree: int
    subgroup_words: tuple[Word, ...]
    table: np.ndarray  # int64 (degree+1, 2*generator_count)

    def apply(self, coset: int, word: Word) -> int:
        c = coset
        for col in _columns(word):
            c = int(self.table[c, col])
        return c

    def word_to_perm(self, word: Word) -> np.ndarray:
        """Action of a word on all cosets (index 0 unused, maps to 0)."""
        perm = np.arange(self.degree + 1, dtype=np.int64)
        for col in _columns(word):
            perm = self.table[perm, col]
            perm[0] = 0
        return perm

    def save(self, path: str | Path) -> None:
        import json

        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        sub = json.dumps([list(w) for w in self.subgroup_words]).encode()
        with open(path, "wb") as fh:
            fh.write(b"COSETTAB1")
            fh.write(struct.pack("<qqq", self.generator_count, self.degree, len(sub)))
            fh.write(sub)
            fh.write(self.table.astype(np.int64).tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "CosetTable":
        import json

        with open(path, "rb") as fh:
            magic = fh.read(9)
            if magic != b"COSETTAB1":
                raise ValueError(f"{path}: not a coset table cache")
            ngens, degree, sublen = struct.unpack("<qqq", fh.read(24))
            sub = json.loads(fh.read(sublen).decode())
            data = np.frombuffer(fh.read(), dtype=np.int64)
        table = data.reshape(degree + 1, 2 * ngens).copy()
        return cls(ngens, degree, tuple(tuple(w) for w in sub), table)


def coset_enumeration(
    pres: Presentation,
    subgroup: tuple[Word, ...] = (),
    max_cosets: int = 2_000_000,
) -> CosetTable:
    """HLT Todd-Coxeter enumeration of the cosets of <subgroup> in the group.

    Completes only when the index is finite and the limit suffices; raises
    :class:`EnumerationLimit` otherwise (inconclusive).
    """
    ncols = 2 * pres.generator_count
    relator_cols = [_columns(w) for w in pres.relators]
    subgroup_cols = [_columns(w) for w in subgroup]

    # Flat table, stride ncols, coset numbers from 1; 0 = undefined.
    tab = [0] * ncols * 2  # row 0 padding + row 1
    rep = [0, 1]
    ndef = 1

    def find(c: int) -> int:
        r = rep[c]
        while rep[r] != r:
            r = rep[r]
        while rep[c] != r:
            rep[c], c = r, rep[c]
        return r

    def define(c: int, col: int) -> int:
        nonlocal ndef
        ndef += 1
        if ndef > max_cosets:
            raise EnumerationLimit(
                f"coset limit {max_cosets} exceeded (index not yet closed)"
            )
        rep.append(ndef)
        tab.extend([0] * ncols)
        tab[c * ncols + col] = ndef
        tab[ndef * ncols + (col ^ 1)] = c
        return ndef

    merge_queue: list[int] = []

    def merge(a: int, b: int) -> None:
        a, b = find(a), find(b)
        if a != b:
            a, b = (a, b) if a < b else (b, a)
            rep[b] = a
            merge_queue.append(b)

    def coincidence(a: int, b: int) -> None:
        merge(a, b)
        while merge_queue:
            dead = merge_queue.pop()
            base = dead * ncols
            for col in range(ncols):
                delta = tab[base + col]
                if not delta:
                    continue
                tab[base + col] = 0
                tab[delta * ncols + (col ^ 1)] = 0
                mu, nu = find(dead), find(delta)
                entry = tab[mu * ncols + col]
                if entry:
                    merge(nu, entry)
                else:
                    back = tab[nu * ncols + (col ^ 1)]
                    if back:
                        merge(mu, back)
                    else:
                        tab[mu * ncols + col] = nu
                        tab[nu * ncols + (col ^ 1)] = mu

    def scan_and_fill(alpha: int, word: tuple[int, ...]) -> None:
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j:
                nxt = tab[f * ncols + word[i]]
                if not nxt:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                nxt = tab[b * ncols + (word[j] ^ 1)]
                if not nxt:
                    break
                b = nxt
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                tab[f * ncols + word[i]] = b
                tab[b * ncols + (word[i] ^ 1)] = f
                return
            define(f, word[i])

    for w in subgroup_cols:
        if w:
            scan_and_fill(1, w)
    alpha = 1
    while alpha <= ndef:
        if find(alpha) == alpha:
            for w in relator_cols:
                scan_and_fill(alpha, w)
                if find(alpha) != alpha:
                    break
            if find(alpha) == alpha:
                base = alpha * ncols
                for col in range(ncols):
                    if not tab[base + col]:
                        define(alpha, col)
        alpha += 1

    # Compact live cosets to 1..degree.
    live = [c for c in range(1, ndef + 1) if find(c) == c]
    number = {c: k + 1 for k, c in enumerate(live)}
    out = np.zeros((len(live) + 1, ncols), dtype=np.int64)
    for c in live:
        base = c * ncols
        row = out[number[c]]
        for col in range(ncols):
            e = tab[base + col]
            if not e:
                raise AssertionError("incomplete table after enumeration")
            row[col] = number[find(e)]
    return CosetTable(pres.generator_count, len(live), tuple(subgroup), out)


# ---------------------------------------------------------------------------
# permutation representations


@dataclass(frozen=True)
class PermutationRep:
    """Generator images acting on 1..degree (arrays have a padding slot 0)."""

    degree: int
    images: tuple[np.ndarray, ...]

    @classmethod
    def from_regular_table(cls, table: CosetTable) -> "PermutationRep":
        imgs = tuple(
            table.table[:, 2 * k].copy() for k in range(table.generator_count)
        )
        return cls(table.degree, imgs)

    def word_image(self, word: Word) -> np.ndarray:
        perm = np.arange(self.degree + 1, dtype=np.int64)
        for g in word:
            img = self.images[abs(g) - 1]
            if g > 0:
                perm = img[perm]
            else:
                inv = np.empty_like(img)
                inv[img] = np.arange(self.degree + 1, dtype=np.int64)
                perm = inv[perm]
            perm[0] = 0
        return perm


def group_order(rep: PermutationRep) -> int:
    """Order of the permutation group by Schreier-Sims (faithful rep assumed).

    Transversals store full permutations, so this is meant for modest degrees
    (hundreds of points); a regular table already exposes its order as the
    degree without any computation.
    """
    gens = [g[1:] - 1 for g in rep.images]  # 0-based images
    n = rep.degree
    order = 1
    base_gens = [np.asarray(g, dtype=np.int64) for g in gens]
    remaining = list(range(n))
    while base_gens and remaining:
        beta = remaining[0]
        # Orbit of beta with transversal words as permutations.
        transversal = {beta: np.arange(n, dtype=np.int64)}
        frontier = [beta]
        while frontier:
            nxt = []
            for p in frontier:
                for g in base_gens:
                    q = int(g[p])
                    if q not in transversal:
                        transversal[q] = g[transversal[p]]
                        nxt.append(q)
            frontier = nxt
        order *= len(transversal)
        # Schreier generators for the stabilizer of beta.
        stab_set = {}
        for p, t in transversal.items():
            for g in base_gens:
                u = g[t]
                rep_perm = transversal[int(g[p])]
                inv = np.empty_like(rep_perm)
                inv[rep_perm] = np.arange(n, dtype=np.int64)
                s = inv[u]
                if int(s[beta]) != beta or not np.array_equal(s, np.arange(n)):
                    if int(s[beta]) == beta:
                        stab_set[s.tobytes()] = s
        base_gens = list(stab_set.values())
        remaining = [p for p in remaining if p != beta]
        if not base_gens:
            break
    return order


# ---------------------------------------------------------------------------
# conjugacy in the regular representation


class RegularConjugation:
    """Conjugation action on group elements realized as cosets.

    In the regular table, coset p stands for the element carrying coset 1 to
    p.  Left multiplication commutes with the right action of the table, so
    the left tables are filled by one breadth-first sweep, after which
    conjugation by a generator g is p -> left[g^-1] then right-multiply by g.
    """

    def __init__(self, table: CosetTable):
        if table.subgroup_words not in ((), tuple()):
            raise ValueError("conjugation needs the regular (trivial-subgroup) table")
        self.table = table
        n = table.degree
        ncols = 2 * table.generator_count
        self.left = np.zeros((ncols, n + 1), dtype=np.int64)
        # Spanning order of cosets by right multiplication from coset 1.
        order = np.zeros(n + 1, dtype=np.int64)
        seen = np.zeros(n + 1, dtype=bool)
        order[0] = 1
        seen[1] = True
        count = 1
        right = table.table
        pos = 0
        while pos < count:
            p = int(order[pos])
            for col in range(ncols):
                q = int(right[p, col])
                if not seen[q]:
                    seen[q] = True
                    order[count] = q
                    count += 1
            pos += 1
        if count != n:
            raise AssertionError("regular table is not transitive from coset 1")
        for col in range(ncols):
            L = self.left[col]
            L[1] = right[1, col]
            for pos in range(n):
                p = int(order[pos])
                lp = L[p]
                for c2 in range(ncols):
                    q = int(right[p, c2])
                    if not L[q]:
                        L[q] = right[lp, c2]
        self._conj: list[np.ndarray] = []
        for k in range(table.generator_count):
            col, icol = 2 * k, 2 * k + 1
            conj = right[self.left[icol], col]
            conj[0] = 0
            self._conj.append(conj)

    def conjugators(self) -> list[np.ndarray]:
        return self._conj

    def element_of(self, word: Word) -> int:
        return self.table.apply(1, word)

    def class_ids(self) -> np.ndarray:
        """Conjugacy class id per element (ids are the minimal member point)."""
        n = self.table.degree
        parent = np.arange(n + 1, dtype=np.int64)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = int(parent[x])
            return x

        for conj in self._conj:
            for p in range(1, n + 1):
                q = int(conj[p])
                rp, rq = find(p), find(q)
                if rp != rq:
                    parent[max(rp, rq)] = min(rp, rq)
        ids = np.fromiter((find(p) for p in range(1, n + 1)), dtype=np.int64,
                          count=n)
        return np.concatenate(([0], ids))


def conjugacy_class_count(table: CosetTable) -> int:
    conj = RegularConjugation(table)
    ids = conj.class_ids()
    return len(set(ids[1:].tolist()))


def conjugacy_classes(table: CosetTable) -> tuple[int, list[Word]]:
    """Class count plus one representative word per class.

    Representatives are the shortest-then-lexicographically-least words
    reaching each class's minimal element in a breadth-first sweep of the
    regular table.
    """
    conj = RegularConjugation(table)
    ids = conj.class_ids()
    reps = sorted(set(ids[1:].tolist()))
    words = _coset_words(table, set(reps))
    return len(reps), [words[p] for p in reps]


def _coset_words(table: CosetTable, wanted: set[int]) -> dict[int, Word]:
    n = table.degree
    ngens = table.generator_count
    words: dict[int, Word] = {1: ()}
    missing = set(wanted) - {1}
    frontier = [1]
    while frontier and missing:
        nxt = []
        for p in frontier:
            w = words[p]
            for g in range(1, ngens + 1):
                for signed, col in ((g, 2 * (g - 1)), (-g, 2 * (g - 1) + 1)):
                    q = int(table.table[p, col])
                    if q not in words:
                        words[q] = w + (signed,)
                        missing.discard(q)
                        nxt.append(q)
        frontier = nxt
    return words


def are_conjugate(table: CosetTable, u: Word, v: Word,
                  conj: RegularConjugation | None = None) -> bool:
    """Whether two words represent conjugate elements of the finite quotient.

    Breadth-first search over the conjugation orbit of u's element with early
    exit on reaching v's element.
    """
    if conj is None:
        conj = RegularConjugation(table)
    pu = conj.element_of(u)
    pv = conj.element_of(v)
    if pu == pv:
        return True
    n = table.degree
    seen = np.zeros(n + 1, dtype=bool)
    seen[pu] = True
    frontier = [pu]
    maps = conj.conjugators()
    inverse_maps = []
    for m in maps:
        inv = np.zeros_like(m)
        inv[m] = np.arange(n + 1, dtype=np.int64)
        inv[0] = 0
        inverse_maps.append(inv)
    while frontier:
        nxt = []
        for p in frontier:
            for m in maps + inverse_maps:
                q = int(m[p])
                if q == pv:
                    return True
                if not seen[q]:
                    seen[q] = True
                    nxt.append(q)
        frontier = nxt
    return False


# ---------------------------------------------------------------------------
# cached quotient tables


def quotient_table(n: int, cache_dir: str | Path | None = None,
                   max_cosets: int = 2_000_000) -> CosetTable:
    """Regular coset table of the braid quotient on n strands, disk-cached."""
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"c{n}_regular.tab"
        if path.exists():
            return CosetTable.load(path)
    table = coset_enumeration(braid_quotient_presentation(n), (), max_cosets)
    if path is not None:
        table.save(path)
    return table
