"""Plane quartic graphs: plantri ingestion, basic-polyhedron checks,
configuration filtering, and decoration into link diagrams.

Graphs arrive from plantri either as binary planar_code or as its ASCII
format (the documented generation command uses ``-a``); both are accepted and
auto-detected.  A graph qualifies as a basic polyhedron when it is 4-regular,
4-edge-connected and 2-vertex-connected; those are the scaffolds on which
links are built by decorating every vertex with a crossing in the two
possible ways.

The configuration catalog is data: each entry carries a source note naming
the figure it was transcribed from, an abstract edge list, and the pipeline
phase it is applied in (before decoration, or after the Seifert filter).  Matching is
by vertex- and edge-injective subgraph isomorphism of abstract multigraphs; a
strict mode additionally demands that the matched edges respect a planar
embedding of the pattern, for auditing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .diagrams import LinkDiagram, signature

PLANAR_CODE_HEADER = b">>planar_code<<"


class PolyhedronError(ValueError):
    """Malformed graph input or catalog data."""


@dataclass(frozen=True)
class PlaneQuarticGraph:
    """4-regular plane multigraph given by its rotation system.

    ``rotation[v]`` lists the 4 edge-ends at vertex v in plane order; an
    edge-end is (edge_id, side).  ``edges[e]`` is the ordered vertex pair of
    edge e.  ``id`` is the ordinal within the source file.
    """

    n: int
    rotation: tuple[tuple[tuple[int, int], ...], ...]
    edges: tuple[tuple[int, int], ...]
    id: int = 0

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        out = []
        for e, side in self.rotation[v]:
            a, b = self.edges[e]
            out.append(b if side == 0 else a)
        return out

    def adjacency(self) -> dict[tuple[int, int], int]:
        """Edge multiplicity per unordered vertex pair."""
        mult: dict[tuple[int, int], int] = {}
        for a, b in self.edges:
            key = (min(a, b), max(a, b))
            mult[key] = mult.get(key, 0) + 1
        return mult

    def face_count(self) -> int:
        nxt = {}
        for v, ends in enumerate(self.rotation):
            for k, end in enumerate(ends):
                nxt[end] = ends[(k + 1) % len(ends)]
        seen = set()
        count = 0
        for v, ends in enumerate(self.rotation):
            for end in ends:
                if end in seen:
                    continue
                count += 1
                cur = end
                while cur not in seen:
                    seen.add(cur)
                    e, side = cur
                    cur = nxt[(e, 1 - side)]
        return count


def _build_graph(neighbor_lists: list[list[int]], ordinal: int) -> PlaneQuarticGraph:
    n = len(neighbor_lists)
    for v, nbrs in enumerate(neighbor_lists):
        if len(nbrs) != 4:
            raise PolyhedronError(
                f"graph {ordinal}: vertex {v} has degree {len(nbrs)}, not 4")
        for u in nbrs:
            if not 0 <= u < n:
                raise PolyhedronError(f"graph {ordinal}: neighbor {u} out of range")
    # Pair up edge ends: the k-th occurrence of u in v's list matches the
    # k-th occurrence of v in u's list (plantri's convention for the simple
    # and doubled-edge graphs it emits; the Euler check below guards it).
    edges: list[tuple[int, int]] = []
    rotation: list[list[tuple[int, int] | None]] = [
        [None] * 4 for _ in range(n)
    ]
    occurrence: dict[tuple[int, int], int] = {}
    pending: dict[tuple[int, int, int], tuple[int, int]] = {}
    for v in range(n):
        for pos, u in enumerate(neighbor_lists[v]):
            k = occurrence.get((v, u), 0)
            occurrence[(v, u)] = k + 1
            if (u, v, k) in pending:
                e, upos = pending.pop((u, v, k))
                rotation[v][pos] = (e, 1)
                continue
            if u == v:
                raise PolyhedronError(f"graph {ordinal}: loop at vertex {v}")
            e = len(edges)
            edges.append((v, u))
            pending[(v, u, k)] = (e, pos)
            rotation[v][pos] = (e, 0)
    for (u, v, k), (e, upos) in list(pending.items()):
        # Second end of edge e sits at v; find v's k-th occurrence of u.
        seen = 0
        for pos, w in enumerate(neighbor_lists[v]):
            if w == u:
                if seen == k and rotation[v][pos] is None:
                    rotation[v][pos] = (e, 1)
                    break
                seen += 1
        else:
            raise PolyhedronError(
                f"graph {ordinal}: unmatched edge end {u}-{v}")
    if any(slot is None for ends in rotation for slot in ends):
        raise PolyhedronError(f"graph {ordinal}: inconsistent rotation data")
    g = PlaneQuarticGraph(
        n,
        tuple(tuple(ends) for ends in rotation),
        tuple(edges),
        ordinal,
    )
    if g.n - g.edge_count + g.face_count() != 2:
        raise PolyhedronError(
            f"graph {ordinal}: rotation system is not spherical")
    return g


def read_planar_code(stream) -> list[PlaneQuarticGraph]:
    """Parse binary planar_code (the ``>>planar_code<<`` format).

    Per graph: one byte N, then for each vertex a zero-terminated byte list
    of neighbors (1-based) in rotation order.  Rejects non-quartic graphs.
    """
    data = stream.read() if hasattr(stream, "read") else bytes(stream)
    if not data.startswith(PLANAR_CODE_HEADER):
        raise PolyhedronError("missing >>planar_code<< header")
    pos = len(PLANAR_CODE_HEADER)
    graphs = []
    while pos < len(data):
        n = data[pos]
        pos += 1
        if n == 0:
            raise PolyhedronError("planar_code with >255 vertices unsupported")
        lists: list[list[int]] = []
        for _v in range(n):
            nbrs = []
            while True:
                if pos >= len(data):
                    raise PolyhedronError("truncated planar_code record")
                byte = data[pos]
                pos += 1
                if byte == 0:
                    break
                nbrs.append(byte - 1)
            lists.append(nbrs)
        graphs.append(_build_graph(lists, len(graphs)))
    return graphs


def read_plantri_ascii(text: str) -> list[PlaneQuarticGraph]:
    """Parse plantri's ASCII output (one graph per line, ``N a,b,...``).

    Neighbor lists are letters (a = vertex 1) in rotation order; this is what
    the documented ``plantri -adq -c2`` command emits.
    """
    graphs = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        m = re.fullmatch(r"(\d+)\s+([a-zA-Z,]+)", line)
        if not m:
            raise PolyhedronError(f"bad plantri ascii line: {line!r}")
        n = int(m.group(1))
        parts = m.group(2).split(",")
        if len(parts) != n:
            raise PolyhedronError(f"expected {n} neighbor lists: {line!r}")
        lists = [[ord(c) - ord("a") for c in part] for part in parts]
        graphs.append(_build_graph(lists, len(graphs)))
    return graphs


def read_graph_file(path: str | Path) -> list[PlaneQuarticGraph]:
    """Auto-detect binary planar_code vs plantri ASCII."""
    raw = Path(path).read_bytes()
    if raw.startswith(PLANAR_CODE_HEADER):
        return read_planar_code(raw)
    return read_plantri_ascii(raw.decode())


# ---------------------------------------------------------------------------
# basic-polyhedron test


def _connected(adj: list[list[int]]) -> bool:
    n = len(adj)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                stack.append(u)
    return all(seen)


def _has_articulation(adj: list[list[int]]) -> bool:
    n = len(adj)
    disc = [-1] * n
    low = [0] * n
    timer = 0
    found = False
    # Iterative DFS lowlink.
    for root in range(n):
        if disc[root] >= 0:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent:
                    parent = -2  # skip one multiedge back to parent only
                    continue
                if disc[u] < 0:
                    disc[u] = low[u] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((u, v, iter(adj[u])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[u])
            if advanced:
                continue
            stack.pop()
            if stack:
                pv = stack[-1][0]
                low[pv] = min(low[pv], low[v])
                if pv != root and low[v] >= disc[pv]:
                    found = True
        if root_children > 1:
            found = True
    return found


def _edge_connectivity_at_least(g: PlaneQuarticGraph, k: int) -> bool:
    """Min cut >= k via unit-capacity max flow from vertex 0 to all others."""
    n = g.n
    arcs: list[list[int]] = [[] for _ in range(n)]  # arc ids per vertex
    heads: list[int] = []
    caps: list[int] = []

    def add(u, v):
        arcs[u].append(len(heads))
        heads.append(v)
        caps.append(1)
        arcs[v].append(len(heads))
        heads.append(u)
        caps.append(1)

    base_caps = None
    for a, b in g.edges:
        add(a, b)
    base_caps = list(caps)
    for t in range(1, n):
        for i in range(len(caps)):
            caps[i] = base_caps[i]
        flow = 0
        while flow < k:
            # BFS augmenting path 0 -> t.
            prev = [-1] * n
            prev_arc = [-1] * n
            prev[0] = 0
            queue = [0]
            while queue:
                nxt = []
                for v in queue:
                    for aid in arcs[v]:
                        if caps[aid] and prev[heads[aid]] < 0:
                            prev[heads[aid]] = v
                            prev_arc[heads[aid]] = aid
                            nxt.append(heads[aid])
                queue = nxt
                if prev[t] >= 0:
                    break
            if prev[t] < 0:
                break
            v = t
            while v != 0:
                aid = prev_arc[v]
                caps[aid] -= 1
                caps[aid ^ 1] += 1
                v = prev[v]
            flow += 1
        if flow < k:
            return False
    return True


def check_basic(g: PlaneQuarticGraph) -> bool:
    """Whether g is a basic polyhedron: 4-edge- and 2-vertex-connected."""
    adj = [g.neighbors(v) for v in range(g.n)]
    if not _connected(adj):
        return False
    if _has_articulation(adj):
        return False
    return _edge_connectivity_at_least(g, 4)


# ---------------------------------------------------------------------------
# configuration catalog


@dataclass(frozen=True)
class ConfigPattern:
    name: str
    vertices: int
    edges: tuple[tuple[int, int], ...]
    source: str
    action: str = "reducible"
    phase: str = "graph"  # "graph" (pre-decoration) or "post_seifert"
    legs: int | None = None

    def __post_init__(self):
        if self.action not in ("reducible", "rotatable", "conditional"):
            raise PolyhedronError(f"bad action {self.action!r}")
        if self.phase not in ("graph", "post_seifert"):
            raise PolyhedronError(f"bad phase {self.phase!r}")
        seen = set()
        for a, b in self.edges:
            if not (0 <= a < self.vertices and 0 <= b < self.vertices) or a == b:
                raise PolyhedronError(
                    f"pattern {self.name}: edge {a}-{b} out of range")
            seen.update((a, b))
        if self.vertices > 1 and not self._connected():
            raise PolyhedronError(f"pattern {self.name}: edge list disconnected")

    def _connected(self) -> bool:
        adj = {v: set() for v in range(self.vertices)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.vertices

    def multiplicity(self) -> dict[tuple[int, int], int]:
        mult: dict[tuple[int, int], int] = {}
        for a, b in self.edges:
            key = (min(a, b), max(a, b))
            mult[key] = mult.get(key, 0) + 1
        return mult


def load_config_catalog(path: str | Path) -> list[ConfigPattern]:
    """Load the pattern catalog: blocks of ``key = value`` lines.

    Required keys: name, source, vertices, edges (space-separated ``a-b``
    pairs, 1-based); optional: action, phase, legs.  Blank lines separate
    blocks; ``#`` starts a comment.
    """
    text = Path(path).read_text()
    blocks: list[dict[str, str]] = []
    current: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            if current:
                blocks.append(current)
                current = {}
            continue
        if "=" not in line:
            raise PolyhedronError(f"malformed catalog line: {line!r}")
        key, val = line.split("=", 1)
        current[key.strip()] = val.strip()
    if current:
        blocks.append(current)
    patterns = []
    for blk in blocks:
        try:
            vertices = int(blk["vertices"])
            edges = []
            for token in blk["edges"].split():
                a, b = token.split("-")
                edges.append((int(a) - 1, int(b) - 1))
            patterns.append(ConfigPattern(
                name=blk["name"],
                vertices=vertices,
                edges=tuple(edges),
                source=blk.get("source", "unspecified"),
                action=blk.get("action", "reducible"),
                phase=blk.get("phase", "graph"),
                legs=int(blk["legs"]) if "legs" in blk else None,
            ))
        except KeyError as exc:
            raise PolyhedronError(f"catalog block missing key {exc}") from exc
    return patterns


def default_catalog_path() -> Path:
    return Path(__file__).parent / "data" / "configurations.catalog"


# ---------------------------------------------------------------------------
# subgraph isomorphism


def contains_config(g: PlaneQuarticGraph, p: ConfigPattern,
                    strict_planar: bool = False) -> bool:
    """Whether the abstract multigraph of g contains p as a subgraph.

    Vertex- and edge-injective backtracking with degree pruning; pattern
    vertices are matched in a connectivity-respecting order.  With
    ``strict_planar`` a match must also respect a planar embedding of the
    pattern (audit mode; the reference counts use abstract matching).
    """
    if p.vertices > g.n:
        return False
    return _find_embedding(g, p, strict_planar) is not None


def _pattern_order(p: ConfigPattern) -> list[int]:
    adj = {v: [] for v in range(p.vertices)}
    for a, b in p.edges:
        adj[a].append(b)
        adj[b].append(a)
    order = [max(adj, key=lambda v: len(adj[v]))]
    placed = set(order)
    while len(order) < p.vertices:
        best = None
        best_links = -1
        for v in range(p.vertices):
            if v in placed:
                continue
            links = sum(1 for u in adj[v] if u in placed)
            if links > best_links:
                best, best_links = v, links
        order.append(best)
        placed.add(best)
    return order


def _find_embedding(g: PlaneQuarticGraph, p: ConfigPattern,
                    strict_planar: bool) -> dict[int, int] | None:
    host_mult = g.adjacency()
    pat_mult = p.multiplicity()
    pat_deg = [0] * p.vertices
    for a, b in p.edges:
        pat_deg[a] += 1
        pat_deg[b] += 1
    if any(dv > 4 for dv in pat_deg):
        return None
    order = _pattern_order(p)
    pat_adj = {v: {} for v in range(p.vertices)}
    for (a, b), m in pat_mult.items():
        pat_adj[a][b] = m
        pat_adj[b][a] = m
    host_adj = {v: {} for v in range(g.n)}
    for (a, b), m in host_mult.items():
        host_adj[a][b] = m
        host_adj[b][a] = m

    assignment: dict[int, int] = {}
    used: set[int] = set()

    def ok(v: int, hv: int) -> bool:
        if len(host_adj[hv]) + max(host_mult.get((hv, hv), 0), 0) < 0:
            return False
        for u, m in pat_adj[v].items():
            if u in assignment:
                if host_adj[hv].get(assignment[u], 0) < m:
                    return False
        return True

    def backtrack(idx: int) -> bool:
        if idx == len(order):
            if strict_planar:
                return _embedding_respecting(g, p, assignment)
            return True
        v = order[idx]
        for hv in range(g.n):
            if hv in used:
                continue
            if not ok(v, hv):
                continue
            assignment[v] = hv
            used.add(hv)
            if backtrack(idx + 1):
                if not strict_planar:
                    return True
                return True
            del assignment[v]
            used.discard(hv)
        return False

    if backtrack(0):
        return dict(assignment)
    return None


def brute_force_contains(g: PlaneQuarticGraph, p: ConfigPattern) -> bool:
    """All-injections matcher (test oracle for contains_config)."""
    from itertools import permutations

    if p.vertices > g.n:
        return False
    host_mult = g.adjacency()
    pat_mult = p.multiplicity()
    for chosen in permutations(range(g.n), p.vertices):
        good = True
        for (a, b), m in pat_mult.items():
            key = (min(chosen[a], chosen[b]), max(chosen[a], chosen[b]))
            if host_mult.get(key, 0) < m:
                good = False
                break
        if good:
            return True
    return False


def _embedding_respecting(g: PlaneQuarticGraph, p: ConfigPattern,
                          assignment: dict[int, int]) -> bool:
    """Matched pattern edges follow a planar embedding of the pattern.

    Compares, at every matched vertex of degree >= 3, the cyclic order of the
    matched edges in the host rotation against the pattern's own embedding,
    demanding one global chirality.
    """
    try:
        import networkx as nx
    except ImportError:  # pragma: no cover - networkx ships with the env
        raise RuntimeError("strict planar matching requires networkx")
    pg = nx.MultiGraph()
    pg.add_nodes_from(range(p.vertices))
    for a, b in p.edges:
        pg.add_edge(a, b)
    planar, emb = nx.check_planarity(pg)
    if not planar:
        return False
    inverse = {hv: v for v, hv in assignment.items()}
    chirality = 0
    for v in range(p.vertices):
        nbrs_pat = list(emb.neighbors_cw_order(v)) if pg.degree(v) else []
        if len(set(nbrs_pat)) < 3:
            continue
        hv = assignment[v]
        host_cycle = [u for u in g.neighbors(hv) if inverse.get(u) in
                      set(nbrs_pat)]
        host_as_pat = [inverse[u] for u in host_cycle]
        want = [u for u in nbrs_pat]
        if len(host_as_pat) != len(want):
            return False
        for direction in (1, -1):
            seq = host_as_pat[::direction]
            for shift in range(len(seq)):
                if seq[shift:] + seq[:shift] == want:
                    if chirality in (0, direction):
                        chirality = direction
                        break
            else:
                continue
            break
        else:
            return False
    return True


@dataclass
class FilterReport:
    survivors: list[PlaneQuarticGraph] = field(default_factory=list)
    hits: dict[str, int] = field(default_factory=dict)
    excluded: dict[int, str] = field(default_factory=dict)  # graph id -> pattern


def filter_polyhedra(graphs, catalog, strict_planar: bool = False,
                     phase: str | None = None) -> FilterReport:
    """Remove graphs containing any catalog pattern, keeping order.

    ``phase`` restricts the catalog to entries of that pipeline phase; the
    report carries per-pattern hit statistics for auditing against reference
    counts.
    """
    patterns = [p for p in catalog if phase is None or p.phase == phase]
    report = FilterReport(hits={p.name: 0 for p in patterns})
    for g in graphs:
        hit = None
        for p in patterns:
            if contains_config(g, p, strict_planar):
                hit = p.name
                break
        if hit is None:
            report.survivors.append(g)
        else:
            report.hits[hit] += 1
            report.excluded[g.id] = hit
    return report


# ---------------------------------------------------------------------------
# decoration


def decorate(g: PlaneQuarticGraph, dedup: bool = True,
             prune_cancellable_bigons: bool = True):
    """All crossing decorations of the graph as link diagrams.

    Every vertex becomes a crossing in two ways (which strand through it is
    the over-strand); diagrams equal under signature are emitted once.  When
    pruning is on, choices turning a two-sided face of the graph into a
    directly cancellable R2 pair are skipped (basic polyhedra are simple and
    bigon-free, so this fires only on general inputs).
    """
    two_faces = _bigon_faces(g) if prune_cancellable_bigons else []
    seen: set[str] = set()
    out = []
    for mask in range(1 << g.n):
        crossings = []
        for v in range(g.n):
            ends = g.rotation[v]
            labels = [e + 1 for (e, _side) in ends]
            if (mask >> v) & 1:
                labels = labels[1:] + labels[:1]
            crossings.append(tuple(labels))
        if two_faces and _has_cancellable_bigon(crossings, two_faces, mask):
            continue
        d = LinkDiagram(tuple(crossings), g.edge_count)
        if dedup:
            sig = signature(d)
            if sig in seen:
                continue
            seen.add(sig)
        out.append(d)
    return out


def _bigon_faces(g: PlaneQuarticGraph):
    """Two-sided faces of the graph as ((v1, pos1), (v2, pos2)) end pairs."""
    nxt = {}
    where = {}
    for v, ends in enumerate(g.rotation):
        for k, end in enumerate(ends):
            nxt[end] = ends[(k + 1) % 4]
            where[end] = (v, k)
    faces = []
    seen = set()
    for v, ends in enumerate(g.rotation):
        for end in ends:
            if end in seen:
                continue
            orbit = []
            cur = end
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                e, side = cur
                cur = nxt[(e, 1 - side)]
            if len(orbit) == 2:
                faces.append(tuple(where[x] for x in orbit))
    return faces


def _has_cancellable_bigon(crossings, two_faces, mask) -> bool:
    for (v1, _p1), (v2, _p2) in two_faces:
        # The bigon cancels directly when the shared strand is over at both
        # crossings: slot parity of the common edges decides.
        c1, c2 = crossings[v1], crossings[v2]
        shared = set(c1) & set(c2)
        if len(shared) < 2:
            continue
        for arc in shared:
            p1 = c1.index(arc) % 2
            p2 = c2.index(arc) % 2
            if p1 == p2:
                return True
    return False
