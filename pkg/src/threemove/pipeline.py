"""Resumable classification pipeline with an append-only record log.

Stages run in a fixed order over keyed work items (graphs by ordinal, links
by canonical signature); every outcome is one JSON line in the record store,
and a key with an existing record is never recomputed, which makes reruns
idempotent and interrupted runs resumable.  Exclusion stages record their
witnesses, so each dropped item carries its evidence.

Stage layout mirrors the computation being reproduced: plantri ingestion, the
basic-polyhedron test, the pre-decoration configuration filter (the
three-triangle pattern), decoration, the R3-orbit bigon search, the budgeted
full-Reidemeister search, the Seifert-circle filter, the post-Seifert
configuration pass, braiding, conjugacy against the 20-crossing five-braid
counterexample word in the finite quotient, and the Burnside certificate.
The reference checkpoint counts (608 polyhedra after the Seifert stage, then
11 graphs) are observable at exactly those stages.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import polyhedra
from .braids import CHEN_WORD, braid_mirror, format_braid
from .burnside import burnside3_order
from .diagrams import LinkDiagram, enumerate_orientations, format_pd, signature
from .groups import RegularConjugation, are_conjugate, quotient_table
from .invariants import jones, palindromic
from .rewrite import (
    SearchLimitExceeded,
    SearchLimits,
    format_witness,
    full_reduction_search,
    r3_bigon_search,
)
from .braids import min_seifert_over_orientations, seifert_circles
from .vogel import vogel_traczyk

STAGES = (
    "ingest", "basic_filter", "config_filter", "decorate", "r3_bigon",
    "full_reduce", "seifert", "braid", "conjugacy", "certify",
)

STATUSES = ("excluded", "survivor", "trivial", "chen_class",
            "mirror_chen_class", "limit")


@dataclass(frozen=True)
class StageRecord:
    stage: str
    key: str
    status: str
    witness_ref: str | None = None
    timing: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        body = {"stage": self.stage, "key": self.key, "status": self.status,
                "timing": round(self.timing, 6)}
        if self.witness_ref is not None:
            body["witness"] = self.witness_ref
        if self.extra:
            body["extra"] = self.extra
        return json.dumps(body, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "StageRecord":
        body = json.loads(line)
        return cls(body["stage"], body["key"], body["status"],
                   body.get("witness"), body.get("timing", 0.0),
                   body.get("extra", {}))


class RecordStore:
    """Append-only line-delimited record log with resume semantics."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.records: dict[tuple[str, str], StageRecord] = {}
        if self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = StageRecord.from_json(line)
                    except (json.JSONDecodeError, KeyError):
                        continue  # tolerate a partial trailing line
                    self.records.setdefault((rec.stage, rec.key), rec)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a")

    def has(self, stage: str, key: str) -> bool:
        return (stage, key) in self.records

    def get(self, stage: str, key: str) -> StageRecord | None:
        return self.records.get((stage, key))

    def add(self, rec: StageRecord) -> StageRecord:
        existing = self.records.get((rec.stage, rec.key))
        if existing is not None:
            return existing
        self.records[(rec.stage, rec.key)] = rec
        self._fh.write(rec.to_json() + "\n")
        self._fh.flush()
        return rec

    def by_stage(self, stage: str) -> list[StageRecord]:
        return [r for (s, _k), r in sorted(self.records.items())
                if s == stage]

    def compact(self) -> None:
        """Rewrite the log with one line per (stage, key)."""
        tmp = self.path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            for (_s, _k), rec in sorted(self.records.items()):
                fh.write(rec.to_json() + "\n")
        self._fh.close()
        tmp.replace(self.path)
        self._fh = open(self.path, "a")

    def close(self) -> None:
        self._fh.close()


@dataclass
class PipelineConfig:
    inputs: list[str]
    records: str = "records.jsonl"
    catalog: str | None = None
    cache_dir: str | None = None
    cells: int | None = None  # keep only graphs with cells-2 vertices
    max_nodes: int = 100_000
    max_extra_crossings: int = 2
    strict_planar: bool = False
    run_conjugacy: bool = True
    run_certify: bool = True

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """Flat ``key = value`` configuration text."""
        values: dict[str, str] = {}
        for line in Path(path).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {line!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
        cfg = cls(inputs=values.get("inputs", "").split())
        if "records" in values:
            cfg.records = values["records"]
        if "catalog" in values:
            cfg.catalog = values["catalog"]
        if "cache_dir" in values:
            cfg.cache_dir = values["cache_dir"]
        if "cells" in values:
            cfg.cells = int(values["cells"])
        if "max_nodes" in values:
            cfg.max_nodes = int(values["max_nodes"])
        if "max_extra_crossings" in values:
            cfg.max_extra_crossings = int(values["max_extra_crossings"])
        if "strict_planar" in values:
            cfg.strict_planar = values["strict_planar"].lower() in ("1", "true", "yes")
        if "run_conjugacy" in values:
            cfg.run_conjugacy = values["run_conjugacy"].lower() in ("1", "true", "yes")
        if "run_certify" in values:
            cfg.run_certify = values["run_certify"].lower() in ("1", "true", "yes")
        return cfg


class Pipeline:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self.store = RecordStore(config.records)
        catalog_path = config.catalog or polyhedra.default_catalog_path()
        self.catalog = polyhedra.load_config_catalog(catalog_path)
        self.graphs: dict[str, polyhedra.PlaneQuarticGraph] = {}
        self.links: dict[str, LinkDiagram] = {}
        self.link_graph: dict[str, str] = {}

    # -- individual stages ------------------------------------------------

    def ingest(self) -> list[str]:
        keys = []
        ordinal = 0
        want_n = None if self.config.cells is None else self.config.cells - 2
        for path in self.config.inputs:
            for g in polyhedra.read_graph_file(path):
                key = f"g{ordinal}"
                g = polyhedra.PlaneQuarticGraph(g.n, g.rotation, g.edges, ordinal)
                ordinal += 1
                if want_n is not None and g.n != want_n:
                    self.store.add(StageRecord(
                        "ingest", key, "excluded",
                        extra={"n": g.n, "source": str(path),
                               "reason": f"cells filter {self.config.cells}"}))
                    continue
                self.graphs[key] = g
                self.store.add(StageRecord("ingest", key, "survivor",
                                           extra={"n": g.n, "source": str(path)}))
                keys.append(key)
        return keys

    def _graph_survivors(self, stage: str) -> list[str]:
        out = []
        for rec in self.store.by_stage(stage):
            if rec.status == "survivor" and rec.key.startswith("g"):
                out.append(rec.key)
        return out

    def basic_filter(self) -> list[str]:
        survivors = []
        for key in self._graph_survivors("ingest"):
            if self.store.has("basic_filter", key):
                rec = self.store.get("basic_filter", key)
            else:
                t0 = time.monotonic()
                ok = polyhedra.check_basic(self.graphs[key])
                rec = self.store.add(StageRecord(
                    "basic_filter", key, "survivor" if ok else "excluded",
                    timing=time.monotonic() - t0))
            if rec.status == "survivor":
                survivors.append(key)
        return survivors

    def config_filter(self, keys: list[str], phase: str = "graph") -> list[str]:
        patterns = [p for p in self.catalog
                    if p.phase == phase and p.action == "reducible"]
        survivors = []
        for key in keys:
            record_key = key if phase == "graph" else f"{key}:post"
            if self.store.has("config_filter", record_key):
                rec = self.store.get("config_filter", record_key)
            else:
                t0 = time.monotonic()
                hit = None
                for p in patterns:
                    if polyhedra.contains_config(self.graphs[key], p,
                                                 self.config.strict_planar):
                        hit = p.name
                        break
                rec = self.store.add(StageRecord(
                    "config_filter", record_key,
                    "excluded" if hit else "survivor",
                    witness_ref=hit, timing=time.monotonic() - t0,
                    extra={"phase": phase}))
            if rec.status == "survivor":
                survivors.append(key)
        return survivors

    def decorate(self, graph_keys: list[str]) -> list[str]:
        link_keys = []
        for gkey in graph_keys:
            g = self.graphs[gkey]
            t0 = time.monotonic()
            diagrams = polyhedra.decorate(g)
            for d in diagrams:
                sig = signature(d)
                self.links.setdefault(sig, d)
                self.link_graph.setdefault(sig, gkey)
                self.store.add(StageRecord(
                    "decorate", sig, "survivor",
                    extra={"graph": gkey, "pd": format_pd(d)}))
                link_keys.append(sig)
            self.store.add(StageRecord(
                "decorate", gkey, "survivor",
                timing=time.monotonic() - t0,
                extra={"links": len(diagrams)}))
        return sorted(set(link_keys))

    def _ensure_link(self, sig: str) -> LinkDiagram:
        if sig not in self.links:
            rec = self.store.get("decorate", sig)
            if rec is None or "pd" not in rec.extra:
                raise KeyError(f"no diagram recorded for {sig}")
            from .diagrams import parse_pd
            self.links[sig] = parse_pd(rec.extra["pd"])
            self.link_graph[sig] = rec.extra.get("graph", "?")
        return self.links[sig]

    def _search_stage(self, stage: str, keys: list[str], search) -> list[str]:
        survivors = []
        limits = SearchLimits(self.config.max_extra_crossings,
                              self.config.max_nodes)
        for sig in keys:
            if self.store.has(stage, sig):
                rec = self.store.get(stage, sig)
            else:
                d = self._ensure_link(sig)
                t0 = time.monotonic()
                try:
                    witness = search(d, limits)
                except SearchLimitExceeded:
                    rec = self.store.add(StageRecord(
                        stage, sig, "limit", timing=time.monotonic() - t0))
                    survivors.append(sig)
                    continue
                if witness is None:
                    rec = self.store.add(StageRecord(
                        stage, sig, "survivor", timing=time.monotonic() - t0))
                else:
                    rec = self.store.add(StageRecord(
                        stage, sig, "excluded",
                        witness_ref=format_witness(witness),
                        timing=time.monotonic() - t0))
            if rec.status in ("survivor", "limit"):
                survivors.append(sig)
        return survivors

    def r3_bigon(self, keys: list[str]) -> list[str]:
        return self._search_stage("r3_bigon", keys, r3_bigon_search)

    def full_reduce(self, keys: list[str]) -> list[str]:
        return self._search_stage("full_reduce", keys, full_reduction_search)

    def seifert(self, keys: list[str]) -> list[str]:
        survivors = []
        for sig in keys:
            if self.store.has("seifert", sig):
                rec = self.store.get("seifert", sig)
            else:
                d = self._ensure_link(sig)
                t0 = time.monotonic()
                count = min_seifert_over_orientations(d)
                status = "survivor" if count >= 5 else "excluded"
                rec = self.store.add(StageRecord(
                    "seifert", sig, status, timing=time.monotonic() - t0,
                    extra={"min_circles": count}))
            if rec.status == "survivor":
                survivors.append(sig)
        return survivors

    def braid_stage(self, keys: list[str]) -> list[str]:
        live = []
        for sig in keys:
            if self.store.has("braid", sig):
                rec = self.store.get("braid", sig)
            else:
                d = self._ensure_link(sig)
                t0 = time.monotonic()
                word = vogel_traczyk(_pipeline_orientation(d))
                rec = self.store.add(StageRecord(
                    "braid", sig, "survivor", timing=time.monotonic() - t0,
                    extra={"word": format_braid(word),
                           "letters": len(word.letters),
                           "index": word.index}))
            live.append(sig)
        return live

    def conjugacy(self, keys: list[str]) -> list[str]:
        if not keys:
            return []
        table = quotient_table(5, self.config.cache_dir)
        conj = RegularConjugation(table)
        chen = tuple(CHEN_WORD.letters)
        mirror = tuple(braid_mirror(CHEN_WORD).letters)
        live = []
        for sig in keys:
            if self.store.has("conjugacy", sig):
                rec = self.store.get("conjugacy", sig)
            else:
                braid_rec = self.store.get("braid", sig)
                from .braids import parse_braid
                word = parse_braid(braid_rec.extra["word"])
                if word.index != 5:
                    rec = self.store.add(StageRecord(
                        "conjugacy", sig, "limit",
                        extra={"reason": f"index {word.index} braid"}))
                    live.append(sig)
                    continue
                t0 = time.monotonic()
                letters = tuple(word.letters)
                if are_conjugate(table, chen, letters, conj):
                    status = "chen_class"
                elif are_conjugate(table, mirror, letters, conj):
                    status = "mirror_chen_class"
                else:
                    status = "trivial"
                rec = self.store.add(StageRecord(
                    "conjugacy", sig, status, timing=time.monotonic() - t0))
            live.append(sig)
        return live

    def certify(self, keys: list[str]) -> None:
        for sig in keys:
            if self.store.has("certify", sig):
                continue
            conj_rec = self.store.get("conjugacy", sig)
            if conj_rec is None:
                continue
            d = self._ensure_link(sig)
            t0 = time.monotonic()
            extra = {}
            status = conj_rec.status
            if conj_rec.status in ("chen_class", "mirror_chen_class"):
                cert = burnside3_order(d)
                extra["burnside_exponent"] = cert.exponent
                extra["trivial_form"] = cert.matches_trivial_link()
                if cert.matches_trivial_link():
                    status = "limit"  # certificate contradicts the class
                if d.crossing_count <= 24:
                    j = jones(_pipeline_orientation(d))
                    extra["jones_palindromic"] = palindromic(j)
            self.store.add(StageRecord(
                "certify", sig, status, timing=time.monotonic() - t0,
                extra=extra))

    # -- driver ------------------------------------------------------------

    def run(self) -> "PipelineReport":
        self.ingest()
        basic = self.basic_filter()
        cfg_survivors = self.config_filter(basic, phase="graph")
        links = self.decorate(cfg_survivors)
        links = self.r3_bigon(links)
        links = self.full_reduce(links)
        links = self.seifert(links)
        # Post-Seifert configuration pass on the graphs still carrying links.
        live_graphs = sorted({self.link_graph[s] for s in links})
        post_ok = set(self.config_filter(live_graphs, phase="post_seifert"))
        links = [s for s in links if self.link_graph[s] in post_ok]
        links = self.braid_stage(links)
        if self.config.run_conjugacy:
            links = self.conjugacy(links)
            if self.config.run_certify:
                self.certify(links)
        return report(self.store)


def run_pipeline(config: PipelineConfig) -> "PipelineReport":
    """Execute all stages under the given configuration (resumable)."""
    return Pipeline(config).run()


def _pipeline_orientation(d: LinkDiagram) -> LinkDiagram:
    """Lexicographically first orientation achieving the minimal circle count."""
    oriented = enumerate_orientations(d)
    best = None
    best_count = None
    for o in oriented:
        count = seifert_circles(o)
        if best_count is None or count < best_count:
            best, best_count = o, count
    return best


# ---------------------------------------------------------------------------
# reporting


@dataclass
class PipelineReport:
    stage_counts: dict[str, dict[str, int]]
    per_vertex_seifert: dict[int, int]
    classification: dict[str, str]
    unresolved: list[str]
    limits_hit: list[str]

    def exit_code(self) -> int:
        if self.unresolved:
            return 2
        if self.limits_hit:
            return 3
        return 0

    def text(self) -> str:
        lines = ["pipeline report", "=" * 15]
        for stage in STAGES:
            counts = self.stage_counts.get(stage)
            if not counts:
                continue
            body = ", ".join(f"{status}={n}" for status, n in sorted(counts.items()))
            lines.append(f"{stage:13s} {body}")
        if self.per_vertex_seifert:
            lines.append("seifert-surviving polyhedra by vertex count:")
            for n, k in sorted(self.per_vertex_seifert.items()):
                lines.append(f"  {n} vertices: {k}")
        if self.classification:
            lines.append("final classes:")
            for sig, cls in sorted(self.classification.items()):
                lines.append(f"  {cls:18s} {sig[:40]}")
        if self.unresolved:
            lines.append(f"UNRESOLVED: {len(self.unresolved)} item(s)")
        if self.limits_hit:
            lines.append(f"limits hit on {len(self.limits_hit)} item(s)")
        return "\n".join(lines)


def report(store: RecordStore) -> PipelineReport:
    stage_counts: dict[str, dict[str, int]] = {}
    for (stage, _key), rec in store.records.items():
        stage_counts.setdefault(stage, {})
        stage_counts[stage][rec.status] = stage_counts[stage].get(rec.status, 0) + 1

    # Seifert survivors per vertex count: graphs that still support a link.
    graph_n: dict[str, int] = {}
    for rec in store.by_stage("ingest"):
        graph_n[rec.key] = rec.extra.get("n", 0)
    link_graph: dict[str, str] = {}
    for rec in store.by_stage("decorate"):
        if "graph" in rec.extra:
            link_graph[rec.key] = rec.extra["graph"]
    surviving_graphs = set()
    for rec in store.by_stage("seifert"):
        if rec.status == "survivor" and rec.key in link_graph:
            surviving_graphs.add(link_graph[rec.key])
    per_vertex: dict[int, int] = {}
    for gkey in surviving_graphs:
        n = graph_n.get(gkey, 0)
        per_vertex[n] = per_vertex.get(n, 0) + 1

    classification: dict[str, str] = {}
    unresolved: list[str] = []
    limits: list[str] = []
    for rec in store.by_stage("conjugacy"):
        classification[rec.key] = rec.status
        if rec.status == "limit":
            unresolved.append(rec.key)
    for (stage, key), rec in store.records.items():
        if rec.status == "limit" and stage != "conjugacy":
            limits.append(f"{stage}:{key}")
    return PipelineReport(stage_counts, per_vertex, classification,
                          sorted(unresolved), sorted(limits))
