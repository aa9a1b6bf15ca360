"""Command-line interface.

Subcommands mirror the pipeline stages plus direct invariant queries:

    threemove run --config pipeline.cfg
    threemove report --records records.jsonl
    threemove ingest|filter|decorate|reduce|seifert|braid|conjugacy|certify ...
    threemove group order|classes|conj --quotient c5 --cache DIR [--words ...]
    threemove burnside --pd FILE
    threemove jones --pd FILE [--orientation native|auto|MASK]
    threemove braid --pd FILE [--orientation native|auto|MASK]

Exit codes: 0 complete, 2 unresolved survivors, 3 limits hit.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path


def _read_pd_file(path: str):
    from .diagrams import parse_pd

    return parse_pd(Path(path).read_text())


def _orient(d, spec: str):
    from .diagrams import enumerate_orientations, native_orientation
    from .pipeline import _pipeline_orientation

    if spec == "native":
        return native_orientation(d)
    if spec == "auto":
        return _pipeline_orientation(d)
    mask = int(spec)
    oriented = enumerate_orientations(d)
    if not 0 <= mask < len(oriented):
        raise SystemExit(f"orientation mask {mask} out of range 0..{len(oriented)-1}")
    return oriented[mask]


def _cache_dir(args) -> str | None:
    return args.cache or os.environ.get("THREEMOVE_CACHE")


def _cmd_run(args) -> int:
    from .pipeline import Pipeline, PipelineConfig

    if args.config:
        cfg = PipelineConfig.from_file(args.config)
    else:
        cfg = PipelineConfig(inputs=args.inputs, records=args.records)
    if args.records:
        cfg.records = args.records
    if args.catalog:
        cfg.catalog = args.catalog
    if _cache_dir(args):
        cfg.cache_dir = _cache_dir(args)
    if args.max_nodes:
        cfg.max_nodes = args.max_nodes
    if args.cells is not None:
        cfg.cells = args.cells
    if args.budget is not None:
        cfg.max_extra_crossings = args.budget
    cfg.strict_planar = args.strict_planar
    rep = Pipeline(cfg).run()
    print(rep.text())
    return rep.exit_code()


def _cmd_report(args) -> int:
    from .pipeline import RecordStore, report

    store = RecordStore(args.records)
    if args.compact:
        store.compact()
    rep = report(store)
    print(rep.text())
    return rep.exit_code()


def _cmd_stage(args) -> int:
    from .pipeline import Pipeline, PipelineConfig

    cfg = PipelineConfig(inputs=args.inputs or [], records=args.records)
    if args.catalog:
        cfg.catalog = args.catalog
    if _cache_dir(args):
        cfg.cache_dir = _cache_dir(args)
    cfg.strict_planar = getattr(args, "strict_planar", False)
    if getattr(args, "cells", None) is not None:
        cfg.cells = args.cells
    pipe = Pipeline(cfg)
    pipe.ingest()
    basic = pipe.basic_filter()
    if args.stage == "ingest":
        print(f"{len(pipe.graphs)} graphs ingested")
        return 0
    cfg_ok = pipe.config_filter(basic, "graph")
    if args.stage == "filter":
        print(f"{len(cfg_ok)} of {len(pipe.graphs)} graphs survive filters")
        return 0
    links = pipe.decorate(cfg_ok)
    if args.stage == "decorate":
        print(f"{len(links)} distinct links decorated")
        return 0
    links = pipe.r3_bigon(links)
    if args.stage == "reduce":
        links = pipe.full_reduce(links)
        print(f"{len(links)} links survive the reduction searches")
        return 0
    links = pipe.full_reduce(links)
    links = pipe.seifert(links)
    if args.stage == "seifert":
        print(f"{len(links)} links survive the Seifert filter")
        return 0
    live_graphs = sorted({pipe.link_graph[s] for s in links})
    post_ok = set(pipe.config_filter(live_graphs, "post_seifert"))
    links = [s for s in links if pipe.link_graph[s] in post_ok]
    links = pipe.braid_stage(links)
    if args.stage == "braid":
        print(f"{len(links)} links braided")
        return 0
    links = pipe.conjugacy(links)
    if args.stage == "conjugacy":
        print(f"{len(links)} links classified")
        return 0
    pipe.certify(links)
    print("certificates recorded")
    return 0


def _cmd_group(args) -> int:
    from .braids import parse_braid
    from .groups import (RegularConjugation, are_conjugate, conjugacy_classes,
                         quotient_table)

    n = {"c2": 2, "c3": 3, "c4": 4, "c5": 5}[args.quotient]
    table = quotient_table(n, _cache_dir(args))
    if args.what == "order":
        print(f"|C_{n}| = {table.degree}")
        return 0
    if args.what == "classes":
        count, reps = conjugacy_classes(table)
        print(f"C_{n} has {count} conjugacy classes")
        if args.verbose:
            for w in reps:
                print("  " + (" ".join(str(x) for x in w) or "(identity)"))
        return 0
    words = [tuple(parse_braid(w).letters) for w in args.words]
    if len(words) != 2:
        raise SystemExit("conj needs exactly two --words arguments")
    conj = RegularConjugation(table)
    same = are_conjugate(table, words[0], words[1], conj)
    print("conjugate" if same else "not conjugate")
    return 0


def _cmd_burnside(args) -> int:
    from .burnside import burnside3_order

    d = _read_pd_file(args.pd)
    cert = burnside3_order(d)
    d1, d2, d3 = cert.layer_dims
    print(f"order=3^{cert.exponent} dim1={d1} dim2={d2} dim3={d3}")
    if args.verbose:
        form = "matches a trivial link" if cert.matches_trivial_link() \
            else "does not match any trivial link"
        print(f"exponent {form}")
    return 0


def _cmd_jones(args) -> int:
    from .invariants import jones, palindromic

    d = _read_pd_file(args.pd)
    j = jones(_orient(d, args.orientation))
    print(j)
    if args.verbose:
        print("palindromic:", palindromic(j))
    return 0


def _cmd_braid(args) -> int:
    from .braids import format_braid
    from .vogel import vogel_traczyk

    d = _read_pd_file(args.pd)
    word = vogel_traczyk(_orient(d, args.orientation))
    print(format_braid(word))
    return 0


def _cmd_reduce(args) -> int:
    from .rewrite import (SearchLimits, SearchLimitExceeded, format_witness,
                          full_reduction_search, r3_bigon_search,
                          three_move_reduce)

    d = _read_pd_file(args.pd)
    limits = SearchLimits(args.budget, args.max_nodes)
    if args.moves == "r3":
        try:
            witness = r3_bigon_search(d, limits)
        except SearchLimitExceeded:
            print("limit")
            return 3
        print("reducible: " + format_witness(witness) if witness is not None
              else "irreducible by R3")
        return 0
    if args.moves == "all":
        try:
            witness = full_reduction_search(d, limits)
        except SearchLimitExceeded:
            print("limit")
            return 3
        print("reducible: " + format_witness(witness) if witness is not None
              else "no reduction found")
        return 0
    out = three_move_reduce(d, limits)
    if out.status == "trivial":
        print(f"trivial link with {out.components} components "
              f"({len(out.moves)} moves)")
    else:
        print(f"{out.status}: stuck at {out.diagram.crossing_count} crossings")
    return 0 if out.status == "trivial" else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="threemove",
                                     description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the full pipeline")
    p_run.add_argument("inputs", nargs="*", help="plantri output files")
    p_run.add_argument("--config", help="flat key=value configuration file")
    p_run.add_argument("--records", default="records.jsonl")
    p_run.add_argument("--catalog")
    p_run.add_argument("--cache")
    p_run.add_argument("--cells", type=int, default=None,
                       help="keep only graphs with cells-2 vertices")
    p_run.add_argument("--max-nodes", type=int, default=0)
    p_run.add_argument("--budget", type=int, default=None,
                       help="extra crossings allowed in searches")
    p_run.add_argument("--strict-planar", action="store_true")
    p_run.set_defaults(func=_cmd_run)

    p_rep = sub.add_parser("report", help="summarize a record store")
    p_rep.add_argument("--records", default="records.jsonl")
    p_rep.add_argument("--compact", action="store_true",
                       help="rewrite the log with one line per (stage, key)")
    p_rep.set_defaults(func=_cmd_report)

    for stage in ("ingest", "filter", "decorate", "seifert", "braid",
                  "conjugacy", "certify"):
        p_st = sub.add_parser(stage, help=f"run the pipeline through {stage}")
        p_st.add_argument("inputs", nargs="*")
        p_st.add_argument("--records", default="records.jsonl")
        p_st.add_argument("--catalog")
        p_st.add_argument("--cache")
        p_st.add_argument("--strict-planar", action="store_true")
        p_st.add_argument("--cells", type=int, default=None)
        p_st.set_defaults(func=_cmd_stage, stage=stage)

    p_grp = sub.add_parser("group", help="finite braid quotient queries")
    p_grp.add_argument("what", choices=("order", "classes", "conj"))
    p_grp.add_argument("--quotient", choices=("c2", "c3", "c4", "c5"),
                       default="c5")
    p_grp.add_argument("--cache")
    p_grp.add_argument("--words", nargs="*", default=[],
                       help="braid words 'n=5 2 -1 ...' for conj")
    p_grp.add_argument("--verbose", action="store_true")
    p_grp.set_defaults(func=_cmd_group)

    p_bur = sub.add_parser("burnside", help="third Burnside group order")
    p_bur.add_argument("--pd", required=True, help="file holding a PD expression")
    p_bur.add_argument("--verbose", action="store_true")
    p_bur.set_defaults(func=_cmd_burnside)

    p_jon = sub.add_parser("jones", help="Jones polynomial of a PD file")
    p_jon.add_argument("--pd", required=True)
    p_jon.add_argument("--orientation", default="native")
    p_jon.add_argument("--verbose", action="store_true")
    p_jon.set_defaults(func=_cmd_jones)

    p_brd = sub.add_parser("braid", help="braid word of a PD file")
    p_brd.add_argument("--pd", required=True)
    p_brd.add_argument("--orientation", default="native")
    p_brd.set_defaults(func=_cmd_braid)

    p_red = sub.add_parser("reduce", help="reduction searches on a PD file")
    p_red.add_argument("--pd", required=True)
    p_red.add_argument("--moves", choices=("r3", "all", "three"), default="all")
    p_red.add_argument("--budget", type=int, default=2)
    p_red.add_argument("--max-nodes", type=int, default=100_000)
    p_red.set_defaults(func=_cmd_reduce)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
