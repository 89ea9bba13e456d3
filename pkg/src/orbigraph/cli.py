"""Command-line interface.

Each subcommand parses its input files, dispatches into the library and
emits a deterministic report in text or key-value form.  The process
exits 0 iff every assert-level check passed, 1 on a failed check, and 2
on input, parse, capacity or scale errors.
"""

from __future__ import annotations

import argparse
import sys

from . import amalgams as am
from . import ends
from . import scenarios
from . import treelike as tl
from .digraphs import digraph_to_text
from .errors import CapacityError, InputError, ParseError, PreconditionError, ScaleError
from .permgroups import PermGroup, find_block_system, group_from_text, is_primitive_higman
from .report import FAIL, PASS, Report

REASON_AGREE = "tests_agree"
REASON_DISAGREE = "tests_disagree"
REASON_MONOTONE = "monotone"
REASON_NOT_MONOTONE = "not_monotone"


def _read(path, report):
    with open(path, "rb") as fh:
        data = fh.read()
    report.add_input(path, data)
    return data.decode("utf-8")


def _emit(report, args):
    sys.stdout.write(report.render(args.output))
    return report.exit_code()


def _add_common(parser):
    parser.add_argument("--output", choices=("text", "kv"), default="text")
    parser.add_argument("--cap-vertices", type=int, default=tl.VERTEX_CAP)
    parser.add_argument("--cap-elements", type=int, default=100_000)
    parser.add_argument("--cap-syllables", type=int, default=am.SYLLABLE_CAP)
    parser.add_argument("--cap-depth", type=int, default=tl.DEPTH_CAP)


def cmd_group_analyze(args):
    report = Report("group-analyze", params=[("point", args.point)])
    group = group_from_text(_read(args.file, report))
    report.add_info("degree", str(group.degree))
    report.add_info("generators", str(len(group.generators)))
    order = group.order(args.cap_elements)
    report.add_info("order", str(order) if order is not None else
                    "over cap %d" % args.cap_elements)
    if not group.is_transitive():
        report.add_info("transitive", "no")
        report.add("primitivity", PASS, "intransitive",
                   "primitivity tests need a transitive group")
        return _emit(report, args)
    report.add_info("transitive", "yes")
    sizes = [len(orb) for orb in group.suborbits(args.point)]
    report.add_info("suborbit-sizes", ",".join(map(str, sizes)))
    pairs = group.paired_subdegrees(args.point)
    report.add_info("paired-subdegrees",
                    ";".join("%d=%d" % p for p in pairs))
    if group.degree < 2:
        report.add_info("primitive", "degree 1")
        return _emit(report, args)
    higman = is_primitive_higman(group)
    blocks = find_block_system(group)
    report.add_info("primitive-higman", "yes" if higman else "no")
    report.add_info("block-system",
                    "none" if blocks is None else
                    "|".join(",".join(map(str, b)) for b in blocks))
    report.add("primitivity-tests", PASS if higman == (blocks is None) else FAIL,
               REASON_AGREE if higman == (blocks is None) else REASON_DISAGREE,
               "higman=%s blocks=%s" % (higman, blocks is not None))
    return _emit(report, args)


def _load_template(args, report):
    template, m = tl.template_from_text(_read(args.file, report))
    if getattr(args, "m", None):
        m = args.m
    return template, m


def cmd_treelike_build(args):
    report = Report("treelike-build",
                    params=[("m", args.m or "file"), ("depth", args.depth)])
    template, m = _load_template(args, report)
    if args.depth > args.cap_depth:
        raise CapacityError("depth %d exceeds cap %d" % (args.depth, args.cap_depth))
    trunc = tl.build_truncation(template, m, args.depth, cap=args.cap_vertices)
    report.add_info("vertices", str(trunc.graph.vertex_count))
    report.add_info("arcs", str(len(trunc.graph.arcs)))
    report.add_info("lobes", str(len(trunc.tree.lobes)))
    report.add_info("frontier", str(len(trunc.graph.frontier_marks)))
    interior_ok = all(trunc.tree.blue_degree(v) == m
                      for v in trunc.interior_vertices())
    report.add("interior-lobe-membership", PASS if interior_ok else FAIL,
               "ok" if interior_ok else "membership_mismatch", "m=%d" % m)
    if args.write_graph:
        with open(args.write_graph, "w") as fh:
            fh.write(digraph_to_text(trunc.graph))
        report.add_info("written", args.write_graph)
    return _emit(report, args)


def cmd_treelike_criterion(args):
    report = Report("treelike-criterion", params=[("m", args.m or "file")])
    template, m = _load_template(args, report)
    crit = tl.connectivity_one_primitivity_criterion(template, m)
    report.add_info("verdict", crit.verdict.upper())
    for i, reason in enumerate(crit.reasons, start=1):
        report.add_info("reason-%d" % i, reason)
    report.add("criterion", PASS, crit.verdict,
               ",".join(crit.reasons) if crit.reasons else "no obstructions")
    return _emit(report, args)


def cmd_treelike_witness(args):
    report = Report("treelike-witness",
                    params=[("m", args.m or "file"), ("depth", args.depth)])
    template, m = _load_template(args, report)
    trunc = tl.build_truncation(template, m, args.depth, cap=args.cap_vertices)
    gens = tl.truncation_automorphisms(trunc)
    group = PermGroup(trunc.graph.vertex_count, gens)
    elems, complete = group.elements(args.cap_elements)
    elements = list(elems) + tl.lobe_symmetry_maps(trunc)
    report.add_info("elements", str(len(elements)))
    report.add_info("closure-complete", "yes" if complete else "no")
    outcome = tl.imprimitivity_witness_search(trunc, elements, validate=False)
    report.add_info("witness", outcome.status)
    if outcome.status == tl.STATUS_FOUND:
        report.add_info("witness-triple", "alpha=%d beta=%d x=%s:%d"
                        % (outcome.alpha, outcome.beta, outcome.x_kind, outcome.x_id))
    report.add("witness-search", PASS, outcome.status, "scale=depth %d" % args.depth)
    return _emit(report, args)


def cmd_amalgam_tree(args):
    report = Report("amalgam-tree", params=[("radius", args.radius)])
    spec = am.amalgam_from_text(_read(args.file, report))
    tree = am.bass_serre_tree(spec, args.radius, cap=args.cap_vertices)
    report.add_info("indices", "%d,%d" % (spec.index_a, spec.index_b))
    report.add_info("common-order", str(spec.c_size()))
    report.add_info("nodes", str(len(tree.nodes)))
    interior = tree.interior_nodes()
    a_deg = sorted({tree.degree(n.node_id) for n in interior if n.side == am.SIDE_A})
    b_deg = sorted({tree.degree(n.node_id) for n in interior if n.side == am.SIDE_B})
    report.add_info("interior-degrees",
                    "a=%s b=%s" % (",".join(map(str, a_deg)) or "-",
                                   ",".join(map(str, b_deg)) or "-"))
    ok = (a_deg in ([], [spec.index_a])) and (b_deg in ([], [spec.index_b]))
    report.add("degree-law", PASS if ok else FAIL,
               "ok" if ok else "degree_mismatch",
               "expected a=%d b=%d" % (spec.index_a, spec.index_b))
    return _emit(report, args)


def cmd_amalgam_elements(args):
    report = Report("amalgam-elements",
                    params=[("max_syllables", args.max_syllables)])
    spec = am.amalgam_from_text(_read(args.file, report))
    if args.max_syllables > args.cap_syllables:
        raise CapacityError("syllable bound %d exceeds cap %d"
                            % (args.max_syllables, args.cap_syllables))
    elements = spec.enumerate_elements(args.max_syllables, cap=args.cap_elements)
    report.add_info("count", str(len(elements)))
    for k in range(args.max_syllables + 1):
        report.add_info("count-syllables-%d" % k,
                        str(sum(1 for e in elements if e.syllable_count() == k)))
    return _emit(report, args)


def cmd_ends_report(args):
    report = Report("ends-report",
                    params=[("m", args.m or "file"), ("depth", args.depth),
                            ("radius", args.radius)])
    template, m = _load_template(args, report)
    trunc = tl.build_truncation(template, m, args.depth, cap=args.cap_vertices)
    counts = ends.end_count_sequence(trunc.graph, trunc.root, args.radius)
    report.add_info("end-counts", ",".join(map(str, counts)))
    mono = all(a <= b for a, b in zip(counts, counts[1:]))
    report.add("monotone", PASS if mono else FAIL,
               REASON_MONOTONE if mono else REASON_NOT_MONOTONE,
               "r=1..%d" % args.radius)
    ray = ends.canonical_ray(trunc, min(args.depth, 2))
    report.add_info("canonical-ray-kind", ends.classify_end(trunc, ray))
    verdict = ends.end_orbit_trichotomy(trunc, ray, ends.CONTEXT_CLOSED_PRIMITIVE)
    report.add_info("trichotomy-class", verdict.kind)
    return _emit(report, args)


def cmd_ends_count(args):
    report = Report("ends-count",
                    params=[("m", args.m or "file"), ("depth", args.depth),
                            ("radius", args.radius)])
    template, m = _load_template(args, report)
    trunc = tl.build_truncation(template, m, args.depth, cap=args.cap_vertices)
    count = ends.count_ends_at_radius(trunc.graph, trunc.root, args.radius)
    report.add_info("ends", str(count))
    return _emit(report, args)


def cmd_ends_classify(args):
    report = Report("ends-classify",
                    params=[("m", args.m or "file"), ("depth", args.depth),
                            ("ray_depth", args.ray_depth)])
    template, m = _load_template(args, report)
    trunc = tl.build_truncation(template, m, args.depth, cap=args.cap_vertices)
    handles = ends.thin_ray_prefixes(trunc, args.ray_depth)
    report.add_info("handles", str(len(handles)))
    kinds = sorted({ends.classify_end(trunc, h) for h in handles})
    report.add_info("kinds", ",".join(kinds))
    return _emit(report, args)


def cmd_ends_trichotomy(args):
    context = (ends.CONTEXT_ONE_ENDED if args.context == "one-ended"
               else ends.CONTEXT_CLOSED_PRIMITIVE)
    report = Report("ends-trichotomy",
                    params=[("m", args.m or "file"), ("depth", args.depth),
                            ("context", args.context),
                            ("ray_depth", args.ray_depth)])
    template, m = _load_template(args, report)
    trunc = tl.build_truncation(template, m, args.depth, cap=args.cap_vertices)
    handles = ends.thin_ray_prefixes(trunc, args.ray_depth)
    classes = sorted({ends.end_orbit_trichotomy(trunc, h, context).kind
                      for h in handles})
    report.add_info("handles", str(len(handles)))
    report.add_info("classes", ",".join(classes))
    report.add("single-class", PASS if len(classes) == 1 else FAIL,
               "ok" if len(classes) == 1 else "class_mismatch",
               ",".join(classes))
    return _emit(report, args)


def cmd_verify_examples(args):
    report = scenarios.verify_examples(radius=args.radius, depth=args.depth,
                                       witness_syllables=args.witness_syllables)
    return _emit(report, args)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orbigraph",
        description="Finite windows into infinite tree-like digraphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-analyze", help="orbits, suborbits and primitivity")
    p.add_argument("file")
    p.add_argument("--point", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_group_analyze)

    p = sub.add_parser("treelike-build", help="glue a lobe template into a truncation")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--write-graph", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_treelike_build)

    p = sub.add_parser("treelike-criterion", help="connectivity-one primitivity criterion")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_treelike_criterion)

    p = sub.add_parser("treelike-witness", help="coinciding-stabilizer witness search")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--depth", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_treelike_witness)

    p = sub.add_parser("amalgam-tree", help="coset tree of an amalgam spec")
    p.add_argument("file")
    p.add_argument("--radius", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_amalgam_tree)

    p = sub.add_parser("amalgam-elements", help="normal forms up to a syllable bound")
    p.add_argument("file")
    p.add_argument("--max-syllables", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_amalgam_elements)

    p = sub.add_parser("ends-report", help="end counts and orbit classes")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--radius", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_ends_report)

    p = sub.add_parser("ends-count", help="ends visible at one radius")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--radius", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_ends_count)

    p = sub.add_parser("ends-classify", help="thin/thick classification of handles")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--ray-depth", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_ends_classify)

    p = sub.add_parser("ends-trichotomy", help="end-orbit class under a context")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--ray-depth", type=int, default=2)
    p.add_argument("--context", choices=("closed-primitive", "one-ended"),
                   default="closed-primitive")
    _add_common(p)
    p.set_defaults(func=cmd_ends_trichotomy)

    p = sub.add_parser("verify-examples", help="run the bundled scenarios")
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--witness-syllables", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_verify_examples)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InputError, PreconditionError, CapacityError,
            ScaleError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
