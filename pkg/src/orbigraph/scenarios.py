"""Bundled end-to-end scenarios and their fixture builders.

Two scenarios exercise the whole stack against known ground truth:

* k3-tree: the amalgam of a Klein four-group and S3 over a shared
  order-two subgroup acts on a (2,3)-biregular coset tree; the distance
  two orbital construction on the valency-two side yields the
  connectivity-one digraph with complete-triangle lobes, two per vertex.
  The amalgam's element list admits a coinciding-stabilizer witness
  (that group acts imprimitively) while the full automorphism group
  criterion still reports primitive.

* c5-tree: directed five-cycle lobes, three per vertex, are rejected by
  the criterion (odd prime directed cycle) yet every thin end carries a
  continuum-class orbit under the closed-primitive tree-like context.

A third scenario slot records the countable dense subgroup construction
as out of scope: it lives in the topology of infinite groups and has no
finite-scale counterpart here.
"""

from __future__ import annotations

from . import amalgams as am
from . import ends
from . import treelike as tl
from .digraphs import complete_digraph, cut_vertices_and_lobes, digraph_isomorphic, directed_cycle, is_connected
from .permgroups import PermGroup, Permutation, cyclic_group, symmetric_group
from .report import FAIL, PASS, Report, SKIP, Verdict

REASON_OK = "ok"
REASON_VALENCY_MISMATCH = "valency_mismatch"
REASON_NOT_CONNECTIVITY_ONE = "not_connectivity_one"
REASON_LOBE_MISMATCH = "lobe_mismatch"
REASON_LOBE_COUNT_MISMATCH = "lobe_count_mismatch"
REASON_WITNESS_FOUND = "witness_found"
REASON_WITNESS_MISSING = "witness_missing"
REASON_CRITERION_MISMATCH = "criterion_mismatch"
REASON_CLASS_MISMATCH = "class_mismatch"
REASON_NOT_MONOTONE = "not_monotone"
REASON_OUT_OF_SCOPE = "out_of_scope_closure_construction"


def k3_template():
    return tl.LobeTemplate(complete_digraph(3))


def c5_template():
    return tl.LobeTemplate(directed_cycle(5))


def k4_template():
    return tl.LobeTemplate(complete_digraph(4))


def k3_tree_amalgam_spec():
    """Klein four-group amalgamated with S3 over a shared order-2 subgroup.

    Factor A is generated by two commuting transpositions; the second one
    is identified with a point stabilizer of S3.  Indices are |A:C| = 2
    and |B:C| = 3, so the coset tree is the (2,3)-biregular tree.
    """
    a = PermGroup(4, (Permutation.from_cycles(4, [(0, 1)]),
                      Permutation.from_cycles(4, [(2, 3)])))
    b = symmetric_group(3)
    pair = (Permutation.from_cycles(4, [(2, 3)]),
            Permutation.from_cycles(3, [(0, 1)]))
    return am.AmalgamSpec(a, b, [pair])


def free_s2_s3_spec():
    """The plain free product of S2 and S3 (trivial shared subgroup)."""
    return am.AmalgamSpec(symmetric_group(2), symmetric_group(3), [])


def s3_c6_amalgam_spec():
    """S3 amalgamated with the cyclic group of order 6 over Z3."""
    a = symmetric_group(3)
    b = cyclic_group(6)
    rot3_in_a = Permutation.from_cycles(3, [(0, 1, 2)])
    rot3_in_b = Permutation.from_cycles(6, [(0, 2, 4), (1, 3, 5)])
    return am.AmalgamSpec(a, b, [(rot3_in_a, rot3_in_b),
                                 (rot3_in_a * rot3_in_a, rot3_in_b * rot3_in_b)])


def _check(name, ok, good_reason, bad_reason, detail=""):
    return Verdict(name, PASS if ok else FAIL,
                   good_reason if ok else bad_reason, detail)


def run_k3_tree_scenario(radius=5, witness_syllables=4, compare_template=None):
    """The k3-tree pipeline; returns the verdict list.

    compare_template replaces the lobe shape the pipeline checks against
    (used as a corruption control by the tests).
    """
    verdicts = []
    template = compare_template if compare_template is not None else k3_template()
    spec = k3_tree_amalgam_spec()
    tree = am.bass_serre_tree(spec, radius)

    a_ok = all(tree.degree(n.node_id) == 2 for n in tree.interior_nodes()
               if n.side == am.SIDE_A)
    b_ok = all(tree.degree(n.node_id) == 3 for n in tree.interior_nodes()
               if n.side == am.SIDE_B)
    verdicts.append(_check("tree-valencies", a_ok and b_ok,
                           REASON_OK, REASON_VALENCY_MISMATCH,
                           "radius=%d violet=2 blue=3" % radius))

    arc_elements = spec.enumerate_elements(min(radius + 2, am.SYLLABLE_CAP))
    graph, node_index = am.violet_orbital_digraph(spec, tree, arc_elements)
    interior = [v for v in range(graph.vertex_count)
                if v not in graph.frontier_marks]
    cuts, lobes = cut_vertices_and_lobes(graph)
    conn_ok = is_connected(graph) and all(v in cuts for v in interior)
    verdicts.append(_check("connectivity-one", conn_ok,
                           REASON_OK, REASON_NOT_CONNECTIVITY_ONE,
                           "vertices=%d" % graph.vertex_count))

    complete = [l for l in lobes if not l.touches(graph.frontier_marks)]
    iso_ok = bool(complete) and all(
        digraph_isomorphic(l.as_digraph(), template.lobe) is not None
        for l in complete)
    verdicts.append(_check("lobes-isomorphic", iso_ok,
                           REASON_OK, REASON_LOBE_MISMATCH,
                           "complete_lobes=%d" % len(complete)))

    trunc = tl.truncation_from_digraph(graph, k3_template(), 2)
    membership_ok = all(trunc.tree.blue_degree(v) == 2 for v in interior)
    verdicts.append(_check("lobe-membership", membership_ok,
                           REASON_OK, REASON_LOBE_COUNT_MISMATCH, "m=2"))

    witness_elements = spec.enumerate_elements(witness_syllables)
    maps = am.partial_vertex_maps(spec, tree, witness_elements, node_index)
    outcome = tl.imprimitivity_witness_search(trunc, maps)
    found = outcome.status == tl.STATUS_FOUND
    detail = ("alpha=%s beta=%s x=%s:%s syllables<=%d"
              % (outcome.alpha, outcome.beta, outcome.x_kind, outcome.x_id,
                 witness_syllables)) if found else "syllables<=%d" % witness_syllables
    verdicts.append(_check("stabilizer-witness", found,
                           REASON_WITNESS_FOUND, REASON_WITNESS_MISSING, detail))

    crit = tl.connectivity_one_primitivity_criterion(k3_template(), 2)
    verdicts.append(_check("criterion-primitive", crit.is_primitive(),
                           REASON_OK, REASON_CRITERION_MISMATCH,
                           "verdict=%s" % crit.verdict))
    return verdicts


def run_c5_tree_scenario(depth=3, ray_depth=2):
    """The c5-tree pipeline; returns the verdict list."""
    verdicts = []
    template = c5_template()
    crit = tl.connectivity_one_primitivity_criterion(template, 3)
    crit_ok = (not crit.is_primitive()
               and crit.reasons == (tl.REASON_ODD_PRIME_CYCLE,))
    verdicts.append(_check("criterion-imprimitive", crit_ok,
                           tl.REASON_ODD_PRIME_CYCLE, REASON_CRITERION_MISMATCH,
                           "verdict=%s reasons=%s" % (crit.verdict, ",".join(crit.reasons))))

    trunc = tl.build_truncation(template, 3, depth)
    handles = ends.thin_ray_prefixes(trunc, ray_depth)
    classes = {ends.end_orbit_trichotomy(trunc, h, ends.CONTEXT_CLOSED_PRIMITIVE).kind
               for h in handles}
    tri_ok = classes == {ends.CLASS_CONTINUUM}
    verdicts.append(_check("trichotomy-continuum", tri_ok,
                           REASON_OK, REASON_CLASS_MISMATCH,
                           "handles=%d depth=%d" % (len(handles), ray_depth)))

    counts = ends.end_count_sequence(trunc.graph, trunc.root, max(1, depth - 1))
    mono_ok = all(a <= b for a, b in zip(counts, counts[1:]))
    verdicts.append(_check("end-counts-monotone", mono_ok,
                           REASON_OK, REASON_NOT_MONOTONE,
                           "counts=%s" % ",".join(map(str, counts))))
    return verdicts


def run_dense_subgroup_scenario():
    """Recorded as out of scope: needs closures of infinite groups."""
    return [Verdict("closure-construction", SKIP, REASON_OUT_OF_SCOPE,
                    "countable dense subgroups live in the permutation "
                    "topology; no finite-scale counterpart")]


def verify_examples(radius=5, depth=3, witness_syllables=4):
    """Run the three bundled scenarios into one report."""
    report = Report("verify-examples",
                    params=[("radius", radius), ("depth", depth),
                            ("witness_syllables", witness_syllables)])
    report.extend(run_k3_tree_scenario(radius, witness_syllables), "k3-tree.")
    report.extend(run_c5_tree_scenario(depth), "c5-tree.")
    report.extend(run_dense_subgroup_scenario(), "dense-subgroup.")
    return report
