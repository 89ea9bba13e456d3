"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are exact matches unless a time bound is stated.
"""

import random
import time

from orbigraph.digraphs import complete_digraph, directed_cycle, z_grading
from orbigraph.ends import (
    CLASS_CONTINUUM,
    CLASS_COUNTABLE,
    CLASS_SINGLE,
    CONTEXT_CLOSED_PRIMITIVE,
    CONTEXT_ONE_ENDED,
    THICK,
    THIN,
    canonical_ray,
    classify_end,
    end_count_sequence,
    end_orbit_prefix_growth,
    end_orbit_trichotomy,
    thick_lobe_handles,
    thin_ray_prefixes,
)
from orbigraph.permgroups import (
    PermGroup,
    Permutation,
    cyclic_group,
    dihedral_group,
    find_block_system,
    is_primitive_higman,
    symmetric_group,
)
from orbigraph.report import PASS
from orbigraph.scenarios import (
    free_s2_s3_spec,
    k3_tree_amalgam_spec,
    run_k3_tree_scenario,
)
from orbigraph.treelike import (
    LobeTemplate,
    build_truncation,
    connectivity_one_primitivity_criterion,
    truncation_automorphisms,
)

from test_digraphs import random_connected_digraph
from test_ends import grid_template, oracle_component_count
from test_permgroups import random_transitive_group
from test_treelike import oracle_vertex_count

K3 = LobeTemplate(complete_digraph(3))
C5 = LobeTemplate(directed_cycle(5))
K4 = LobeTemplate(complete_digraph(4))


def announce(number, name, ok, detail=""):
    line = "ACCEPTANCE %d %s: %s" % (number, name, "PASS" if ok else "FAIL")
    if detail:
        line += " (%s)" % detail
    print(line)
    assert ok, line


def test_criterion_1_k3_tree_pipeline():
    start = time.perf_counter()
    verdicts = run_k3_tree_scenario(radius=5, witness_syllables=4)
    elapsed = time.perf_counter() - start
    outcomes = {v.name: v.outcome for v in verdicts}
    expected = {"tree-valencies": PASS, "connectivity-one": PASS,
                "lobes-isomorphic": PASS, "lobe-membership": PASS,
                "stabilizer-witness": PASS, "criterion-primitive": PASS}
    announce(1, "k3-tree pipeline", outcomes == expected and elapsed < 10.0,
             "%.2fs, stages=%d" % (elapsed, len(verdicts)))


def test_criterion_2_c5_tree_reproduction():
    start = time.perf_counter()
    crit = connectivity_one_primitivity_criterion(C5, 3)
    crit_ok = (crit.verdict == "imprimitive"
               and crit.reasons == ("lobe_is_odd_prime_directed_cycle",))
    trunc = build_truncation(C5, 3, 3)
    handles = [h for d in (1, 2) for h in thin_ray_prefixes(trunc, d)]
    classes = {end_orbit_trichotomy(trunc, h, CONTEXT_CLOSED_PRIMITIVE).kind
               for h in handles}
    elapsed = time.perf_counter() - start
    announce(2, "c5-tree reproduction",
             crit_ok and classes == {CLASS_CONTINUUM} and elapsed < 5.0,
             "%.2fs, handles=%d" % (elapsed, len(handles)))


def test_criterion_3_primitivity_oracle_agreement():
    start = time.perf_counter()
    rng = random.Random(101)
    agree = 0
    total = 120
    for _ in range(total):
        group = random_transitive_group(rng, max_degree=10)
        if is_primitive_higman(group) == (find_block_system(group) is None):
            agree += 1
    elapsed = time.perf_counter() - start
    announce(3, "higman/block-system agreement",
             agree == total and elapsed < 60.0,
             "%d/%d in %.2fs" % (agree, total, elapsed))


def twenty_transitive_groups():
    groups = [cyclic_group(n) for n in range(2, 9)]          # 7
    groups += [dihedral_group(n) for n in range(3, 9)]       # 6
    groups += [symmetric_group(n) for n in (3, 4, 5)]        # 3
    groups.append(PermGroup(4, (Permutation.from_cycles(4, [(0, 1, 2)]),
                                Permutation.from_cycles(4, [(1, 2, 3)]))))  # A4
    groups.append(PermGroup(4, (Permutation.from_cycles(4, [(0, 1), (2, 3)]),
                                Permutation.from_cycles(4, [(0, 2), (1, 3)]))))
    groups.append(PermGroup(6, (Permutation.from_cycles(6, [(0, 1, 2), (3, 4, 5)]),
                                Permutation.from_cycles(6, [(0, 3), (1, 5), (2, 4)]))))
    groups.append(PermGroup(9, (Permutation.from_cycles(9, [(0, 3, 6), (1, 4, 7), (2, 5, 8)]),
                                Permutation.from_cycles(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8)]))))
    return groups


def test_criterion_4_paired_subdegrees():
    groups = twenty_transitive_groups()
    assert len(groups) == 20
    ok = True
    for group in groups:
        assert group.is_transitive()
        for a, b in group.paired_subdegrees(0):
            if a != b:
                ok = False
    announce(4, "paired suborbits equal sizes", ok, "groups=20")


def test_criterion_5_amalgam_algebra():
    free = free_s2_s3_spec()
    k3spec = k3_tree_amalgam_spec()
    assert k3spec.c_size() == 2

    counts_ok = (len(free.enumerate_elements(0)) == 1
                 and len(free.enumerate_elements(1)) == 7
                 and len(free.enumerate_elements(2)) == 17)

    axioms_ok = True
    for spec in (free, k3spec):
        elems = spec.enumerate_elements(3)
        e = spec.identity_element()
        inverses = {x: spec.inverse(x) for x in elems}
        for x in elems:
            if spec.multiply(x, e) != x or spec.multiply(e, x) != x:
                axioms_ok = False
            if not spec.is_identity(spec.multiply(x, inverses[x])):
                axioms_ok = False
        # normal-form uniqueness: distinct forms are distinct elements
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                is_id = spec.is_identity(spec.multiply(x, inverses[y]))
                if is_id != (i == j):
                    axioms_ok = False
        # associativity, exhaustively at this syllable bound
        for x in elems:
            for y in elems:
                xy = spec.multiply(x, y)
                for z in elems:
                    if spec.multiply(xy, z) != spec.multiply(x, spec.multiply(y, z)):
                        axioms_ok = False
    announce(5, "amalgam algebra", counts_ok and axioms_ok,
             "specs=2, exhaustive at <=3 syllables")


def test_criterion_6_truncation_structure():
    from orbigraph.digraphs import block_cut_vertex_tree

    ok = True
    cases = 0
    for template in (K3, C5, K4):
        for m in (2, 3):
            for depth in (1, 2, 3):
                cases += 1
                trunc = build_truncation(template, m, depth)
                if trunc.graph.vertex_count != oracle_vertex_count(
                        template.size(), m, depth):
                    ok = False
                for v in trunc.interior_vertices():
                    if trunc.tree.blue_degree(v) != m:
                        ok = False
                if block_cut_vertex_tree(trunc.graph) != trunc.tree:
                    ok = False
    announce(6, "truncation structure", ok, "cases=%d" % cases)


def test_criterion_7_end_counting():
    corpus = [build_truncation(K3, 2, 5), build_truncation(C5, 3, 3),
              build_truncation(K4, 2, 3)]
    radii = [4, 2, 2]
    mono_ok = True
    for trunc, r_max in zip(corpus, radii):
        counts = end_count_sequence(trunc.graph, trunc.root, r_max)
        if any(a > b for a, b in zip(counts, counts[1:])):
            mono_ok = False

    trunc = build_truncation(K3, 2, 6)
    golden = [4, 8, 16]
    counts = end_count_sequence(trunc.graph, trunc.root, 3)
    golden_ok = counts == golden
    oracle_ok = all(counts[r - 1] == oracle_component_count(trunc.graph, trunc.root, r)
                    for r in (1, 2, 3))

    gens = truncation_automorphisms(trunc)
    table = end_orbit_prefix_growth(trunc, canonical_ray(trunc, 5),
                                    list(gens), 5, generate=True).as_dict()
    doubling_ok = all(table[d + 1] >= 2 * table[d] for d in range(1, 5))
    announce(7, "end counting", mono_ok and golden_ok and oracle_ok and doubling_ok,
             "counts=%s growth=%s" % (counts, sorted(table.values())))


def test_criterion_8_trichotomy_fuzz():
    rng = random.Random(4242)
    pool = [build_truncation(K3, 2, 3), build_truncation(C5, 3, 2),
            build_truncation(K4, 2, 2), build_truncation(grid_template(), 2, 2)]
    ok = True
    for _ in range(500):
        trunc = rng.choice(pool)
        if trunc.template.declared_end_count == 1 and rng.random() < 0.4:
            handle = rng.choice(thick_lobe_handles(trunc))
            context = CONTEXT_CLOSED_PRIMITIVE
        else:
            depth = rng.randrange(1, trunc.depth + 1)
            handle = rng.choice(thin_ray_prefixes(trunc, depth))
            context = (CONTEXT_ONE_ENDED if rng.random() < 0.3
                       else CONTEXT_CLOSED_PRIMITIVE)
        verdict = end_orbit_trichotomy(trunc, handle, context)
        if verdict.kind not in (CLASS_SINGLE, CLASS_COUNTABLE, CLASS_CONTINUUM):
            ok = False
        kind = classify_end(trunc, handle)
        if kind == THICK and verdict.kind != CLASS_COUNTABLE:
            ok = False
        if (kind == THIN and context == CONTEXT_CLOSED_PRIMITIVE
                and verdict.kind != CLASS_CONTINUUM):
            ok = False
        if context == CONTEXT_ONE_ENDED and verdict.kind != CLASS_SINGLE:
            ok = False
    announce(8, "trichotomy totality and exclusivity", ok, "triples=500")


def test_criterion_9_z_grading():
    ok = True
    for n in (3, 5, 7, 9, 11, 13):
        if z_grading(directed_cycle(n)) is not None:
            ok = False
    rng = random.Random(77)
    returned = 0
    for _ in range(400):
        g = random_connected_digraph(rng, rng.randrange(2, 14), extra=0.7)
        lvl = z_grading(g)
        if lvl is None:
            continue
        returned += 1
        for u, v in g.arcs:
            if lvl[v] != lvl[u] + 1:
                ok = False
    announce(9, "z-grading law", ok and returned > 0,
             "gradings_checked=%d" % returned)
