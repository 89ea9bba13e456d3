import random

import pytest

from orbigraph.amalgams import (
    SIDE_A,
    SIDE_B,
    AmalgamSpec,
    act_on_tree,
    amalgam_from_text,
    amalgam_to_text,
    bass_serre_tree,
    fixes_node,
    partial_vertex_maps,
    vertex_stabilizer,
    violet_orbital_digraph,
)
from orbigraph.digraphs import cut_vertices_and_lobes, is_connected
from orbigraph.errors import CapacityError, InputError, ParseError
from orbigraph.permgroups import PermGroup, Permutation, symmetric_group
from orbigraph.scenarios import free_s2_s3_spec, k3_tree_amalgam_spec, s3_c6_amalgam_spec


def alternating_sequence_count(size_a, size_b, c_size, max_syllables):
    """Independent combinatorial count of normal forms."""
    total = c_size
    for k in range(1, max_syllables + 1):
        for start in (size_a, size_b):
            other = size_b if start is size_a else size_a
            count = 1
            for i in range(k):
                count *= start if i % 2 == 0 else other
            total += count * c_size
    return total


FLIP = Permutation.from_cycles(2, [(0, 1)])
ROT3 = Permutation.from_cycles(3, [(0, 1, 2)])


class TestSpecValidation:
    def test_free_product(self):
        spec = free_s2_s3_spec()
        assert spec.index_a == 2 and spec.index_b == 6 and spec.c_size() == 1

    def test_amalgam_indices(self):
        spec = k3_tree_amalgam_spec()
        assert spec.index_a == 2 and spec.index_b == 3 and spec.c_size() == 2

    def test_index_one_rejected(self):
        # C equal to a whole factor has index 1 there
        s2 = symmetric_group(2)
        s3 = symmetric_group(3)
        with pytest.raises(InputError):
            AmalgamSpec(s2, s3, [(FLIP, Permutation.from_cycles(3, [(0, 1)]))])

    def test_incompatible_embedding_rejected(self):
        # order-2 element paired with an order-3 element cannot close up
        a = PermGroup(4, (Permutation.from_cycles(4, [(0, 1)]),
                          Permutation.from_cycles(4, [(2, 3)])))
        with pytest.raises(InputError):
            AmalgamSpec(a, symmetric_group(3),
                        [(Permutation.from_cycles(4, [(2, 3)]), ROT3)])

    def test_membership_checked(self):
        a = PermGroup(4, (Permutation.from_cycles(4, [(0, 1)]),))
        outside = Permutation.from_cycles(4, [(1, 2)])
        with pytest.raises(InputError):
            AmalgamSpec(a, symmetric_group(3),
                        [(outside, Permutation.from_cycles(3, [(0, 1)]))])


class TestNormalize:
    def test_empty_word(self):
        spec = free_s2_s3_spec()
        elem = spec.normalize([])
        assert spec.is_identity(elem)

    def test_cancellation(self):
        spec = free_s2_s3_spec()
        elem = spec.normalize([(SIDE_A, FLIP), (SIDE_A, FLIP)])
        assert spec.is_identity(elem)

    def test_three_syllables(self):
        spec = free_s2_s3_spec()
        elem = spec.normalize([(SIDE_A, FLIP), (SIDE_B, ROT3), (SIDE_A, FLIP)])
        assert elem.syllable_count() == 3

    def test_letter_outside_factor(self):
        spec = free_s2_s3_spec()
        with pytest.raises(InputError):
            spec.normalize([(SIDE_A, ROT3)])


class TestMultiply:
    def test_identity_neutral(self):
        spec = free_s2_s3_spec()
        x = spec.normalize([(SIDE_A, FLIP), (SIDE_B, ROT3)])
        e = spec.identity_element()
        assert spec.multiply(x, e) == x
        assert spec.multiply(e, x) == x

    def test_inverse_cancels(self):
        spec = free_s2_s3_spec()
        x = spec.normalize([(SIDE_A, FLIP), (SIDE_B, ROT3)])
        assert spec.is_identity(spec.multiply(x, spec.inverse(x)))
        assert spec.is_identity(spec.multiply(spec.inverse(x), x))

    def test_hand_reduction(self):
        # (t s)(s^2 t) collapses: s s^2 = e, then t t = e
        spec = free_s2_s3_spec()
        x = spec.normalize([(SIDE_A, FLIP), (SIDE_B, ROT3)])
        y = spec.normalize([(SIDE_B, ROT3 * ROT3), (SIDE_A, FLIP)])
        assert spec.is_identity(spec.multiply(x, y))


class TestEnumeration:
    def test_counts_free_product(self):
        spec = free_s2_s3_spec()
        assert len(spec.enumerate_elements(0)) == 1
        assert len(spec.enumerate_elements(1)) == 7
        assert len(spec.enumerate_elements(2)) == 17

    def test_counts_match_formula(self):
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec(), s3_c6_amalgam_spec()):
            size_a = spec.index_a - 1
            size_b = spec.index_b - 1
            for k in range(4):
                expected = alternating_sequence_count(size_a, size_b,
                                                      spec.c_size(), k)
                assert len(spec.enumerate_elements(k)) == expected

    def test_cap(self):
        with pytest.raises(CapacityError):
            free_s2_s3_spec().enumerate_elements(9)


class TestGroupAxioms:
    def test_normal_form_uniqueness(self):
        # distinct normal forms are distinct elements: x * y^-1 != e
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec()):
            elems = spec.enumerate_elements(3)
            inverses = [spec.inverse(y) for y in elems]
            for i, x in enumerate(elems):
                for j, yinv in enumerate(inverses):
                    if i == j:
                        assert spec.is_identity(spec.multiply(x, yinv))
                    else:
                        assert not spec.is_identity(spec.multiply(x, yinv))

    def test_identity_and_inverse_exhaustive(self):
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec()):
            e = spec.identity_element()
            for x in spec.enumerate_elements(3):
                assert spec.multiply(x, e) == x
                assert spec.multiply(e, x) == x
                assert spec.is_identity(spec.multiply(x, spec.inverse(x)))

    def test_associativity_random_triples(self):
        rng = random.Random(13)
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec()):
            elems = spec.enumerate_elements(3)
            for _ in range(1000):
                x, y, z = (rng.choice(elems) for _ in range(3))
                left = spec.multiply(spec.multiply(x, y), z)
                right = spec.multiply(x, spec.multiply(y, z))
                assert left == right

    def test_uniqueness_extends_to_four_syllables(self):
        spec = free_s2_s3_spec()
        elems = spec.enumerate_elements(4)
        assert len(set(elems)) == len(elems)
        inverses = [spec.inverse(y) for y in elems]
        for i, x in enumerate(elems):
            for j, yinv in enumerate(inverses):
                if i != j:
                    assert not spec.is_identity(spec.multiply(x, yinv))


class TestCosetTree:
    def test_radius_zero(self):
        tree = bass_serre_tree(free_s2_s3_spec(), 0)
        assert len(tree.nodes) == 1

    def test_radius_one_node_count(self):
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec(), s3_c6_amalgam_spec()):
            tree = bass_serre_tree(spec, 1)
            assert len(tree.nodes) == 1 + spec.index_a

    def test_k3_tree_radius_two(self):
        tree = bass_serre_tree(k3_tree_amalgam_spec(), 2)
        root = tree.root()
        assert tree.degree(root.node_id) == 2
        children = tree.children(root.node_id)
        assert len(children) == 2
        for c in children:
            assert tree.degree(c) == 3
        grand = [g for c in children for g in tree.children(c)]
        assert len(grand) == 4

    def test_free_product_degrees(self):
        tree = bass_serre_tree(free_s2_s3_spec(), 3)
        for node in tree.interior_nodes():
            want = 2 if node.side == SIDE_A else 6
            assert tree.degree(node.node_id) == want

    def test_degree_law_three_specs(self):
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec(), s3_c6_amalgam_spec()):
            tree = bass_serre_tree(spec, 4)
            for node in tree.interior_nodes():
                want = spec.index_a if node.side == SIDE_A else spec.index_b
                assert tree.degree(node.node_id) == want

    def test_nodes_are_distinct_cosets(self):
        # oracle: canonical coset key = minimum sort key over coset members
        for spec in (free_s2_s3_spec(), k3_tree_amalgam_spec()):
            tree = bass_serre_tree(spec, 3)
            keys = set()
            for node in tree.nodes:
                members = []
                for perm in spec.factor_elements(node.side):
                    member = spec.multiply(node.rep,
                                           spec.normalize([(node.side, perm)]))
                    members.append(member.sort_key())
                key = (node.side, min(members))
                assert key not in keys
                keys.add(key)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            bass_serre_tree(free_s2_s3_spec(), 6, cap=20)


class TestTreeAction:
    def test_identity_fixes_everything(self):
        spec = k3_tree_amalgam_spec()
        tree = bass_serre_tree(spec, 3)
        e = spec.identity_element()
        for node in tree.nodes:
            assert act_on_tree(spec, tree, e, node.node_id) == node.node_id

    def test_factor_element_fixes_root(self):
        spec = free_s2_s3_spec()
        tree = bass_serre_tree(spec, 3)
        t = spec.normalize([(SIDE_A, FLIP)])
        assert act_on_tree(spec, tree, t, 0) == 0

    def test_rotation_cycles_root_neighbors(self):
        # the blue node adjacent to the root has three violet neighbors;
        # a 3-cycle of the S3 factor permutes them cyclically
        spec = k3_tree_amalgam_spec()
        tree = bass_serre_tree(spec, 3)
        b_root = next(n for n in tree.nodes if n.side == SIDE_B
                      and fixes_node(spec, spec.normalize([(SIDE_B, ROT3)]), n))
        s = spec.normalize([(SIDE_B, ROT3)])
        violets = [0] + [c for c in tree.children(b_root.node_id)]
        images = {v: act_on_tree(spec, tree, s, v) for v in violets}
        assert set(images.values()) == set(violets)
        # one 3-cycle, no fixed point
        assert all(images[v] != v for v in violets)

    def test_action_preserves_adjacency(self):
        spec = k3_tree_amalgam_spec()
        tree = bass_serre_tree(spec, 4)
        edges = set(tree.edges)
        for elem in spec.enumerate_elements(2):
            for p, c in tree.edges:
                ip = act_on_tree(spec, tree, elem, p)
                ic = act_on_tree(spec, tree, elem, c)
                if ip is None or ic is None:
                    continue
                assert (ip, ic) in edges or (ic, ip) in edges

    def test_faithful_at_radius_four(self):
        spec = free_s2_s3_spec()
        tree = bass_serre_tree(spec, 4)
        fixing_all = []
        for elem in spec.enumerate_elements(4):
            if all(fixes_node(spec, elem, n) for n in tree.nodes):
                fixing_all.append(elem)
        assert fixing_all == [spec.identity_element()]


class TestVertexStabilizer:
    def test_root_of_free_product(self):
        spec = free_s2_s3_spec()
        tree = bass_serre_tree(spec, 2)
        stab = vertex_stabilizer(spec, tree.root(), 3)
        assert len(stab) == 2  # identity and the flip

    def test_b_side_neighbor(self):
        spec = free_s2_s3_spec()
        tree = bass_serre_tree(spec, 2)
        b_node = tree.nodes[tree.children(0)[0]]
        stab = vertex_stabilizer(spec, b_node, 3)
        assert len(stab) == 6  # all of S3

    def test_c_part_only(self):
        spec = k3_tree_amalgam_spec()
        tree = bass_serre_tree(spec, 2)
        stab = vertex_stabilizer(spec, tree.root(), 0)
        assert len(stab) == spec.c_size()  # C fixes the root coset


class TestVioletDigraph:
    def test_k3_structure(self):
        spec = k3_tree_amalgam_spec()
        tree = bass_serre_tree(spec, 5)
        graph, index = violet_orbital_digraph(spec, tree,
                                              spec.enumerate_elements(7))
        assert is_connected(graph)
        cuts, lobes = cut_vertices_and_lobes(graph)
        interior = [v for v in range(graph.vertex_count)
                    if v not in graph.frontier_marks]
        assert all(v in cuts for v in interior)
        complete = [l for l in lobes if not l.touches(graph.frontier_marks)]
        assert complete and all(len(l.vertex_list) == 3 for l in complete)

    def test_partial_maps_cover_interior(self):
        spec = k3_tree_amalgam_spec()
        tree = bass_serre_tree(spec, 4)
        graph, index = violet_orbital_digraph(spec, tree,
                                              spec.enumerate_elements(6))
        maps = partial_vertex_maps(spec, tree, spec.enumerate_elements(1), index)
        assert len(maps) == len(spec.enumerate_elements(1))
        for m in maps:
            assert 0 in m  # shallow elements keep the root in range


class TestTextFormat:
    def test_roundtrip(self):
        spec = k3_tree_amalgam_spec()
        text = amalgam_to_text(spec)
        back = amalgam_from_text(text)
        assert back.index_a == spec.index_a
        assert back.index_b == spec.index_b
        assert back.c_size() == spec.c_size()

    def test_parse_error_line(self):
        with pytest.raises(ParseError):
            amalgam_from_text("factor A\ndegree 2\ng (0 1)\n")

    def test_common_separator_required(self):
        text = ("factor A\ndegree 2\ng (0 1)\nfactor B\ndegree 3\ng (0 1)\n"
                "g (0 1 2)\ncommon\nc 0 1 0 1\n")
        with pytest.raises(ParseError) as err:
            amalgam_from_text(text)
        assert "line 9" in str(err.value)
