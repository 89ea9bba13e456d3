"""Free products with amalgamation, at desk scale.

An amalgam A *_C B is described by two fully enumerable permutation
groups and an explicit list of pairs (image in A, image in B) for the
shared subgroup C.  Every group element has a unique normal form

    c * x1 * x2 * ... * xk

where c lies in C and the xi are representatives of non-trivial right
cosets (C a with a outside C), strictly alternating between the A side
and the B side.  Words are normalized right to left: each letter is
split as (C part) * (coset representative) and the C parts migrate
leftward through the chosen transversals until only the leading one is
left.  Representatives are the first element of each coset in sorted
enumeration order, which makes the identity represent C itself and all
output deterministic.

The coset tree (Bass-Serre tree) is generated to a bounded radius with
A- and B-cosets as nodes.  Node words use left-coset transversals: the
neighbors of the node g*A are the cosets g*t*B for t ranging over a left
transversal of C in A, so paths from the root are freely reduced words
and the generated graph is a tree by construction.  Elements act by left
translation; an image falling outside the generated radius is reported
with None rather than treated as an error, because the infinite object
simply continues past the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .digraphs import Digraph
from .errors import CapacityError, InputError, ParseError
from .permgroups import Permutation, group_from_text, group_to_text, parse_permutation

SIDE_A = "a"
SIDE_B = "b"
SYLLABLE_CAP = 8


def _other(side):
    return SIDE_B if side == SIDE_A else SIDE_A


@dataclass(frozen=True)
class AmalgamElement:
    """Normal form: C-part index plus alternating coset-representative syllables.

    Syllables are (side, index) pairs indexing the non-identity right
    transversal of that side; the empty syllable tuple with C-part 0 is
    the identity.
    """

    c_index: int
    syllables: tuple

    def syllable_count(self):
        return len(self.syllables)

    def sort_key(self):
        return (len(self.syllables), self.syllables, self.c_index)


class AmalgamSpec:
    """An amalgamated free product of two finite permutation groups."""

    def __init__(self, factor_a, factor_b, common, element_cap=100_000):
        self.factor_a = factor_a
        self.factor_b = factor_b
        elems_a, ok_a = factor_a.elements(element_cap)
        elems_b, ok_b = factor_b.elements(element_cap)
        if not (ok_a and ok_b):
            raise CapacityError("amalgam factors must be fully enumerable under the cap")
        self._elements = {SIDE_A: elems_a, SIDE_B: elems_b}
        set_a = {p.images for p in elems_a}
        set_b = {p.images for p in elems_b}

        pairs = [(pa, pb) for pa, pb in common]
        id_pair = (Permutation.identity(factor_a.degree),
                   Permutation.identity(factor_b.degree))
        if not any(pa.is_identity() and pb.is_identity() for pa, pb in pairs):
            pairs.append(id_pair)
        seen = set()
        cleaned = []
        for pa, pb in pairs:
            if pa.is_identity() != pb.is_identity():
                raise InputError("common subgroup pairs the identity with a non-identity")
            if pa.images not in set_a:
                raise InputError("common element %s does not lie in factor A" % pa)
            if pb.images not in set_b:
                raise InputError("common element %s does not lie in factor B" % pb)
            key = (pa.images, pb.images)
            if key in seen:
                continue
            seen.add(key)
            cleaned.append((pa, pb))
        cleaned.sort(key=lambda pr: pr[0].images)
        a_imgs = {pa.images for pa, _ in cleaned}
        b_imgs = {pb.images for _, pb in cleaned}
        if len(a_imgs) != len(cleaned) or len(b_imgs) != len(cleaned):
            raise InputError("common subgroup images must be distinct in each factor")
        self._c_pairs = tuple(cleaned)
        self._c_lookup = {SIDE_A: {pa.images: i for i, (pa, _) in enumerate(cleaned)},
                          SIDE_B: {pb.images: i for i, (_, pb) in enumerate(cleaned)}}
        # the pairing must be a homomorphism: products computed in A and in
        # B must land on the same pair, for all products of C's elements
        for i, (pa_i, pb_i) in enumerate(cleaned):
            for j, (pa_j, pb_j) in enumerate(cleaned):
                ka = self._c_lookup[SIDE_A].get((pa_i * pa_j).images)
                kb = self._c_lookup[SIDE_B].get((pb_i * pb_j).images)
                if ka is None or kb is None:
                    raise InputError("common subgroup is not closed under products")
                if ka != kb:
                    raise InputError("common subgroup embeddings are not compatible")
        self._c_identity = next(i for i, (pa, _) in enumerate(cleaned) if pa.is_identity())
        self._c_mul = tuple(tuple(self._c_lookup[SIDE_A][(cleaned[i][0] * cleaned[j][0]).images]
                                  for j in range(len(cleaned)))
                            for i in range(len(cleaned)))
        self._c_inv = tuple(self._c_lookup[SIDE_A][cleaned[i][0].inverse().images]
                            for i in range(len(cleaned)))

        self._right_reps = {}
        self._left_reps = {}
        self._decomp = {}
        for side in (SIDE_A, SIDE_B):
            self._build_transversals(side)
        self.index_a = len(self._right_reps[SIDE_A])
        self.index_b = len(self._right_reps[SIDE_B])
        if self.index_a < 2 or self.index_b < 2:
            raise InputError("the common subgroup must have index at least 2 in each factor")

    # -- construction helpers -------------------------------------------------

    def _c_perm(self, side, index):
        pa, pb = self._c_pairs[index]
        return pa if side == SIDE_A else pb

    def c_size(self):
        return len(self._c_pairs)

    def factor(self, side):
        return self.factor_a if side == SIDE_A else self.factor_b

    def factor_elements(self, side):
        return self._elements[side]

    def _build_transversals(self, side):
        c_perms = [self._c_perm(side, i) for i in range(len(self._c_pairs))]
        right_reps = []
        covered = set()
        for a in self._elements[side]:
            if a.images in covered:
                continue
            right_reps.append(a)
            for c in c_perms:
                covered.add((c * a).images)
        left_reps = []
        covered = set()
        for a in self._elements[side]:
            if a.images in covered:
                continue
            left_reps.append(a)
            for c in c_perms:
                covered.add((a * c).images)
        self._right_reps[side] = tuple(right_reps)
        self._left_reps[side] = tuple(left_reps)
        # decomposition table: element -> (c index, right-rep index or None)
        rep_index = {r.images: k for k, r in enumerate(right_reps)}
        table = {}
        for a in self._elements[side]:
            rep = None
            for r in right_reps:
                if (a * r.inverse()).images in self._c_lookup[side]:
                    rep = r
                    break
            c_idx = self._c_lookup[side][(a * rep.inverse()).images]
            k = rep_index[rep.images]
            table[a.images] = (c_idx, None if rep.is_identity() else k)
        self._decomp[side] = table

    def nonidentity_right_reps(self, side):
        return tuple(r for r in self._right_reps[side] if not r.is_identity())

    def left_transversal(self, side):
        """Left-coset representatives, identity first."""
        return self._left_reps[side]

    def _rep_perm(self, side, index):
        return self._right_reps[side][index]

    # -- normal form arithmetic ----------------------------------------------

    def identity_element(self):
        return AmalgamElement(self._c_identity, ())

    def is_identity(self, elem):
        return elem.c_index == self._c_identity and not elem.syllables

    def _decompose(self, side, perm):
        entry = self._decomp[side].get(perm.images)
        if entry is None:
            raise InputError("permutation %s is not an element of factor %s"
                             % (perm, side.upper()))
        return entry

    def _syllable_index(self, side, rep):
        for k, r in enumerate(self._right_reps[side]):
            if r.images == rep.images:
                return k
        raise InputError("not a representative")

    def _letter_times(self, side, perm, elem):
        """Normal form of (perm as element of `side`) * elem."""
        acc = perm * self._c_perm(side, elem.c_index)
        syllables = elem.syllables
        if syllables and syllables[0][0] == side:
            acc = acc * self._rep_perm(side, syllables[0][1])
            syllables = syllables[1:]
        c_idx, rep_idx = self._decompose(side, acc)
        if rep_idx is None:
            if not syllables:
                return AmalgamElement(c_idx, ())
            nxt_side, nxt_rep = syllables[0]
            merged = self._c_perm(nxt_side, c_idx) * self._rep_perm(nxt_side, nxt_rep)
            return self._letter_times(nxt_side, merged,
                                      AmalgamElement(self._c_identity, syllables[1:]))
        return AmalgamElement(c_idx, ((side, rep_idx),) + syllables)

    def normalize(self, word):
        """Normal form of a word of (side, permutation) letters."""
        elem = self.identity_element()
        for side, perm in reversed(list(word)):
            if side not in (SIDE_A, SIDE_B):
                raise InputError("letter side must be %r or %r" % (SIDE_A, SIDE_B))
            elem = self._letter_times(side, perm, elem)
        return elem

    def letters(self, elem):
        """The element as a word of factor letters, C part first."""
        out = []
        if elem.c_index != self._c_identity:
            out.append((SIDE_A, self._c_perm(SIDE_A, elem.c_index)))
        for side, rep_idx in elem.syllables:
            out.append((side, self._rep_perm(side, rep_idx)))
        return out

    def multiply(self, x, y):
        for side, perm in reversed(self.letters(x)):
            y = self._letter_times(side, perm, y)
        return y

    def inverse(self, elem):
        word = [(side, self._rep_perm(side, idx).inverse())
                for side, idx in reversed(elem.syllables)]
        if elem.c_index != self._c_identity:
            word.append((SIDE_A, self._c_perm(SIDE_A, elem.c_index).inverse()))
        return self.normalize(word)

    def in_factor(self, elem, side):
        """True iff the element lies in the given factor subgroup."""
        if not elem.syllables:
            return True
        return len(elem.syllables) == 1 and elem.syllables[0][0] == side

    def factor_image(self, elem, side):
        """The element as a permutation of the given factor; requires in_factor."""
        if not self.in_factor(elem, side):
            raise InputError("element is not in factor %s" % side.upper())
        perm = self._c_perm(side, elem.c_index)
        if elem.syllables:
            perm = perm * self._rep_perm(side, elem.syllables[0][1])
        return perm

    def enumerate_elements(self, max_syllables, cap=100_000):
        """All normal forms with at most the given number of syllables.

        Ordered by (syllable count, syllables, C index); the count is
        |C| times the number of alternating representative sequences.
        """
        if max_syllables > SYLLABLE_CAP:
            raise CapacityError("syllable bound %d exceeds cap %d"
                                % (max_syllables, SYLLABLE_CAP))
        sizes = {SIDE_A: len(self.nonidentity_right_reps(SIDE_A)),
                 SIDE_B: len(self.nonidentity_right_reps(SIDE_B))}
        total = 0
        shapes = []
        for k in range(max_syllables + 1):
            for start in (SIDE_A, SIDE_B):
                if k == 0 and start == SIDE_B:
                    continue
                sides = [start if i % 2 == 0 else _other(start) for i in range(k)]
                count = 1
                for s in sides:
                    count *= sizes[s]
                if k > 0:
                    total += count * self.c_size()
                else:
                    total += self.c_size()
                shapes.append(sides)
        if total > cap:
            raise CapacityError("element enumeration would produce %d > %d elements"
                                % (total, cap))
        nonid_index = {side: [self._syllable_index(side, r)
                              for r in self.nonidentity_right_reps(side)]
                       for side in (SIDE_A, SIDE_B)}
        out = []
        for sides in shapes:
            if not sides:
                for c in range(self.c_size()):
                    out.append(AmalgamElement(c, ()))
                continue
            for combo in product(*(nonid_index[s] for s in sides)):
                syll = tuple(zip(sides, combo))
                for c in range(self.c_size()):
                    out.append(AmalgamElement(c, syll))
        out.sort(key=lambda e: e.sort_key())
        return out

    def format_element(self, elem):
        if self.is_identity(elem):
            return "e"
        parts = []
        if elem.c_index != self._c_identity:
            parts.append("c%d" % elem.c_index)
        parts.extend("%s%d" % (side, idx) for side, idx in elem.syllables)
        return ".".join(parts)


# -- coset tree ---------------------------------------------------------------


@dataclass(frozen=True)
class CosetTreeNode:
    node_id: int
    side: str
    depth: int
    rep: AmalgamElement
    parent: int
    frontier: bool


@dataclass(frozen=True)
class CosetTree:
    radius: int
    nodes: tuple
    edges: tuple

    def root(self):
        return self.nodes[0]

    def children(self, node_id):
        return tuple(c for p, c in self.edges if p == node_id)

    def degree(self, node_id):
        deg = sum(1 for p, c in self.edges if p == node_id or c == node_id)
        return deg

    def side_nodes(self, side):
        return tuple(n for n in self.nodes if n.side == side)

    def interior_nodes(self):
        return tuple(n for n in self.nodes if not n.frontier)


def bass_serre_tree(spec, radius, cap=100_000):
    """Coset tree truncation rooted at the coset A.

    Interior A-side nodes have degree |A:C| and B-side nodes |B:C|; nodes
    at the radius are tagged as frontier.
    """
    if radius < 0:
        raise InputError("radius must be non-negative")
    nodes = [CosetTreeNode(0, SIDE_A, 0, spec.identity_element(), -1, radius == 0)]
    edges = []
    frontier = [nodes[0]]
    for depth in range(1, radius + 1):
        nxt = []
        for node in frontier:
            side = node.side
            new_side = _other(side)
            for t in spec.left_transversal(side):
                if t.is_identity():
                    if node.parent != -1:
                        continue  # identity step walks back to the parent
                    child_rep = node.rep
                else:
                    child_rep = spec.multiply(node.rep, spec.normalize([(side, t)]))
                if len(nodes) >= cap:
                    raise CapacityError("coset tree exceeded %d nodes" % cap)
                child = CosetTreeNode(len(nodes), new_side, depth, child_rep,
                                      node.node_id, depth == radius)
                nodes.append(child)
                edges.append((node.node_id, child.node_id))
                nxt.append(child)
        frontier = nxt
    return CosetTree(radius, tuple(nodes), tuple(edges))


def same_coset(spec, x, y, side):
    """True iff x and y represent the same left coset of the side factor."""
    return spec.in_factor(spec.multiply(spec.inverse(x), y), side)


def act_on_tree(spec, tree, elem, node_id):
    """Left translation of a coset node; None when the image leaves the window."""
    node = tree.nodes[node_id]
    target = spec.multiply(elem, node.rep)
    for cand in tree.nodes:
        if cand.side != node.side:
            continue
        if spec.in_factor(spec.multiply(spec.inverse(cand.rep), target), node.side):
            return cand.node_id
    return None


def fixes_node(spec, elem, node):
    """True iff the element stabilizes the node's coset (window independent)."""
    conj = spec.multiply(spec.multiply(spec.inverse(node.rep), elem), node.rep)
    return spec.in_factor(conj, node.side)


def vertex_stabilizer(spec, node, max_syllables):
    """All enumerated elements fixing the node, up to the syllable bound."""
    return [e for e in spec.enumerate_elements(max_syllables)
            if fixes_node(spec, e, node)]


def violet_orbital_digraph(spec, tree, elements, base=None):
    """Digraph on the A-side (violet) nodes of the coset tree.

    The arc set is the orbit of a base pair of violet nodes at tree
    distance two under the supplied elements; images leaving the window
    are skipped.  Violet nodes too close to the tree frontier to carry
    their full arc neighborhood are flagged.  Returns the digraph and the
    node id -> vertex id mapping.
    """
    violets = [n for n in tree.nodes if n.side == SIDE_A]
    index = {n.node_id: i for i, n in enumerate(violets)}
    if base is None:
        root = tree.nodes[0]
        blues = tree.children(root.node_id)
        if not blues:
            raise InputError("tree radius too small for a base pair")
        grand = tree.children(blues[0])
        if not grand:
            raise InputError("tree radius too small for a base pair")
        base = (root.node_id, grand[0])
    bu, bv = base
    arcs = set()
    for elem in elements:
        iu = act_on_tree(spec, tree, elem, bu)
        iv = act_on_tree(spec, tree, elem, bv)
        if iu is None or iv is None:
            continue
        arcs.add((index[iu], index[iv]))
    frontier = frozenset(index[n.node_id] for n in violets
                         if n.depth >= tree.radius - 1)
    graph = Digraph(len(violets), frozenset(arcs), frontier)
    return graph, index


def partial_vertex_maps(spec, tree, elements, node_index):
    """Each element as a partial map on the violet digraph's vertices.

    Entries are present only where the image stays inside the window.
    """
    by_vertex = sorted(node_index.items(), key=lambda kv: kv[1])
    maps = []
    for elem in elements:
        m = {}
        for node_id, vertex in by_vertex:
            img = act_on_tree(spec, tree, elem, node_id)
            if img is not None:
                m[vertex] = node_index[img]
        maps.append(m)
    return maps


# -- text format ---------------------------------------------------------------


def amalgam_from_text(text):
    """Parse an amalgam spec file.

    Layout: 'factor A' followed by a group block, 'factor B' and a group
    block, then 'common' with one 'c <perm in A> ; <perm in B>' line per
    non-identity element of the shared subgroup.
    """
    section = None
    blocks = {"A": [], "B": []}
    common_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("factor"):
            fields = line.split()
            if len(fields) != 2 or fields[1].upper() not in ("A", "B"):
                raise ParseError("expected 'factor A' or 'factor B'", lineno)
            section = fields[1].upper()
            continue
        if low == "common":
            section = "common"
            continue
        if section in ("A", "B"):
            blocks[section].append(line)
        elif section == "common":
            common_lines.append((lineno, line))
        else:
            raise ParseError("content before any 'factor' header", lineno)
    if not blocks["A"] or not blocks["B"]:
        raise ParseError("both factor blocks are required")
    factor_a = group_from_text("\n".join(blocks["A"]))
    factor_b = group_from_text("\n".join(blocks["B"]))
    pairs = []
    for lineno, line in common_lines:
        if not line.startswith("c"):
            raise ParseError("expected 'c <perm> ; <perm>'", lineno)
        body = line[1:].strip()
        if ";" not in body:
            raise ParseError("common line needs ';' separating the two images", lineno)
        left, right = body.split(";", 1)
        try:
            pa = parse_permutation(left.strip(), factor_a.degree)
            pb = parse_permutation(right.strip(), factor_b.degree)
        except (ParseError, InputError) as exc:
            raise ParseError(str(exc), lineno)
        pairs.append((pa, pb))
    return AmalgamSpec(factor_a, factor_b, pairs)


def amalgam_to_text(spec):
    lines = ["factor A"]
    lines.append(group_to_text(spec.factor_a).rstrip("\n"))
    lines.append("factor B")
    lines.append(group_to_text(spec.factor_b).rstrip("\n"))
    lines.append("common")
    for i in range(spec.c_size()):
        pa = spec._c_perm(SIDE_A, i)
        pb = spec._c_perm(SIDE_B, i)
        if pa.is_identity():
            continue
        lines.append("c %s ; %s" % (" ".join(map(str, pa.images)),
                                    " ".join(map(str, pb.images))))
    return "\n".join(lines) + "\n"
