"""Radius-bounded truncations of tree-like digraphs built from one lobe shape.

A lobe template (a finite cut-vertex-free digraph, at least two vertices)
is glued into a connectivity-one digraph in which every interior vertex
lies in exactly m lobe copies: the root vertex receives m copies, and
every newly created vertex receives m-1 further copies, generation by
generation out to a fixed depth.  Vertices of the last generation are
flagged as truncation frontier.

On top of the builder sit the two decision procedures for such graphs:
the primitivity criterion for the full automorphism group (lobes must be
primitive, at least three vertices, and not directed cycles of odd prime
length), and a witness search for imprimitivity of a *given* symmetry
list, looking for two vertices whose pair stabilizers coincide at some
tree node between them.  Stabilizer comparisons are always relative to
the supplied finite element list; a reported witness is a statement about
that list at this scale, never about an abstract infinite group.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraphs import (
    Digraph,
    block_cut_vertex_tree,
    cut_vertices_and_lobes,
    digraph_from_text,
    distances_from,
    enumerate_automorphisms,
    is_connected,
    pinned_isomorphism,
)
from .errors import CapacityError, InputError, ParseError, PreconditionError
from .permgroups import PermGroup, Permutation, parse_permutation

VERTEX_CAP = 100_000
DEPTH_CAP = 8

VERDICT_PRIMITIVE = "primitive"
VERDICT_IMPRIMITIVE = "imprimitive"

REASON_LOBE_NOT_PRIMITIVE = "lobe_not_primitive"
REASON_ODD_PRIME_CYCLE = "lobe_is_odd_prime_directed_cycle"
REASON_LOBE_TOO_SMALL = "lobe_too_small"


@dataclass(frozen=True)
class LobeTemplate:
    """The single lobe shape a tree-like digraph is glued from.

    declared_end_count records whether the (infinite) lobe the template
    stands for has no end or one end.  One-ended lobes are supported only
    through a ball family: a procedure producing the radius-k ball of the
    infinite lobe, with the stored digraph as a representative window.
    """

    lobe: Digraph
    declared_end_count: int = 0
    automorphisms: tuple = None
    ball_family: object = None

    def __post_init__(self):
        g = self.lobe
        if g.vertex_count < 2:
            raise InputError("a lobe template needs at least 2 vertices")
        if not is_connected(g):
            raise InputError("a lobe template must be connected")
        cuts, lobes = cut_vertices_and_lobes(g)
        if cuts:
            raise InputError("a lobe template must not contain a cut vertex")
        if self.declared_end_count not in (0, 1):
            raise InputError("declared_end_count must be 0 or 1")
        if self.declared_end_count == 1 and self.ball_family is None:
            raise InputError("a one-ended template needs a ball family generator")
        if self.automorphisms is not None:
            autos = tuple(self.automorphisms)
            for p in autos:
                if p.degree != g.vertex_count:
                    raise InputError("automorphism degree does not match the lobe")
                for u, v in g.arcs:
                    if (p.images[u], p.images[v]) not in g.arcs:
                        raise InputError("listed automorphism does not preserve the arcs")
            object.__setattr__(self, "automorphisms", autos)

    def size(self):
        return self.lobe.vertex_count

    def automorphism_group(self):
        """Declared generators, or the brute-force group of the lobe."""
        if self.automorphisms is not None:
            return PermGroup(self.lobe.vertex_count, self.automorphisms)
        autos = enumerate_automorphisms(self.lobe, respect_frontier=False)
        gens = tuple(Permutation(t) for t in autos)
        return PermGroup(self.lobe.vertex_count, gens)


@dataclass(frozen=True)
class TreeLikeTruncation:
    """A finite window of a tree-like digraph plus its derived tree.

    lobe_instances[blue index] maps template vertex positions onto graph
    vertices (position 0 is the anchor, the lobe's vertex nearest the
    root); entries are None for incomplete frontier fragments.
    """

    graph: Digraph
    tree: object
    m: int
    root: int
    depth: int
    template: LobeTemplate
    lobe_instances: tuple
    vertex_depth: tuple

    def interior_vertices(self):
        return tuple(v for v in range(self.graph.vertex_count)
                     if v not in self.graph.frontier_marks)

    def lobe_anchor(self, blue):
        inst = self.lobe_instances[blue]
        return None if inst is None else inst[0]

    def child_lobes(self, vertex):
        """Blue ids anchored at the vertex, in blue order."""
        return tuple(b for b in range(len(self.tree.lobes))
                     if self.lobe_anchor(b) == vertex)

    def has_complete_instances(self):
        return all(inst is not None for inst in self.lobe_instances)


def predicted_vertex_count(template_size, m, depth):
    """Closed-form size of a truncation: root + generation growth."""
    per = template_size - 1
    total = 1
    boundary = 1
    for gen in range(depth):
        copies = m if gen == 0 else m - 1
        new = boundary * copies * per
        total += new
        boundary = new
    return total


def build_truncation(template, m, depth, cap=VERTEX_CAP):
    """Glue lobe copies breadth-first from a root out to the given depth."""
    if m < 2:
        raise InputError("m must be at least 2")
    if depth < 1:
        raise InputError("depth must be at least 1")
    if depth > DEPTH_CAP:
        raise CapacityError("depth %d exceeds cap %d" % (depth, DEPTH_CAP))
    size = template.size()
    projected = predicted_vertex_count(size, m, depth)
    if projected > cap:
        raise CapacityError("projected %d vertices exceed cap %d" % (projected, cap))

    arcs = set()
    instances = []
    vertex_depth = [0]
    next_id = 1
    generation = [0]
    for gen in range(depth):
        new_generation = []
        copies = m if gen == 0 else m - 1
        for anchor in generation:
            for _ in range(copies):
                mapping = [anchor]
                for _ in range(1, size):
                    mapping.append(next_id)
                    vertex_depth.append(gen + 1)
                    new_generation.append(next_id)
                    next_id += 1
                for u, v in template.lobe.arcs:
                    arcs.add((mapping[u], mapping[v]))
                instances.append(tuple(mapping))
        generation = new_generation
    frontier = frozenset(v for v, d in enumerate(vertex_depth) if d == depth)
    graph = Digraph(next_id, frozenset(arcs), frontier)
    tree = block_cut_vertex_tree(graph)
    by_vertex_set = {frozenset(inst): inst for inst in instances}
    ordered = []
    for lobe in tree.lobes:
        inst = by_vertex_set.get(lobe.vertex_set())
        if inst is None:
            raise PreconditionError("derived lobe does not match any glued copy")
        ordered.append(inst)
    return TreeLikeTruncation(graph, tree, m, 0, depth, template,
                              tuple(ordered), tuple(vertex_depth))


def truncation_from_digraph(graph, template, m, root=0):
    """Wrap an existing connectivity-one window as a truncation.

    Lobes are matched to the template by an anchored isomorphism (anchor
    = the lobe vertex nearest the root); frontier fragments keep None.
    """
    if not is_connected(graph):
        raise PreconditionError("truncation graph must be connected")
    tree = block_cut_vertex_tree(graph)
    dist = distances_from(graph, root)
    instances = []
    for lobe in tree.lobes:
        if lobe.touches(graph.frontier_marks):
            instances.append(None)
            continue
        anchor = min(lobe.vertex_list, key=lambda v: (dist[v], v))
        local = lobe.as_digraph()
        anchor_local = lobe.vertex_list.index(anchor)
        iso = pinned_isomorphism(template.lobe, local, {0: anchor_local})
        if iso is None:
            instances.append(None)
            continue
        instances.append(tuple(lobe.vertex_list[iso[i]]
                               for i in range(template.size())))
    # generation = blue steps from the root in the derived tree
    depth_map = {root: 0}
    frontier_nodes = [("v", root)]
    seen = {("v", root)}
    depth = 0
    level = 0
    current = frontier_nodes
    while current:
        nxt = []
        for node in current:
            for nb in tree.tree_neighbors(node):
                if nb in seen:
                    continue
                seen.add(nb)
                nxt.append(nb)
                if nb[0] == "v":
                    depth_map[nb[1]] = (level + 2) // 2
        level += 1
        current = nxt
    vertex_depth = tuple(depth_map.get(v, 0) for v in range(graph.vertex_count))
    depth = max(vertex_depth) if vertex_depth else 0
    return TreeLikeTruncation(graph, tree, m, root, depth, template,
                              tuple(instances), vertex_depth)


def is_odd_prime_directed_cycle(g):
    """True iff g is one directed cycle whose length is an odd prime."""
    n = g.vertex_count
    if n < 3 or n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    if len(g.arcs) != n or not is_connected(g):
        return False
    for v in range(n):
        if g.in_out_valencies(v) != (1, 1):
            return False
    # one cycle through all vertices
    seen = 1
    v = g.out_neighbors(0)[0]
    while v != 0:
        seen += 1
        v = g.out_neighbors(v)[0]
    return seen == n


@dataclass(frozen=True)
class CriterionReport:
    verdict: str
    reasons: tuple

    def is_primitive(self):
        return self.verdict == VERDICT_PRIMITIVE


def connectivity_one_primitivity_criterion(template, m):
    """Primitivity of the full automorphism group of the glued graph.

    The criterion: lobes primitive, not directed cycles of odd prime
    length, and at least three vertices.  Lobe primitivity is decided by
    Higman's connectivity test on the lobe's automorphism group.
    """
    from .permgroups import is_primitive_higman

    if m < 2:
        raise InputError("m must be at least 2")
    reasons = []
    if template.size() < 3:
        reasons.append(REASON_LOBE_TOO_SMALL)
    if is_odd_prime_directed_cycle(template.lobe):
        reasons.append(REASON_ODD_PRIME_CYCLE)
    lobe_group = template.automorphism_group()
    primitive = False
    if lobe_group.is_transitive():
        try:
            primitive = is_primitive_higman(lobe_group)
        except PreconditionError:
            primitive = False
    if not primitive:
        reasons.append(REASON_LOBE_NOT_PRIMITIVE)
    reasons.sort()
    if reasons:
        return CriterionReport(VERDICT_IMPRIMITIVE, tuple(reasons))
    return CriterionReport(VERDICT_PRIMITIVE, ())


# -- witness search ------------------------------------------------------------


STATUS_FOUND = "found"
STATUS_NONE = "none"
STATUS_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class WitnessReport:
    status: str
    alpha: int = None
    beta: int = None
    x_kind: str = None
    x_id: int = None


def _as_vertex_map(element, n):
    """Normalize an element to a dict vertex -> image (possibly partial)."""
    if isinstance(element, Permutation):
        if element.degree != n:
            raise InputError("element degree %d does not match graph size %d"
                             % (element.degree, n))
        return {v: element.images[v] for v in range(n)}
    if isinstance(element, dict):
        return dict(element)
    raise InputError("elements must be Permutations or vertex dicts")


def _validate_map(m, graph):
    values = [w for w in m.values()]
    if len(set(values)) != len(values):
        raise InputError("element is not injective on its domain")
    for v, w in m.items():
        graph._check_vertex(v)
        graph._check_vertex(w)
    for u, v in graph.arcs:
        iu, iv = m.get(u), m.get(v)
        if iu is not None and iv is not None:
            if (iu, iv) not in graph.arcs:
                raise InputError("element does not preserve arc (%d, %d)" % (u, v))


def imprimitivity_witness_search(trunc, elements, validate=True):
    """Find violet vertices alpha != beta and a tree node x between them
    whose pair stabilizers inside the element list coincide.

    Stabilizer membership means: the element is defined at the relevant
    vertices and fixes them (a blue node is fixed when the lobe's vertex
    set maps onto itself).  The lexicographically smallest witness wins.
    Fewer than two elements is reported as inconclusive.
    """
    graph = trunc.graph
    n = graph.vertex_count
    maps = [_as_vertex_map(e, n) for e in elements]
    if validate:
        for m in maps:
            _validate_map(m, graph)
    if len(maps) < 2:
        return WitnessReport(STATUS_INCONCLUSIVE)

    fix_violet = [0] * n
    for i, m in enumerate(maps):
        bit = 1 << i
        for v in range(n):
            if m.get(v) == v:
                fix_violet[v] |= bit
    fix_blue = [0] * len(trunc.tree.lobes)
    for b, lobe in enumerate(trunc.tree.lobes):
        vset = set(lobe.vertex_list)
        for i, m in enumerate(maps):
            images = set()
            ok = True
            for v in lobe.vertex_list:
                w = m.get(v)
                if w is None:
                    ok = False
                    break
                images.add(w)
            if ok and images == vset:
                fix_blue[b] |= 1 << i

    def node_mask(node):
        kind, idx = node
        return fix_violet[idx] if kind == "v" else fix_blue[idx]

    for alpha in range(n):
        for beta in range(alpha + 1, n):
            path = trunc.tree.tree_path(alpha, beta)
            for node in path[1:-1]:
                sa = fix_violet[alpha] & node_mask(node)
                sb = fix_violet[beta] & node_mask(node)
                if sa == sb:
                    return WitnessReport(STATUS_FOUND, alpha, beta,
                                         "violet" if node[0] == "v" else "blue",
                                         node[1])
    return WitnessReport(STATUS_NONE)


# -- truncation automorphisms ---------------------------------------------------


def _subtree_pair_assign(trunc, images, v, w):
    """Canonically map the subtree below violet v onto the one below w."""
    stack = [(v, w)]
    while stack:
        x, y = stack.pop()
        images[x] = y
        bx = trunc.child_lobes(x)
        by = trunc.child_lobes(y)
        if len(bx) != len(by):
            raise PreconditionError("subtrees of %d and %d are not aligned" % (v, w))
        for lb_x, lb_y in zip(bx, by):
            inst_x = trunc.lobe_instances[lb_x]
            inst_y = trunc.lobe_instances[lb_y]
            for i in range(1, trunc.template.size()):
                stack.append((inst_x[i], inst_y[i]))


def truncation_automorphisms(trunc, fix_frontier=True):
    """Generators of the automorphism group of the finite truncation.

    Built structurally: swaps of sibling lobes at every interior vertex
    (carrying the hanging subtrees along canonically) plus the extension
    of each anchor-fixing template automorphism through every lobe copy.
    All generators preserve generation depth and hence the frontier set.
    """
    if not trunc.has_complete_instances():
        raise InputError("automorphism construction needs complete lobe instances")
    n = trunc.graph.vertex_count
    size = trunc.template.size()
    gens = []
    seen = set()

    def push(images):
        t = tuple(images)
        if t == tuple(range(n)) or t in seen:
            return
        seen.add(t)
        gens.append(Permutation(t))

    for v in range(n):
        children = trunc.child_lobes(v)
        for j in range(len(children) - 1):
            images = list(range(n))
            inst_a = trunc.lobe_instances[children[j]]
            inst_b = trunc.lobe_instances[children[j + 1]]
            for i in range(1, size):
                _subtree_pair_assign(trunc, images, inst_a[i], inst_b[i])
                _subtree_pair_assign(trunc, images, inst_b[i], inst_a[i])
            push(images)

    template_group = trunc.template.automorphism_group()
    anchored = template_group.stabilizer_generators(0)
    lobe_gens = [g for g in anchored.generators if not g.is_identity()]
    for b in range(len(trunc.tree.lobes)):
        inst = trunc.lobe_instances[b]
        for sigma in lobe_gens:
            images = list(range(n))
            for i in range(1, size):
                j = sigma.images[i]
                if j == i:
                    continue
                _subtree_pair_assign(trunc, images, inst[i], inst[j])
            push(images)

    if not gens:
        gens = [Permutation.identity(n)]
    if fix_frontier:
        marks = trunc.graph.frontier_marks
        for g in gens:
            if {g.images[v] for v in marks} != set(marks):
                raise PreconditionError("generator does not preserve the frontier")
    return tuple(gens)


def _position_aligned_auto(template_autos, p, q):
    """First lobe automorphism carrying position p to q, or None."""
    for sigma in template_autos:
        if sigma.images[p] == q:
            return sigma
    return None


def _pair_branches(trunc, images, start_a, start_b, avoid_a, avoid_b,
                   template_autos):
    """Canonically map the branch at start_a (away from lobe avoid_a) onto
    the branch at start_b (away from avoid_b), as far as the window allows.

    Child lobes are paired in blue order; a pair is dropped when either
    side is an incomplete fragment or no position-aligned lobe map exists,
    so the result is a partial assignment.
    """
    tree = trunc.tree
    stack = [(start_a, start_b, avoid_a, avoid_b)]
    while stack:
        x, y, ax, ay = stack.pop()
        images[x] = y
        blues_x = [b for b in tree.blues_of(x) if b != ax]
        blues_y = [b for b in tree.blues_of(y) if b != ay]
        for bx, by in zip(blues_x, blues_y):
            inst_x = trunc.lobe_instances[bx]
            inst_y = trunc.lobe_instances[by]
            if inst_x is None or inst_y is None:
                continue
            p = inst_x.index(x)
            q = inst_y.index(y)
            sigma = _position_aligned_auto(template_autos, p, q)
            if sigma is None:
                continue
            for i in range(trunc.template.size()):
                if i == p:
                    continue
                stack.append((inst_x[i], inst_y[sigma.images[i]], bx, by))


def lobe_symmetry_maps(trunc):
    """Window restrictions of graph symmetries realigning one lobe.

    The automorphism group of a finite rooted window always fixes the
    root, while the infinite graph it approximates has symmetries moving
    it.  These partial maps recover that freedom at window scale: for one
    complete lobe and one automorphism of the lobe shape, the lobe's
    vertices are permuted accordingly and the branches hanging off them
    are carried onto each other canonically; vertices whose image would
    leave the window stay unmapped.
    """
    elems, complete = trunc.template.automorphism_group().elements()
    if not complete:
        raise CapacityError("lobe automorphism group is not enumerable")
    template_autos = list(elems)
    maps = []
    for b in range(len(trunc.tree.lobes)):
        inst = trunc.lobe_instances[b]
        if inst is None:
            continue
        for sigma in template_autos:
            if sigma.is_identity():
                continue
            images = {}
            for i in range(trunc.template.size()):
                images[inst[i]] = inst[sigma.images[i]]
            for i in range(trunc.template.size()):
                _pair_branches(trunc, images, inst[i], inst[sigma.images[i]],
                               b, b, template_autos)
            maps.append(images)
    return maps


# -- template text format --------------------------------------------------------


def template_from_text(text):
    """Parse a template file: digraph block, 'm <int>', 'ends 0|1',
    optional 'auto <perm>' lines.  Returns (template, m)."""
    digraph_lines = []
    m = None
    ends = 0
    auto_lines = []
    state = "graph"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None, 1)
        if fields[0] == "m":
            if len(fields) != 2:
                raise ParseError("expected 'm <int>'", lineno)
            try:
                m = int(fields[1])
            except ValueError:
                raise ParseError("m %r is not an integer" % fields[1], lineno)
            state = "meta"
            continue
        if fields[0] == "ends":
            if len(fields) != 2 or fields[1] not in ("0", "1"):
                raise ParseError("expected 'ends 0' or 'ends 1'", lineno)
            ends = int(fields[1])
            state = "meta"
            continue
        if fields[0] == "auto":
            if len(fields) != 2:
                raise ParseError("expected 'auto <perm>'", lineno)
            auto_lines.append((lineno, fields[1]))
            state = "meta"
            continue
        if state != "graph":
            raise ParseError("graph lines must precede the metadata", lineno)
        digraph_lines.append(raw)
    lobe = digraph_from_text("\n".join(digraph_lines))
    autos = None
    if auto_lines:
        parsed = []
        for lineno, token in auto_lines:
            try:
                parsed.append(parse_permutation(token, lobe.vertex_count))
            except (ParseError, InputError) as exc:
                raise ParseError(str(exc), lineno)
        autos = tuple(parsed)
    if ends == 1:
        raise ParseError("one-ended templates need a ball family and cannot "
                         "be loaded from a bare template file")
    template = LobeTemplate(lobe, ends, autos)
    if m is None:
        raise ParseError("missing 'm <int>' line")
    return template, m


def template_to_text(template, m):
    from .digraphs import digraph_to_text

    lines = [digraph_to_text(template.lobe).rstrip("\n")]
    lines.append("m %d" % m)
    lines.append("ends %d" % template.declared_end_count)
    if template.automorphisms is not None:
        for g in template.automorphisms:
            lines.append("auto " + " ".join(str(x) for x in g.images))
    return "\n".join(lines) + "\n"
