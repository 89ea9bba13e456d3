"""Finite directed graphs with an explicit truncation frontier.

This module is the substrate for everything else: undirected connectivity
and distances, the biconnected decomposition into lobes, block-cut-vertex
trees, small-graph isomorphism, and integer gradings of arc sets.

Graphs are loop-free and have no duplicate arcs.  An undirected edge is
considered present between u and v whenever at least one of the arcs
(u, v), (v, u) is; connectivity, distance and the biconnected
decomposition all refer to that underlying undirected graph.

Vertices flagged in ``frontier_marks`` sit on the artificial boundary of a
finite window into an infinite graph.  The flags are inert here but are
carried through so downstream consumers can tell truncation effects from
genuine structure (a lobe touching the frontier may be an incomplete copy
of something bigger and must not be compared against templates).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import CapacityError, InputError, ParseError, PreconditionError

# Exhaustive isomorphism search is intended for lobe-sized graphs only.
ISO_VERTEX_LIMIT = 12


@dataclass(frozen=True)
class Digraph:
    """Immutable simple digraph on vertices 0..vertex_count-1."""

    vertex_count: int
    arcs: frozenset = frozenset()
    frontier_marks: frozenset = frozenset()
    _out: tuple = field(init=False, repr=False, compare=False)
    _in: tuple = field(init=False, repr=False, compare=False)
    _und: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise InputError("vertex_count must be non-negative")
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        marks = frozenset(int(v) for v in self.frontier_marks)
        for u, v in arcs:
            if u == v:
                raise InputError("loop arc (%d, %d) is not allowed" % (u, v))
            if not (0 <= u < n and 0 <= v < n):
                raise InputError("arc (%d, %d) leaves the vertex range" % (u, v))
        for v in marks:
            if not 0 <= v < n:
                raise InputError("frontier mark %d leaves the vertex range" % v)
        out = [[] for _ in range(n)]
        inc = [[] for _ in range(n)]
        und = [set() for _ in range(n)]
        for u, v in sorted(arcs):
            out[u].append(v)
            inc[v].append(u)
            und[u].add(v)
            und[v].add(u)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "frontier_marks", marks)
        object.__setattr__(self, "_out", tuple(tuple(x) for x in out))
        object.__setattr__(self, "_in", tuple(tuple(sorted(x)) for x in inc))
        object.__setattr__(self, "_und", tuple(tuple(sorted(x)) for x in und))

    def vertices(self):
        return range(self.vertex_count)

    def _check_vertex(self, v):
        if not 0 <= v < self.vertex_count:
            raise InputError("vertex %r out of range 0..%d" % (v, self.vertex_count - 1))

    def out_neighbors(self, v):
        self._check_vertex(v)
        return self._out[v]

    def in_neighbors(self, v):
        self._check_vertex(v)
        return self._in[v]

    def neighbors(self, v):
        """Undirected neighborhood of v."""
        self._check_vertex(v)
        return self._und[v]

    def has_arc(self, u, v):
        return (u, v) in self.arcs

    def in_out_valencies(self, v):
        """Return the pair (in-valency, out-valency) of v."""
        self._check_vertex(v)
        return (len(self._in[v]), len(self._out[v]))


def digraph_from_arcs(n, arcs, frontier=()):
    return Digraph(n, frozenset(arcs), frozenset(frontier))


def complete_digraph(n):
    """All arcs in both directions between distinct vertices."""
    return Digraph(n, frozenset((u, v) for u in range(n) for v in range(n) if u != v))


def directed_cycle(n):
    """The directed cycle 0 -> 1 -> ... -> n-1 -> 0."""
    if n < 2:
        raise InputError("a directed cycle needs at least 2 vertices")
    return Digraph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def distances_from(g, source):
    """BFS distances in the underlying undirected graph; None = unreachable."""
    g._check_vertex(source)
    dist = [None] * g.vertex_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g):
    """True iff the underlying undirected graph has one component.

    The empty graph counts as connected by convention.
    """
    if g.vertex_count == 0:
        return True
    dist = distances_from(g, 0)
    return all(d is not None for d in dist)


def undirected_distance(g, u, v):
    """Length of the shortest undirected path, or None if unreachable."""
    g._check_vertex(u)
    g._check_vertex(v)
    if u == v:
        return 0
    dist = distances_from(g, u)
    return dist[v]


@dataclass(frozen=True)
class Lobe:
    """A maximal cut-vertex-free subdigraph (biconnected block).

    ``vertex_list`` is sorted; ``induced_arcs`` is the arc set of the host
    graph restricted to the lobe.  Because two lobes never share more than
    one vertex, the restriction equals the block's own edge set.
    """

    vertex_list: tuple
    induced_arcs: frozenset

    def vertex_set(self):
        return frozenset(self.vertex_list)

    def touches(self, marks):
        return any(v in marks for v in self.vertex_list)

    def as_digraph(self):
        """Relabel onto 0..k-1 following vertex_list order."""
        index = {v: i for i, v in enumerate(self.vertex_list)}
        arcs = frozenset((index[u], index[v]) for u, v in self.induced_arcs)
        return Digraph(len(self.vertex_list), arcs)


def _undirected_adjacency(g):
    return [list(g.neighbors(v)) for v in range(g.vertex_count)]


def _biconnected_blocks(n, adj):
    """Iterative lowlink DFS; returns (cut vertex set, list of edge lists)."""
    disc = [-1] * n
    low = [0] * n
    cuts = set()
    blocks = []
    counter = 0
    for start in range(n):
        if disc[start] != -1:
            continue
        disc[start] = low[start] = counter
        counter += 1
        estack = []
        # frame: [vertex, parent, neighbor list, next index, child count]
        frames = [[start, -1, adj[start], 0, 0]]
        while frames:
            fr = frames[-1]
            v = fr[0]
            if fr[3] < len(fr[2]):
                w = fr[2][fr[3]]
                fr[3] += 1
                if w == fr[1]:
                    continue
                if disc[w] == -1:
                    estack.append((v, w))
                    disc[w] = low[w] = counter
                    counter += 1
                    fr[4] += 1
                    frames.append([w, v, adj[w], 0, 0])
                elif disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                continue
            frames.pop()
            if frames:
                u = frames[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    block = []
                    while estack[-1] != (u, v):
                        block.append(estack.pop())
                    block.append(estack.pop())
                    blocks.append(block)
                    if frames[-1][1] != -1:
                        cuts.add(u)
            elif fr[4] >= 2:
                cuts.add(v)
    return cuts, blocks


def cut_vertices_and_lobes(g):
    """Biconnected decomposition of a connected digraph.

    Returns (cut vertices, lobes); the lobes partition the edge set, each
    has at least two vertices, and they are ordered by smallest contained
    vertex for deterministic output.
    """
    if not is_connected(g):
        raise PreconditionError("cut_vertices_and_lobes requires a connected digraph")
    cuts, blocks = _biconnected_blocks(g.vertex_count, _undirected_adjacency(g))
    lobes = []
    for block in blocks:
        vset = set()
        for u, v in block:
            vset.add(u)
            vset.add(v)
        vlist = tuple(sorted(vset))
        arcs = frozenset((u, v) for u, v in g.arcs if u in vset and v in vset)
        lobes.append(Lobe(vlist, arcs))
    lobes.sort(key=lambda l: l.vertex_list)
    return frozenset(cuts), tuple(lobes)


@dataclass(frozen=True)
class BlockCutVertexTree:
    """Bipartite incidence tree between vertices (violet) and lobes (blue)."""

    vertex_count: int
    lobes: tuple
    edges: frozenset
    _v2b: tuple = field(init=False, repr=False, compare=False)
    _b2v: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v2b = [[] for _ in range(self.vertex_count)]
        b2v = [[] for _ in range(len(self.lobes))]
        for v, b in sorted(self.edges):
            v2b[v].append(b)
            b2v[b].append(v)
        object.__setattr__(self, "_v2b", tuple(tuple(x) for x in v2b))
        object.__setattr__(self, "_b2v", tuple(tuple(x) for x in b2v))

    def blues_of(self, v):
        return self._v2b[v]

    def violets_of(self, b):
        return self._b2v[b]

    def blue_degree(self, v):
        return len(self._v2b[v])

    def is_cut_vertex(self, v):
        return len(self._v2b[v]) >= 2

    def node_count(self):
        return self.vertex_count + len(self.lobes)

    def tree_neighbors(self, node):
        kind, i = node
        if kind == "v":
            return tuple(("b", b) for b in self._v2b[i])
        return tuple(("v", v) for v in self._b2v[i])

    def tree_path(self, u, v):
        """Path of tree nodes from violet u to violet v, endpoints included."""
        start = ("v", u)
        goal = ("v", v)
        if start == goal:
            return (start,)
        prev = {start: None}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nxt in self.tree_neighbors(node):
                if nxt not in prev:
                    prev[nxt] = node
                    if nxt == goal:
                        path = [nxt]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return tuple(reversed(path))
                    queue.append(nxt)
        raise InputError("no tree path between %r and %r" % (u, v))


def block_cut_vertex_tree(g):
    """Block-cut-vertex tree of a connected digraph."""
    cuts, lobes = cut_vertices_and_lobes(g)
    edges = set()
    for b, lobe in enumerate(lobes):
        for v in lobe.vertex_list:
            edges.add((v, b))
    return BlockCutVertexTree(g.vertex_count, lobes, frozenset(edges))


def _degree_profile(g, respect_frontier):
    prof = []
    for v in range(g.vertex_count):
        p = (len(g._in[v]), len(g._out[v]))
        if respect_frontier:
            p = p + (v in g.frontier_marks,)
        prof.append(p)
    return prof


def _search_isomorphisms(a, b, pin=None, respect_frontier=False, find_all=False,
                         limit=ISO_VERTEX_LIMIT):
    """Backtracking arc-preserving bijection search from a onto b.

    Returns a list of image tuples (empty when none exists; at most one
    entry unless find_all).  ``pin`` pre-assigns images.
    """
    n = a.vertex_count
    if b.vertex_count != n or len(a.arcs) != len(b.arcs):
        return []
    if n > limit:
        raise CapacityError(
            "isomorphism search limited to %d vertices; got %d" % (limit, n))
    if n == 0:
        return [()]
    prof_a = _degree_profile(a, respect_frontier)
    prof_b = _degree_profile(b, respect_frontier)
    if sorted(prof_a) != sorted(prof_b):
        return []

    # Order a's vertices by BFS from the pinned vertices (or vertex 0) so
    # every new vertex is adjacent to a mapped one when possible.
    seeds = sorted(pin) if pin else [0]
    order = []
    seen = set()
    queue = deque()
    for s in seeds + list(range(n)):
        if s in seen:
            continue
        seen.add(s)
        queue.append(s)
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in a.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    candidates = [[w for w in range(n) if prof_b[w] == prof_a[v]] for v in range(n)]
    mapping = [-1] * n
    used = [False] * n
    results = []

    def consistent(v, w):
        for u in range(n):
            mu = mapping[u]
            if mu == -1 or u == v:
                continue
            if ((u, v) in a.arcs) != ((mu, w) in b.arcs):
                return False
            if ((v, u) in a.arcs) != ((w, mu) in b.arcs):
                return False
        return True

    def extend(i):
        if i == n:
            results.append(tuple(mapping))
            return not find_all
        v = order[i]
        if pin and v in pin:
            w = pin[v]
            if used[w] or prof_b[w] != prof_a[v] or not consistent(v, w):
                return False
            mapping[v] = w
            used[w] = True
            done = extend(i + 1)
            mapping[v] = -1
            used[w] = False
            return done
        for w in candidates[v]:
            if used[w] or not consistent(v, w):
                continue
            mapping[v] = w
            used[w] = True
            if extend(i + 1):
                mapping[v] = -1
                used[w] = False
                return True
            mapping[v] = -1
            used[w] = False
        return False

    extend(0)
    return results


def digraph_isomorphic(a, b, limit=ISO_VERTEX_LIMIT):
    """An arc-preserving vertex bijection a -> b, or None.

    Exhaustive search with degree-sequence pruning; refuses graphs larger
    than ``limit`` vertices.
    """
    found = _search_isomorphisms(a, b, limit=limit)
    if not found:
        return None
    return {v: w for v, w in enumerate(found[0])}


def pinned_isomorphism(a, b, pin, limit=ISO_VERTEX_LIMIT):
    """Like digraph_isomorphic but honoring pre-assigned images."""
    found = _search_isomorphisms(a, b, pin=pin, limit=limit)
    if not found:
        return None
    return {v: w for v, w in enumerate(found[0])}


def enumerate_automorphisms(g, limit=ISO_VERTEX_LIMIT, respect_frontier=True):
    """All arc-preserving self-bijections of g, as image tuples.

    With respect_frontier, the frontier mark set must be preserved.
    Exhaustive; meant for lobe-sized graphs and small truncations.
    """
    return _search_isomorphisms(g, g, respect_frontier=respect_frontier,
                                find_all=True, limit=limit)


def z_grading(g):
    """Integer level map with every arc raising the level by exactly one.

    Returns a vertex -> level dict normalized to minimum level 0, or None
    when no such grading exists (any directed cycle is an obstruction).
    Levels are propagated by BFS; a vertex pair joined by arcs in both
    directions is an immediate conflict.
    """
    n = g.vertex_count
    if n == 0:
        return {}
    level = {}
    for start in range(n):
        if start in level:
            continue
        level[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                fwd = (u, w) in g.arcs
                back = (w, u) in g.arcs
                if fwd and back:
                    return None
                want = level[u] + 1 if fwd else level[u] - 1
                if w not in level:
                    level[w] = want
                    queue.append(w)
                elif level[w] != want:
                    return None
    for u, v in g.arcs:
        if level[v] != level[u] + 1:
            return None
    lo = min(level.values())
    return {v: l - lo for v, l in level.items()}


def in_out_valencies(g, v):
    return g.in_out_valencies(v)


def digraph_to_text(g):
    """Serialize; arcs sorted lexicographically so equal graphs yield equal text."""
    lines = ["digraph %d" % g.vertex_count]
    for u, v in sorted(g.arcs):
        lines.append("%d %d" % (u, v))
    for v in sorted(g.frontier_marks):
        lines.append("frontier %d" % v)
    return "\n".join(lines) + "\n"


def digraph_from_text(text):
    """Parse the ``digraph`` text format; raises ParseError with line numbers."""
    n = None
    arcs = []
    marks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if fields[0] != "digraph" or len(fields) != 2:
                raise ParseError("expected 'digraph <n>' header", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError("vertex count %r is not an integer" % fields[1], lineno)
            continue
        if fields[0] == "frontier":
            if len(fields) != 2:
                raise ParseError("expected 'frontier <v>'", lineno)
            try:
                marks.append(int(fields[1]))
            except ValueError:
                raise ParseError("frontier vertex %r is not an integer" % fields[1], lineno)
            continue
        if len(fields) != 2:
            raise ParseError("expected arc line 'u v'", lineno)
        try:
            arcs.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise ParseError("arc endpoints %r are not integers" % (fields,), lineno)
    if n is None:
        raise ParseError("missing 'digraph <n>' header", 1)
    try:
        return Digraph(n, frozenset(arcs), frozenset(marks))
    except InputError as exc:
        raise ParseError(str(exc))
