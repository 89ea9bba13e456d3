"""Finite-scale end machinery for tree-like truncations.

An end of an infinite graph is an equivalence class of rays; a finite
window cannot hold a ray, so two surrogates stand in:

* counting: the ends visible at radius r are the components of the graph
  minus the closed r-ball around a center that touch the truncation
  frontier (a frontier-touching component is one that continues in the
  infinite object; an interior component is genuinely finite);
* handles: an end is addressed either by a ray prefix in the
  block-cut-vertex tree (thin tree ends) or by a lobe id (the single
  thick end of a one-ended lobe, when the template declares one).

The orbit-size classification mirrors the trichotomy for closed groups:
a declared one-ended context forces a single orbit, thick lobe ends sit
in one orbit per lobe (countably many at full scale), and thin ends
under the closed-primitive tree-like context carry continuum-size
orbits, evidenced here by geometric growth of ray-prefix images under
root-fixing symmetries.  The classes are symbolic verdicts backed by
structure and growth tables; nothing here claims to compute an infinite
cardinal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .digraphs import distances_from
from .errors import InputError, ScaleError
from .permgroups import Permutation

THIN = "thin"
THICK = "thick"

CONTEXT_ONE_ENDED = "one-ended"
CONTEXT_CLOSED_PRIMITIVE = "closed-primitive-treelike"

CLASS_SINGLE = "single"
CLASS_COUNTABLE = "countably-infinite"
CLASS_CONTINUUM = "continuum"

KIND_RAY = "ray"
KIND_LOBE = "lobe"


@dataclass(frozen=True)
class EndHandle:
    """Address of an end: a tree-ray prefix from the root, or a lobe id."""

    kind: str
    ray: tuple = ()
    blue_id: int = None

    def depth(self):
        if self.kind == KIND_RAY:
            return (len(self.ray) - 1) // 2
        return 0


def ray_handle(nodes):
    return EndHandle(KIND_RAY, ray=tuple(nodes))


def lobe_handle(blue_id):
    return EndHandle(KIND_LOBE, blue_id=blue_id)


def validate_handle(trunc, handle):
    if handle.kind == KIND_RAY:
        ray = handle.ray
        if not ray or ray[0] != ("v", trunc.root):
            raise InputError("ray prefixes must start at the root violet node")
        if len(ray) % 2 == 0:
            raise InputError("ray prefixes end on a violet node")
        seen = set()
        for i, node in enumerate(ray):
            kind, idx = node
            want = "v" if i % 2 == 0 else "b"
            if kind != want:
                raise InputError("ray nodes must alternate violet and blue")
            if node in seen:
                raise InputError("ray prefix revisits a node")
            seen.add(node)
            if i > 0 and node not in trunc.tree.tree_neighbors(ray[i - 1]):
                raise InputError("ray prefix is not a tree path")
    elif handle.kind == KIND_LOBE:
        if handle.blue_id is None or not 0 <= handle.blue_id < len(trunc.tree.lobes):
            raise InputError("lobe handle id out of range")
        if trunc.template.declared_end_count != 1:
            raise InputError("lobe end handles need a one-ended lobe template")
    else:
        raise InputError("unknown handle kind %r" % (handle.kind,))


def thin_ray_prefixes(trunc, depth):
    """All ray prefixes of the given depth, in canonical order."""
    if depth < 1:
        raise InputError("ray prefixes need depth at least 1")
    out = []
    root = ("v", trunc.root)

    def extend(prefix, via_blue):
        violet = prefix[-1][1]
        if (len(prefix) - 1) // 2 == depth:
            out.append(ray_handle(prefix))
            return
        for b in trunc.tree.blues_of(violet):
            if b == via_blue:
                continue
            for w in trunc.tree.violets_of(b):
                if w == violet:
                    continue
                extend(prefix + [("b", b), ("v", w)], b)

    extend([root], None)
    return tuple(out)


def canonical_ray(trunc, depth):
    return thin_ray_prefixes(trunc, depth)[0]


def thick_lobe_handles(trunc):
    """One handle per lobe; requires a one-ended template."""
    if trunc.template.declared_end_count != 1:
        raise InputError("thick lobe handles need a one-ended lobe template")
    return tuple(lobe_handle(b) for b in range(len(trunc.tree.lobes)))


# -- counting -------------------------------------------------------------------


def count_ends_at_radius(g, center, r):
    """Frontier-touching components of the graph minus the closed r-ball.

    A component touching the truncation frontier continues in the
    infinite object; components that do not are genuinely finite and are
    not counted.  The ball must stay strictly inside the non-frontier
    region, otherwise the window cannot answer and a ScaleError is raised.
    """
    g._check_vertex(center)
    if r < 0:
        raise InputError("radius must be non-negative")
    dist = distances_from(g, center)
    ball = {v for v in range(g.vertex_count)
            if dist[v] is not None and dist[v] <= r}
    if ball & g.frontier_marks:
        raise ScaleError("the %d-ball reaches the truncation frontier; "
                         "deepen the truncation" % r)
    outside = [v for v in range(g.vertex_count) if v not in ball]
    seen = set()
    count = 0
    for v in outside:
        if v in seen:
            continue
        component = {v}
        queue = deque([v])
        seen.add(v)
        touches = v in g.frontier_marks
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w in ball or w in seen:
                    continue
                seen.add(w)
                component.add(w)
                queue.append(w)
                if w in g.frontier_marks:
                    touches = True
        if touches:
            count += 1
    return count


def end_count_sequence(g, center, r_max):
    """[count_ends_at_radius(r) for r = 1..r_max]; non-decreasing on
    connectivity-one truncations."""
    if r_max < 1:
        raise InputError("r_max must be at least 1")
    return [count_ends_at_radius(g, center, r) for r in range(1, r_max + 1)]


# -- classification ---------------------------------------------------------------


def classify_end(trunc, handle):
    """Thin for tree rays, thick for declared one-ended lobes."""
    validate_handle(trunc, handle)
    if handle.kind == KIND_RAY:
        return THIN
    return THICK


@dataclass(frozen=True)
class GrowthTable:
    """Distinct ray-prefix image counts per depth.

    list_limited marks tables computed from a bare element list (images
    bounded by the list size) rather than a generated group.
    """

    counts: tuple
    list_limited: bool

    def as_dict(self):
        return dict(self.counts)


def _blue_lookup(trunc):
    return {trunc.tree.lobes[b].vertex_set(): b
            for b in range(len(trunc.tree.lobes))}


def _apply_to_prefix(trunc, blue_by_set, mapping, prefix):
    """Image node sequence, or None when any image leaves the window."""
    out = []
    for kind, idx in prefix:
        if kind == "v":
            img = mapping.get(idx)
            if img is None:
                return None
            out.append(("v", img))
        else:
            images = set()
            for v in trunc.tree.lobes[idx].vertex_list:
                w = mapping.get(v)
                if w is None:
                    return None
                images.add(w)
            b = blue_by_set.get(frozenset(images))
            if b is None:
                return None
            out.append(("b", b))
    return tuple(out)


def _as_mapping(element, n):
    if isinstance(element, Permutation):
        if element.degree != n:
            raise InputError("element degree %d does not match graph size %d"
                             % (element.degree, n))
        return {v: element.images[v] for v in range(n)}
    if isinstance(element, dict):
        return dict(element)
    raise InputError("elements must be Permutations or vertex dicts")


def end_orbit_prefix_growth(trunc, handle, elements, depth_max, generate=False):
    """Distinct images of ray prefixes under root-fixing elements.

    The images of the depth-d prefix are counted for d = 1..depth_max.
    Elements moving the root are discarded: the count mirrors the orbit
    of the end under the stabilizer of the root.  With generate=True the
    elements are treated as generators of a group and prefix orbits are
    closed under them; otherwise the images under the listed elements
    alone are counted and the table is flagged list-limited.
    """
    validate_handle(trunc, handle)
    if handle.kind != KIND_RAY:
        raise InputError("growth tables are defined for ray handles")
    if depth_max < 1:
        raise InputError("depth_max must be at least 1")
    if handle.depth() < depth_max:
        raise ScaleError("prefix depth %d exceeds the handle's depth %d; "
                         "deepen the truncation" % (depth_max, handle.depth()))
    n = trunc.graph.vertex_count
    mappings = [_as_mapping(e, n) for e in elements]
    mappings = [m for m in mappings if m.get(trunc.root) == trunc.root]
    if generate:
        for m in mappings:
            if len(m) != n:
                raise InputError("generators must be total permutations")
    blue_by_set = _blue_lookup(trunc)
    counts = []
    for d in range(1, depth_max + 1):
        prefix = tuple(handle.ray[: 2 * d + 1])
        if generate:
            seen = {prefix}
            queue = deque([prefix])
            while queue:
                p = queue.popleft()
                for m in mappings:
                    img = _apply_to_prefix(trunc, blue_by_set, m, p)
                    if img is not None and img not in seen:
                        seen.add(img)
                        queue.append(img)
            counts.append((d, len(seen)))
        else:
            images = {prefix}
            for m in mappings:
                img = _apply_to_prefix(trunc, blue_by_set, m, prefix)
                if img is not None:
                    images.add(img)
            counts.append((d, len(images)))
    return GrowthTable(tuple(counts), not generate)


@dataclass(frozen=True)
class EndOrbitClass:
    """Symbolic orbit-size verdict plus the evidence used to reach it."""

    kind: str
    evidence: str
    growth: GrowthTable = None


def end_orbit_trichotomy(trunc, handle, context, elements=None, growth_depth=None):
    """Exactly one of single / countably-infinite / continuum.

    The context declares what is known about the acting group: one-ended
    (the orbital digraph has one end; all of it is one orbit) or
    closed-primitive tree-like.  A one-ended context is incompatible with
    thick lobe handles, since one-ended lobes force infinitely many ends.
    """
    if context not in (CONTEXT_ONE_ENDED, CONTEXT_CLOSED_PRIMITIVE):
        raise InputError("unknown context %r" % (context,))
    kind = classify_end(trunc, handle)
    if context == CONTEXT_ONE_ENDED:
        if kind == THICK:
            raise InputError("a one-ended context cannot carry thick lobe ends")
        return EndOrbitClass(
            CLASS_SINGLE,
            "declared one-ended digraph: the end set is a single point, "
            "so its orbit has length 1")
    if kind == THICK:
        return EndOrbitClass(
            CLASS_COUNTABLE,
            "thick ends correspond to lobes (one end per lobe); the lobe "
            "set grows without bound with the window, one per tree site "
            "(%d in this window)" % len(trunc.tree.lobes))
    if elements is not None:
        depth = growth_depth if growth_depth is not None else max(1, min(3, handle.depth()))
        table = end_orbit_prefix_growth(trunc, handle, elements, depth, generate=True)
        return EndOrbitClass(
            CLASS_CONTINUUM,
            "thin tree end under a closed primitive tree-like group: "
            "ray-prefix images multiply at every depth",
            table)
    return EndOrbitClass(
        CLASS_CONTINUUM,
        "thin tree end under a closed primitive tree-like group: every "
        "depth multiplies the available ray directions (structural)")
