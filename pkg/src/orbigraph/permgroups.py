"""Finitely generated permutation groups on small finite point sets.

Points are 0..degree-1 and act on the right: the image of point p under
permutation g is ``g.images[p]``, and (g * h) applies g first, so that
p^(g*h) = (p^g)^h.  The machinery here is deliberately elementary (orbit
closures, Schreier generators, breadth-first element enumeration with a
hard cap); all target instances are tiny and easy to cross-check by hand.

Two independent primitivity tests are provided: Higman's criterion (all
non-diagonal orbital digraphs connected) and an explicit minimal block
system search.  They share no code and are expected to agree exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .digraphs import Digraph, is_connected
from .errors import CapacityError, InputError, ParseError, PreconditionError

ELEMENT_CAP = 100_000


@dataclass(frozen=True)
class Permutation:
    """A bijection of 0..degree-1 stored as its image list."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise InputError("image list %r is not a permutation" % (images,))

    @staticmethod
    def identity(degree):
        return Permutation(tuple(range(degree)))

    @staticmethod
    def from_cycles(degree, cycles):
        images = list(range(degree))
        for cycle in cycles:
            for x in cycle:
                if not 0 <= x < degree:
                    raise InputError("cycle point %r out of range" % (x,))
            if len(set(cycle)) != len(cycle):
                raise InputError("repeated point in cycle %r" % (cycle,))
            for i, x in enumerate(cycle):
                images[x] = cycle[(i + 1) % len(cycle)]
        return Permutation(tuple(images))

    @property
    def degree(self):
        return len(self.images)

    def apply(self, point):
        return self.images[point]

    def __mul__(self, other):
        # apply self first, then other
        if other.degree != self.degree:
            raise InputError("degree mismatch %d vs %d" % (self.degree, other.degree))
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self):
        """Nontrivial cycles, each rotated to start at its minimum."""
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cycle = [i]
            j = self.images[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(%s)" % " ".join(map(str, c)) for c in cyc)


class Orbital:
    """An orbit of a group on ordered point pairs.

    Equality and hashing use the pair set alone; base_pair is just a
    deterministic representative.
    """

    __slots__ = ("base_pair", "pair_set")

    def __init__(self, base_pair, pair_set):
        pair_set = frozenset((int(a), int(b)) for a, b in pair_set)
        base_pair = (int(base_pair[0]), int(base_pair[1]))
        if base_pair not in pair_set:
            raise InputError("base pair %r is not in the pair set" % (base_pair,))
        self.base_pair = base_pair
        self.pair_set = pair_set

    @property
    def is_diagonal(self):
        return self.base_pair[0] == self.base_pair[1]

    def point_section(self, point):
        """The suborbit section: all heads of pairs with the given tail."""
        return tuple(sorted(b for a, b in self.pair_set if a == point))

    def reverse_section(self, point):
        """All tails of pairs with the given head."""
        return tuple(sorted(a for a, b in self.pair_set if b == point))

    def __eq__(self, other):
        return isinstance(other, Orbital) and self.pair_set == other.pair_set

    def __hash__(self):
        return hash(self.pair_set)

    def __repr__(self):
        return "Orbital(%r, %d pairs)" % (self.base_pair, len(self.pair_set))


@dataclass(frozen=True)
class PermGroup:
    """A group given by generating permutations of equal degree."""

    degree: int
    generators: tuple

    def __post_init__(self):
        if self.degree < 1:
            raise InputError("degree must be at least 1")
        gens = tuple(self.generators)
        if not gens:
            gens = (Permutation.identity(self.degree),)
        for g in gens:
            if g.degree != self.degree:
                raise InputError("generator degree %d does not match group degree %d"
                                 % (g.degree, self.degree))
        object.__setattr__(self, "generators", gens)

    def _check_point(self, point):
        if not 0 <= point < self.degree:
            raise InputError("point %r out of range 0..%d" % (point, self.degree - 1))

    def orbit(self, point):
        """Smallest generator-closed point set containing the point."""
        self._check_point(point)
        seen = {point}
        queue = deque([point])
        while queue:
            p = queue.popleft()
            for g in self.generators:
                q = g.images[p]
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return tuple(sorted(seen))

    def orbit_transversal(self, point):
        """Map orbit point -> permutation carrying the base point onto it."""
        self._check_point(point)
        trans = {point: Permutation.identity(self.degree)}
        queue = deque([point])
        while queue:
            p = queue.popleft()
            for g in self.generators:
                q = g.images[p]
                if q not in trans:
                    trans[q] = trans[p] * g
                    queue.append(q)
        return trans

    def is_transitive(self):
        return len(self.orbit(0)) == self.degree

    def stabilizer_generators(self, point):
        """Point stabilizer as a group, generated by Schreier generators."""
        self._check_point(point)
        trans = self.orbit_transversal(point)
        gens = []
        seen = set()
        for p in sorted(trans):
            for g in self.generators:
                u = trans[p] * g
                schreier = u * trans[u.images[point]].inverse()
                if schreier.is_identity() or schreier.images in seen:
                    continue
                seen.add(schreier.images)
                gens.append(schreier)
        if not gens:
            gens = [Permutation.identity(self.degree)]
        return PermGroup(self.degree, tuple(gens))

    def suborbits(self, point):
        """Orbits of the point stabilizer, each as a sorted tuple."""
        self._require_transitive()
        self._check_point(point)
        stab = self.stabilizer_generators(point)
        remaining = set(range(self.degree))
        out = []
        while remaining:
            rep = min(remaining)
            orb = stab.orbit(rep)
            out.append(orb)
            remaining.difference_update(orb)
        return tuple(out)

    def _require_transitive(self):
        if not self.is_transitive():
            raise PreconditionError("operation requires a transitive group")

    def orbital_of_pair(self, pair):
        """Closure of one ordered pair under the coordinatewise action."""
        a, b = pair
        self._check_point(a)
        self._check_point(b)
        seen = {(a, b)}
        queue = deque([(a, b)])
        while queue:
            p, q = queue.popleft()
            for g in self.generators:
                img = (g.images[p], g.images[q])
                if img not in seen:
                    seen.add(img)
                    queue.append(img)
        return Orbital((a, b), frozenset(seen))

    def orbitals_at(self, point):
        """One orbital per suborbit, bases (point, smallest suborbit member)."""
        self._require_transitive()
        self._check_point(point)
        return tuple(self.orbital_of_pair((point, orb[0]))
                     for orb in self.suborbits(point))

    def paired_subdegrees(self, point):
        """For each suborbit the pair (|section|, |paired section|)."""
        self._require_transitive()
        out = []
        for orb in self.orbitals_at(point):
            out.append((len(orb.point_section(point)),
                        len(orb.reverse_section(point))))
        return out

    def elements(self, cap=ELEMENT_CAP):
        """Breadth-first closure of the generators.

        Returns (elements sorted by image list, complete flag).  Exceeding
        the cap is reported through the flag, not raised: the library
        targets small witnesses, not large-group computation.
        """
        seen = {Permutation.identity(self.degree).images}
        frontier = [Permutation.identity(self.degree)]
        collected = list(frontier)
        complete = True
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.generators:
                    h = g * s
                    if h.images not in seen:
                        seen.add(h.images)
                        nxt.append(h)
                        collected.append(h)
                        if len(collected) > cap:
                            complete = False
                            nxt = []
                            frontier = []
                            break
                if not complete:
                    break
            if not complete:
                break
            frontier = nxt
        collected.sort(key=lambda p: p.images)
        return tuple(collected), complete

    def order(self, cap=ELEMENT_CAP):
        """Group order, or None when enumeration exceeds the cap."""
        elems, complete = self.elements(cap)
        return len(elems) if complete else None


def trivial_group(degree):
    return PermGroup(degree, (Permutation.identity(degree),))


def orbital_digraph(group, orbital):
    """Digraph on the point set whose arc set is the orbital."""
    if orbital.is_diagonal:
        raise InputError("orbital digraphs are only formed from non-diagonal orbitals")
    return Digraph(group.degree, orbital.pair_set)


def paired_orbital(group, orbital):
    """The orbital containing the reversed pairs.

    An involution; the returned base pair is normalized to start at the
    original base point when possible.
    """
    reversed_set = frozenset((b, a) for a, b in orbital.pair_set)
    alpha = orbital.base_pair[0]
    heads = sorted(b for a, b in reversed_set if a == alpha)
    if heads:
        base = (alpha, heads[0])
    else:
        base = (orbital.base_pair[1], orbital.base_pair[0])
    return Orbital(base, reversed_set)


def is_primitive_higman(group):
    """Higman's criterion: every non-diagonal orbital digraph is connected."""
    group._require_transitive()
    if group.degree < 2:
        raise PreconditionError("primitivity needs degree at least 2")
    for orb in group.orbitals_at(0):
        if orb.is_diagonal:
            continue
        if not is_connected(orbital_digraph(group, orb)):
            return False
    return True


def find_block_system(group, max_steps=None):
    """A nontrivial proper invariant partition, or None.

    Independent oracle for is_primitive_higman: for each seed pair {0, b}
    the minimal invariant equivalence relation containing it is closed up
    with a union-find; the first proper nontrivial partition found (seeds
    in increasing order) is returned as a tuple of sorted blocks.
    """
    group._require_transitive()
    n = group.degree
    if n < 2:
        raise PreconditionError("block systems need degree at least 2")
    steps = 0
    for beta in range(1, n):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx
            return True

        pending = deque([(0, beta)])
        union(0, beta)
        while pending:
            a, b = pending.popleft()
            for g in group.generators:
                steps += 1
                if max_steps is not None and steps > max_steps:
                    raise CapacityError("block search exceeded %d steps" % max_steps)
                ia, ib = g.images[a], g.images[b]
                if union(ia, ib):
                    pending.append((ia, ib))
        blocks = {}
        for x in range(n):
            blocks.setdefault(find(x), []).append(x)
        if 1 < len(blocks[find(0)]) < n:
            return tuple(tuple(sorted(b)) for _, b in sorted(blocks.items()))
    return None


def parse_permutation(token, degree):
    """Parse either an image list '2 0 1' or cycles '(0 1)(2 3)'."""
    token = token.strip()
    if token.startswith("("):
        cycles = []
        depth = 0
        current = []
        for ch in token:
            if ch == "(":
                if depth:
                    raise ParseError("nested parenthesis in %r" % token)
                depth = 1
                current = []
            elif ch == ")":
                if not depth:
                    raise ParseError("unbalanced parenthesis in %r" % token)
                depth = 0
                text = "".join(current).replace(",", " ")
                if text.strip():
                    cycles.append(tuple(int(x) for x in text.split()))
            elif depth:
                current.append(ch)
            elif not ch.isspace():
                raise ParseError("unexpected character %r in %r" % (ch, token))
        if depth:
            raise ParseError("unbalanced parenthesis in %r" % token)
        return Permutation.from_cycles(degree, cycles)
    images = tuple(int(x) for x in token.split())
    if len(images) != degree:
        raise ParseError("image list length %d does not match degree %d"
                         % (len(images), degree))
    return Permutation(images)


def group_from_text(text):
    """Parse the group format: 'degree <n>' then 'g <perm>' lines."""
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None, 1)
        if degree is None:
            if fields[0] != "degree" or len(fields) != 2:
                raise ParseError("expected 'degree <n>' header", lineno)
            try:
                degree = int(fields[1])
            except ValueError:
                raise ParseError("degree %r is not an integer" % fields[1], lineno)
            continue
        if fields[0] != "g" or len(fields) != 2:
            raise ParseError("expected generator line 'g <perm>'", lineno)
        try:
            gens.append(parse_permutation(fields[1], degree))
        except (ParseError, InputError) as exc:
            raise ParseError(str(exc), lineno)
    if degree is None:
        raise ParseError("missing 'degree <n>' header", 1)
    if not gens:
        gens.append(Permutation.identity(degree))
    return PermGroup(degree, tuple(gens))


def group_to_text(group):
    """Serialize with generators in image-list form."""
    lines = ["degree %d" % group.degree]
    for g in group.generators:
        lines.append("g " + " ".join(str(x) for x in g.images))
    return "\n".join(lines) + "\n"


def symmetric_group(degree):
    if degree == 1:
        return trivial_group(1)
    gens = [Permutation.from_cycles(degree, [(0, 1)])]
    if degree > 2:
        gens.append(Permutation.from_cycles(degree, [tuple(range(degree))]))
    return PermGroup(degree, tuple(gens))


def cyclic_group(degree):
    return PermGroup(degree, (Permutation.from_cycles(degree, [tuple(range(degree))]),))


def dihedral_group(n):
    """Dihedral group of order 2n acting on n points."""
    rot = Permutation.from_cycles(n, [tuple(range(n))])
    ref = Permutation(tuple((n - i) % n for i in range(n)))
    return PermGroup(n, (rot, ref))
