"""Uniform hypergraphs and small set systems over integer ground sets.

An r-graph lives on vertices 1..n and every edge has exactly r vertices.
A set system relaxes uniformity: edges are subsets of [s] of size at most
r_cap.  Both types are immutable; every edge is kept as a sorted tuple and
the edge list is kept in increasing colexicographic order, so equal objects
have identical repr and file form.

Besides the two containers this module provides the standard constructions
(complete graphs, matchings, stars, balanced blowups, extensions) and the
structural predicates used throughout the package (intersecting, principal,
covers-pairs, star partitions).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

__all__ = [
    "Hypergraph",
    "SetSystem",
    "StarPartition",
    "FormatError",
    "colex_key",
    "link",
    "induced",
    "is_intersecting",
    "principal_vertex",
    "principal_at_one",
    "covers_pairs",
    "extension",
    "matching2",
    "complete",
    "k_rr",
    "star",
    "principal_star",
    "balanced_blowup_t5",
    "best_star",
    "clone_vertex",
    "star_partition",
    "verify_star_partition",
    "is_balanced",
    "parse_hypergraph",
    "format_hypergraph",
]


def colex_key(edge):
    """Sort key realizing colexicographic order on finite integer sets."""
    return tuple(sorted(edge, reverse=True))


def _normalize_edges(edges, *, ground, max_size, min_size=0, uniform=None):
    seen = set()
    out = []
    for e in edges:
        t = tuple(sorted(e))
        if len(set(t)) != len(t):
            raise ValueError(f"edge {t} has repeated vertices")
        if uniform is not None and len(t) != uniform:
            raise ValueError(f"edge {t} does not have exactly {uniform} vertices")
        if not (min_size <= len(t) <= max_size):
            raise ValueError(f"edge {t} has size outside [{min_size}, {max_size}]")
        if t and (t[0] < 1 or t[-1] > ground):
            raise ValueError(f"edge {t} is not contained in [{ground}]")
        if t in seen:
            continue
        seen.add(t)
        out.append(t)
    out.sort(key=colex_key)
    return tuple(out)


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform hypergraph on vertex set {1, ..., n}."""

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("uniformity must be at least 2")
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        object.__setattr__(
            self,
            "edges",
            _normalize_edges(self.edges, ground=self.n, max_size=self.r, uniform=self.r),
        )

    @property
    def edge_count(self):
        return len(self.edges)

    def edge_sets(self):
        return [frozenset(e) for e in self.edges]

    def support(self):
        """Vertices that occur in at least one edge, sorted."""
        used = set()
        for e in self.edges:
            used.update(e)
        return sorted(used)

    def degrees(self):
        deg = dict.fromkeys(range(1, self.n + 1), 0)
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def as_set_system(self):
        return SetSystem(self.n, self.r, self.edges)


@dataclass(frozen=True)
class SetSystem:
    """A family of subsets of {1, ..., s}, each of size at most r_cap.

    The empty set is allowed as an edge (it arises as the link of a full
    edge); operations that cannot handle it reject it explicitly.
    """

    s: int
    r_cap: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.s < 0 or self.r_cap < 0:
            raise ValueError("ground size and size cap must be non-negative")
        object.__setattr__(
            self,
            "edges",
            _normalize_edges(self.edges, ground=self.s, max_size=self.r_cap),
        )

    @property
    def edge_count(self):
        return len(self.edges)

    def edge_sets(self):
        return [frozenset(e) for e in self.edges]

    def support(self):
        used = set()
        for e in self.edges:
            used.update(e)
        return sorted(used)


@dataclass(frozen=True)
class StarPartition:
    """A partition (A, B) of the vertices with |e ∩ A| = 1 for every edge."""

    a_side: tuple[int, ...]
    b_side: tuple[int, ...]


class FormatError(ValueError):
    """Malformed text input, with a 1-based line number."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


# ---------------------------------------------------------------------------
# links, induced subgraphs, predicates


def link(f: Hypergraph, base) -> SetSystem:
    """All J disjoint from `base` with base ∪ J an edge of f.

    Every returned set has size r - |base|; for `base` an edge the link is
    {∅}, which is why SetSystem admits the empty edge.
    """
    base = frozenset(base)
    if any(v < 1 or v > f.n for v in base):
        raise ValueError("link base must be a subset of the vertex set")
    out = []
    for e in f.edge_sets():
        if base <= e:
            out.append(tuple(sorted(e - base)))
    return SetSystem(f.n, f.r - len(base), out)


def induced(f: Hypergraph, subset) -> Hypergraph:
    """Restriction to `subset`, relabeled to 1..|subset| preserving order."""
    sub = sorted(set(subset))
    if any(v < 1 or v > f.n for v in sub):
        raise ValueError("subset must be contained in the vertex set")
    relabel = {v: i + 1 for i, v in enumerate(sub)}
    keep = set(sub)
    edges = [tuple(sorted(relabel[v] for v in e)) for e in f.edges if set(e) <= keep]
    return Hypergraph(f.r, len(sub), edges)


def is_intersecting(obj) -> bool:
    """True iff every two edges share a vertex (an empty edge fails)."""
    sets = obj.edge_sets()
    if any(not e for e in sets):
        return False
    for a, b in itertools.combinations(sets, 2):
        if not (a & b):
            return False
    return True


def principal_vertex(obj):
    """Smallest vertex common to all edges, or None.

    An empty edge list is vacuously principal at vertex 1.
    """
    sets = obj.edge_sets()
    if not sets:
        return 1
    common = frozenset.intersection(*sets)
    return min(common) if common else None


def principal_at_one(g: SetSystem) -> bool:
    """Whether vertex 1 lies in every edge (vacuously true when empty)."""
    return all(1 in e for e in g.edges)


def covers_pairs(f: Hypergraph) -> bool:
    """True iff every pair of non-isolated vertices lies in a common edge."""
    support = f.support()
    covered = set()
    for e in f.edges:
        covered.update(itertools.combinations(e, 2))
    return all(p in covered for p in itertools.combinations(support, 2))


def _uncovered_pairs(f: Hypergraph):
    support = f.support()
    covered = set()
    for e in f.edges:
        covered.update(itertools.combinations(e, 2))
    return [p for p in itertools.combinations(support, 2) if p not in covered]


def extension(f: Hypergraph) -> Hypergraph:
    """Add, for every uncovered pair of non-isolated vertices, one new edge
    through the pair and r-2 fresh vertices.

    Fresh vertices are allocated in consecutive blocks following the colex
    order of the uncovered pairs, so the construction is reproducible
    bit for bit.
    """
    pairs = sorted(_uncovered_pairs(f), key=colex_key)
    edges = list(f.edges)
    next_v = f.n + 1
    for u, v in pairs:
        fresh = range(next_v, next_v + f.r - 2)
        edges.append(tuple(sorted((u, v, *fresh))))
        next_v += f.r - 2
    return Hypergraph(f.r, f.n + (f.r - 2) * len(pairs), edges)


# ---------------------------------------------------------------------------
# named constructions


def matching2(r: int) -> Hypergraph:
    """Two vertex-disjoint edges: {1..r} and {r+1..2r}."""
    if r < 2:
        raise ValueError("r must be at least 2")
    return Hypergraph(r, 2 * r, [tuple(range(1, r + 1)), tuple(range(r + 1, 2 * r + 1))])


def complete(t: int, r: int) -> Hypergraph:
    """The complete r-graph on t vertices."""
    if t < r:
        raise ValueError("need t >= r")
    return Hypergraph(r, t, list(itertools.combinations(range(1, t + 1), r)))


def k_rr(r: int) -> Hypergraph:
    """Extension of the two-edge matching; 2r + (r-2)r^2 vertices."""
    return extension(matching2(r))


def star(a: int, b: int, r: int) -> Hypergraph:
    """Maximal star with hub side {1..a} and leaf side {a+1..a+b}."""
    if a < 1 or b < r - 1:
        raise ValueError("need a >= 1 and b >= r - 1")
    hubs = range(1, a + 1)
    leaves = range(a + 1, a + b + 1)
    edges = [
        tuple(sorted((h, *rest)))
        for h in hubs
        for rest in itertools.combinations(leaves, r - 1)
    ]
    return Hypergraph(r, a + b, edges)


def principal_star(n: int, r: int) -> Hypergraph:
    """All r-sets of [n] through vertex 1."""
    if n < r:
        raise ValueError("need n >= r")
    edges = [
        tuple(sorted((1, *rest)))
        for rest in itertools.combinations(range(2, n + 1), r - 1)
    ]
    return Hypergraph(r, n, edges)


def balanced_blowup_t5(n: int) -> Hypergraph:
    """Balanced 5-partite blowup of the complete 3-graph on 5 vertices.

    [n] is split into five consecutive blocks with sizes differing by at
    most one (larger blocks first); edges are the triples meeting three
    distinct blocks.
    """
    if n < 5:
        raise ValueError("need n >= 5")
    q, rem = divmod(n, 5)
    part_of = {}
    v = 1
    for i in range(5):
        size = q + (1 if i < rem else 0)
        for _ in range(size):
            part_of[v] = i
            v += 1
    edges = [
        e
        for e in itertools.combinations(range(1, n + 1), 3)
        if len({part_of[u] for u in e}) == 3
    ]
    return Hypergraph(3, n, edges)


def best_star(n: int, r: int):
    """(a*, m): hub-side size maximizing a * C(n-a, r-1), and the maximum.

    Ties go to the smallest a.
    """
    if n < r:
        raise ValueError("need n >= r")
    best_a, best_m = 1, comb(n - 1, r - 1)
    for a in range(2, n - r + 2):
        m = a * comb(n - a, r - 1)
        if m > best_m:
            best_a, best_m = a, m
    return best_a, best_m


def clone_vertex(f: Hypergraph, v: int, k: int) -> Hypergraph:
    """Replace v by k clones with identical links (k = 0 deletes v).

    Vertices other than v keep their relative order and are relabeled to
    1..n-1; the clones are n, ..., n-1+k.
    """
    if not 1 <= v <= f.n:
        raise ValueError("vertex out of range")
    if k < 0:
        raise ValueError("clone count must be non-negative")
    relabel = {u: (u if u < v else u - 1) for u in range(1, f.n + 1) if u != v}
    clones = range(f.n, f.n + k)
    edges = []
    for e in f.edges:
        if v in e:
            rest = tuple(relabel[u] for u in e if u != v)
            for c in clones:
                edges.append(tuple(sorted((*rest, c))))
        else:
            edges.append(tuple(sorted(relabel[u] for u in e)))
    return Hypergraph(f.r, f.n - 1 + k, edges)


# ---------------------------------------------------------------------------
# star partitions


def star_partition(f: Hypergraph):
    """Find a partition (A, B) with |e ∩ A| = 1 for all edges, if one exists.

    Backtracking over the support in vertex order, trying A before B, so
    the returned A is the greedy lexicographic choice; isolated vertices
    always land in B.  Returns None when f is not a star.
    """
    support = f.support()
    if not support:
        return StarPartition((), tuple(range(1, f.n + 1)))
    edges = [tuple(e) for e in f.edges]
    edges_of = {v: [] for v in support}
    for i, e in enumerate(edges):
        for v in e:
            edges_of[v].append(i)
    label = {}
    a_count = [0] * len(edges)
    unassigned = [len(e) for e in edges]

    def ok_after(v, val):
        for i in edges_of[v]:
            if a_count[i] > 1:
                return False
            if a_count[i] == 0 and unassigned[i] == 0:
                return False
        return True

    def assign(v, val):
        label[v] = val
        for i in edges_of[v]:
            unassigned[i] -= 1
            if val:
                a_count[i] += 1

    def undo(v, val):
        del label[v]
        for i in edges_of[v]:
            unassigned[i] += 1
            if val:
                a_count[i] -= 1

    def solve(pos):
        if pos == len(support):
            return all(c == 1 for c in a_count)
        v = support[pos]
        for val in (True, False):
            assign(v, val)
            if ok_after(v, val) and solve(pos + 1):
                return True
            undo(v, val)
        return False

    if not solve(0):
        return None
    a_side = tuple(v for v in support if label[v])
    b_side = tuple(v for v in range(1, f.n + 1) if v not in set(a_side))
    return StarPartition(a_side, b_side)


def verify_star_partition(f: Hypergraph, sp: StarPartition) -> bool:
    a = set(sp.a_side)
    b = set(sp.b_side)
    if a & b or (a | b) != set(range(1, f.n + 1)):
        return False
    return all(len(a.intersection(e)) == 1 for e in f.edges)


def is_balanced(f: Hypergraph, eps: float) -> bool:
    """Whether some star partition satisfies ||A| - n/r| <= eps * n.

    eps is a fraction of n.  Non-stars are never balanced.
    """
    sp = star_partition(f)
    if sp is None:
        return False
    return abs(len(sp.a_side) - f.n / f.r) <= eps * f.n


# ---------------------------------------------------------------------------
# text format: "r n m" header, then m colex-sorted edge lines


def format_hypergraph(f: Hypergraph) -> str:
    lines = [f"{f.r} {f.n} {f.edge_count}"]
    lines.extend(" ".join(map(str, e)) for e in f.edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = text.split("\n")
    idx = 0
    while idx < len(lines) and lines[idx].lstrip().startswith("#"):
        idx += 1
    if idx >= len(lines) or not lines[idx].strip():
        raise FormatError(idx + 1, "missing 'r n m' header")
    head = lines[idx].split()
    if len(head) != 3:
        raise FormatError(idx + 1, "header must be 'r n m'")
    try:
        r, n, m = (int(x) for x in head)
    except ValueError:
        raise FormatError(idx + 1, "header fields must be integers") from None
    edges = []
    lineno = idx + 1
    for raw in lines[idx + 1 :]:
        lineno += 1
        if not raw.strip():
            continue
        if raw.lstrip().startswith("#"):
            raise FormatError(lineno, "comments are only allowed before the header")
        try:
            e = tuple(int(x) for x in raw.split())
        except ValueError:
            raise FormatError(lineno, "edge entries must be integers") from None
        if len(e) != r:
            raise FormatError(lineno, f"edge has {len(e)} vertices, expected {r}")
        if list(e) != sorted(e):
            raise FormatError(lineno, "edge vertices must be ascending")
        edges.append(e)
    if len(edges) != m:
        raise FormatError(lineno, f"expected {m} edges, found {len(edges)}")
    try:
        g = Hypergraph(r, n, edges)
    except ValueError as exc:
        raise FormatError(idx + 1, str(exc)) from None
    if len(g.edges) != m:
        raise FormatError(idx + 1, "duplicate edges in input")
    return g
