"""Canonical labeling and isomorphism for small edge families.

The canonical key of a family is the lexicographically least encoding of
its edge set over all relabelings of the non-isolated vertices.  Encoding:
edges written largest-vertex-first and listed in colex order, so that the
edges inside the first k labels always form a prefix.  That prefix property
is what lets the branch-and-bound search below cut a partial labeling as
soon as its encoding exceeds the best one found.

Intended for at most ~14 essential vertices; a hard cap guards against
accidentally feeding it something exponential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

__all__ = ["CanonicalKey", "TooManyVerticesError", "canonical_key", "is_isomorphic"]

DEFAULT_VERTEX_CAP = 14


class TooManyVerticesError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Relabeling-invariant fingerprint (support size + minimal encoding)."""

    n: int
    enc: tuple[tuple[int, ...], ...]

    def as_string(self):
        return f"{self.n}:" + "|".join(".".join(map(str, e)) for e in self.enc)


def _support_relabel(edges):
    verts = sorted({v for e in edges for v in e})
    rel = {v: i for i, v in enumerate(verts)}
    return [frozenset(rel[v] for v in e) for e in edges], len(verts)


def _refined_colors(esets, m):
    # iterated degree refinement; heuristic ordering only, not used for pruning
    colors = [tuple(sorted(len(e) for e in esets if v in e)) for v in range(m)]
    for _ in range(2):
        nxt = []
        for v in range(m):
            around = tuple(
                sorted(
                    tuple(sorted(colors[u] for u in e if u != v)) for e in esets if v in e
                )
            )
            nxt.append((colors[v], around))
        rank = {c: i for i, c in enumerate(sorted(set(nxt)))}
        colors = [rank[c] for c in nxt]
        colors = [(c,) for c in colors]
    return [c[0] for c in colors]


def canonical_key(obj, max_vertices: int = DEFAULT_VERTEX_CAP) -> CanonicalKey:
    """Canonical key of a Hypergraph or SetSystem, isolated vertices dropped."""
    esets, m = _support_relabel(obj.edges)
    if m > max_vertices:
        raise TooManyVerticesError(
            f"{m} essential vertices exceed the cap of {max_vertices}"
        )
    if not esets:
        return CanonicalKey(0, ())
    colors = _refined_colors(esets, m)
    order_hint = sorted(range(m), key=lambda v: (colors[v], v))

    edges_of = [[] for _ in range(m)]
    for i, e in enumerate(esets):
        for v in e:
            edges_of[v].append(i)

    best: list[tuple[int, ...]] | None = None
    label = [-1] * m
    assigned: set[int] = set()

    def recurse(depth, enc, tight):
        nonlocal best
        if depth == m:
            if best is None or not tight:
                best = list(enc)
            return
        for v in order_hint:
            if label[v] >= 0:
                continue
            label[v] = depth
            assigned.add(v)
            block = []
            complete_now = [
                i for i in edges_of[v] if all(u in assigned for u in esets[i])
            ]
            for i in complete_now:
                block.append(tuple(sorted((label[u] for u in esets[i]), reverse=True)))
            block.sort()
            new_tight = tight
            prune = False
            if best is not None and tight:
                pos = len(enc)
                seg = best[pos : pos + len(block)]
                if block > seg or (block == seg and pos + len(block) > len(best)):
                    prune = True
                elif block < seg:
                    new_tight = False
            if not prune:
                recurse(depth + 1, enc + block, new_tight)
            label[v] = -1
            assigned.discard(v)

    recurse(0, [], True)
    assert best is not None
    return CanonicalKey(m, tuple(best))


def is_isomorphic(a, b, max_vertices: int = DEFAULT_VERTEX_CAP) -> bool:
    """Isomorphism after deleting isolated vertices."""
    ea, na = _support_relabel(a.edges)
    eb, nb = _support_relabel(b.edges)
    if na != nb or len(ea) != len(eb):
        return False
    if sorted(len(e) for e in ea) != sorted(len(e) for e in eb):
        return False

    def degs(esets, m):
        d = [0] * m
        for e in esets:
            for v in e:
                d[v] += 1
        return sorted(d)

    if degs(ea, na) != degs(eb, nb):
        return False
    return canonical_key(a, max_vertices) == canonical_key(b, max_vertices)


# ---------------------------------------------------------------------------
# fast canonical forms for families given as element-bitmasks over [s]
#
# Used by the enumeration pipeline, where millions of labeled families over
# a tiny ground set must be deduplicated.  Elements are grouped into classes
# by an invariant profile (degree by edge size, sorted codegree row); the
# canonical form is the minimal sorted edge-mask tuple over all permutations
# that respect the classes.  Profile classes are almost always tiny, so the
# number of permutations actually tried stays small.


def mask_profile(edge_masks, s):
    """Per-element profile: (size histogram of incident edges, codegree row)."""
    sizes = [m.bit_count() for m in edge_masks]
    hist = [[0] * (max(sizes, default=0) + 1) for _ in range(s)]
    co = [[0] * s for _ in range(s)]
    for em, sz in zip(edge_masks, sizes):
        members = [v for v in range(s) if em >> v & 1]
        for v in members:
            hist[v][sz] += 1
        for i, v in enumerate(members):
            for u in members[i + 1 :]:
                co[v][u] += 1
                co[u][v] += 1
    return [(tuple(hist[v]), tuple(sorted(co[v]))) for v in range(s)]


def canonical_mask_family(edge_masks, s, perm_cap: int = 50_000):
    """Canonical frozenset of edge bitmasks under relabeling of [s].

    Falls back to all s! permutations when the profile classes are too
    coarse to keep the search below perm_cap (only near-symmetric families
    hit this, and those are rare).
    """
    prof = mask_profile(edge_masks, s)
    order = sorted(range(s), key=lambda v: (prof[v], v))
    classes = []
    for v in order:
        if classes and prof[classes[-1][-1]] == prof[v]:
            classes[-1].append(v)
        else:
            classes.append([v])
    nperm = 1
    for c in classes:
        for i in range(2, len(c) + 1):
            nperm *= i
    if nperm > perm_cap:
        classes = [list(range(s))]

    best = None
    for parts in itertools.product(*[itertools.permutations(c) for c in classes]):
        new_label = [0] * s
        pos = 0
        for part in parts:
            for orig in part:
                new_label[orig] = pos
                pos += 1
        remapped = []
        for em in edge_masks:
            nm = 0
            rest = em
            while rest:
                low = rest & -rest
                nm |= 1 << new_label[low.bit_length() - 1]
                rest ^= low
            remapped.append(nm)
        cand = tuple(sorted(remapped))
        if best is None or cand < best:
            best = cand
    return best
