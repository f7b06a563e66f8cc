"""Budgeted backtracking search for hypergraph homomorphisms and subgraphs.

A homomorphism sends every edge of the pattern to an edge of the host; for
uniform hypergraphs this forces the map to be injective on each edge, which
is the workhorse pruning rule: as soon as two vertices of a common pattern
edge collide in the host, the branch dies.  The partial image of every edge
must also extend to some host edge.

Searches return True / False, or None when the node budget runs out, so an
inconclusive search can never masquerade as a refutation.
"""

from __future__ import annotations

from .hypergraph import Hypergraph

__all__ = ["has_homomorphism", "contains_subgraph"]

DEFAULT_NODE_BUDGET = 10**7


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def tick(self):
        self.left -= 1
        return self.left >= 0


def _pattern_order(pattern: Hypergraph):
    """Order pattern vertices so edges complete as early as possible."""
    support = pattern.support()
    edges = [set(e) for e in pattern.edges]
    placed = set()
    order = []
    deg = {v: 0 for v in support}
    for e in edges:
        for v in e:
            deg[v] += 1
    remaining = set(support)
    while remaining:
        best_v, best_score = None, None
        for v in remaining:
            anchored = sum(1 for e in edges if v in e and len(e & placed) > 0)
            closing = sum(1 for e in edges if v in e and e - placed == {v})
            score = (closing, anchored, deg[v], -v)
            if best_score is None or score > best_score:
                best_v, best_score = v, score
        order.append(best_v)
        placed.add(best_v)
        remaining.discard(best_v)
    return order


def _search(pattern: Hypergraph, host: Hypergraph, injective: bool, node_budget: int):
    if pattern.edge_count == 0:
        return True
    if host.edge_count == 0:
        return False
    p_support = pattern.support()
    if injective:
        if len(p_support) > host.n:
            return False
        if pattern.edge_count > host.edge_count:
            return False
        pd = sorted(pattern.degrees()[v] for v in p_support)
        hd = sorted(host.degrees().values())
        if pd and hd and max(pd) > max(hd):
            return False

    order = _pattern_order(pattern)
    pos_of = {v: i for i, v in enumerate(order)}
    p_edges = [frozenset(e) for e in pattern.edges]
    # for each pattern vertex, edges through it
    edges_at = [[] for _ in order]
    for ei, e in enumerate(p_edges):
        for v in e:
            edges_at[pos_of[v]].append(ei)
    host_edges = [frozenset(e) for e in host.edges]
    host_at = {v: [] for v in range(1, host.n + 1)}
    for he in host_edges:
        for v in he:
            host_at[v].append(he)
    host_edge_set = set(host_edges)

    image = {}
    used = set()
    budget = _Budget(node_budget)
    exhausted = []

    def feasible(v, w):
        for ei in edges_at[pos_of[v]]:
            e = p_edges[ei]
            mapped = set()
            cnt = 0
            for u in e:
                if u == v:
                    mapped.add(w)
                    cnt += 1
                elif u in image:
                    mapped.add(image[u])
                    cnt += 1
            if len(mapped) != cnt:
                return False  # collision inside one edge
            if cnt == len(e):
                if frozenset(mapped) not in host_edge_set:
                    return False
            else:
                # partial image must sit inside some host edge through w
                if not any(mapped <= he for he in host_at[w]):
                    return False
        return True

    def dfs(i):
        if i == len(order):
            return True
        v = order[i]
        for w in range(1, host.n + 1):
            if injective and w in used:
                continue
            if not budget.tick():
                exhausted.append(True)
                return False
            if feasible(v, w):
                image[v] = w
                if injective:
                    used.add(w)
                if dfs(i + 1):
                    return True
                del image[v]
                if injective:
                    used.discard(w)
            if exhausted:
                return False
        return False

    found = dfs(0)
    if found:
        return True
    if exhausted:
        return None
    return False


def has_homomorphism(pattern: Hypergraph, host: Hypergraph, node_budget: int = DEFAULT_NODE_BUDGET):
    """True/False, or None if the node budget was exhausted (inconclusive)."""
    if pattern.r != host.r:
        raise ValueError("uniformities differ")
    return _search(pattern, host, injective=False, node_budget=node_budget)


def contains_subgraph(host: Hypergraph, pattern: Hypergraph, node_budget: int = DEFAULT_NODE_BUDGET):
    """Injective edge-preserving map from pattern into host; None = inconclusive."""
    if pattern.r != host.r:
        raise ValueError("uniformities differ")
    return _search(pattern, host, injective=True, node_budget=node_budget)
