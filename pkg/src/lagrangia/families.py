"""Exhaustive enumeration of intersecting families at desk scale.

Families live on a ground set [s] with edge sizes at most r (generating
sets).  Enumeration is per ground size, emits one representative per
isomorphism class, and by default restricts to maximal families: weights
are monotone under adding edges, so maximal classes dominate every other
intersecting family in any weight audit.

Two engines drive the maximal enumeration:

* ``s = 2r - 1``: a maximal family is determined by its level-(r-1) slice,
  which can be any intersecting (r-1)-uniform family; those are produced by
  a direct subset walk.  This is what makes the largest ground size cheap.
* ``s < 2r - 1``: Bron-Kerbosch maximal-clique enumeration over the
  disjointness-free graph on all candidate edges.

On top of the enumeration sit the non-principal weight sweep (recording,
for every non-principal class, the best weight found and its gap to the
principal ceiling) and the complete-intersection-style frontier explorer
for t-intersecting families.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ._canon import canonical_key, canonical_mask_family
from .hypergraph import Hypergraph, SetSystem, principal_vertex
from .lagrangian import maximize
from .wiss import optimize_weight, reconstruct

__all__ = [
    "EnumConfig",
    "BudgetExhaustedError",
    "enumerate_intersecting",
    "SweepRecord",
    "SweepSummary",
    "nonprincipal_gap_sweep",
    "FranklParams",
    "frankl_family",
    "g_family",
    "FrontierRow",
    "conjecture_frontier",
]


class BudgetExhaustedError(RuntimeError):
    """The backtracking node budget ran out; results so far are partial."""


@dataclass(frozen=True)
class EnumConfig:
    r: int
    max_ground: int | None = None
    maximal_only: bool = False
    left_compressed_only: bool = False
    uniform_only: bool = False
    node_budget: int = 10**8

    def __post_init__(self):
        if not 2 <= self.r <= 6:
            raise ValueError("exhaustive enumeration supports 2 <= r <= 6")
        if self.max_ground is None:
            object.__setattr__(self, "max_ground", 2 * self.r - 1)
        if not 1 <= self.max_ground <= 13:
            raise ValueError("max_ground must be in [1, 13]")


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExhaustedError("node budget exhausted")


def _universe(s, r, uniform):
    sizes = [r] if uniform else range(1, r + 1)
    masks = []
    for k in sizes:
        if k > s:
            continue
        for comb_ in itertools.combinations(range(s), k):
            masks.append(sum(1 << v for v in comb_))
    return masks


def _intersecting_subfamilies(masks, budget):
    """Every subfamily of pairwise-intersecting sets, as index tuples."""
    n = len(masks)
    disj = []
    for i in range(n):
        d = 0
        for j in range(n):
            if masks[i] & masks[j] == 0:
                d |= 1 << j
        disj.append(d)

    chosen = []

    def rec(start, allowed):
        budget.spend()
        yield tuple(chosen)
        a = allowed >> start
        i = start
        while a:
            if a & 1:
                chosen.append(i)
                yield from rec(i + 1, allowed & ~disj[i])
                chosen.pop()
            a >>= 1
            i += 1

    yield from rec(0, (1 << n) - 1)


def _maximal_cliques(masks, budget):
    """Bron-Kerbosch with pivoting over the intersection graph."""
    n = len(masks)
    adj = []
    for i in range(n):
        a = 0
        for j in range(n):
            if i != j and masks[i] & masks[j] != 0:
                a |= 1 << j
        adj.append(a)
    if n == 0:
        return

    def bk(r_set, p_set, x_set):
        budget.spend()
        if not p_set and not x_set:
            yield r_set
            return
        # pivot with most neighbours in P
        pux = p_set | x_set
        best_u, best_cnt = -1, -1
        probe = pux
        while probe:
            low = probe & -probe
            u = low.bit_length() - 1
            cnt = (p_set & adj[u]).bit_count()
            if cnt > best_cnt:
                best_u, best_cnt = u, cnt
            probe ^= low
        cand = p_set & ~adj[best_u]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            yield from bk(r_set | low, p_set & adj[v], x_set & adj[v])
            p_set ^= low
            x_set |= low
            cand ^= low

    yield from bk(0, (1 << n) - 1, 0)


def _middle_slice_to_maximal(s_masks, s, r):
    """Maximal family on [s] = [2r-1] determined by its (r-1)-level slice."""
    full = (1 << s) - 1
    in_slice = set(s_masks)
    edges = list(s_masks)
    for comb_ in itertools.combinations(range(s), r):
        y = sum(1 << v for v in comb_)
        if (full ^ y) not in in_slice:
            edges.append(y)
    for k in range(1, r - 1):
        for comb_ in itertools.combinations(range(s), k):
            x = sum(1 << v for v in comb_)
            rest = [v for v in range(s) if not (x >> v) & 1]
            if all(
                (x | sum(1 << v for v in extra)) in in_slice
                for extra in itertools.combinations(rest, r - 1 - len(comb_))
            ):
                edges.append(x)
    return edges


def _mask_to_edge(mask):
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _spanning(edge_masks, s):
    acc = 0
    for m in edge_masks:
        acc |= m
    return acc == (1 << s) - 1


def _labeled_maximal_families(s, r, uniform, budget):
    if not uniform and s == 2 * r - 1 and r >= 2:
        slice_masks = _universe(s, r - 1, True)
        for idxs in _intersecting_subfamilies(slice_masks, budget):
            yield _middle_slice_to_maximal([slice_masks[i] for i in idxs], s, r)
    else:
        masks = _universe(s, r, uniform)
        for clique in _maximal_cliques(masks, budget):
            fam = []
            rest = clique
            while rest:
                low = rest & -rest
                fam.append(masks[low.bit_length() - 1])
                rest ^= low
            yield fam


def _classes_for_ground(s, r, cfg: EnumConfig, budget):
    """Deduplicated labeled families on exactly [s]; returns edge-mask lists."""
    reps = {}
    if cfg.maximal_only:
        source = _labeled_maximal_families(s, r, cfg.uniform_only, budget)
    else:
        masks = _universe(s, r, cfg.uniform_only)
        source = (
            [masks[i] for i in idxs]
            for idxs in _intersecting_subfamilies(masks, budget)
            if idxs
        )
    for fam in source:
        if not fam or not _spanning(fam, s):
            continue
        if cfg.left_compressed_only and not _is_left_compressed_masks(fam, s):
            continue
        key = canonical_mask_family(fam, s)
        if key not in reps:
            reps[key] = sorted(fam)
    return [reps[k] for k in sorted(reps)]


def _is_left_compressed_masks(fam, s):
    fam_set = set(fam)
    for m in fam:
        for j in range(s):
            if not (m >> j) & 1:
                continue
            for i in range(j):
                if not (m >> i) & 1 and ((m ^ (1 << j)) | (1 << i)) not in fam_set:
                    return False
    return True


def enumerate_intersecting(cfg: EnumConfig):
    """Yield one SetSystem per isomorphism class, in deterministic order.

    Classes are reported on their support: each family appears at the
    ground size it actually spans.  Raises BudgetExhaustedError when the
    backtracking allowance runs out (already-yielded systems are valid).
    """
    budget = _Budget(cfg.node_budget)
    for s in range(1, cfg.max_ground + 1):
        for fam in _classes_for_ground(s, cfg.r, cfg, budget):
            yield SetSystem(s, cfg.r, [_mask_to_edge(m) for m in fam])


# ---------------------------------------------------------------------------
# the non-principal weight sweep


@dataclass(frozen=True)
class SweepRecord:
    canonical_key: str
    s: int
    principal: bool
    value: float
    witness_p: tuple[float, ...]
    gap_to_bound: float


@dataclass(frozen=True)
class SweepSummary:
    r: int
    classes: int
    nonprincipal_classes: int
    max_nonprincipal_value: float
    max_nonprincipal_key: str | None
    bound_l: Fraction
    bound_c_r: Fraction
    dominance_ok: bool
    per_scale_audit_ok: bool
    principal_ok: bool
    max_class_is_complete_trace: bool | None


def _class_seed(seed, s, index):
    return (seed * 1_000_003 + s * 7_919 + index) % (2**63 - 1)


def nonprincipal_gap_sweep(
    r: int,
    cfg: EnumConfig | None = None,
    seed: int = 0,
    opt_restarts: int = 48,
    opt_iters: int = 200,
    lam_restarts: int = 16,
    lam_iters: int = 300,
    workers: int = 1,
):
    """Audit every maximal intersecting class against the principal ceiling.

    For each class the recorded value is the larger of the direct weight
    optimum and r! times the Lagrangian of the reconstructed r-graph on
    s + 2r vertices; both are lower bounds of the true supremum.
    """
    if r < 3:
        raise ValueError("the sweep needs r >= 3")
    from .checks import constants

    cons = constants(r)
    if cfg is None:
        cfg = EnumConfig(r=r, maximal_only=True)
    tasks = []
    budget = _Budget(cfg.node_budget)
    for s in range(1, cfg.max_ground + 1):
        fams = _classes_for_ground(s, r, cfg, budget)
        for index, fam in enumerate(fams):
            tasks.append((s, index, fam))

    args = [
        (s, index, fam, r, _class_seed(seed, s, index), opt_restarts, opt_iters,
         lam_restarts, lam_iters)
        for s, index, fam in tasks
    ]
    if workers > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, args, chunksize=8))
    else:
        results = [_sweep_one(a) for a in args]

    records = []
    l_float = float(cons.L_r)
    for (s, index, fam), (key_str, principal, value, witness) in zip(tasks, results):
        records.append(
            SweepRecord(key_str, s, principal, value, witness, l_float - value)
        )

    nonp = [rec for rec in records if not rec.principal]
    max_rec = max(nonp, key=lambda rec: (rec.value, rec.canonical_key), default=None)
    c = Fraction(1, 500)
    per_scale_ok = all(
        rec.value <= float(cons.L_r - c * Fraction(1, 2 ** min(2 * r - 2, rec.s - 1))) + 1e-9
        for rec in nonp
    )
    principal_ok = all(
        rec.value <= l_float + 1e-9 for rec in records if rec.principal
    )
    dominance_ok = (
        max_rec is None or max_rec.value <= float(cons.L_r - cons.c_r) + 1e-12
        if r >= 4
        else True
    )
    max_is_complete = None
    if r == 3 and max_rec is not None:
        from .hypergraph import complete

        target = canonical_key(complete(2 * r - 1, r).as_set_system()).as_string()
        max_is_complete = max_rec.canonical_key == target
    summary = SweepSummary(
        r=r,
        classes=len(records),
        nonprincipal_classes=len(nonp),
        max_nonprincipal_value=max_rec.value if max_rec else 0.0,
        max_nonprincipal_key=max_rec.canonical_key if max_rec else None,
        bound_l=cons.L_r,
        bound_c_r=cons.c_r,
        dominance_ok=dominance_ok,
        per_scale_audit_ok=per_scale_ok,
        principal_ok=principal_ok,
        max_class_is_complete_trace=max_is_complete,
    )
    return records, summary


def _sweep_one(arg):
    (s, index, fam, r, seed, opt_restarts, opt_iters, lam_restarts, lam_iters) = arg
    system = SetSystem(s, r, [_mask_to_edge(m) for m in fam])
    key_str = canonical_key(system).as_string()
    principal = principal_vertex(system) is not None
    best_p, w_val = optimize_weight(
        system, r, restarts=opt_restarts, seed=seed, max_iters=opt_iters
    )
    graph = reconstruct(system, s + 2 * r, r)
    lam = maximize(graph, restarts=lam_restarts, seed=seed, max_iters=lam_iters)
    value = max(w_val, factorial(r) * lam.value)
    witness = tuple(best_p.p) + (best_p.p_inf,)
    return key_str, principal, value, witness


# ---------------------------------------------------------------------------
# complete-intersection-style families


@dataclass(frozen=True)
class FranklParams:
    t: int
    i: int
    r: int

    def __post_init__(self):
        if self.t < 1 or self.i < 0 or self.r < self.t + self.i:
            raise ValueError("need t >= 1, i >= 0, r >= t + i")

    @property
    def ground(self):
        return self.t + 2 * self.i


def _assert_t_intersecting(edge_sets, t):
    for a, b in itertools.combinations(edge_sets, 2):
        if len(a & b) < t:
            raise AssertionError("family is not t-intersecting")


def frankl_family(params: FranklParams) -> SetSystem:
    """All subsets of [t+2i] with size between t+i and min(r, t+2i)."""
    s = params.ground
    lo = params.t + params.i
    hi = min(params.r, s)
    edges = [
        c
        for k in range(lo, hi + 1)
        for c in itertools.combinations(range(1, s + 1), k)
    ]
    system = SetSystem(s, hi, edges)
    _assert_t_intersecting(system.edge_sets(), params.t)
    return system


def g_family(params: FranklParams, n: int) -> Hypergraph:
    """All r-sets of [n] whose trace on [t+2i] has size at least t+i."""
    s = params.ground
    if n < params.r + params.i:
        raise ValueError("need n >= r + i")
    lo = params.t + params.i
    edges = [
        e
        for e in itertools.combinations(range(1, n + 1), params.r)
        if sum(1 for v in e if v <= s) >= lo
    ]
    graph = Hypergraph(params.r, n, edges)
    _assert_t_intersecting(graph.edge_sets(), params.t)
    return graph


@dataclass(frozen=True)
class FrontierRow:
    i: int
    ground: int
    value: float
    witness_p: tuple[float, ...]
    lower_bound_only: bool


def conjecture_frontier(r: int, t: int, restarts: int = 200, seed: int = 0):
    """Weight frontier over the candidate extremal families F(r, t, i).

    Returns (rows, best_row); every value is a lower bound obtained by
    seeded ascent.
    """
    if not 1 <= t <= r:
        raise ValueError("need 1 <= t <= r")
    if r > 8:
        raise ValueError("frontier guard: r <= 8")
    rows = []
    for i in range(0, r - t + 1):
        params = FranklParams(t, i, r)
        fam = frankl_family(params)
        best_p, value = optimize_weight(
            fam, r, restarts=restarts, seed=_class_seed(seed, params.ground, i)
        )
        rows.append(
            FrontierRow(
                i=i,
                ground=params.ground,
                value=value,
                witness_p=tuple(best_p.p) + (best_p.p_inf,),
                lower_bound_only=True,
            )
        )
    best = max(rows, key=lambda row: row.value)
    return rows, best
