"""Weighted intersecting set systems.

A system is a triple (G, s, p): an intersecting family G of non-empty
subsets of [s] with edge sizes at most r, together with a probability
distribution p on [s] plus a residual mass p_inf, non-increasing on [s].
The weight of an edge e is

    w_p(e) = r!/(r-|e|)! * p_inf^(r-|e|) * prod_{i in e} p(i),

the probability that an r-multiset sampled i.i.d. from p restricts to
exactly e on [s].  Weights therefore live in [0, 1] and can be computed in
exact rational arithmetic, which is the mode used by every inequality
verifier here; floats are reserved for the inner loops of the weight
optimizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt

import numpy as np

from ._engine import MonomialSystem, project_monotone_simplex
from .hypergraph import Hypergraph, SetSystem, is_intersecting

__all__ = [
    "ProbDist",
    "Wiss",
    "WeightReport",
    "PreconditionError",
    "NotIntersectingAfterDeletionError",
    "weight_edge",
    "weight_system",
    "sample_multiset",
    "monte_carlo_weight",
    "compress",
    "is_left_compressed",
    "restrict",
    "reconstruct",
    "drop_last",
    "contribution_check",
    "ContributionReport",
    "case1_split",
    "Case1Split",
    "edge_index_sum",
    "optimize_weight",
    "parse_wiss",
    "format_wiss",
]

_TOL = 1e-12


class PreconditionError(ValueError):
    """An operation was called outside its stated hypotheses."""


class NotIntersectingAfterDeletionError(ValueError):
    """Deleting the last ground element would break the intersecting property."""


@dataclass(frozen=True)
class ProbDist:
    """Weights p(1) >= ... >= p(s) >= 0 with explicit residual p_inf.

    `exact` selects Fraction arithmetic; construction never renormalizes,
    it only checks consistency.
    """

    s: int
    p: tuple
    p_inf: object
    exact: bool

    def __post_init__(self):
        if len(self.p) != self.s:
            raise ValueError("need exactly s weights")
        if self.exact:
            p = tuple(Fraction(x) for x in self.p)
            inf = Fraction(self.p_inf)
            if any(x < 0 for x in p) or inf < 0:
                raise ValueError("weights must be non-negative")
            if any(p[i] < p[i + 1] for i in range(self.s - 1)):
                raise ValueError("weights must be non-increasing")
            if sum(p) + inf != 1:
                raise ValueError("weights and residual must sum to 1")
        else:
            p = tuple(float(x) for x in self.p)
            inf = float(self.p_inf)
            if any(x < -_TOL for x in p) or inf < -_TOL:
                raise ValueError("weights must be non-negative")
            if any(p[i] < p[i + 1] - _TOL for i in range(self.s - 1)):
                raise ValueError("weights must be non-increasing")
            if abs(sum(p) + inf - 1.0) > _TOL:
                raise ValueError("weights and residual must sum to 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p_inf", inf)

    @staticmethod
    def make(values, p_inf=None, exact=None):
        values = list(values)
        if exact is None:
            exact = all(isinstance(v, (int, Fraction)) for v in values) and (
                p_inf is None or isinstance(p_inf, (int, Fraction))
            )
        if p_inf is None:
            if exact:
                p_inf = 1 - sum(Fraction(v) for v in values)
            else:
                p_inf = 1.0 - sum(float(v) for v in values)
        return ProbDist(len(values), tuple(values), p_inf, exact)

    def value(self, i):
        """p(i) for i in [s]; i = 0 or i = s+1 reads the residual mass."""
        if 1 <= i <= self.s:
            return self.p[i - 1]
        return self.p_inf

    def drop_last_element(self):
        if self.s < 1:
            raise ValueError("nothing to drop")
        return ProbDist(self.s - 1, self.p[:-1], self.p_inf + self.p[-1], self.exact)


@dataclass(frozen=True)
class Wiss:
    """A weighted intersecting set system (G, s, p) with sizes capped at r."""

    g: SetSystem
    s: int
    r: int
    p: ProbDist

    def __post_init__(self):
        if self.g.s != self.s or self.p.s != self.s:
            raise ValueError("ground sizes disagree")
        if self.g.r_cap > self.r:
            raise ValueError("edge size cap exceeds r")
        if any(len(e) == 0 for e in self.g.edges):
            raise ValueError("edges must be non-empty")
        if not is_intersecting(self.g):
            raise ValueError("edge family must be intersecting")

    @staticmethod
    def make(edges, r, p: ProbDist):
        return Wiss(SetSystem(p.s, r, edges), p.s, r, p)


@dataclass(frozen=True)
class WeightReport:
    total: object
    per_edge: dict
    mode: str


def weight_edge(e, r: int, p: ProbDist):
    """w_p(e); exact when p is exact."""
    e = tuple(sorted(set(e)))
    if len(e) > r:
        raise ValueError("edge larger than r")
    if e and (e[0] < 1 or e[-1] > p.s):
        raise ValueError("edge not contained in the ground set")
    one = Fraction(1) if p.exact else 1.0
    coeff = Fraction(factorial(r), factorial(r - len(e))) if p.exact else (
        factorial(r) / factorial(r - len(e))
    )
    prod = one
    for i in e:
        prod *= p.p[i - 1]
    return coeff * p.p_inf ** (r - len(e)) * prod


def weight_system(w: Wiss) -> WeightReport:
    per_edge = {e: weight_edge(e, w.r, w.p) for e in w.g.edges}
    zero = Fraction(0) if w.p.exact else 0.0
    total = sum(per_edge.values(), zero)
    if w.p.exact:
        if not 0 <= total <= 1:
            raise AssertionError("total weight escaped [0, 1]")
    return WeightReport(total, per_edge, "rational" if w.p.exact else "float")


# ---------------------------------------------------------------------------
# sampling


def _p_as_floats(p: ProbDist):
    vec = [float(x) for x in p.p] + [float(p.p_inf)]
    arr = np.clip(np.array(vec), 0.0, None)
    return arr / arr.sum()


def sample_multiset(r: int, p: ProbDist, seed: int):
    """One multiset of r draws from [s] plus residual; 0 encodes 'outside'."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    probs = _p_as_floats(p)
    draws = rng.choice(p.s + 1, size=r, p=probs)
    return tuple(sorted(0 if d == p.s else d + 1 for d in draws))


_MC_CHUNK = 1 << 17


def monte_carlo_weight(w: Wiss, samples: int, seed: int):
    """(estimate, stderr) for w_p(G) by direct simulation.

    A sample counts when its restriction to [s] has no repeats and equals
    an edge.  Work is split into fixed-size chunks with independent seeded
    streams, so the result depends only on (samples, seed).
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    probs = _p_as_floats(w.p)
    s = w.s
    edge_masks = np.array(
        sorted(sum(1 << (v - 1) for v in e) for e in w.g.edges), dtype=np.int64
    )
    hits = 0
    done = 0
    chunk_idx = 0
    while done < samples:
        count = min(_MC_CHUNK, samples - done)
        rng = np.random.default_rng(np.random.SeedSequence((seed, chunk_idx)))
        draws = rng.choice(s + 1, size=(count, w.r), p=probs)
        srt = np.sort(draws, axis=1)
        ground = srt < s
        repeat = (srt[:, 1:] == srt[:, :-1]) & ground[:, 1:]
        ok = ~repeat.any(axis=1)
        masks = np.where(draws < s, np.int64(1) << draws.astype(np.int64), 0).sum(axis=1)
        if ok.any():
            hits += int(np.isin(masks[ok], edge_masks).sum())
        done += count
        chunk_idx += 1
    est = hits / samples
    stderr = sqrt(max(est * (1 - est), 0.0) / samples)
    return est, stderr


# ---------------------------------------------------------------------------
# compression and structure


def compress(g: SetSystem, i: int, j: int) -> SetSystem:
    """Shift j to i in every edge where the shifted edge is absent."""
    if not 1 <= i < j <= g.s:
        raise ValueError("need 1 <= i < j <= s")
    edges = set(g.edge_sets())
    out = []
    for e in g.edge_sets():
        if j in e and i not in e:
            shifted = frozenset(e - {j} | {i})
            out.append(shifted if shifted not in edges else e)
        else:
            out.append(e)
    result = SetSystem(g.s, g.r_cap, [tuple(sorted(e)) for e in out])
    if result.edge_count != g.edge_count:
        raise AssertionError("compression must be injective")
    return result


def is_left_compressed(g: SetSystem) -> bool:
    edges = set(g.edge_sets())
    for e in edges:
        for j in e:
            for i in range(1, j):
                if i not in e and frozenset(e - {j} | {i}) not in edges:
                    return False
    return True


def edge_index_sum(g: SetSystem) -> int:
    """Comparator used to break ties between systems of equal weight."""
    return sum(sum(e) for e in g.edges)


def restrict(f, subset) -> SetSystem:
    """Traces e ∩ S, deduplicated, relabeled order-preservingly to [|S|]."""
    sub = sorted(set(subset))
    bound = f.n if isinstance(f, Hypergraph) else f.s
    if any(v < 1 or v > bound for v in sub):
        raise ValueError("subset must lie inside the ground set")
    relabel = {v: k + 1 for k, v in enumerate(sub)}
    keep = set(sub)
    cap = f.r if isinstance(f, Hypergraph) else f.r_cap
    traces = {tuple(sorted(relabel[v] for v in set(e) & keep)) for e in f.edges}
    return SetSystem(len(sub), cap, traces)


def reconstruct(gd: SetSystem, n: int, r: int | None = None) -> Hypergraph:
    """Largest r-graph on [n] whose traces on [s] lie in gd."""
    r = gd.r_cap if r is None else r
    if any(len(e) == 0 for e in gd.edges):
        raise ValueError("cannot reconstruct from a family containing the empty set")
    if any(len(e) > r for e in gd.edges):
        raise ValueError("trace larger than the target uniformity")
    if n < gd.s + r:
        raise ValueError("need n >= s + r")
    outside = list(range(gd.s + 1, n + 1))
    edges = []
    for t in gd.edges:
        for rest in itertools.combinations(outside, r - len(t)):
            edges.append(tuple(sorted(t + rest)))
    return Hypergraph(r, n, edges)


def drop_last(w: Wiss) -> Wiss:
    """Delete ground element s from every edge and fold p(s) into p_inf.

    Requires that no two edges (including an edge with itself) meet only in
    {s}; otherwise the two-part split of `case1_split` applies instead.
    Total weight never decreases.
    """
    if w.s < 2:
        raise ValueError("need s >= 2")
    sets = w.g.edge_sets()
    for a, b in itertools.combinations_with_replacement(sets, 2):
        if not ((a & b) - {w.s}):
            raise NotIntersectingAfterDeletionError(
                f"edges {sorted(a)} and {sorted(b)} meet only at {w.s}"
            )
    new_edges = {tuple(sorted(e - {w.s})) for e in sets}
    return Wiss(SetSystem(w.s - 1, w.r, new_edges), w.s - 1, w.r, w.p.drop_last_element())


@dataclass(frozen=True)
class ContributionReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool


def contribution_check(e, r: int, p: ProbDist) -> ContributionReport:
    """Exact check that dropping s at least doubles the edge weight:
    w_pbar(e - {s}) >= 2 w_p(e), valid whenever p_inf >= p(s) > 0.
    """
    e = tuple(sorted(set(e)))
    if not e or e[-1] != p.s:
        raise PreconditionError("edge must contain the last ground element")
    if len(e) > r:
        raise PreconditionError("edge larger than r")
    exact = p if p.exact else ProbDist(
        p.s, tuple(Fraction(x) for x in p.p), Fraction(p.p_inf), True
    )
    if not exact.p_inf >= exact.p[-1] > 0:
        raise PreconditionError("need p_inf >= p(s) > 0")
    lhs = weight_edge(e[:-1], r, exact.drop_last_element())
    rhs = 2 * weight_edge(e, r, exact)
    return ContributionReport(lhs, rhs, lhs >= rhs)


@dataclass(frozen=True)
class Case1Split:
    """Partition G = G0 ∪ H1 ∪ H2 with the {s}-only-meeting pairs split."""

    g0: SetSystem
    h1: SetSystem
    h2: SetSystem
    pairs: tuple
    unions_cover_ground: bool


def case1_split(w: Wiss) -> Case1Split:
    """Split off the edges that meet some other edge exactly in {s}.

    Every such edge must have a unique partner (true for weight-maximal
    systems); the partners are separated into H1/H2 so that both
    (G0 - s) ∪ (Hi - s) stay intersecting.
    """
    if w.s < 3:
        raise ValueError("need s >= 3")
    s = w.s
    sets = w.g.edge_sets()
    partners = {e: [] for e in sets}
    for a, b in itertools.combinations(sets, 2):
        if a & b == {s}:
            partners[a].append(b)
            partners[b].append(a)
    for e, ps in partners.items():
        if len(ps) > 1:
            raise ValueError(
                f"edge {sorted(e)} has {len(ps)} partners meeting it only at {s}; "
                "the split needs unique partners"
            )
    g0 = [e for e in sets if not partners[e]]
    h1, h2 = [], []
    placed = set()
    pairs = []
    for e in sets:
        if partners[e] and e not in placed:
            f_ = partners[e][0]
            a, b = sorted((e, f_), key=lambda x: tuple(sorted(x)))
            h1.append(a)
            h2.append(b)
            placed.add(a)
            placed.add(b)
            pairs.append((tuple(sorted(a)), tuple(sorted(b))))
    unions_ok = all(set(a) | set(b) == set(range(1, s + 1)) for a, b in pairs)

    def mk(edge_sets_):
        return SetSystem(s, w.r, [tuple(sorted(e)) for e in edge_sets_])

    return Case1Split(mk(g0), mk(h1), mk(h2), tuple(pairs), unions_ok)


# ---------------------------------------------------------------------------
# weight maximization over the ordered simplex


def _wiss_system(g: SetSystem, r: int):
    idx = []
    coeff = []
    inf_slot = g.s
    for e in g.edges:
        row = [v - 1 for v in e] + [inf_slot] * (r - len(e))
        idx.append(row)
        coeff.append(factorial(r) / factorial(r - len(e)))
    return MonomialSystem(np.array(idx, dtype=np.int64), np.array(coeff), g.s + 1)


def _opt_starts(g: SetSystem, r: int, restarts: int, seed: int):
    s = g.s
    rows = []
    full = np.full(s + 1, 1.0 / (s + 1))
    rows.append(full)
    ground = np.zeros(s + 1)
    ground[:s] = 1.0 / s
    rows.append(ground)
    principal = np.zeros(s + 1)
    principal[0] = 1.0 / r
    principal[s] = 1.0 - 1.0 / r
    rows.append(principal)
    for k in range(1, s + 1):
        row = np.zeros(s + 1)
        row[:k] = 1.0 / (2 * k)
        row[s] = 0.5
        rows.append(row)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    for _ in range(restarts):
        raw = rng.dirichlet(np.ones(s + 1))
        ordered = np.concatenate([np.sort(raw[:s])[::-1], raw[s:]])
        rows.append(ordered)
    return np.vstack(rows)


def optimize_weight(
    g: SetSystem,
    r: int,
    restarts: int = 500,
    seed: int = 0,
    max_iters: int = 200,
    tol: float = 1e-12,
):
    """Best (p, w_p(G)) found by projected ascent over the ordered simplex.

    The value is a lower bound for the true maximum (it is an evaluation).
    Deterministic for a fixed seed.
    """
    if not g.edges:
        raise ValueError("empty family")
    if any(len(e) == 0 for e in g.edges) or not is_intersecting(g):
        raise ValueError("family must be intersecting with non-empty edges")
    if g.r_cap > r:
        raise ValueError("edge sizes exceed r")
    system = _wiss_system(g, r)
    P = _opt_starts(g, r, restarts, seed)
    R, dim = P.shape
    s = g.s
    steps = np.full(R, 0.25)
    vals = system.values(P)
    for _ in range(max_iters):
        vals, grads = system.values_and_grads(P)
        cand = P + steps[:, None] * grads
        for i in range(R):
            cand[i] = project_monotone_simplex(cand[i], s)
        cand_vals = system.values(cand)
        better = cand_vals > vals
        P[better] = cand[better]
        vals = np.where(better, cand_vals, vals)
        steps = np.where(better, steps * 1.25, steps * 0.5)
        if (steps < 1e-15).all():
            break
    order = max(range(R), key=lambda i: (vals[i], tuple(P[i])))
    best = P[order]
    best_p = ProbDist(s, tuple(float(x) for x in best[:s]), float(best[s]), False)
    value = float(system.values(best[None, :])[0])
    return best_p, value


# ---------------------------------------------------------------------------
# text format: "r s m", weight line, m edge lines (colex)


def format_wiss(w: Wiss) -> str:
    def fmt(x):
        return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else repr(float(x))

    lines = [f"{w.r} {w.s} {w.g.edge_count}"]
    lines.append(" ".join(fmt(x) for x in w.p.p))
    lines.extend(" ".join(map(str, e)) for e in w.g.edges)
    return "\n".join(lines) + "\n"


def parse_wiss(text: str) -> Wiss:
    from .hypergraph import FormatError

    lines = text.split("\n")
    idx = 0
    while idx < len(lines) and lines[idx].lstrip().startswith("#"):
        idx += 1
    if idx >= len(lines) or not lines[idx].strip():
        raise FormatError(idx + 1, "missing 'r s m' header")
    head = lines[idx].split()
    if len(head) != 3:
        raise FormatError(idx + 1, "header must be 'r s m'")
    try:
        r, s, m = (int(x) for x in head)
    except ValueError:
        raise FormatError(idx + 1, "header fields must be integers") from None
    if idx + 1 >= len(lines):
        raise FormatError(idx + 2, "missing weight line")
    wl = lines[idx + 1].split()
    if len(wl) != s:
        raise FormatError(idx + 2, f"expected {s} weights, found {len(wl)}")

    def parse_weight(tok, lineno):
        try:
            if "/" in tok:
                num, den = tok.split("/")
                return Fraction(int(num), int(den))
            if "." in tok or "e" in tok or "E" in tok:
                return float(tok)
            return Fraction(int(tok))
        except (ValueError, ZeroDivisionError):
            raise FormatError(lineno, f"bad weight {tok!r}") from None

    weights = [parse_weight(t, idx + 2) for t in wl]
    exact = all(isinstance(x, Fraction) for x in weights)
    edges = []
    lineno = idx + 2
    for raw in lines[idx + 2 :]:
        lineno += 1
        if not raw.strip():
            continue
        try:
            e = tuple(int(x) for x in raw.split())
        except ValueError:
            raise FormatError(lineno, "edge entries must be integers") from None
        edges.append(e)
    if len(edges) != m:
        raise FormatError(lineno, f"expected {m} edges, found {len(edges)}")
    try:
        p = ProbDist.make(weights, exact=exact)
        return Wiss.make(edges, r, p)
    except ValueError as exc:
        raise FormatError(idx + 1, str(exc)) from None
