"""Hypergraph Lagrangians: lambda(F) = max over the simplex of the sum of
edge monomials.

The general maximizer is a multiplicative-weights ascent (the replicator
update p <- p * grad / (r * f), which preserves the simplex and never
decreases a homogeneous polynomial with non-negative coefficients), run
from a battery of restarts and polished with projected gradient steps.  Its
output is always a certified *lower* bound: the returned value is a plain
evaluation of the returned point.

Exact values are available where symmetry permits: cliques in closed form,
and any hypergraph that is "typed complete" with respect to a supplied
vertex partition into at most three orbits, where the objective collapses
to at most two variables and is maximized with rational interval
certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from ._engine import MonomialSystem, project_rows_to_simplex
from ._exact import certified_max_interval, certified_max_triangle, poly_mul, poly_add, poly_scale
from .hypergraph import Hypergraph

__all__ = [
    "SimplexPoint",
    "LagrangianResult",
    "evaluate",
    "gradient",
    "maximize",
    "clique_lagrangian",
    "orbit_exact",
]

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class SimplexPoint:
    """Non-negative weights on 1..n summing to 1 (within 1e-12)."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if any(x < -_SUM_TOL for x in w):
            raise ValueError("negative weight")
        if abs(sum(w) - 1.0) > _SUM_TOL:
            raise ValueError(f"weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @staticmethod
    def uniform(n):
        return SimplexPoint((1.0 / n,) * n)


@dataclass(frozen=True)
class LagrangianResult:
    value: float
    point: SimplexPoint
    support: tuple[int, ...]
    restarts_used: int
    converged: bool
    lower_bound: float
    method: str
    value_interval: tuple[Fraction, Fraction] | None = field(default=None, compare=False)


SUPPORT_TOL = 1e-8


def evaluate(f: Hypergraph, p: SimplexPoint) -> float:
    """Sum of edge monomials at p, Kahan-compensated."""
    w = p.weights
    if len(w) != f.n:
        raise ValueError("point dimension does not match vertex count")
    total = 0.0
    comp = 0.0
    for e in f.edges:
        term = 1.0
        for v in e:
            term *= w[v - 1]
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def gradient(f: Hypergraph, p: SimplexPoint):
    """Partial derivatives: component v is the link polynomial of v at p."""
    w = p.weights
    if len(w) != f.n:
        raise ValueError("point dimension does not match vertex count")
    g = [0.0] * f.n
    for e in f.edges:
        prod = 1.0
        zeros = 0
        zero_at = -1
        for v in e:
            if w[v - 1] == 0.0:
                zeros += 1
                zero_at = v
            else:
                prod *= w[v - 1]
        if zeros == 0:
            for v in e:
                g[v - 1] += prod / w[v - 1]
        elif zeros == 1:
            g[zero_at - 1] += prod
    return g


def _result_bounds_check(f: Hypergraph, value: float):
    if f.edge_count == 0:
        return
    low = f.r ** -f.r
    high = 1.0 / factorial(f.r)
    if not (low - 1e-9 <= value <= high + 1e-9):
        raise RuntimeError(
            f"optimizer value {value} outside [{low}, {high}] sanity bounds"
        )


def _starts(f: Hypergraph, restarts: int, seed: int):
    n = f.n
    rows = [np.full(n, 1.0 / n)]
    for e in f.edges:
        row = np.zeros(n)
        for v in e:
            row[v - 1] = 1.0 / f.r
        rows.append(row)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if restarts > 0:
        rows.append(rng.dirichlet(np.ones(n), size=restarts))
    return np.vstack([np.atleast_2d(r) for r in rows])


def maximize(
    f: Hypergraph,
    restarts: int = 200,
    seed: int = 0,
    max_iters: int = 400,
    tol: float = 1e-13,
) -> LagrangianResult:
    """Best value of the edge-monomial polynomial found by seeded ascent.

    Deterministic for a fixed seed.  Restarts: Dirichlet(1) rows plus the
    uniform start plus a uniform start on every single edge (single edges
    cover their own pairs, where an optimum can always be found).
    """
    if f.n < 1:
        raise ValueError("need at least one vertex")
    if f.edge_count == 0:
        pt = SimplexPoint.uniform(f.n)
        return LagrangianResult(0.0, pt, (), 0, True, 0.0, "ascent")

    idx = np.array([[v - 1 for v in e] for e in f.edges], dtype=np.int64)
    system = MonomialSystem(idx, np.ones(len(f.edges)), f.n)
    P = _starts(f, restarts, seed)
    R = P.shape[0]
    vals = system.values(P)
    # rows stuck at value zero (mass on an edgeless set) cannot move
    converged_rows = vals <= 0
    for _ in range(max_iters):
        vals, grads = system.values_and_grads(P)
        active = (vals > 0) & ~converged_rows
        if not active.any():
            break
        newP = P.copy()
        newP[active] = P[active] * grads[active] / (f.r * vals[active])[:, None]
        newP[active] /= newP[active].sum(axis=1)[:, None]
        new_vals = system.values(newP)
        improved = new_vals - vals
        converged_rows |= np.abs(improved) <= tol
        P = newP
        vals = new_vals
        if converged_rows.all():
            break

    # deterministic merge: highest value, ties by largest point tuple
    order = max(range(R), key=lambda i: (vals[i], tuple(P[i])))
    best = P[order].copy()

    # projected-gradient polish
    step = 0.1
    best_val = float(system.values(best[None, :])[0])
    for _ in range(40):
        _, g = system.values_and_grads(best[None, :])
        cand = project_rows_to_simplex(best[None, :] + step * g)[0]
        cand_val = float(system.values(cand[None, :])[0])
        if cand_val > best_val:
            best, best_val = cand, cand_val
            step *= 1.25
        else:
            step *= 0.5
            if step < 1e-14:
                break

    point = SimplexPoint(tuple(np.maximum(best, 0.0) / np.maximum(best, 0.0).sum()))
    value = evaluate(f, point)
    _result_bounds_check(f, value)
    support = tuple(i + 1 for i, x in enumerate(point.weights) if x > SUPPORT_TOL)
    return LagrangianResult(
        value=value,
        point=point,
        support=support,
        restarts_used=R,
        converged=bool(converged_rows[order]),
        lower_bound=value,
        method="ascent",
    )


def clique_lagrangian(t: int, r: int) -> Fraction:
    """lambda of the complete r-graph on t vertices: C(t, r) / t^r."""
    if r < 2 or t < r:
        raise ValueError("need t >= r >= 2")
    return Fraction(comb(t, r), t**r)


def _orbit_types(f: Hypergraph, orbits):
    sizes = [len(o) for o in orbits]
    of = {}
    for i, orb in enumerate(orbits):
        for v in orb:
            if v in of:
                raise ValueError("orbits overlap")
            of[v] = i
    if set(of) != set(range(1, f.n + 1)):
        raise ValueError("orbits must partition the vertex set")
    counts = {}
    for e in f.edges:
        t = [0] * len(orbits)
        for v in e:
            t[of[v]] += 1
        counts[tuple(t)] = counts.get(tuple(t), 0) + 1
    for t, c in counts.items():
        full = 1
        for ni, ti in zip(sizes, t):
            full *= comb(ni, ti)
        if c != full:
            raise ValueError(
                f"partition is not orbit-valid: type {t} has {c} of {full} edges"
            )
    return sizes, sorted(counts)


def orbit_exact(f: Hypergraph, orbits, tol=Fraction(1, 10**12)) -> LagrangianResult:
    """Certified Lagrangian for a partition into at most 3 symmetric orbits.

    The partition must be orbit-valid: for every orbit-type multiset either
    every edge of that type is present or none is.  Mass is then uniform
    inside each orbit at some optimum, so the objective reduces to the orbit
    masses (at most two free variables), which are maximized with exact
    interval arithmetic to the requested enclosure width.
    """
    orbits = [tuple(sorted(o)) for o in orbits]
    if not 1 <= len(orbits) <= 3:
        raise ValueError("need between 1 and 3 orbits")
    if f.edge_count == 0:
        return LagrangianResult(
            0.0, SimplexPoint.uniform(f.n), (), 0, True, 0.0, "orbit-exact",
            (Fraction(0), Fraction(0)),
        )
    sizes, types = _orbit_types(f, orbits)
    k = len(orbits)

    def term(t):
        c = Fraction(1)
        for ni, ti in zip(sizes, t):
            c *= Fraction(comb(ni, ti), ni**ti)
        return c

    if k == 1:
        val = sum((term(t) for t in types), Fraction(0))
        masses = [Fraction(1)]
        lo = hi = val
    elif k == 2:
        # polynomial in x = mass of orbit 1; orbit 2 gets 1 - x
        poly = [Fraction(0)]
        for t in types:
            mono = poly_scale(
                poly_mul(poly_pow_x(t[0]), poly_pow_one_minus_x(t[1])), term(t)
            )
            poly = poly_add(poly, mono)
        lo, hi, arg = certified_max_interval(poly, 0, 1, tol=tol)
        masses = [arg, 1 - arg]
        val = lo
    else:
        # bivariate in (x, y); third orbit gets 1 - x - y
        b = {}
        for t in types:
            c = term(t)
            for (i, j), cc in _expand_xyz(t).items():
                b[(i, j)] = b.get((i, j), Fraction(0)) + c * cc
        lo, hi, (ax, ay) = certified_max_triangle(b, tol=tol)
        masses = [ax, ay, 1 - ax - ay]
        val = lo

    weights = [0.0] * f.n
    for orb, mass, ni in zip(orbits, masses, sizes):
        for v in orb:
            weights[v - 1] = float(Fraction(mass) / ni)
    total = sum(weights)
    point = SimplexPoint(tuple(w / total for w in weights))
    value = evaluate(f, point)
    support = tuple(i + 1 for i, x in enumerate(point.weights) if x > SUPPORT_TOL)
    return LagrangianResult(
        value=value,
        point=point,
        support=support,
        restarts_used=0,
        converged=True,
        lower_bound=value,
        method="orbit-exact",
        value_interval=(lo, hi),
    )


def poly_pow_x(k):
    return [Fraction(0)] * k + [Fraction(1)]


def poly_pow_one_minus_x(k):
    out = [Fraction(1)]
    for _ in range(k):
        out = poly_mul(out, [Fraction(1), Fraction(-1)])
    return out


def _expand_xyz(t):
    """x^a y^b (1-x-y)^c as a bivariate coefficient dict."""
    a, b, c = t
    out = {(a, b): Fraction(1)}
    for _ in range(c):
        nxt = {}
        for (i, j), coef in out.items():
            for di, dj, s in ((0, 0, 1), (1, 0, -1), (0, 1, -1)):
                key = (i + di, j + dj)
                nxt[key] = nxt.get(key, Fraction(0)) + s * coef
        out = nxt
    return out
