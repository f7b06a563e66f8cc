"""Exact rational polynomials, interval arithmetic, and certified maxima.

Univariate polynomials are Fraction coefficient lists (ascending degree);
bivariate ones are {(i, j): Fraction} dicts.  Maximization over [0, 1] or
over the triangle {x, y >= 0, x + y <= 1} is done by branch and bound with
interval Horner bounds, returning a rational enclosure of the maximum whose
width is below the requested tolerance.  Everything here is exact; floats
only appear in the priority ordering of boxes.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

__all__ = [
    "poly_add",
    "poly_scale",
    "poly_mul",
    "poly_pow",
    "poly_derivative",
    "poly_eval",
    "poly_interval",
    "bpoly_eval",
    "certified_max_interval",
    "certified_max_triangle",
    "refine_root_by_bisection",
]

ZERO = Fraction(0)


def poly_add(a, b):
    out = [ZERO] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def poly_scale(a, c):
    c = Fraction(c)
    return [c * x for x in a]


def poly_mul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_pow(a, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def poly_derivative(a):
    return [i * c for i, c in enumerate(a)][1:]


def poly_eval(a, x):
    x = Fraction(x)
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _imul(alo, ahi, blo, bhi):
    prods = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return min(prods), max(prods)


def poly_interval(a, lo, hi):
    """Interval Horner enclosure of a univariate polynomial on [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    acc_lo = acc_hi = ZERO
    for c in reversed(a):
        mlo, mhi = _imul(acc_lo, acc_hi, lo, hi)
        acc_lo, acc_hi = mlo + c, mhi + c
    return acc_lo, acc_hi


def bpoly_eval(b, x, y):
    x, y = Fraction(x), Fraction(y)
    acc = ZERO
    for (i, j), c in b.items():
        acc += c * x**i * y**j
    return acc


def _bpoly_interval(b, xlo, xhi, ylo, yhi):
    # Horner in y with interval coefficients obtained by Horner in x
    if not b:
        return ZERO, ZERO
    deg_y = max(j for (_, j) in b)
    acc_lo = acc_hi = ZERO
    for j in range(deg_y, -1, -1):
        coeffs = [ZERO] * (max((i for (i, jj) in b if jj == j), default=0) + 1)
        for (i, jj), c in b.items():
            if jj == j:
                coeffs[i] = c
        clo, chi = poly_interval(coeffs, xlo, xhi)
        mlo, mhi = _imul(acc_lo, acc_hi, Fraction(ylo), Fraction(yhi))
        acc_lo, acc_hi = mlo + clo, mhi + chi
    return acc_lo, acc_hi


def certified_max_interval(a, lo=0, hi=1, tol=Fraction(1, 10**12), max_boxes=500_000):
    """Rational enclosure (best_lo, best_hi, argpoint) of max of `a` on [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    tol = Fraction(tol)

    best_lo = max(poly_eval(a, lo), poly_eval(a, hi), poly_eval(a, (lo + hi) / 2))
    best_arg = max(
        ((poly_eval(a, x), x) for x in (lo, hi, (lo + hi) / 2)),
    )[1]
    heap = []
    counter = 0

    def push(l, h):
        nonlocal counter
        blo, bhi = poly_interval(a, l, h)
        heapq.heappush(heap, (-float(bhi), counter, l, h, bhi))
        counter += 1

    push(lo, hi)
    boxes = 0
    global_hi = None
    while heap:
        boxes += 1
        if boxes > max_boxes:
            raise RuntimeError("certified maximization did not converge")
        _, _, l, h, bhi = heapq.heappop(heap)
        if bhi <= best_lo:
            global_hi = best_lo if global_hi is None else global_hi
            break
        mid = (l + h) / 2
        v = poly_eval(a, mid)
        if v > best_lo:
            best_lo, best_arg = v, mid
        if bhi - best_lo <= tol:
            global_hi = bhi
            break
        push(l, mid)
        push(mid, h)
    if global_hi is None:
        global_hi = best_lo
    return best_lo, max(global_hi, best_lo), best_arg


def certified_max_triangle(b, tol=Fraction(1, 10**12), max_boxes=2_000_000):
    """Enclosure of max of bivariate `b` over {x, y >= 0, x + y <= 1}."""
    tol = Fraction(tol)

    def feasible_point(xl, xh, yl, yh):
        x, y = (xl + xh) / 2, (yl + yh) / 2
        if x + y > 1:
            t = x + y
            x, y = x / t, y / t
        return x, y

    best_lo = None
    best_arg = None
    for x, y in ((ZERO, ZERO), (Fraction(1), ZERO), (ZERO, Fraction(1)), (Fraction(1, 3), Fraction(1, 3))):
        v = bpoly_eval(b, x, y)
        if best_lo is None or v > best_lo:
            best_lo, best_arg = v, (x, y)

    heap = []
    counter = 0

    def push(xl, xh, yl, yh):
        nonlocal counter
        if xl + yl > 1:
            return
        blo, bhi = _bpoly_interval(b, xl, xh, yl, yh)
        heapq.heappush(heap, (-float(bhi), counter, xl, xh, yl, yh, bhi))
        counter += 1

    push(ZERO, Fraction(1), ZERO, Fraction(1))
    boxes = 0
    global_hi = None
    while heap:
        boxes += 1
        if boxes > max_boxes:
            raise RuntimeError("certified maximization did not converge")
        _, _, xl, xh, yl, yh, bhi = heapq.heappop(heap)
        if bhi <= best_lo:
            break
        x, y = feasible_point(xl, xh, yl, yh)
        v = bpoly_eval(b, x, y)
        if v > best_lo:
            best_lo, best_arg = v, (x, y)
        if bhi - best_lo <= tol:
            global_hi = bhi
            break
        xm, ym = (xl + xh) / 2, (yl + yh) / 2
        push(xl, xm, yl, ym)
        push(xm, xh, yl, ym)
        push(xl, xm, ym, yh)
        push(xm, xh, ym, yh)
    if global_hi is None:
        global_hi = best_lo
    return best_lo, max(global_hi, best_lo), best_arg


def refine_root_by_bisection(poly, lo, hi, width=Fraction(1, 10**15)):
    """Shrink a sign-changing bracket of `poly` to the requested width."""
    lo, hi = Fraction(lo), Fraction(hi)
    flo = poly_eval(poly, lo)
    fhi = poly_eval(poly, hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("no sign change on the given bracket")
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = poly_eval(poly, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo, hi
