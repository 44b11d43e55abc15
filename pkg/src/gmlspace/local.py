"""
One-sided limits of filling verdicts.

For a side M = P u R, where the open boundary sits on a piece P with two
boundaries and the rest R has a known closed arc C, the filling M(s) is
not an L-space exactly when the arc of P(s) on the other boundary meets C.
Moving s slightly to one side perturbs the added fibre to t0 + eps or
t0 - eps.  Numbers here are pairs (v, sign) standing for v + sign * eps
with eps a positive infinitesimal, compared lexicographically.  Every
threshold involved is locally constant in the fibre, so the limit arcs
have rational endpoints with open or closed ends.
"""
from fractions import Fraction
from math import ceil, floor

from .seifert import largest_below
from .slopes import (SlopeArc, arc_contains, arc_intersection, circular_between,
                     normalize_slope, simplest_in_interval)

ZERO = Fraction(0)
TINY = "TINY"


def _one_minus(u):
    return (1 - u[0], -u[1])


def _below(u, x):
    """u < x for a perturbed u and a rational x."""
    return u[0] < x or (u[0] == x and u[1] < 0)


def _simplest_between(lo, hi):
    """Simplest rational x with lo < x < hi, for perturbed bounds; None if empty."""
    a, b = lo[0], hi[0]
    lo_closed, hi_closed = lo[1] < 0, hi[1] > 0
    if a > b:
        return None
    if a == b:
        if lo_closed and hi_closed:
            return a
        # an interval of infinitesimal width: only huge denominators fit
        return TINY if lo[1] < hi[1] else None
    cands = [simplest_in_interval(a, b)]
    if lo_closed:
        cands.append(a)
    if hi_closed:
        cands.append(b)
    return min(cands, key=lambda x: (x.denominator, abs(x.numerator)))


def realizable_p(us):
    us = sorted(us, reverse=True)
    if len(us) < 3:
        return False
    x = _simplest_between(us[0], _one_minus(us[1]))
    if x is None or x is TINY:
        return False
    return _below(us[2], Fraction(1, x.denominator))


def _largest_at_most(x, bound):
    return x if x.denominator <= bound else largest_below(x, bound)


def threshold_p(us):
    """
    sup{t : (us, t) realisable} for perturbed us, itself a perturbed number:
    a fibre of size eps lets the denominator run off, and an interval of
    width eps forces one, so the threshold can move with eps.
    """
    us = sorted(us, reverse=True)
    if len(us) < 2:
        return (ZERO, 0)
    r1, r2 = us[0], us[1]
    best = (ZERO, 0)
    # t in the first slot, r1 in the second, r2 and the rest below 1/m
    top = 1 - r1[0]
    if r2[0] == 0:
        best = max(best, (top, -1))
    else:
        inv = 1 / r2[0]
        bound = ceil(inv) - 1
        if r2[1] < 0 and inv.denominator == 1:
            bound = int(inv)
        if bound >= 2:
            f = _largest_at_most(top, bound) if r1[1] < 0 else largest_below(top, bound)
            best = max(best, (f, 0))
    x = _simplest_between(r1, _one_minus(r2))
    if x is TINY:
        if len(us) < 3:
            best = max(best, (ZERO, 1))
    elif x is not None:
        m = x.denominator
        if len(us) < 3 or _below(us[2], Fraction(1, m)):
            best = max(best, (Fraction(1, m), 0))
    return best


def foliated_p(E, us):
    n = len(us)
    if n < 3:
        return False
    if -(n - 2) <= E <= -2:
        return True
    if E == -1:
        return realizable_p(us)
    if E == -(n - 1):
        return realizable_p([_one_minus(u) for u in us])
    return False


def closure_p(e0, us):
    """
    Perturbed version of the closed non-L-space arc of sfs(e0; us) with one
    boundary, as (lo, hi) in fibre coordinates y = q/p.
    """
    n = len(us)
    y0 = (-(e0 + sum((u[0] for u in us), ZERO)), -sum(u[1] for u in us))
    y0 = (y0[0], (y0[1] > 0) - (y0[1] < 0))
    lows, highs = [y0], [y0]
    if n >= 2:
        m = n + 1
        flipped = [_one_minus(u) for u in us]
        for E in range(-n, 0):
            k = Fraction(E - e0)
            if foliated_p(E, us):
                lows.append((k, 0))
                highs.append((k, 0))
            if -(m - 2) <= E <= -2:
                lows.append((k, 0))
                highs.append((k + 1, 0))
            elif E == -1:
                t = threshold_p(us)
                if t > (ZERO, 0):
                    lows.append((k, 0))
                    highs.append((k + t[0], t[1]))
            elif E == -(m - 1):
                t = threshold_p(flipped)
                if t > (ZERO, 0):
                    lows.append((k + 1 - t[0], -t[1]))
                    highs.append((k + 1, 0))
    return min(lows), max(highs)


def _y_slope(y):
    y = Fraction(y)
    return normalize_slope(y.denominator, y.numerator)


def has_germ(arc, s, side):
    """Does arc contain the points just after (side > 0) or just before s?"""
    if arc.kind == "FULL":
        return True
    if arc.kind in ("EMPTY", "POINT"):
        return False
    if arc.start == arc.end:
        return True
    if side > 0 and s == arc.start:
        return True
    if side < 0 and s == arc.end:
        return True
    return circular_between(arc.start, arc.end, s)


def meets(arc, lo, hi):
    """Does the perturbed y-interval [lo, hi] meet the closed arc for all small eps?"""
    if lo[0] == hi[0]:
        if lo[1] == hi[1] and lo[1] != 0:
            # y = a + sign eps; increasing y runs backwards on the circle
            return has_germ(arc, _y_slope(lo[0]), -lo[1])
        return arc_contains(arc, _y_slope(lo[0]))
    k = SlopeArc.arc(_y_slope(hi[0]), _y_slope(lo[0]), hi[1] >= 0, lo[1] <= 0)
    return bool(arc_intersection(k, arc))


def limit_nonl(piece, other_arc, s, side):
    """
    Whether the fillings of the side along slopes just after (side = +1) or
    just before (side = -1) s fail to be L-spaces.  ``piece`` has its open
    boundary being filled and one other boundary, where the rest of the
    side contributes the closed arc ``other_arc``.
    """
    rs = [(r, 0) for r in piece.fibers]
    if s.p == 0:
        # near the fibre the filled piece is a Seifert space whose only
        # non-L-space slope is its longitude, which runs off to the fibre
        return has_germ(other_arc, normalize_slope(0, 1), -side)
    x = Fraction(s.q, s.p)
    k = floor(x)
    if side > 0:
        # after s on the circle means x - eps
        if x == k:
            k, t = k - 1, (Fraction(1), -1)
        else:
            t = (x - k, -1)
    else:
        t = (x - k, 1)
    lo, hi = closure_p(piece.e0 + k, rs + [t])
    return meets(other_arc, lo, hi)
