"""
Seifert fibred pieces over holed disks and closed Seifert spaces over S^2.

A piece is recorded as (e0; r_1, ..., r_n) with ``boundaries`` boundary
tori.  On every boundary torus we use the basis (d, h) where d is the
section curve and h the regular fibre.  The convention is fixed by the
abelianised relations

    alpha_i q_i + beta_i h = 0            (one per fibre r_i = beta_i/alpha_i)
    sum_i q_i + sum_j d_j  = e0 h

so that a closed space has Euler number e = e0 + sum r_i and
|H_1| = alpha_1 ... alpha_n |e|.  Filling a boundary along p d + q h adds
the fibre q/p.
"""
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from math import ceil, floor, gcd

from .slopes import Slope, simplest_in_interval


class SeifertError(ValueError):
    pass


class LSpaceVerdict(Enum):
    L_SPACE = "L_SPACE"
    NON_L_SPACE = "NON_L_SPACE"
    NOT_QHS = "NOT_QHS"


FIBER_FILLING = "FIBER_FILLING"


@dataclass(frozen=True)
class SeifertPiece:
    e0: int = 0
    fibers: tuple = ()
    boundaries: int = 0
    name: str = "P"

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(Fraction(r) for r in self.fibers))
        if self.boundaries < 0:
            raise SeifertError("negative boundary count")

    @property
    def closed(self):
        return self.boundaries == 0

    def is_normalized(self):
        return all(0 < r < 1 for r in self.fibers)

    def is_solid_torus(self):
        """One boundary and at most one exceptional fibre."""
        p = normalize_sfs(self)
        return p.boundaries == 1 and len(p.fibers) <= 1

    def meridian(self):
        """Meridian of a solid-torus piece, in the (d, h) basis."""
        p = normalize_sfs(self)
        if not p.is_solid_torus():
            raise SeifertError(f"piece {self.name} is not a solid torus")
        if not p.fibers:
            return (1, -p.e0)
        b, a = p.fibers[0].numerator, p.fibers[0].denominator
        return (a, -(a * p.e0 + b))

    def dsl(self):
        return f"piece {self.name} {sfs_string(self)} boundaries {self.boundaries}"

    def __str__(self):
        return sfs_string(self)


def sfs_string(piece):
    body = str(piece.e0)
    if piece.fibers:
        body += "; " + ", ".join(f"{r.numerator}/{r.denominator}" for r in piece.fibers)
    return f"sfs({body})"


def make_piece(e0, fibers=(), boundaries=0, name="P"):
    return normalize_sfs(SeifertPiece(e0, tuple(fibers), boundaries, name))


def normalize_sfs(piece):
    """Move integer parts of the fibre invariants into e0 and drop alpha = 1 fibres."""
    e0 = piece.e0
    out = []
    for r in piece.fibers:
        if r.denominator == 0:
            raise SeifertError("fibre with alpha = 0")
        k = floor(r)
        e0 += k
        if r != k:
            out.append(r - k)
    out.sort()
    if e0 == piece.e0 and tuple(out) == piece.fibers:
        return piece
    return replace(piece, e0=e0, fibers=tuple(out))


def make_fiber(beta, alpha):
    if alpha == 0:
        raise SeifertError("fibre with alpha = 0; use a fibre-slope filling instead")
    return Fraction(beta, alpha)


def euler_number(piece):
    if not piece.closed:
        raise SeifertError("Euler number needs a closed piece")
    return piece.e0 + sum(piece.fibers, Fraction(0))


def h1_order_closed(piece):
    """|H_1| of a closed piece, 0 when infinite."""
    e = euler_number(piece)
    prod = 1
    for r in piece.fibers:
        prod *= r.denominator
    return abs(e * prod)


def reverse_orientation(piece):
    p = normalize_sfs(piece)
    n = len(p.fibers)
    return normalize_sfs(replace(p, e0=-p.e0 - n, fibers=tuple(1 - r for r in p.fibers)))


def fill_boundary(piece, slope):
    """
    Dehn fill one boundary torus along ``slope`` = p d + q h.  Returns the
    filled piece, or FIBER_FILLING when the slope is the fibre (p = 0).
    """
    if piece.boundaries < 1:
        raise SeifertError("no boundary to fill")
    if isinstance(slope, Slope):
        p, q = slope.p, slope.q
    else:
        p, q = slope
    if p == 0:
        return FIBER_FILLING
    filled = replace(piece, fibers=piece.fibers + (Fraction(q, p),),
                     boundaries=piece.boundaries - 1)
    return normalize_sfs(filled)


# -- horizontal foliations ----------------------------------------------------

def _coprime_pairs(bound):
    for m in range(2, bound + 1):
        for a in range(1, m):
            if gcd(a, m) == 1:
                yield a, m


def _search_bound(rs, factor=2):
    return max(2, factor * max((Fraction(r).denominator for r in rs), default=1))


def _lt(x, y, strict):
    return x < y if strict else x <= y


def _fits(rs, a, m, strict):
    """Witness (a, m) for the list rs; returns the slot order or None."""
    inv = Fraction(1, m)
    big = [i for i, r in enumerate(rs) if not _lt(r, inv, strict)]
    if len(big) > 2:
        return None
    x, y = Fraction(a, m), Fraction(m - a, m)
    rest = [i for i in range(len(rs)) if i not in big]
    if len(big) == 2:
        i, j = big
        if _lt(rs[i], x, strict) and _lt(rs[j], y, strict):
            return [i, j] + rest
        if _lt(rs[j], x, strict) and _lt(rs[i], y, strict):
            return [j, i] + rest
        return None
    if len(big) == 1:
        (i,) = big
        if _lt(rs[i], x, strict):
            return [i, rest[0]] + rest[1:]
        if _lt(rs[i], y, strict):
            return [rest[0], i] + rest[1:]
        return None
    return list(range(len(rs)))


def _realizable_search(rs, strict, bound_factor):
    for a, m in _coprime_pairs(_search_bound(rs, bound_factor)):
        order = _fits(rs, a, m, strict)
        if order is not None:
            return True, (a, m, tuple(order))
    return False, None


def _realizable_exact(rs, strict):
    # the two largest r's take the slots a/m and (m - a)/m, the rest must
    # sit below 1/m; the best m is the denominator of the simplest a/m
    order = sorted(range(len(rs)), key=lambda i: rs[i], reverse=True)
    r1, r2 = rs[order[0]], rs[order[1]]
    r3 = rs[order[2]]
    lo, hi = r1, 1 - r2
    if strict:
        if not lo < hi:
            return False, None
        x = simplest_in_interval(lo, hi)
    else:
        if lo > hi:
            return False, None
        x = lo if lo == hi else simplest_in_interval(lo, hi)
        for cand in (lo, hi):
            if cand.denominator < x.denominator:
                x = cand
    m = x.denominator
    ok = r3 < Fraction(1, m) if strict else r3 <= Fraction(1, m)
    if not ok:
        return False, None
    return True, (x.numerator, m, tuple(order))


def jn_realizable(rs, strict=True, method="exact", bound_factor=2):
    """
    Realisability of (r_1, ..., r_n): coprime 0 < a < m and an ordering
    with r_1 < a/m, r_2 < (m - a)/m and r_i < 1/m for i >= 3.  Returns
    (flag, witness) with witness = (a, m, order) or None.

    ``method="exact"`` decides the unbounded condition directly;
    ``method="search"`` scans m <= bound_factor * max alpha.
    """
    rs = [Fraction(r) for r in rs]
    for r in rs:
        if not 0 < r < 1:
            raise SeifertError(f"fibre invariant {r} outside (0, 1)")
    if len(rs) <= 2:
        return False, None
    if method == "search":
        return _realizable_search(rs, strict, bound_factor)
    return _realizable_exact(rs, strict)


def largest_below(x, bound):
    """Largest fraction in [0, x) with denominator <= bound, for x > 0."""
    x = Fraction(x)
    a, b, c, d = 0, 1, 1, 0  # left a/b < x <= right c/d
    while b + d <= bound:
        if Fraction(a + c, b + d) < x:
            gap = c - x * d
            k = bound if gap == 0 else ceil((x * b - a) / gap) - 1
            if d:
                k = min(k, (bound - b) // d)
            a, b = a + k * c, b + k * d
        else:
            j = min(floor((c - x * d) / (x * b - a)), (bound - d) // b)
            c, d = c + j * a, d + j * b
    return Fraction(a, b)


def jn_threshold(rs):
    """
    sup{t in (0, 1) : (rs, t) realisable}, 0 if there is none.  The set of
    such t is always the open interval (0, threshold).
    """
    rs = sorted((Fraction(r) for r in rs), reverse=True)
    if len(rs) < 2:
        return Fraction(0)
    r1, r2 = rs[0], rs[1]
    best = Fraction(0)
    # t in the first slot, r1 in the second, the rest below 1/m
    bound = ceil(1 / r2) - 1
    if bound >= 2:
        best = max(best, largest_below(1 - r1, bound))
    # t among the small ones
    if r1 < 1 - r2:
        m = simplest_in_interval(r1, 1 - r2).denominator
        if len(rs) < 3 or rs[2] < Fraction(1, m):
            best = max(best, Fraction(1, m))
    return best


def has_horizontal_foliation(piece, strict=True, method="exact", bound_factor=2):
    """Naimi / Jankins-Neumann criterion for a closed piece, normalised data."""
    p = normalize_sfs(piece)
    n, e0 = len(p.fibers), p.e0
    if n < 3:
        return False, None
    if -(n - 2) <= e0 <= -2:
        return True, ("middle", e0)
    if e0 == -1:
        ok, w = jn_realizable(p.fibers, strict, method, bound_factor)
        return ok, (("realize", w) if ok else None)
    if e0 == -(n - 1):
        ok, w = jn_realizable([1 - r for r in p.fibers], strict, method, bound_factor)
        return ok, (("realize-reversed", w) if ok else None)
    return False, None


@dataclass(frozen=True)
class SfsReport:
    verdict: LSpaceVerdict
    order: int = 0
    witness: tuple = None
    boundary_sensitive: bool = False


def classify_sfs(piece, method="exact", bound_factor=2):
    """L-space status of a closed piece with its witness and diagnostics."""
    if not piece.closed:
        raise SeifertError("classify_sfs needs a closed piece")
    p = normalize_sfs(piece)
    e = euler_number(p)
    if e == 0:
        return SfsReport(LSpaceVerdict.NOT_QHS, 0)
    order = int(h1_order_closed(p))
    if e > 0:
        p = reverse_orientation(p)
    strict, w = has_horizontal_foliation(p, True, method, bound_factor)
    loose, _ = has_horizontal_foliation(p, False, method, bound_factor)
    verdict = LSpaceVerdict.NON_L_SPACE if strict else LSpaceVerdict.L_SPACE
    return SfsReport(verdict, order, w, strict != loose)


def is_lspace_sfs(piece, method="exact", bound_factor=2):
    return classify_sfs(piece, method, bound_factor).verdict


def make_N():
    """Twisted I-bundle over the Klein bottle, fibred over the disk with fibres 1/2, 1/2."""
    return SeifertPiece(0, (Fraction(1, 2), Fraction(1, 2)), 1, "N")


def brieskorn(p, q, r):
    """Closed piece realising the Brieskorn sphere Sigma(p, q, r) with e = -1/pqr."""
    P = p * q * r
    fibers = []
    total = 0
    for a in (p, q, r):
        b = (-pow(P // a, -1, a)) % a
        fibers.append(Fraction(b, a))
        total += b * (P // a)
    e0 = (-1 - total) // P
    assert e0 * P + total == -1
    return make_piece(e0, fibers, 0, f"S{p}_{q}_{r}")
