"""
Slopes on a torus, integral gluing maps and arcs on the projective circle.

A slope is a primitive vector (p, q) up to sign, written p/q.  Slopes are
placed on the circle Q u {1/0} with the circular order

    0 < 1 < 1/0 < -1 < 0,

i.e. increasing rational value with 1/0 sitting between the positives and
the negatives.  Every arc in this module is traversed in that direction.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd


class SlopeError(ValueError):
    pass


@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0):
            raise SlopeError("zero vector is not a slope")
        if gcd(self.p, self.q) != 1 or self.q < 0 or (self.q == 0 and self.p != 1):
            raise SlopeError(f"({self.p},{self.q}) is not in canonical form")

    def __str__(self):
        return f"{self.p}/{self.q}"

    def __repr__(self):
        return f"Slope({self.p}/{self.q})"

    @property
    def is_infinite(self):
        return self.q == 0

    def value(self):
        """Rational value p/q, or None for 1/0."""
        return None if self.q == 0 else Fraction(self.p, self.q)

    def height(self):
        return max(abs(self.p), self.q)

    def sort_key(self):
        # minimal denominator first, then minimal |numerator|, then sign
        return (self.q, abs(self.p), self.p)

    def vector(self):
        return (self.p, self.q)


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


def normalize_slope(p, q):
    """Canonical representative of the slope through the vector (p, q)."""
    if p == 0 and q == 0:
        raise SlopeError("zero vector is not a slope")
    g = gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return Slope(p, q)


def slope_from_value(x):
    """Slope with value x (a Fraction, int, or None for 1/0)."""
    if x is None:
        return INFINITY
    x = Fraction(x)
    return normalize_slope(x.numerator, x.denominator)


def parse_slope(text):
    text = text.strip()
    if "/" in text:
        a, b = text.split("/", 1)
        return normalize_slope(int(a), int(b))
    return normalize_slope(int(text), 1)


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class GluingMap:
    """
    Integral 2x2 matrix [[a, b], [c, d]] acting on column vectors, so the
    first basis vector goes to (a, c) and the second to (b, d).
    """
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det() not in (1, -1):
            raise SlopeError(f"matrix {self.rows()} has determinant {self.det()}")

    def det(self):
        return self.a * self.d - self.b * self.c

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def __call__(self, v):
        p, q = v
        return (self.a * p + self.b * q, self.c * p + self.d * q)

    def __str__(self):
        return f"[{self.a},{self.b};{self.c},{self.d}]"


IDENTITY = GluingMap(1, 0, 0, 1)


def apply_map(m, s):
    return normalize_slope(*m(s.vector()))


def compose_maps(m1, m2):
    """The map m1 o m2 (apply m2 first)."""
    return GluingMap(m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                     m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d)


def invert_map(m):
    e = m.det()
    return GluingMap(e * m.d, -e * m.b, -e * m.c, e * m.a)


def twist_map(k):
    """Basis change d -> d + k h, as a map from old to new coordinates."""
    return GluingMap(1, 0, -k, 1)


# -- circular order ---------------------------------------------------------

def _pos(s):
    # position on the circle as an extended real; 1/0 is +infinity
    return s.value() if s.q else None


def _lt(x, y):
    if x is None:
        return False
    if y is None:
        return True
    return x < y


def circular_between(a, b, c):
    """True iff c lies strictly inside the positive arc from a to b."""
    if a == b:
        raise SlopeError("circular_between needs distinct endpoints")
    x, y, z = _pos(a), _pos(b), _pos(c)
    if _lt(x, y):
        return _lt(x, z) and _lt(z, y)
    return _lt(x, z) or _lt(z, y)


def circular_sort(slopes, start=None):
    """
    Sort slopes by circular position.  With ``start`` given, the order
    begins just after ``start`` (and ``start`` itself, if present, comes last).
    """
    def key(s):
        x = _pos(s)
        return (1, Fraction(0)) if x is None else (0, x)

    out = sorted(set(slopes), key=key)
    if start is None:
        return out
    after = [s for s in out if key(s) > key(start)]
    before = [s for s in out if key(s) <= key(start)]
    return after + before


# -- simplest rationals -----------------------------------------------------

def _simplest_positive(lo, hi):
    """Simplest fraction in the open interval (lo, hi), 0 <= lo < hi <= None=inf."""
    n = floor(lo)
    if hi is None or n + 1 < hi:
        return Fraction(n + 1)
    # (lo, hi) sits inside [n, n + 1]
    lo_r = None if lo == n else 1 / (lo - n)
    hi_r = 1 / (hi - n)
    return n + 1 / _simplest_positive(hi_r, lo_r)


def simplest_in_interval(lo, hi):
    """
    Minimal-denominator rational in the open interval (lo, hi); ties go to
    the smaller |numerator|.  Either bound may be None (unbounded).
    """
    if lo is not None and hi is not None and not lo < hi:
        raise SlopeError("empty interval")
    # integers first: they have denominator 1
    if (lo is None or lo < 0) and (hi is None or hi > 0):
        return Fraction(0)
    if lo is not None and lo >= 0:
        return _simplest_positive(Fraction(lo), None if hi is None else Fraction(hi))
    # interval lies in the negatives
    return -_simplest_positive(-Fraction(hi), None if lo is None else -Fraction(lo))


def slope_between(a, b):
    """Minimal-denominator slope strictly inside the positive arc from a to b."""
    if a == b:
        # the arc from a back to itself is the circle punctured at a
        return INFINITY if a != INFINITY else ZERO
    x, y = _pos(a), _pos(b)
    if x is None:
        return slope_from_value(simplest_in_interval(None, y))
    if y is None:
        return slope_from_value(simplest_in_interval(x, None))
    if x < y:
        return slope_from_value(simplest_in_interval(x, y))
    # the arc runs through 1/0, which has denominator 0
    return INFINITY


def mediant(a, b):
    return normalize_slope(a.p + b.p, a.q + b.q)


# -- arcs ---------------------------------------------------------------------

EMPTY, FULL, POINT, ARC = "EMPTY", "FULL", "POINT", "ARC"


@dataclass(frozen=True)
class SlopeArc:
    """
    A connected subset of the slope circle.  ``ARC`` runs positively from
    ``start`` to ``end``; ``start == end`` (both open) is the circle with
    one point removed.
    """
    kind: str
    start: Slope = None
    end: Slope = None
    start_closed: bool = False
    end_closed: bool = False

    def __post_init__(self):
        if self.kind == ARC and self.start == self.end:
            if self.start_closed or self.end_closed:
                raise SlopeError("degenerate arc must be open at its puncture")

    @classmethod
    def empty(cls):
        return cls(EMPTY)

    @classmethod
    def full(cls):
        return cls(FULL)

    @classmethod
    def point(cls, s):
        return cls(POINT, s, s, True, True)

    @classmethod
    def arc(cls, start, end, start_closed=True, end_closed=True):
        return cls(ARC, start, end, start_closed, end_closed)

    def __contains__(self, s):
        return arc_contains(self, s)

    def endpoints(self):
        if self.kind in (POINT, ARC):
            return {self.start, self.end}
        return set()

    def to_json(self):
        return {
            "kind": self.kind,
            "start": None if self.start is None else str(self.start),
            "end": None if self.end is None else str(self.end),
            "startClosed": self.start_closed,
            "endClosed": self.end_closed,
        }

    @classmethod
    def from_json(cls, obj):
        kind = obj["kind"]
        if kind not in (EMPTY, FULL, POINT, ARC):
            raise SlopeError(f"unknown arc kind {kind!r}")
        if kind in (EMPTY, FULL):
            return cls(kind)
        start, end = parse_slope(obj["start"]), parse_slope(obj["end"])
        if kind == POINT:
            return cls.point(start)
        return cls.arc(start, end, bool(obj["startClosed"]), bool(obj["endClosed"]))

    def __str__(self):
        if self.kind == POINT:
            return f"{{{self.start}}}"
        if self.kind == ARC:
            lb = "[" if self.start_closed else "("
            rb = "]" if self.end_closed else ")"
            return f"{lb}{self.start} -> {self.end}{rb}"
        return self.kind


def arc_contains(arc, s):
    if arc.kind == EMPTY:
        return False
    if arc.kind == FULL:
        return True
    if arc.kind == POINT:
        return s == arc.start
    if s == arc.start:
        return arc.start_closed
    if s == arc.end:
        return arc.end_closed
    if arc.start == arc.end:
        return True
    return circular_between(arc.start, arc.end, s)


def arc_interior(arc):
    if arc.kind == POINT:
        return SlopeArc.empty()
    if arc.kind == ARC:
        return SlopeArc.arc(arc.start, arc.end, False, False)
    return arc


def arc_complement(arc):
    if arc.kind == EMPTY:
        return SlopeArc.full()
    if arc.kind == FULL:
        return SlopeArc.empty()
    if arc.kind == POINT:
        return SlopeArc.arc(arc.start, arc.start, False, False)
    if arc.start == arc.end:
        return SlopeArc.point(arc.start)
    return SlopeArc.arc(arc.end, arc.start, not arc.end_closed, not arc.start_closed)


def arc_image(m, arc):
    """Image of an arc under a gluing map; orientation flips when det(m) = -1."""
    if arc.kind in (EMPTY, FULL):
        return arc
    if arc.kind == POINT:
        return SlopeArc.point(apply_map(m, arc.start))
    a, b = apply_map(m, arc.start), apply_map(m, arc.end)
    if m.det() == 1:
        return SlopeArc.arc(a, b, arc.start_closed, arc.end_closed)
    return SlopeArc.arc(b, a, arc.end_closed, arc.start_closed)


def _assemble(breaks, member):
    """
    Rebuild the connected components of a subset of the circle known by its
    membership function, given every point where membership can change.
    """
    if not breaks:
        return [SlopeArc.full()] if member(ZERO) else []
    pts = circular_sort(breaks)
    k = len(pts)
    # elements: point i at index 2i, gap after point i at index 2i+1
    flags = []
    for i, s in enumerate(pts):
        flags.append(member(s))
        flags.append(member(slope_between(s, pts[(i + 1) % k])))
    n = len(flags)
    if all(flags):
        return [SlopeArc.full()]
    if not any(flags):
        return []
    first = next(i for i in range(n) if not flags[i])
    comps = []
    i = first
    for _ in range(n):
        j = (i + 1) % n
        if flags[j] and not flags[i]:
            # a run starts at j
            end = j
            while flags[(end + 1) % n]:
                end = (end + 1) % n
            comps.append((j, end))
        i = j
    out = []
    for s_idx, e_idx in comps:
        if s_idx == e_idx and s_idx % 2 == 0:
            out.append(SlopeArc.point(pts[s_idx // 2]))
            continue
        if s_idx % 2 == 0:
            start, sc = pts[s_idx // 2], True
        else:
            start, sc = pts[s_idx // 2], False
        if e_idx % 2 == 0:
            end, ec = pts[e_idx // 2], True
        else:
            end, ec = pts[(e_idx // 2 + 1) % k], False
        out.append(SlopeArc.arc(start, end, sc, ec))
    return out


def arc_intersection(a1, a2):
    """Intersection of two arcs, as a list of at most two disjoint arcs."""
    if a1.kind == EMPTY or a2.kind == EMPTY:
        return []
    if a1.kind == FULL:
        return [a2]
    if a2.kind == FULL:
        return [a1]
    return _assemble(a1.endpoints() | a2.endpoints(),
                     lambda s: arc_contains(a1, s) and arc_contains(a2, s))


def arc_union(arcs):
    """Union of arcs as a list of disjoint arcs."""
    arcs = [a for a in arcs if a.kind != EMPTY]
    if any(a.kind == FULL for a in arcs):
        return [SlopeArc.full()]
    breaks = set()
    for a in arcs:
        breaks |= a.endpoints()
    return _assemble(breaks, lambda s: any(arc_contains(a, s) for a in arcs))


def arc_difference(a1, a2):
    return arc_intersection_many([a1], [arc_complement(a2)])


def arc_intersection_many(xs, ys):
    out = []
    for x in xs:
        for y in ys:
            out.extend(arc_intersection(x, y))
    return out


def simplest_slope_in(arc):
    """
    Minimal-denominator slope in an arc (ties: smaller |numerator|, then
    the nonnegative one), or None for the empty arc.
    """
    if arc.kind == EMPTY:
        return None
    if arc.kind == FULL:
        return INFINITY
    if arc.kind == POINT:
        return arc.start
    cands = []
    if arc.start_closed:
        cands.append(arc.start)
    if arc.end_closed:
        cands.append(arc.end)
    cands.append(slope_between(arc.start, arc.end))
    return min(cands, key=Slope.sort_key)
