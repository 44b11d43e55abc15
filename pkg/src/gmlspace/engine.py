"""
Decision core.

Closed trees are decided by cutting along an edge and comparing, on the two
sides, the closed arcs of slopes outside the interior of the L-space slope
set: the glued manifold fails to be an L-space exactly when the image of
one arc meets the other.  A side that is a single Seifert piece gets its
arc in closed form.  Larger sides are bracketed by sampling fillings and
using that the L-space slopes form one interval; the brackets are refined
only where the two sides could still meet.
"""
from dataclasses import dataclass, replace
from fractions import Fraction
import heapq
import logging

from .homology import HomologyError, h1_invariants, rational_longitude
from .local import limit_nonl
from .seifert import (LSpaceVerdict, SeifertPiece, classify_sfs,
                      has_horizontal_foliation, jn_threshold, normalize_sfs)
from .slopes import (GluingMap, Slope, SlopeArc, apply_map, arc_contains,
                     arc_difference, arc_image, arc_interior, arc_intersection,
                     circular_sort, compose_maps, invert_map, normalize_slope,
                     simplest_slope_in)
from .tree import (Edge, GmTree, SumDecomposition, TreeError, canonical_key,
                   cut_edge, fill_tree_boundary, n_fill)

log = logging.getLogger(__name__)

L_SPACE = "L_SPACE"
NON_L_SPACE = "NON_L_SPACE"
NOT_QHS = "NOT_QHS"
UNKNOWN = "UNKNOWN"
NONL = (NON_L_SPACE, NOT_QHS)


class EngineError(RuntimeError):
    pass


class _OutOfWork(Exception):
    pass


class UnknownResult(EngineError):
    def __init__(self, bound, message="undecided within the search bound"):
        super().__init__(f"{message} (max denominator {bound})")
        self.bound = bound


@dataclass(frozen=True)
class Config:
    max_denominator: int = 4096
    max_depth: int = 2
    jobs: int = 1
    probe_budget: int = 400
    heuristic: str = "leaf"   # or "alternate"
    max_work: int = 20000     # probes per top-level call before giving up


@dataclass(frozen=True)
class Verdict:
    kind: str
    h1_order: object = None
    witness: object = None
    bound: int = None
    boundary_sensitive: bool = False

    @property
    def is_nonl(self):
        return self.kind in NONL

    def to_json(self):
        out = {"verdict": self.kind, "h1_order": self.h1_order}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.bound is not None:
            out["bound"] = self.bound
        if self.boundary_sensitive:
            out["boundary_sensitive"] = True
        return out


@dataclass(frozen=True)
class ArcEstimate:
    """
    Brackets for the closed set of slopes outside the interior of the
    L-space slopes: nls_inner is contained in it, nls_outer contains it.
    """
    nls_inner: SlopeArc
    nls_outer: SlopeArc
    exact: bool
    tested_bound: int
    longitude: Slope = None

    def to_json(self):
        return {"nlsInner": self.nls_inner.to_json(), "nlsOuter": self.nls_outer.to_json(),
                "exact": self.exact, "testedDenominatorBound": self.tested_bound,
                "longitude": None if self.longitude is None else str(self.longitude)}


# -- single pieces in closed form -------------------------------------------

def _x_slope(x):
    # the filling slope p d + q h with fibre value q/p = x
    x = Fraction(x)
    return normalize_slope(x.denominator, x.numerator)


def piece_nls_closure(piece):
    """
    Closure of the non-L-space filling slopes of a one-boundary piece, as
    an arc.  Filling along x = q/p gives sfs(e0 + floor x; r, frac x), so
    the horizontal-foliation criterion is read off one unit interval at a
    time.
    """
    p = normalize_sfs(piece)
    if p.boundaries != 1:
        raise EngineError("closed form needs exactly one boundary")
    n, e0, rs = len(p.fibers), p.e0, list(p.fibers)
    if n <= 1:
        return SlopeArc.point(normalize_slope(*p.meridian()))
    x0 = -(e0 + sum(rs, Fraction(0)))
    parts = [(x0, x0, True, True)]
    m = n + 1
    for E in range(-n, 0):
        k = E - e0
        if has_horizontal_foliation(SeifertPiece(E, tuple(rs), 0))[0]:
            parts.append((Fraction(k), Fraction(k), True, True))
        if -(m - 2) <= E <= -2:
            parts.append((Fraction(k), Fraction(k + 1), False, False))
        elif E == -1:
            t = jn_threshold(rs)
            if t > 0:
                parts.append((Fraction(k), k + t, False, False))
        elif E == -(m - 1):
            t = jn_threshold([1 - r for r in rs])
            if t > 0:
                parts.append((k + 1 - t, Fraction(k + 1), False, False))
    parts.sort(key=lambda z: (z[0], z[1]))
    lo, hi = parts[0][0], parts[0][1]
    for a, b, _, _ in parts[1:]:
        if a > hi:
            raise EngineError(f"non-L-space slopes of {p} are not connected near {hi}..{a}")
        hi = max(hi, b)
    if lo == hi:
        return SlopeArc.point(_x_slope(lo))
    # x -> 1/x reverses the circle, so the arc runs from x = hi to x = lo
    return SlopeArc.arc(_x_slope(hi), _x_slope(lo), True, True)


# -- sampled arcs --------------------------------------------------------------

N_, L_, STRICT, EDGE, UNDEC, OPEN = "N", "L", "S", "E", "U", "X"
_LISH = (L_, STRICT, EDGE, OPEN)


class ArcState:
    """
    What is known about one side.  Sample statuses: N (filling not an
    L-space), L (L-space), S (L-space slope in the interior), E (L-space
    slope on the boundary), X (L-space, interior question left open),
    U (filling undecided).

    When the open boundary sits on a piece with one other boundary and the
    rest of the side has an exact arc, each sample also records whether
    the fillings just after and just before it are L-spaces, which pins
    the ends of the arc down exactly.
    """

    def __init__(self, engine, tree, depth):
        self.engine = engine
        self.tree = tree
        self.depth = depth
        self.boundary = tree.open_boundaries[0]
        self.exact_arc = None
        try:
            self.longitude = rational_longitude(tree)
        except HomologyError:
            # the boundary injects rationally: b1 >= 2, every filling has b1 > 0
            self.longitude = None
            self.exact_arc = SlopeArc.full()
        self.samples = {self.longitude: N_} if self.longitude else {}
        if self.exact_arc is None and len(tree.pieces) == 1:
            self.exact_arc = piece_nls_closure(tree.pieces[0])
        self.probes = 0
        self._cache = None
        self.after_open = {}
        self.before_open = {}
        self._local = None   # None: not tried, False: unavailable
        self._gaps = None

    @property
    def exact(self):
        if self.exact_arc is not None:
            return True
        inner, outer = self.brackets()
        return inner == outer

    def brackets(self):
        if self.exact_arc is not None:
            return self.exact_arc, self.exact_arc
        if self._cache is None:
            self._cache = self._brackets()
        return self._cache

    # local structure
    def _local_data(self):
        if self._local is None:
            name, idx = self.boundary
            piece = self.tree.piece(name)
            local = False
            if piece.boundaries == 2:
                edge = self.tree.glued()[(name, 3 - idx)]
                ta, tb, _ = cut_edge(self.tree, edge)
                rname, ridx = edge.other(name, 3 - idx)
                rest = tb if edge.a == name else ta
                st, rest = self.engine.arc_state(rest, self.depth)
                if not st.exact and _exact_shape(rest):
                    st.refine(self.engine.config.probe_budget, self.engine.config.max_denominator)
                if st.exact:
                    arc = arc_image(edge.map_from(rname, ridx), st.brackets()[0])
                    local = (normalize_sfs(piece), arc)
            self._local = local
        return self._local or None

    def _germs(self, s):
        """Record whether the fillings just after / before s are L-spaces."""
        if s in self.after_open:
            return True
        data = self._local_data()
        if data is None:
            return False
        piece, arc = data
        self.after_open[s] = not limit_nonl(piece, arc, s, 1)
        self.before_open[s] = not limit_nonl(piece, arc, s, -1)
        return True

    def _brackets(self):
        lam = self.longitude
        self._germs(lam)
        known = {s: v for s, v in self.samples.items() if v != UNDEC}
        fwd = [s for s in circular_sort(known, start=lam) if s != lam]

        def walk(seq, opens):
            # returns (last slope known outside the interior, first slope
            # bounding it from outside, index, whether that is exact)
            if opens.get(lam):
                return lam, lam, -1, True
            inner, cand = lam, None
            for i, s in enumerate(seq):
                v = known[s]
                if v == N_:
                    inner, cand = s, None
                elif v == EDGE:
                    inner = s
                    cand = cand or s
                else:
                    return inner, cand or s, i, False
                if opens.get(s):
                    return s, s, i, True
            return inner, None, None, False

        inner_f, outer_f, jf, bf = walk(fwd, self.after_open)
        if outer_f is None:
            return SlopeArc.point(lam), SlopeArc.full()
        rest = fwd[jf + 1:] if bf else fwd[jf:]
        inner_b, outer_b, jb, bb = walk(rest[::-1], self.before_open)
        if inner_f == lam and inner_b == lam:
            inner = SlopeArc.point(lam)
        else:
            inner = SlopeArc.arc(inner_b, inner_f, True, True)
        if outer_b is None:
            return inner, SlopeArc.full()
        middle = rest[:len(rest) - jb - (1 if bb else 0)]
        bad = [s for s in middle if known[s] not in _LISH]
        if bad:
            raise EngineError(f"L-space slopes of side not an interval: {bad[0]} breaks the run")
        closed_f = bf or known[outer_f] != STRICT
        closed_b = bb or known[outer_b] != STRICT
        if outer_f == outer_b:
            if bf and bb:
                outer = SlopeArc.point(outer_f)
            elif known[outer_f] == STRICT:
                outer = SlopeArc.arc(outer_f, outer_f, False, False)
            else:
                outer = SlopeArc.full()
        else:
            outer = SlopeArc.arc(outer_b, outer_f, closed_b, closed_f)
        return inner, outer

    def outside_points(self):
        """Sampled slopes known to lie outside the interior of the L-space slopes."""
        return [s for s, v in self.samples.items() if v in (N_, EDGE)]

    def gaps(self):
        if self.exact_arc is not None:
            return []
        inner, outer = self.brackets()
        if self._gaps is None or self._gaps[0] is not self._cache:
            self._gaps = (self._cache, arc_difference(outer, inner))
        return self._gaps[1]

    def _simplest_open(self, comps, skip):
        """Simplest slope in the arcs comps outside skip."""
        heap = []
        for c in comps:
            s = simplest_slope_in(c)
            if s is not None:
                heapq.heappush(heap, (s.height(), s.sort_key(), id(c), s, c))
        while heap:
            _, _, _, s, c = heapq.heappop(heap)
            if s not in skip:
                return s
            for piece in _split_at(c, s):
                t = simplest_slope_in(piece)
                if t is not None:
                    heapq.heappush(heap, (t.height(), t.sort_key(), id(piece), t, piece))
        return None

    def candidate(self, region):
        """Simplest slope in region that would sharpen the brackets, or None."""
        if self.exact_arc is not None:
            return None
        gaps = self.gaps()
        comps = []
        for g in gaps:
            for r in region:
                comps.extend(arc_intersection(g, r))
        final = {s for s, v in self.samples.items() if v != L_}
        s = self._simplest_open(comps, final)
        if s is None or self.samples.get(s) != L_:
            return s
        # an L-space slope at the edge of the region: an L-space slope
        # just beyond it settles the question more cheaply than N-filling
        near = [arc_interior(g) for g in gaps if arc_contains(g, s)]
        alt = self._simplest_open([a for a in near if a.kind != "EMPTY"], self.samples)
        if alt is not None and alt.height() <= 4 * s.height() + 64:
            return alt
        return s

    def resolve(self, s):
        """Probe s: membership first, then whether an L-space slope is interior."""
        self._cache = None
        self.probes += 1
        self.engine.spend()
        status = self.samples.get(s)
        if status is None:
            filled = fill_tree_boundary(self.tree, self.boundary, s)
            v = self.engine._decide(filled, self.depth)
            status = N_ if v.is_nonl else (L_ if v.kind == L_SPACE else UNDEC)
            self.samples[s] = status
            if status == UNDEC or not self._germs(s):
                return
            if status == L_:
                inside = self.after_open[s] and self.before_open[s]
                self.samples[s] = STRICT if inside else EDGE
            return
        if status == L_:
            if self.depth <= 0:
                self.samples[s] = OPEN
                return
            det = self.engine._nls_detected(self.tree, {self.boundary: s}, self.depth - 1)
            self.samples[s] = OPEN if det is None else (EDGE if det else STRICT)

    def refine(self, budget, max_height):
        """Sharpen everywhere, for a stand-alone estimate."""
        full = [SlopeArc.full()]
        for _ in range(budget):
            s = self.candidate(full)
            if s is None or s.height() > max_height:
                return
            self.resolve(s)

    def estimate(self, bound):
        inner, outer = self.brackets()
        return ArcEstimate(inner, outer, self.exact, bound, self.longitude)


def _split_at(arc, s):
    """arc minus the point s, for s in arc."""
    if arc.kind == "POINT":
        return []
    if arc.kind == "FULL":
        return [SlopeArc.arc(s, s, False, False)]
    if s == arc.start:
        return [replace(arc, start_closed=False)]
    if s == arc.end:
        return [replace(arc, end_closed=False)]
    return [SlopeArc.arc(arc.start, s, arc.start_closed, False),
            SlopeArc.arc(s, arc.end, False, arc.end_closed)]


def _exact_shape(tree):
    """Single piece, or a two-boundary end piece whose remainder has the same shape."""
    if len(tree.pieces) == 1:
        return True
    name, idx = tree.open_boundaries[0]
    if tree.piece(name).boundaries != 2:
        return False
    edge = tree.glued()[(name, 3 - idx)]
    ta, tb, _ = cut_edge(tree, edge)
    return _exact_shape(tb if edge.a == name else ta)


# -- the engine --------------------------------------------------------------

def find_witness(arc_a, m, arc_b):
    """Minimal-denominator slope a in arc_a with m(a) in arc_b, or None."""
    back = arc_image(invert_map(m), arc_b)
    comps = arc_intersection(arc_a, back)
    cands = [simplest_slope_in(c) for c in comps]
    cands = [c for c in cands if c is not None]
    return min(cands, key=Slope.sort_key) if cands else None


def _sample_witness(sa, sb, m, inv):
    """A sampled slope outside the interior on one side whose image lies in the other's arc."""
    ia, _ = sa.brackets()
    ib, _ = sb.brackets()
    hits = [s for s in sa.outside_points() if arc_contains(ib, apply_map(m, s))]
    hits += [apply_map(inv, s) for s in sb.outside_points() if arc_contains(ia, apply_map(inv, s))]
    return min(hits, key=Slope.sort_key) if hits else None


def strict_complement_arc(est):
    """(inner, outer) brackets for the complement of the strict L-space slopes."""
    return est.nls_inner, est.nls_outer


def _combine(verdicts, order):
    kinds = [v.kind for v in verdicts]
    if NOT_QHS in kinds:
        return Verdict(NOT_QHS, None, {"b1": True})
    if NON_L_SPACE in kinds:
        i = kinds.index(NON_L_SPACE)
        return Verdict(NON_L_SPACE, order, {"summand": i, "inner": verdicts[i].witness})
    if UNKNOWN in kinds:
        return Verdict(UNKNOWN, order, bound=max(v.bound or 0 for v in verdicts))
    return Verdict(L_SPACE, order, boundary_sensitive=any(v.boundary_sensitive for v in verdicts))


def simplify(tree, allow_sum=True):
    """
    Absorb solid-torus leaves by Dehn filling their neighbour and fold
    product collars into the adjacent edge.  Returns a GmTree or, for a
    fibre filling, a SumDecomposition.
    """
    changed = True
    while changed and isinstance(tree, GmTree) and len(tree.pieces) > 1:
        changed = False
        vertical = [e for e in tree.edges if e.matrix.b == 0]
        if vertical:
            tree = merge_vertical(tree, vertical[0])
            changed = True
            continue
        glued = tree.glued()
        for p in tree.pieces:
            nb = tree.neighbors(p.name)
            if p.boundaries == 1 and len(p.fibers) <= 1 and len(nb) == 1:
                e, other = nb[0]
                m = e.map_from(p.name, 1)
                image = apply_map(m, normalize_slope(*p.meridian()))
                oname, oidx = e.other(p.name, 1)
                rest = GmTree(tuple(x for x in tree.pieces if x.name != p.name),
                              tuple(x for x in tree.edges if x != e))
                if image.p == 0 and not allow_sum:
                    continue
                try:
                    tree = fill_tree_boundary(rest, (oname, oidx), image)
                except TreeError:
                    continue
                changed = True
                break
            if (p.boundaries == 2 and not p.fibers and (p.name, 1) in glued
                    and (p.name, 2) in glued):
                e1, e2 = glued[(p.name, 1)], glued[(p.name, 2)]
                x, xi = e1.other(p.name, 1)
                y, yi = e2.other(p.name, 2)
                collar = _collar_map(p.e0)
                m = compose_maps(e2.map_from(p.name, 2), compose_maps(collar, e1.map_from(x, xi)))
                pieces = tuple(q for q in tree.pieces if q.name != p.name)
                edges = tuple(q for q in tree.edges if q not in (e1, e2)) + (Edge(x, xi, y, yi, m),)
                tree = GmTree(pieces, edges)
                changed = True
                break
    return tree


def _is_solid_torus(tree):
    if not isinstance(tree, GmTree) or len(tree.pieces) != 1:
        return False
    p = normalize_sfs(tree.pieces[0])
    return p.boundaries == 1 and len(p.fibers) <= 1


def _collar_map(e0):
    # basis of boundary 1 to basis of boundary 2 across sfs(e0) with two boundaries
    return GluingMap(-1, 0, e0, 1)


def merge_vertical(tree, edge):
    """
    Merge the two pieces of an edge whose matrix sends fibre to fibre
    (b = 0) into one Seifert piece.  Other boundaries keep their slopes;
    when the fibre is reversed the a-side bases are negated.
    """
    m = edge.matrix
    if m.b != 0:
        raise EngineError("edge does not preserve the fibre")
    pa, pb = tree.piece(edge.a), tree.piece(edge.b)
    flip = m.d == -1
    e0 = pa.e0 + pb.e0 + (m.c if flip else -m.c)
    name = f"{pa.name}+{pb.name}"
    a_rest = [i for i in range(1, pa.boundaries + 1) if i != edge.ai]
    b_rest = [i for i in range(1, pb.boundaries + 1) if i != edge.bi]
    renum = {(pa.name, i): k + 1 for k, i in enumerate(a_rest)}
    renum.update({(pb.name, i): len(a_rest) + k + 1 for k, i in enumerate(b_rest)})
    merged = SeifertPiece(e0, pa.fibers + pb.fibers, len(a_rest) + len(b_rest), name)
    neg = GluingMap(-1, 0, 0, -1)
    edges = []
    for e in tree.edges:
        if e == edge:
            continue
        a, ai, b, bi, mm = e.a, e.ai, e.b, e.bi, e.matrix
        if (a, ai) in renum:
            if flip and a == pa.name:
                mm = compose_maps(mm, neg)
            a, ai = name, renum[(a, ai)]
        if (b, bi) in renum:
            if flip and b == pa.name:
                mm = compose_maps(neg, mm)
            b, bi = name, renum[(b, bi)]
        edges.append(Edge(a, ai, b, bi, mm))
    pieces = tuple(normalize_sfs(merged) if x.name == pa.name else x
                   for x in tree.pieces if x.name != pb.name)
    return GmTree(pieces, tuple(edges))


class Engine:
    def __init__(self, config=None):
        self.config = config or Config()
        self.memo = {}
        self.arcs = {}
        self.calls = 0
        self.work = 0
        self.entered = False

    def spend(self):
        self.work += 1
        if self.work > self.config.max_work:
            raise _OutOfWork()

    def _entry(self, fn, *args):
        # top-level calls get a fresh work allowance
        outer = self.entered
        if not outer:
            self.work = 0
        self.entered = True
        try:
            return fn(*args)
        finally:
            self.entered = outer

    # closed manifolds
    def decide(self, tree):
        try:
            return self._entry(self._decide, tree, self.config.max_depth)
        except _OutOfWork:
            if self.entered:
                raise
            inv = h1_invariants(tree)
            return Verdict(UNKNOWN, None if inv.b1 else inv.order, bound=self.config.max_denominator)

    def _decide(self, tree, depth, avoid=()):
        if isinstance(tree, SumDecomposition):
            parts = [self._decide(t, depth) for t in tree.summands]
            inv = h1_invariants(tree)
            return _combine(parts, None if inv.b1 else inv.order)
        if tree.open_boundaries:
            raise EngineError("decide needs a closed tree")
        key = (canonical_key(tree), depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.calls += 1
        v = self._decide_uncached(tree, depth, avoid)
        self.memo[key] = v
        return v

    def _decide_uncached(self, tree, depth, avoid):
        inv = h1_invariants(tree)
        if inv.b1:
            return Verdict(NOT_QHS, None, {"b1": inv.b1})
        order = inv.order
        small = simplify(tree)
        if isinstance(small, SumDecomposition):
            v = self._decide(small, depth)
            return replace(v, h1_order=order)
        if len(small.pieces) == 1:
            rep = classify_sfs(small.pieces[0])
            if rep.verdict == LSpaceVerdict.NOT_QHS:
                return Verdict(NOT_QHS, None, {"b1": 1})
            if rep.verdict == LSpaceVerdict.L_SPACE:
                return Verdict(L_SPACE, order, boundary_sensitive=rep.boundary_sensitive)
            return Verdict(NON_L_SPACE, order, {"sfs": str(small.pieces[0]),
                                                "realization": _jsonable(rep.witness)},
                           boundary_sensitive=rep.boundary_sensitive)
        if small is not tree and len(small.pieces) < len(tree.pieces):
            return replace(self._decide(small, depth, avoid), h1_order=order)
        bound = None
        # the verdict does not depend on the edge, so an undecided cut
        # just moves on to the next one
        for edge in self.edge_order(small, avoid):
            kind, alpha, bound = self.glue_decision(small, edge, depth)
            if kind == NON_L_SPACE:
                return Verdict(NON_L_SPACE, order, {"edge": edge.id, "slope": str(alpha)})
            if kind == L_SPACE:
                return Verdict(L_SPACE, order)
        return Verdict(UNKNOWN, order, bound=bound)

    def edge_order(self, tree, avoid=()):
        """
        Cut edges in order of preference: avoided pieces last, then sides
        whose boundary piece has more than one further neighbour (no exact
        local analysis there), then small sides first.
        """
        scored = []
        for e in tree.edges:
            ta, tb, _ = cut_edge(tree, e)
            shunned = e.a in avoid or e.b in avoid
            rough = sum(1 for side, name in ((ta, e.a), (tb, e.b))
                        if len(side) > 1 and side.piece(name).boundaries > 2)
            scored.append((shunned, rough, max(len(ta), len(tb)), e.id, e))
        scored.sort(key=lambda z: z[:4])
        if self.config.heuristic == "alternate":
            scored.sort(key=lambda z: (z[0], z[1], z[2], _reversed_key(z[3])))
        return [z[4] for z in scored]

    def choose_edge(self, tree, avoid=()):
        return self.edge_order(tree, avoid)[0]

    # one-boundary sides
    def arc_state(self, tree, depth):
        tree = simplify(tree, allow_sum=False)
        key = (canonical_key(tree), depth)
        st = self.arcs.get(key)
        if st is None:
            st = ArcState(self, tree, depth)
            self.arcs[key] = st
        return st, tree

    def glue_decision(self, tree, edge, depth):
        """
        Decide the gluing across one edge.  Returns (kind, witness slope on
        the a-side, bound); kind is L_SPACE, NON_L_SPACE or UNKNOWN.
        """
        ta, tb, m = cut_edge(tree, edge)
        inv = invert_map(m)
        # a solid torus side is compressible and the arc comparison is wrong
        # at the ends of the other side's L-space interval, so fill instead
        for side, other, end, to_other in ((ta, tb, (edge.b, edge.bi), m),
                                           (tb, ta, (edge.a, edge.ai), inv)):
            if _is_solid_torus(simplify(side, allow_sum=False)):
                mu = rational_longitude(side)
                image = apply_map(to_other, mu)
                v = self._decide(fill_tree_boundary(other, end, image), depth)
                if v.kind in NONL:
                    return NON_L_SPACE, (mu if side is ta else image), None
                return v.kind, None, v.bound
        # simplification inside arc_state keeps the basis on the cut torus
        sa, _ = self.arc_state(ta, depth)
        sb, _ = self.arc_state(tb, depth)
        cap = self.config.max_denominator
        for _ in range(self.config.probe_budget):
            ia, oa = sa.brackets()
            ib, ob = sb.brackets()
            alpha = find_witness(ia, m, ib)
            if alpha is None:
                alpha = _sample_witness(sa, sb, m, inv)
            if alpha is not None:
                return NON_L_SPACE, alpha, None
            amb = arc_intersection(arc_image(m, oa), ob)
            if not amb:
                return L_SPACE, None, None
            cands = []
            cb = sb.candidate(amb)
            if cb is not None:
                cands.append((cb.height(), cb.sort_key(), 1, cb))
            ca = sa.candidate([arc_image(inv, x) for x in amb])
            if ca is not None:
                cands.append((ca.height(), ca.sort_key(), 0, ca))
            if not cands:
                break
            h, _, which, s = min(cands)
            if h > cap:
                break
            (sa if which == 0 else sb).resolve(s)
        return UNKNOWN, None, cap

    def certificate_search(self, tree):
        """
        NLS certificate for a closed tree, None for an L-space; UNKNOWN
        anywhere raises UnknownResult.
        """
        v = self.decide(tree)
        if v.kind == UNKNOWN:
            raise UnknownResult(v.bound or self.config.max_denominator)
        if v.kind == L_SPACE:
            return None
        if v.kind == NOT_QHS:
            return NLSCertificate({}, {}, True)
        slopes, verdicts = {}, {}
        pending = {e.id for e in tree.edges}
        try:
            self._entry(_certify, self, tree, pending, slopes, verdicts, self.config.max_depth)
        except _OutOfWork:
            if self.entered:
                raise
            raise UnknownResult(self.config.max_denominator)
        if not tree.edges:
            verdicts = {tree.pieces[0].name: v.kind}
        return NLSCertificate(dict(sorted(slopes.items())), dict(sorted(verdicts.items())))

    def lspace_arc(self, tree):
        if len(tree.open_boundaries) != 1:
            raise EngineError("lspace_arc needs exactly one open boundary")
        st, _ = self.arc_state(tree, self.config.max_depth)
        try:
            self._entry(st.refine, self.config.probe_budget, self.config.max_denominator)
        except _OutOfWork:
            if self.entered:
                raise
        return st.estimate(self.config.max_denominator)

    def nls_detected(self, tree, assignment, depth=None):
        """True / False, or None when the N-filling stays undecided."""
        depth = self.config.max_depth if depth is None else depth
        try:
            return self._entry(self._nls_detected, tree, assignment, depth)
        except _OutOfWork:
            if self.entered:
                raise
            return None

    def _nls_detected(self, tree, assignment, depth):
        filled = n_fill(tree, assignment)
        fresh = {p.name for p in filled.pieces} - {p.name for p in tree.pieces}
        v = self._decide(filled, depth, avoid=fresh)
        if v.kind == UNKNOWN:
            return None
        return v.is_nonl


@dataclass(frozen=True)
class NLSCertificate:
    """
    One slope per edge, in the basis of the edge's first piece, such that
    every piece with copies of N glued along those slopes is not an
    L-space.  ``pieces`` maps piece names to the verdict found for that
    N-filled piece.  A b1 > 0 input is certified by the flag alone.
    """
    edges: dict
    pieces: dict
    b1_shortcut: bool = False


def piece_assignment(tree, name, slopes):
    """Slopes of a certificate on the boundaries of one piece, in its basis."""
    out = {}
    for e in tree.edges:
        alpha = slopes[e.id]
        if e.a == name:
            out[(name, e.ai)] = alpha
        if e.b == name:
            out[(name, e.bi)] = apply_map(e.map_from(e.a, e.ai), alpha)
    return out


class CertificateError(EngineError):
    pass


def _certify(engine, tree, pending, slopes, verdicts, depth):
    """
    Cut one original edge of tree, glue N to both sides along a witness
    and recurse, until each original piece sits alone among copies of N.
    """
    mine = [e for e in engine.edge_order(tree) if e.id in pending]
    if not mine:
        fresh = [p.name for p in tree.pieces if not p.name.startswith("N[")]
        v = engine._decide(tree, depth)
        if v.kind == UNKNOWN:
            raise UnknownResult(engine.config.max_denominator)
        if not v.is_nonl:
            raise CertificateError(f"N-filling of {fresh[0]} is an L-space")
        verdicts[fresh[0]] = v.kind
        return
    bound = engine.config.max_denominator
    for edge in mine:
        kind, alpha, bound = engine.glue_decision(tree, edge, depth)
        if kind == NON_L_SPACE:
            break
        if kind == L_SPACE:
            raise CertificateError(f"{edge.id} admits no witness slope")
    else:
        raise UnknownResult(bound)
    ta, tb, m = cut_edge(tree, edge)
    slopes[edge.id] = alpha
    halves = ((n_fill(ta, {(edge.a, edge.ai): alpha}), ta),
              (n_fill(tb, {(edge.b, edge.bi): apply_map(m, alpha)}), tb))
    for filled, side in halves:
        v = engine._decide(filled, depth)
        if v.kind == UNKNOWN:
            raise UnknownResult(engine.config.max_denominator)
        if not v.is_nonl:
            raise CertificateError(f"N-filling across {edge.id} is an L-space")
    for filled, side in halves:
        rest = {e.id for e in side.edges} & pending
        _certify(engine, filled, rest, slopes, verdicts, depth)


def _reversed_key(text):
    return tuple(-ord(ch) for ch in text)


def _jsonable(w):
    if isinstance(w, tuple):
        return [_jsonable(x) for x in w]
    return w


_default = {}


def _engine(config, engine):
    if engine is not None:
        return engine
    config = config or Config()
    eng = _default.get(config)
    if eng is None:
        eng = _default[config] = Engine(config)
    return eng


def decide_closed(tree, config=None, engine=None):
    return _engine(config, engine).decide(tree)


def lspace_arc(tree, config=None, engine=None):
    return _engine(config, engine).lspace_arc(tree)


def certificate_search(tree, config=None, engine=None):
    return _engine(config, engine).certificate_search(tree)


def nls_detected(tree, assignment, config=None, engine=None):
    return _engine(config, engine).nls_detected(tree, assignment)
