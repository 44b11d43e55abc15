"""
Trees of Seifert pieces glued along tori.

Boundaries of a piece are numbered 1..boundaries.  An edge glues boundary
``ai`` of piece ``a`` to boundary ``bi`` of piece ``b`` by a determinant -1
matrix taking the (d, h) basis on the a-side to the (d, h) basis on the
b-side.  Unglued boundaries are open.
"""
from dataclasses import dataclass, replace
from fractions import Fraction
import hashlib

from .seifert import (FIBER_FILLING, SeifertPiece, fill_boundary, make_N,
                      normalize_sfs)
from .slopes import (GluingMap, Slope, apply_map, compose_maps, invert_map,
                     normalize_slope)


class TreeError(ValueError):
    def __init__(self, code, message, location=None):
        super().__init__(message)
        self.code = code
        self.location = location


@dataclass(frozen=True)
class Edge:
    a: str
    ai: int
    b: str
    bi: int
    matrix: GluingMap

    @property
    def id(self):
        return f"{self.a}.{self.ai}-{self.b}.{self.bi}"

    def ends(self):
        return ((self.a, self.ai), (self.b, self.bi))

    def flipped(self):
        return Edge(self.b, self.bi, self.a, self.ai, invert_map(self.matrix))

    def map_from(self, name, idx):
        """Matrix from the basis at (name, idx) to the basis on the other side."""
        if (name, idx) == (self.a, self.ai):
            return self.matrix
        if (name, idx) == (self.b, self.bi):
            return invert_map(self.matrix)
        raise KeyError((name, idx))

    def other(self, name, idx):
        return (self.b, self.bi) if (name, idx) == (self.a, self.ai) else (self.a, self.ai)


@dataclass(frozen=True)
class GmTree:
    pieces: tuple
    edges: tuple = ()

    def piece(self, name):
        for p in self.pieces:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def names(self):
        return [p.name for p in self.pieces]

    def edge(self, edge_id):
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def glued(self):
        out = {}
        for e in self.edges:
            out[(e.a, e.ai)] = e
            out[(e.b, e.bi)] = e
        return out

    @property
    def open_boundaries(self):
        g = self.glued()
        return [(p.name, i) for p in self.pieces for i in range(1, p.boundaries + 1)
                if (p.name, i) not in g]

    @property
    def closed(self):
        return not self.open_boundaries

    def neighbors(self, name):
        out = []
        for e in self.edges:
            if e.a == name:
                out.append((e, e.b))
            elif e.b == name:
                out.append((e, e.a))
        return out

    def leaves(self):
        return [p.name for p in self.pieces if len(self.neighbors(p.name)) == 1]

    def dsl(self):
        lines = [p.dsl() for p in self.pieces]
        for e in self.edges:
            m = e.matrix
            lines.append(f"glue {e.a}.{e.ai} {e.b}.{e.bi} [{m.a},{m.b};{m.c},{m.d}]")
        return "\n".join(lines) + "\n"

    def __len__(self):
        return len(self.pieces)


@dataclass(frozen=True)
class SumDecomposition:
    """Connected-sum factors; an empty list of attachments gives S^3."""
    summands: tuple


def validate_tree(pieces, edges):
    """
    Check piece names, boundary references, determinants and the tree
    property, and return a GmTree.  Errors are TreeError with a code.
    """
    pieces = tuple(normalize_sfs(p) for p in pieces)
    seen = {}
    for p in pieces:
        if p.name in seen:
            raise TreeError("DUPLICATE_NAME", f"piece {p.name} declared twice", p.name)
        seen[p.name] = p
    used = {}
    out = []
    for k, e in enumerate(edges):
        if not isinstance(e, Edge):
            a, ai, b, bi, m = e
            if not isinstance(m, GluingMap):
                (x, y), (z, w) = m
                if x * w - y * z not in (1, -1):
                    raise TreeError("DETERMINANT", f"edge {k}: determinant {x * w - y * z}, need -1", k)
                m = GluingMap(x, y, z, w)
            e = Edge(a, ai, b, bi, m)
        for name, idx in e.ends():
            if name not in seen:
                raise TreeError("REFERENCE", f"edge {e.id}: no piece named {name}", e.id)
            if not 1 <= idx <= seen[name].boundaries:
                raise TreeError("REFERENCE", f"edge {e.id}: piece {name} has no boundary {idx}", e.id)
            if (name, idx) in used:
                raise TreeError("REUSED_BOUNDARY", f"boundary {name}.{idx} glued twice", e.id)
            used[(name, idx)] = e
        if e.matrix.det() != -1:
            raise TreeError("DETERMINANT", f"edge {e.id}: determinant {e.matrix.det()}, need -1", e.id)
        out.append(e)
    if not pieces:
        raise TreeError("EMPTY", "no pieces")
    # connected and acyclic
    if len(out) != len(pieces) - 1:
        raise TreeError("NOT_TREE", f"{len(pieces)} pieces need {len(pieces) - 1} edges, got {len(out)}")
    parent = {p.name: p.name for p in pieces}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in out:
        ra, rb = find(e.a), find(e.b)
        if ra == rb:
            raise TreeError("NOT_TREE", f"edge {e.id} closes a cycle", e.id)
        parent[ra] = rb
    return GmTree(pieces, tuple(out))


def single(piece):
    return GmTree((normalize_sfs(piece),), ())


# -- surgery on trees ---------------------------------------------------------

def _component(tree, start, banned_edge):
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for e, y in tree.neighbors(x):
            if e is banned_edge or e == banned_edge:
                continue
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def cut_edge(tree, edge):
    """
    Cut along an edge.  Returns (side_a, side_b, matrix) where side_a holds
    edge.a (with boundary edge.ai now open) and matrix is the edge matrix.
    """
    if isinstance(edge, str):
        edge = tree.edge(edge)
    side = _component(tree, edge.a, edge)
    rest = [e for e in tree.edges if e != edge]
    ta = GmTree(tuple(p for p in tree.pieces if p.name in side),
                tuple(e for e in rest if e.a in side))
    tb = GmTree(tuple(p for p in tree.pieces if p.name not in side),
                tuple(e for e in rest if e.a not in side))
    return ta, tb, edge.matrix


def glue(ta, tb, a, ai, b, bi, matrix):
    return validate_tree(ta.pieces + tb.pieces, ta.edges + tb.edges + (Edge(a, ai, b, bi, matrix),))


def _drop_boundary(tree, name, idx, new_piece):
    """Replace a piece after one of its boundaries disappeared; renumber edges."""
    def shift(n, i):
        return i - 1 if n == name and i > idx else i

    pieces = tuple(new_piece if p.name == name else p for p in tree.pieces)
    edges = tuple(Edge(e.a, shift(e.a, e.ai), e.b, shift(e.b, e.bi), e.matrix) for e in tree.edges)
    return GmTree(pieces, edges)


def fill_tree_boundary(tree, boundary, slope):
    """
    Dehn fill an open boundary.  A non-fibre slope adds a fibre to the
    piece; the fibre slope dissolves the piece into a connected sum.
    """
    name, idx = boundary
    if boundary not in tree.open_boundaries:
        raise TreeError("NOT_OPEN", f"boundary {name}.{idx} is not open", f"{name}.{idx}")
    if not isinstance(slope, Slope):
        slope = normalize_slope(*slope)
    piece = tree.piece(name)
    # move the filled boundary to the last slot, then fill it
    filled = fill_boundary(piece, slope)
    if filled is not FIBER_FILLING:
        return _drop_boundary(tree, name, idx, filled)
    return fiber_filling_sum(tree, name, idx)


def fiber_filling_sum(tree, name, idx):
    """
    Connected-sum rule for filling boundary (name, idx) along the fibre:
    each exceptional fibre beta/alpha leaves a lens space summand with
    |H_1| = alpha, each subtree glued to the piece is filled along the
    image of the fibre, and nothing at all leaves S^3.
    """
    piece = tree.piece(name)
    others = [i for i in range(1, piece.boundaries + 1) if i != idx]
    glued = tree.glued()
    if any((name, i) not in glued for i in others):
        raise TreeError("UNSUPPORTED", "fibre filling with further open boundaries on the piece",
                        f"{name}.{idx}")
    summands = []
    for r in piece.fibers:
        summands.append(single(SeifertPiece(0, (Fraction(r.denominator, r.numerator),), 0,
                                            f"{name}~L{r.denominator}")))
    for i in others:
        e = glued[(name, i)]
        other_name, other_idx = e.other(name, i)
        side = _component(tree, other_name, e)
        sub = GmTree(tuple(p for p in tree.pieces if p.name in side),
                     tuple(x for x in tree.edges if x != e and x.a in side))
        image = apply_map(e.map_from(name, i), Slope(0, 1))
        res = fill_tree_boundary(sub, (other_name, other_idx), image)
        if isinstance(res, SumDecomposition):
            summands.extend(res.summands)
        else:
            summands.append(res)
    if not summands:
        summands.append(single(SeifertPiece(1, (), 0, f"{name}~S3")))
    return SumDecomposition(tuple(summands))


LAMBDA_N = (1, -1)
NU_N = (0, 1)


def canonical_dual(alpha):
    """
    The vector delta with det(alpha, delta) = -1 of minimal |q| (then |p|)
    among delta + k alpha.
    """
    p, q = alpha.p, alpha.q
    # extended gcd for p s - q r = -1
    def egcd(x, y):
        if y == 0:
            return (x, 1, 0)
        g, u, v = egcd(y, x % y)
        return (g, v, u - (x // y) * v)

    g, u, v = egcd(p, -q)  # p u + (-q) v = g = +-1
    s, r = -u * g, -v * g   # p s - q r = -1
    assert p * s - q * r == -1
    best = None
    # minimise over the family (r, s) + k (p, q)
    if q != 0:
        k0 = -s // q
        ks = range(k0 - 2, k0 + 3)
    elif p != 0:
        k0 = -r // p
        ks = range(k0 - 2, k0 + 3)
    else:
        ks = [0]
    for k in ks:
        cand = (r + k * p, s + k * q)
        key = (abs(cand[1]), abs(cand[0]), cand)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def n_gluing_map(alpha, dual_choice=0):
    """Matrix from the (d, h) basis of N to the boundary carrying alpha, det -1."""
    r, s = canonical_dual(alpha)
    r, s = r + dual_choice * alpha.p, s + dual_choice * alpha.q
    # G (1, -1) = alpha, G (0, 1) = (r, s)
    m = GluingMap(alpha.p + r, r, alpha.q + s, s)
    assert m.det() == -1
    return m


def n_fill(tree, assignment, dual_choice=0):
    """
    Glue a copy of N to every open boundary so that its rational longitude
    goes to the assigned slope.  ``dual_choice`` is an int or a dict per
    boundary selecting the Dehn twist about the longitude.
    """
    opens = tree.open_boundaries
    missing = [b for b in opens if b not in assignment]
    if missing:
        raise TreeError("INCOMPLETE", f"no slope for boundaries {missing}")
    pieces = list(tree.pieces)
    edges = list(tree.edges)
    taken = set(tree.names)
    for (name, idx) in opens:
        k = dual_choice.get((name, idx), 0) if isinstance(dual_choice, dict) else dual_choice
        nname = f"N[{name}.{idx}]"
        while nname in taken:
            nname += "'"
        taken.add(nname)
        pieces.append(replace(make_N(), name=nname))
        edges.append(Edge(nname, 1, name, idx, n_gluing_map(assignment[(name, idx)], k)))
    return GmTree(tuple(pieces), tuple(edges))


# -- canonical keys -------------------------------------------------------------

def _label(p):
    fibers = ",".join(f"{r.numerator}/{r.denominator}" for r in sorted(p.fibers))
    return f"{p.e0};{fibers};{p.boundaries}"


def _encode(tree, name, parent_edge):
    p = tree.piece(name)
    glued = tree.glued()
    parts = []
    for i in range(1, p.boundaries + 1):
        e = glued.get((name, i))
        if e is None:
            parts.append(f"{i}:open")
        elif e == parent_edge:
            parts.append(f"{i}:up")
        else:
            on, oi = e.other(name, i)
            parts.append(f"{i}>{oi}{e.map_from(name, i)}{_encode(tree, on, e)}")
    return "(" + _label(p) + "|" + "|".join(parts) + ")"


def canonical_key(tree):
    """
    Name-free key, invariant under reordering pieces, flipping edges and
    permuting fibres within a piece.  Not a homeomorphism invariant.
    """
    if isinstance(tree, SumDecomposition):
        return b"#".join(sorted(canonical_key(t) for t in tree.summands))
    best = min(_encode(tree, p.name, None) for p in tree.pieces)
    return hashlib.sha256(best.encode()).digest()


def rename(tree, mapping):
    pieces = tuple(replace(p, name=mapping.get(p.name, p.name)) for p in tree.pieces)
    edges = tuple(Edge(mapping.get(e.a, e.a), e.ai, mapping.get(e.b, e.b), e.bi, e.matrix)
                  for e in tree.edges)
    return GmTree(pieces, edges)


def change_basis(tree, name, idx, k):
    """
    Replace the section on boundary (name, idx) by d + k h.  The piece's e0
    shifts by k and the adjacent edge matrix is recomputed, so the
    underlying manifold is unchanged.
    """
    piece = tree.piece(name)
    new_piece = replace(piece, e0=piece.e0 + k)
    pieces = tuple(new_piece if p.name == name else p for p in tree.pieces)
    new_to_old = GluingMap(1, 0, k, 1)
    edges = []
    for e in tree.edges:
        if (e.a, e.ai) == (name, idx):
            e = Edge(e.a, e.ai, e.b, e.bi, compose_maps(e.matrix, new_to_old))
        elif (e.b, e.bi) == (name, idx):
            e = Edge(e.a, e.ai, e.b, e.bi, compose_maps(invert_map(new_to_old), e.matrix))
        edges.append(e)
    return GmTree(pieces, tuple(edges))


def _egcd(x, y):
    if y == 0:
        return (x, 1, 0)
    g, u, v = _egcd(y, x % y)
    return (g, v, u - (x // y) * v)


def lens_tree(p, q):
    """
    Two solid tori glued so the meridian of A lands on (q, p) in the basis
    of B.  The result is the lens space with |H_1| = p.
    """
    if p == 0:
        m = GluingMap(1, 0, 0, -1)
    else:
        g, u, v = _egcd(q, p)
        if abs(g) != 1:
            raise TreeError("NOT_COPRIME", f"gcd({p}, {q}) != 1")
        # q d - b p = -1
        d, b = -u * g, v * g
        m = GluingMap(q, b, p, d)
        assert m.det() == -1
    a = SeifertPiece(0, (), 1, "A")
    bb = SeifertPiece(0, (), 1, "B")
    return validate_tree([a, bb], [Edge("A", 1, "B", 1, m)])
