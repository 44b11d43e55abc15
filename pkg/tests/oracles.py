"""
Independent reference computations and random generators for the tests.

Nothing here calls the code under test for the quantity it checks: the
realisability search is a plain loop over (a, m) and orderings, Smith
invariants come from gcds of minors, and quotient orders from walking the
cosets with sympy's Hermite form as the normal form.
"""
from collections import deque
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
import random

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from gmlspace.seifert import SeifertPiece
from gmlspace.slopes import GluingMap
from gmlspace.tree import Edge, validate_tree


# -- realisability and closed Seifert spaces ---------------------------------

def jn_brute(rs, bound=None, strict=True):
    """Scan coprime 0 < a < m <= bound and every choice of the two special r's."""
    rs = [Fraction(r) for r in rs]
    if len(rs) <= 2:
        return False
    bound = bound or 2 * max(r.denominator for r in rs)
    lt = (lambda x, y: x < y) if strict else (lambda x, y: x <= y)
    for m in range(2, bound + 1):
        for a in range(1, m):
            if gcd(a, m) != 1:
                continue
            for i, j in permutations(range(len(rs)), 2):
                rest = [r for k, r in enumerate(rs) if k not in (i, j)]
                if (lt(rs[i], Fraction(a, m)) and lt(rs[j], Fraction(m - a, m))
                        and all(lt(r, Fraction(1, m)) for r in rest)):
                    return True
    return False


def normal_form(e0, fibers):
    """Fibres moved into (0, 1), integer parts absorbed into e0."""
    out = []
    for r in fibers:
        r = Fraction(r)
        k = r.numerator // r.denominator
        e0 += k
        if r - k:
            out.append(r - k)
    return e0, sorted(out)


def closed_sfs_kind(e0, fibers, bound=None):
    """
    L_SPACE / NON_L_SPACE / NOT_QHS for the closed space with e = e0 + sum r
    over the sphere, from the horizontal foliation criterion.
    """
    e0, rs = normal_form(e0, fibers)
    e = e0 + sum(rs)
    if e == 0:
        return "NOT_QHS"
    if e > 0:
        e0, rs = normal_form(-e0 - len(rs), [1 - r for r in rs])
    n = len(rs)
    if n < 3:
        return "L_SPACE"
    if -(n - 2) <= e0 <= -2:
        foliated = True
    elif e0 == -1:
        foliated = jn_brute(rs, bound)
    elif e0 == -(n - 1):
        foliated = jn_brute([1 - r for r in rs], bound)
    else:
        foliated = False
    return "NON_L_SPACE" if foliated else "L_SPACE"


def closed_sfs_order(e0, fibers):
    """|H_1| of the closed space, 0 when infinite."""
    e0, rs = normal_form(e0, fibers)
    e = e0 + sum(rs)
    prod = 1
    for r in rs:
        prod *= r.denominator
    return abs(e * prod)


# -- integer matrices ----------------------------------------------------------

def minor_gcd_invariants(rows):
    """Invariant factors d_k = D_k / D_{k-1}, D_k the gcd of k x k minors."""
    if not rows or not rows[0]:
        return 0, []
    A = Matrix(rows)
    r, c = A.shape
    ds = [1]
    for k in range(1, min(r, c) + 1):
        g = 0
        for ri in combinations(range(r), k):
            for ci in combinations(range(c), k):
                g = gcd(g, int(A.extract(list(ri), list(ci)).det()))
        if g == 0:
            break
        ds.append(g)
    return len(ds) - 1, [ds[k] // ds[k - 1] for k in range(1, len(ds))]


def coset_count(relations, n):
    """
    |Z^n / span(relations)| by walking from 0 along +-e_i and reducing each
    vector to its coset representative.  None when the quotient is infinite.
    """
    rows = [list(r) for r in relations if any(r)]
    if not rows:
        return None
    H = hermite_normal_form(Matrix(rows).T)
    if H.shape != (n, n) or H.det() == 0:
        return None
    H = [[int(H[i, j]) for j in range(n)] for i in range(n)]

    def reduce(v):
        v = list(v)
        for j in range(n - 1, -1, -1):
            k = v[j] // H[j][j]
            if k:
                for i in range(n):
                    v[i] -= k * H[i][j]
        return tuple(v)

    start = reduce([0] * n)
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for i in range(n):
            for s in (1, -1):
                w = list(v)
                w[i] += s
                w = reduce(w)
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
    return len(seen)


# -- random objects ----------------------------------------------------------------

def rand_fiber(rng, amax=7):
    a = rng.randint(2, amax)
    b = rng.randint(1, a - 1)
    while gcd(a, b) != 1:
        b = rng.randint(1, a - 1)
    return Fraction(b, a)


def rand_piece(rng, name, nfibers, boundaries, amax=7, e0=(-3, 1)):
    return SeifertPiece(rng.randint(*e0), tuple(rand_fiber(rng, amax) for _ in range(nfibers)),
                        boundaries, name)


def rand_map(rng, size=3, det=-1):
    """A random integral matrix of the given determinant."""
    while True:
        a, b, c = (rng.randint(-size, size) for _ in range(3))
        ds = [d for d in range(-2 * size, 2 * size + 1) if a * d - b * c == det]
        if ds:
            return GluingMap(a, b, c, rng.choice(ds))


def rand_tree(rng, npieces, open_boundaries=0, amax=7, general=True):
    """
    Random tree on npieces pieces.  Leaves get two or three fibres so the
    tree does not collapse to a solid torus; ``open_boundaries`` extra
    boundaries are left unglued on piece P0.
    """
    parent = [None] + [rng.randrange(k) for k in range(1, npieces)]
    deg = [0] * npieces
    for k in range(1, npieces):
        deg[k] += 1
        deg[parent[k]] += 1
    deg[0] += open_boundaries
    pieces = []
    for k in range(npieces):
        nf = rng.randint(2, 3) if deg[k] <= 1 else rng.randint(0, 2)
        pieces.append(rand_piece(rng, f"P{k}", nf, deg[k], amax))
    used = [open_boundaries if k == 0 else 0 for k in range(npieces)]
    edges = []
    for k in range(1, npieces):
        a = parent[k]
        used[a] += 1
        used[k] += 1
        m = rand_map(rng) if general else GluingMap(-1, 0, rng.randint(-3, 3), 1)
        edges.append(Edge(f"P{a}", used[a], f"P{k}", used[k], m))
    return validate_tree(pieces, edges)


def fibre_preserving_path(rng, npieces):
    """
    A path of pieces glued by fibre preserving maps [-1,0;c,1], together with
    the (e0, fibres) of the single closed Seifert space it amounts to.
    """
    pieces, edges = [], []
    e0 = 0
    fibers = []
    for k in range(npieces):
        nb = 1 if k in (0, npieces - 1) else 2
        nf = rng.randint(1, 3) if nb == 1 else rng.randint(0, 2)
        p = rand_piece(rng, f"P{k}", nf, nb, amax=9, e0=(-4, 2))
        pieces.append(p)
        e0 += p.e0
        fibers += list(p.fibers)
    for k in range(1, npieces):
        c = rng.randint(-4, 4)
        edges.append(Edge(f"P{k - 1}", 1 if k == 1 else 2, f"P{k}", 1, GluingMap(-1, 0, c, 1)))
        e0 -= c
    return validate_tree(pieces, edges), (e0, fibers)


def seeded(seed):
    return random.Random(seed)
