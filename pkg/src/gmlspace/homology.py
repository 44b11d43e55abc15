"""
First homology of trees of Seifert pieces, via one presentation matrix for
the whole tree and its Smith normal form.

Per piece the generators are the fibre h, one q per exceptional fibre and
one section class d per boundary torus.  Relations:

    alpha q + beta h = 0                 for each fibre beta/alpha
    sum q + sum d - e0 h = 0
    d_A = a d_B + c h_B,  h_A = b d_B + d h_B    for each edge [a,b;c,d]

A one-boundary tree with boundary classes (d, h) has rational longitude
the slope p d + q h that dies in H_1(M; Q).
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .slopes import normalize_slope

INFINITE = "INFINITE"


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def smith_invariants(matrix):
    """
    Invariant factors d_1 | d_2 | ... of an integer matrix.  Returns
    (rank, factors) where factors lists the nonzero diagonal entries.
    """
    m = [list(map(int, row)) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    t = 0
    while t < rows and t < cols:
        # pivot: smallest nonzero absolute value in the remaining block
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] and (piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(m, t, piv[0])
        _swap_cols(m, t, piv[1])
        while True:
            done = True
            p = m[t][t]
            for i in range(t + 1, rows):
                if m[i][t]:
                    k = m[i][t] // p
                    m[i] = [x - k * y for x, y in zip(m[i], m[t])]
                    if m[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    k = m[t][j] // p
                    for row in m:
                        row[j] -= k * row[t]
                    if m[t][j]:
                        done = False
            if done:
                # d_t must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if m[i][j] % p), None)
                if bad is None:
                    break
                m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
                continue
            # move the new smallest entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, rows):
                if m[i][t] and abs(m[i][t]) < best[0]:
                    best = (abs(m[i][t]), i, t)
            for j in range(t + 1, cols):
                if m[t][j] and abs(m[t][j]) < best[0]:
                    best = (abs(m[t][j]), t, j)
            _swap_rows(m, t, best[1])
            _swap_cols(m, t, best[2])
        diag.append(abs(m[t][t]))
        t += 1
    return len(diag), diag


@dataclass(frozen=True)
class H1Invariants:
    b1: int
    torsion: tuple
    order: object  # int or INFINITE

    def to_json(self):
        return {"b1": self.b1, "torsion": list(self.torsion), "order": self.order}


def invariants_from_matrix(matrix, ngens):
    rank, factors = smith_invariants(matrix) if matrix else (0, [])
    b1 = ngens - rank
    torsion = tuple(f for f in factors if f > 1)
    order = INFINITE
    if b1 == 0:
        order = 1
        for f in torsion:
            order *= f
    return H1Invariants(b1, torsion, order)


def h1_presentation(tree):
    """
    Presentation matrix (rows are relations) and a dict from generator
    names ("h:P", "q:P:i", "d:P:j") to column indices.
    """
    from .tree import SumDecomposition
    if isinstance(tree, SumDecomposition):
        raise TypeError("present the summands separately")
    index = {}
    for p in tree.pieces:
        index[f"h:{p.name}"] = len(index)
        for i in range(len(p.fibers)):
            index[f"q:{p.name}:{i}"] = len(index)
        for j in range(1, p.boundaries + 1):
            index[f"d:{p.name}:{j}"] = len(index)
    n = len(index)
    rels = []
    for p in tree.pieces:
        h = index[f"h:{p.name}"]
        total = [0] * n
        for i, r in enumerate(p.fibers):
            row = [0] * n
            q = index[f"q:{p.name}:{i}"]
            row[q] = r.denominator
            row[h] += r.numerator
            rels.append(row)
            total[q] += 1
        for j in range(1, p.boundaries + 1):
            total[index[f"d:{p.name}:{j}"]] += 1
        total[h] -= p.e0
        rels.append(total)
    for e in tree.edges:
        m = e.matrix
        da, ha = index[f"d:{e.a}:{e.ai}"], index[f"h:{e.a}"]
        db, hb = index[f"d:{e.b}:{e.bi}"], index[f"h:{e.b}"]
        row = [0] * n
        row[da] += 1
        row[db] -= m.a
        row[hb] -= m.c
        rels.append(row)
        row = [0] * n
        row[ha] += 1
        row[db] -= m.b
        row[hb] -= m.d
        rels.append(row)
    return rels, index


def h1_invariants(tree):
    from .tree import SumDecomposition
    if isinstance(tree, SumDecomposition):
        parts = [h1_invariants(t) for t in tree.summands]
        b1 = sum(x.b1 for x in parts)
        torsion = []
        for x in parts:
            torsion.extend(x.torsion)
        rels = [[t if i == k else 0 for i in range(len(torsion))] for k, t in enumerate(torsion)]
        _, factors = smith_invariants(rels) if rels else (0, [])
        torsion = tuple(f for f in factors if f > 1)
        order = INFINITE
        if b1 == 0:
            order = 1
            for f in torsion:
                order *= f
        return H1Invariants(b1, torsion, order)
    rels, index = h1_presentation(tree)
    return invariants_from_matrix(rels, len(index))


def h1_order(tree):
    """|H_1| as an int, 0 when b1 > 0."""
    inv = h1_invariants(tree)
    return 0 if inv.b1 else inv.order


class HomologyError(ValueError):
    pass


def _rational_kernel(rows, ncols):
    """Basis of the rational null space {x : rows x = 0}."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def rational_longitude(tree):
    """
    The slope on the single open boundary that is torsion in H_1.  Every
    rational functional on H_1 restricts to (d, h); the longitude spans the
    common kernel of those restrictions.
    """
    opens = tree.open_boundaries
    if len(opens) != 1:
        raise HomologyError(f"need exactly one open boundary, found {len(opens)}")
    name, idx = opens[0]
    rels, index = h1_presentation(tree)
    n = len(index)
    # homomorphisms H_1 -> Q are vectors phi with rels . phi = 0
    if rels:
        phis = _rational_kernel(rels, n)
    else:
        phis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    d, h = index[f"d:{name}:{idx}"], index[f"h:{name}"]
    restr = [(phi[d], phi[h]) for phi in phis]
    restr = [v for v in restr if v != (0, 0)]
    if not restr:
        raise HomologyError("boundary dies rationally; not a rational homology solid torus")
    # all restrictions must be proportional for a 1-dimensional kernel
    u, w = restr[0]
    for x, y in restr[1:]:
        if u * y - w * x != 0:
            raise HomologyError("boundary injects rationally; not a rational homology solid torus")
    # kernel of (p, q) -> u p + w q
    p, q = w, -u
    den = 1
    for x in (p, q):
        den = den * x.denominator // gcd(den, x.denominator)
    p, q = int(p * den), int(q * den)
    return normalize_slope(p, q)
