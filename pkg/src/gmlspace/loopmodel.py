"""
Puzzle-piece words for simple loops, and the count of loops predicted by
homology.

A simple loop is a cyclic word in the letters c_k (written c̄_k in the
pictures), d_k and e.  Each letter carries one black vertex; c_k and d_k
also carry k white vertices.  Edges between pieces are labelled by the
algebra elements rho_1, rho_2, rho_3, rho_12, rho_23, rho_123; those labels
shift spin^c structures and are kept only as metadata here.  Loops sit in
bijection with H_1(M) / <alpha, beta>.
"""
from dataclasses import dataclass
import re

from .homology import INFINITE, smith_invariants


class LoopWordError(ValueError):
    pass


CBAR, D, E = "c", "d", "e"

# which labels move the spin^c labelling, and by what
SHIFTS = {"rho1": "0", "rho2": "0", "rho12": "0", "rho23": "alpha", "rho3": "alpha+beta",
          "rho123": "alpha+beta"}


@dataclass(frozen=True)
class PuzzlePiece:
    letter: str
    k: int = 0

    def __post_init__(self):
        if self.letter not in (CBAR, D, E):
            raise LoopWordError(f"unknown letter {self.letter!r}")
        if self.letter == E and self.k:
            raise LoopWordError("e takes no index")
        if self.letter != E and self.k < 1:
            raise LoopWordError(f"{self.letter}{self.k}: index must be at least 1")

    def __str__(self):
        return self.letter if self.letter == E else f"{self.letter}{self.k}"

    @property
    def white(self):
        return self.k


def _rotations(pieces):
    return [pieces[i:] + pieces[:i] for i in range(len(pieces))]


class LoopWord:
    """A cyclic word; rotations of the same word compare equal."""

    def __init__(self, pieces):
        pieces = tuple(pieces)
        if not pieces:
            raise LoopWordError("empty loop word")
        self.pieces = pieces
        self._normal = min(tuple((p.letter, p.k) for p in r) for r in _rotations(pieces))

    def __eq__(self, other):
        return isinstance(other, LoopWord) and self._normal == other._normal

    def __hash__(self):
        return hash(self._normal)

    def __len__(self):
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __str__(self):
        return " ".join(str(p) for p in self.pieces)

    def __repr__(self):
        return f"LoopWord({str(self)!r})"


_TOKEN = re.compile(r"^([cde])(-?\d+)?$")


def parse_loop_word(text):
    pieces = []
    for tok in text.split():
        m = _TOKEN.match(tok.lower())
        if not m:
            raise LoopWordError(f"bad token {tok!r}; expected c<k>, d<k> or e")
        letter, k = m.group(1), m.group(2)
        if letter == E:
            if k is not None:
                raise LoopWordError(f"bad token {tok!r}; e takes no index")
            pieces.append(PuzzlePiece(E))
        else:
            if k is None:
                raise LoopWordError(f"bad token {tok!r}; {letter} needs an index")
            pieces.append(PuzzlePiece(letter, int(k)))
    return LoopWord(pieces)


def vertex_counts(word):
    """(black, white) vertex counts."""
    return len(word), sum(p.white for p in word)


def predicted_loop_count(presentation, alpha, beta):
    """
    |H_1 / <alpha, beta>| where H_1 is presented by the rows of
    ``presentation`` over len(alpha) generators; INFINITE if the quotient
    is infinite.
    """
    n = len(alpha)
    if len(beta) != n:
        raise LoopWordError(f"alpha has {n} entries but beta has {len(beta)}")
    rows = [list(r) for r in presentation]
    for r in rows:
        if len(r) != n:
            raise LoopWordError(f"relation {r} has {len(r)} entries, expected {n}")
    rank, factors = smith_invariants(rows + [list(alpha), list(beta)])
    if rank < n:
        return INFINITE
    count = 1
    for f in factors:
        count *= f
    return count
