"""
Text format for trees of Seifert pieces.

    # comment
    piece A sfs(-1; 1/2, 2/3) boundaries 1
    piece B sfs(0) boundaries 1
    glue A.1 B.1 [0,1;1,0]

The matrix [a,b;c,d] sends the basis (d, h) of the first boundary to
d = a d' + c h', h = b d' + d h' in the basis of the second, and must have
determinant -1.
"""
from fractions import Fraction
import re

from .seifert import SeifertPiece, SeifertError
from .tree import TreeError, validate_tree


class DslError(ValueError):
    def __init__(self, message, line=None, column=None, code="SYNTAX"):
        self.message = message
        self.line = line
        self.column = column
        self.code = code
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


_TOKENS = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[-+]?\d+)|(?P<punct>[();,/.\[\]]))")


def _tokenize(text, lineno):
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise DslError(f"unexpected character {text[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start + 1))
        pos = m.end()
    return out


class _Line:
    def __init__(self, tokens, lineno, width):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno
        self.width = width

    def _col(self):
        return self.tokens[self.i][2] if self.i < len(self.tokens) else self.width + 1

    def fail(self, what):
        got = self.tokens[self.i][1] if self.i < len(self.tokens) else "end of line"
        raise DslError(f"expected {what}, found {got!r}", self.lineno, self._col())

    def take(self, kind, value=None, what=None):
        if self.i < len(self.tokens):
            k, v, _ = self.tokens[self.i]
            if k == kind and (value is None or v == value):
                self.i += 1
                return v
        self.fail(what or (repr(value) if value else kind))

    def integer(self, what="an integer"):
        return int(self.take("int", what=what))

    def done(self):
        if self.i < len(self.tokens):
            self.fail("end of line")


def _boundary_ref(ln):
    name = ln.take("name", what="a piece name")
    ln.take("punct", ".", "'.'")
    return name, ln.integer("a boundary index")


def _piece(ln):
    name = ln.take("name", what="a piece name")
    col = ln._col()
    if ln.take("name", what="sfs(...)") != "sfs":
        raise DslError("expected sfs(...)", ln.lineno, col)
    ln.take("punct", "(", "'('")
    e0 = ln.integer("the integer e0")
    fibers = []
    if ln.i < len(ln.tokens) and ln.tokens[ln.i][1] == ";":
        ln.i += 1
        while True:
            col = ln._col()
            b = ln.integer("a fibre b/a")
            ln.take("punct", "/", "'/'")
            a = ln.integer("a fibre denominator")
            if a == 0:
                raise DslError("fibre with zero denominator", ln.lineno, col)
            fibers.append((b, a))
            if ln.i < len(ln.tokens) and ln.tokens[ln.i][1] == ",":
                ln.i += 1
                continue
            break
    ln.take("punct", ")", "')'")
    col = ln._col()
    if ln.take("name", what="'boundaries'") != "boundaries":
        raise DslError("expected 'boundaries'", ln.lineno, col)
    col = ln._col()
    nb = ln.integer("a boundary count")
    if nb < 0:
        raise DslError("boundary count must be nonnegative", ln.lineno, col)
    ln.done()
    return SeifertPiece(e0, tuple(Fraction(b, a) for b, a in fibers), nb, name)


def _glue(ln):
    a, ai = _boundary_ref(ln)
    b, bi = _boundary_ref(ln)
    ln.take("punct", "[", "'['")
    x = ln.integer()
    ln.take("punct", ",", "','")
    y = ln.integer()
    ln.take("punct", ";", "';'")
    z = ln.integer()
    ln.take("punct", ",", "','")
    w = ln.integer()
    ln.take("punct", "]", "']'")
    ln.done()
    return (a, ai, b, bi, ((x, y), (z, w)))


def parse_manifold(text):
    """Parse the text format into a validated GmTree."""
    pieces, edges = [], []
    piece_line, edge_line = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = _tokenize(line, lineno)
        ln = _Line(tokens, lineno, len(line.rstrip()))
        head = ln.take("name", what="'piece' or 'glue'")
        if head == "piece":
            p = _piece(ln)
            if p.name in piece_line:
                raise DslError(f"piece {p.name} declared twice (first on line {piece_line[p.name]})",
                               lineno, tokens[1][2], "DUPLICATE_NAME")
            piece_line[p.name] = lineno
            pieces.append(p)
        elif head == "glue":
            edges.append(_glue(ln))
            edge_line.append(lineno)
        else:
            raise DslError(f"unknown declaration {head!r}", lineno, tokens[0][2])
    try:
        return validate_tree(pieces, edges)
    except TreeError as exc:
        raise DslError(str(exc), _locate(exc.location, edges, edge_line, piece_line), None,
                       exc.code) from None
    except SeifertError as exc:
        raise DslError(str(exc), None, None, "SEIFERT") from None


def _locate(loc, edges, edge_line, piece_line):
    if isinstance(loc, int) and 0 <= loc < len(edge_line):
        return edge_line[loc]
    for k, (a, ai, b, bi, _) in enumerate(edges):
        if loc == f"{a}.{ai}-{b}.{bi}":
            return edge_line[k]
    return piece_line.get(loc)


def format_manifold(tree):
    """Print a tree in the text format; parse(format(t)) gives t back."""
    return tree.dsl()
