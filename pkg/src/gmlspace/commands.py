"""
The operations behind the command line and the HTTP service.  Each takes
plain data (manifold text, numbers) and returns a JSON-ready dict, so both
front ends print the same bytes.
"""
from .certs import certificate_to_json, parse_certificate, verify_certificate
from .dsl import parse_manifold
from .engine import L_SPACE, UNKNOWN, Config, Engine, UnknownResult
from .homology import h1_invariants
from .loopmodel import parse_loop_word, predicted_loop_count, vertex_counts


class CommandError(ValueError):
    pass


def _config(max_denominator, jobs):
    if max_denominator < 1:
        raise CommandError("max denominator must be positive")
    return Config(max_denominator=max_denominator, jobs=max(1, jobs))


def decide(text, max_denominator=4096, jobs=1):
    tree = parse_manifold(text)
    if tree.open_boundaries:
        raise CommandError(f"decide needs a closed manifold; open boundaries {_names(tree.open_boundaries)}")
    v = Engine(_config(max_denominator, jobs)).decide(tree)
    # a graph manifold is an L-space iff it has no coorientable taut
    # foliation iff its fundamental group is not left-orderable
    known = None if v.kind == UNKNOWN else v.kind != L_SPACE
    out = {"verdict": v.kind, "taut_foliation": known, "left_orderable": known,
           "h1_order": v.h1_order}
    if v.kind == UNKNOWN:
        out["bound"] = v.bound
    if v.boundary_sensitive:
        # the verdict flips if the realisability inequalities are made weak
        out["boundary_sensitive"] = True
    return out


def interval(text, boundary, max_denominator=4096, jobs=1):
    tree = parse_manifold(text)
    opens = tree.open_boundaries
    want = _parse_boundary(boundary)
    if want not in opens:
        raise CommandError(f"{boundary} is not an open boundary; open: {_names(opens) or 'none'}")
    if len(opens) != 1:
        raise CommandError(f"interval needs exactly one open boundary, found {_names(opens)}")
    est = Engine(_config(max_denominator, jobs)).lspace_arc(tree)
    out = est.to_json()
    out["boundary"] = boundary
    return out


def certify(text, max_denominator=4096, jobs=1):
    tree = parse_manifold(text)
    if tree.open_boundaries:
        raise CommandError("certify needs a closed manifold")
    try:
        cert = Engine(_config(max_denominator, jobs)).certificate_search(tree)
    except UnknownResult as exc:
        return {"verdict": UNKNOWN, "certificate": None, "bound": exc.bound}
    if cert is None:
        return {"verdict": L_SPACE, "certificate": None}
    return certificate_to_json(cert)


def verify(text, cert_text, max_denominator=4096, jobs=1):
    tree = parse_manifold(text)
    cert = parse_certificate(cert_text, tree)
    return verify_certificate(tree, cert, _config(max_denominator, jobs)).to_json()


def h1(text):
    return h1_invariants(parse_manifold(text)).to_json()


def loop_count(presentation, alpha, beta, word=None):
    out = {"count": predicted_loop_count(presentation, alpha, beta)}
    if word:
        black, white = vertex_counts(parse_loop_word(word))
        out["vertices"] = {"black": black, "white": white}
    return out


def exit_code(command, payload):
    """0 for a definite answer, 2 when undecided, 1 for a rejected certificate."""
    if command in ("decide", "certify") and payload.get("verdict") == UNKNOWN:
        return 2
    if command == "verify" and not payload.get("accepted"):
        return 1
    return 0


def _parse_boundary(text):
    name, dot, idx = text.rpartition(".")
    if not dot or not name or not idx.isdigit():
        raise CommandError(f"boundary must look like NAME.INDEX, got {text!r}")
    return name, int(idx)


def _names(bs):
    return ", ".join(f"{n}.{i}" for n, i in bs)
