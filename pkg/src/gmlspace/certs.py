"""
Checking and storing NLS certificates.

Verification rebuilds every N-filled piece from the slopes alone, for two
different choices of dual slope, and decides each with a fresh engine that
cuts edges in the other order.  Nothing is shared with the run that
produced the certificate.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import json

from .engine import (NONL, Config, Engine, NLSCertificate, UNKNOWN, piece_assignment)
from .homology import h1_invariants
from .slopes import parse_slope
from .tree import n_fill, single

DUAL_CHOICES = (0, 1)


class CertificateFormatError(ValueError):
    pass


@dataclass
class CertificateReport:
    accepted: bool
    per_piece: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    def to_json(self):
        return {"accepted": self.accepted, "perPiece": self.per_piece,
                "mismatches": self.mismatches}


def verify_certificate(tree, cert, config=None):
    config = replace(config or Config(), heuristic="alternate")
    ids = sorted(e.id for e in tree.edges)
    if cert.b1_shortcut:
        b1 = h1_invariants(tree).b1
        if b1:
            return CertificateReport(True, [{"id": "*", "verdict": "NOT_QHS", "recheck": ["NOT_QHS"]}])
        return CertificateReport(False, [], [{"piece": "*", "reason": "b1 shortcut but b1 = 0"}])
    if sorted(cert.edges) != ids:
        raise CertificateFormatError(
            f"certificate edges {sorted(cert.edges)} do not match tree edges {ids}")
    tasks = []
    for p in tree.pieces:
        assignment = piece_assignment(tree, p.name, cert.edges)
        base = single(p)
        for k in DUAL_CHOICES:
            tasks.append(n_fill(base, assignment, k) if assignment else base)

    def recheck(t):
        # one engine per task: engines keep caches and a work budget
        return Engine(config).decide(t).kind

    if config.jobs > 1:
        with ThreadPoolExecutor(config.jobs) as pool:
            kinds = list(pool.map(recheck, tasks))
    else:
        kinds = [recheck(t) for t in tasks]

    report = CertificateReport(True)
    nk = len(DUAL_CHOICES)
    for i, p in enumerate(tree.pieces):
        checks = kinds[i * nk:(i + 1) * nk]
        for k, kind in zip(DUAL_CHOICES, checks):
            if kind not in NONL:
                reason = "undecided" if kind == UNKNOWN else "L-space"
                report.mismatches.append({"piece": p.name, "dualChoice": k, "verdict": kind,
                                          "reason": reason})
        claimed = cert.pieces.get(p.name)
        if claimed is not None and claimed not in NONL:
            report.mismatches.append({"piece": p.name, "reason": f"claimed verdict {claimed}"})
        report.per_piece.append({"id": p.name, "verdict": claimed, "recheck": checks})
    report.accepted = not report.mismatches
    return report


def certificate_to_json(cert):
    return {
        "edges": [{"id": k, "slope": str(cert.edges[k])} for k in sorted(cert.edges)],
        "pieces": [{"id": k, "verdict": cert.pieces[k]} for k in sorted(cert.pieces)],
        "b1_shortcut": bool(cert.b1_shortcut),
    }


def serialize_certificate(cert):
    return json.dumps(certificate_to_json(cert), indent=2)


def certificate_from_json(obj, tree=None):
    try:
        edges = {}
        for item in obj["edges"]:
            if item["id"] in edges:
                raise CertificateFormatError(f"edge {item['id']} listed twice")
            edges[item["id"]] = parse_slope(item["slope"])
        pieces = {item["id"]: item["verdict"] for item in obj["pieces"]}
        b1 = obj["b1_shortcut"]
    except (KeyError, TypeError) as exc:
        raise CertificateFormatError(f"malformed certificate: missing {exc}") from None
    except ValueError as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from None
    if not isinstance(b1, bool):
        raise CertificateFormatError("b1_shortcut must be true or false")
    if tree is not None:
        known = {e.id for e in tree.edges}
        unknown = sorted(set(edges) - known)
        if unknown:
            raise CertificateFormatError(f"unknown edge ids {unknown}")
    return NLSCertificate(edges, pieces, b1)


def parse_certificate(text, tree=None):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"certificate is not JSON: {exc}") from None
    return certificate_from_json(obj, tree)
