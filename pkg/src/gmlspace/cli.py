"""
Command line.  Runs in-process by default; with --server URL the same
request goes to a running gmlspace service instead.

Exit codes: 0 definite answer, 2 undecided within the bound, 1 errors and
rejected certificates.
"""
import argparse
import json
import re
import sys

from . import commands
from .certs import CertificateFormatError
from .dsl import DslError
from .loopmodel import LoopWordError

USER_ERRORS = (DslError, CertificateFormatError, commands.CommandError, LoopWordError, OSError)


def _ints(text):
    return [int(x) for x in re.split(r"[\s,]+", text.strip()) if x]


def _matrix(text):
    return [_ints(row) for row in text.split(";") if row.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-denominator", type=int, default=4096,
                        help="largest slope denominator probed before answering UNKNOWN")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for independent rechecks")
    common.add_argument("--output", help="write the JSON here instead of standard output")
    common.add_argument("--server", help="base URL of a gmlspace service to forward to")

    p = argparse.ArgumentParser(prog="gmlspace", description="L-space decisions for graph manifolds")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("decide", parents=[common], help="is the closed manifold an L-space")
    s.add_argument("file")
    s = sub.add_parser("interval", parents=[common], help="non-L-space slopes on one open boundary")
    s.add_argument("file")
    s.add_argument("--boundary", required=True, help="NAME.INDEX")
    s = sub.add_parser("certify", parents=[common], help="NLS certificate for a non-L-space")
    s.add_argument("file")
    s = sub.add_parser("verify", parents=[common], help="check a certificate")
    s.add_argument("file")
    s.add_argument("--cert", required=True)
    s = sub.add_parser("h1", parents=[common], help="first homology")
    s.add_argument("file")
    s = sub.add_parser("loop-count", parents=[common], help="loops predicted by H_1/<alpha, beta>")
    s.add_argument("file", nargs="?", help="JSON with presentation, alpha, beta and optional word")
    s.add_argument("--relations", default="", help='relation rows, e.g. "0 2; 1 1"')
    s.add_argument("--alpha")
    s.add_argument("--beta")
    s.add_argument("--word", help='loop word such as "c2 d1 e"')
    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    return p


def _read(path):
    with open(path) as fh:
        return fh.read()


def _request(args):
    """(route, json body) for the chosen command."""
    cmd = args.command
    if cmd == "loop-count":
        if args.file:
            data = json.loads(_read(args.file))
            body = {"presentation": data.get("presentation", []), "alpha": data["alpha"],
                    "beta": data["beta"], "word": data.get("word")}
        else:
            if args.alpha is None or args.beta is None:
                raise commands.CommandError("loop-count needs a FILE or --alpha and --beta")
            body = {"presentation": _matrix(args.relations), "alpha": _ints(args.alpha),
                    "beta": _ints(args.beta), "word": args.word}
        return cmd, body
    body = {"manifold": _read(args.file)}
    if cmd == "h1":
        return cmd, body
    body.update(max_denominator=args.max_denominator, jobs=args.jobs)
    if cmd == "interval":
        body["boundary"] = args.boundary
    if cmd == "verify":
        body["certificate"] = _read(args.cert)
    return cmd, body


def _local(cmd, body):
    if cmd == "loop-count":
        return commands.loop_count(body["presentation"], body["alpha"], body["beta"], body["word"])
    if cmd == "h1":
        return commands.h1(body["manifold"])
    extra = (body["max_denominator"], body["jobs"])
    if cmd == "decide":
        return commands.decide(body["manifold"], *extra)
    if cmd == "interval":
        return commands.interval(body["manifold"], body["boundary"], *extra)
    if cmd == "certify":
        return commands.certify(body["manifold"], *extra)
    return commands.verify(body["manifold"], body["certificate"], *extra)


class RemoteError(Exception):
    pass


def _remote(server, cmd, body):
    import httpx
    try:
        r = httpx.post(f"{server.rstrip('/')}/{cmd}", json=body, timeout=None)
    except httpx.HTTPError as exc:
        raise RemoteError(f"cannot reach {server}: {exc}") from None
    if r.status_code != 200:
        try:
            detail = r.json().get("detail")
        except ValueError:
            detail = r.text
        if isinstance(detail, dict) and "message" in detail:
            where = ""
            if detail.get("line") is not None:
                where = f"line {detail['line']}"
                if detail.get("column") is not None:
                    where += f", column {detail['column']}"
                where += ": "
            detail = where + detail["message"]
        raise RemoteError(f"server answered {r.status_code}: {detail}")
    return r.json()


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn
        uvicorn.run("gmlspace.service:app", host=args.host, port=args.port)
        return 0
    try:
        cmd, body = _request(args)
        if args.server:
            payload = _remote(args.server, cmd, body)
        else:
            payload = _local(cmd, body)
    except (RemoteError, ValueError, KeyError) + USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(payload, separators=(",", ":")) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return commands.exit_code(cmd, payload)


if __name__ == "__main__":
    sys.exit(main())
