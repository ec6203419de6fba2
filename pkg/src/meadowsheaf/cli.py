"""Command-line front end.

Exit codes: 0 when the check passes, 1 when it fails with a witness,
2 for unreadable input or a question that cannot be decided.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import serialize
from .bridge import condition1_check, condition2_check, functor_T, functorequi_equivalence, meadowify
from .corpus import corpus
from .dot import to_dot
from .errors import MeadowSheafError, NotEnumerable, Report, Undecided, Witness, jsonable
from .gallery import GALLERY, MEADOW_SUFFIX, gallery
from .meadow import Meadow, is_common, meadow_iso_search, verify_common, verify_premeadow
from .presheaf import (
    Presheaf,
    direct_image,
    find_sheaf_witness,
    is_sheaf,
    sheafify,
    verify_presheaf,
)
from .ring import parse_ring_token
from .topology import ContinuousMap

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# ----------------------------------------------------------------------
# Input handling


def _gallery_samples(source: str) -> dict:
    name = source.split(":", 2)[1] if source.startswith("gallery:") else None
    if name is None:
        return {}
    base = name[: -len(MEADOW_SUFFIX)] if name.endswith(MEADOW_SUFFIX) and name not in GALLERY else name
    entry = GALLERY.get(base)
    return dict(entry.samples) if entry else {}


def load_input(source: str):
    """Read a document from a file, ``-`` (stdin) or ``gallery:NAME[:PART]``."""
    if source.startswith("gallery:"):
        parts = source.split(":")
        try:
            return gallery(parts[1], parts[2] if len(parts) > 2 else None)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    try:
        text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return serialize.loads(text)


def as_presheaf(obj) -> Presheaf:
    if isinstance(obj, Meadow):
        return Presheaf(obj.space, obj.lattice.assign, obj.lattice.restrict)
    if isinstance(obj, Presheaf):
        return obj
    raise InputError(f"expected a presheaf, got {type(obj).__name__}")


def as_meadow(obj) -> Meadow:
    if isinstance(obj, Meadow):
        return obj
    if isinstance(obj, Presheaf):
        return functor_T(obj)
    raise InputError(f"expected a meadow or presheaf, got {type(obj).__name__}")


# ----------------------------------------------------------------------
# Output


def _emit_result(args, subject: str, result, extra: dict | None = None) -> int:
    """Print a pass/witness outcome and return the exit code."""
    passed = result is True or (isinstance(result, Report) and result.passed)
    if args.format == "json":
        if isinstance(result, Report):
            doc = result.to_json()
        else:
            doc = {"type": "report", "subject": subject, "passed": passed, "results": {subject: jsonable(result)}}
        if extra:
            doc["notes"] = {**doc.get("notes", {}), **jsonable(extra)}
        print(serialize.dumps(doc), end="")
    else:
        sampled = isinstance(result, Report) and result.mode == "sample"
        print(f"{subject}: {'pass' if passed else 'FAIL'}{' (sampled)' if sampled else ''}")
        if isinstance(result, Report) and (args.witness or not passed):
            for line in result.lines()[1:]:
                if args.witness or "FAIL" in line:
                    print(line)
            if args.witness:
                for k, v in result.notes.items():
                    print(f"  {k}: {'pass' if v is True else v}")
        elif not passed and args.witness:
            print(f"  witness: {result}")
        for k, v in (extra or {}).items():
            print(f"  {k}: {jsonable(v)}")
    return EXIT_PASS if passed else EXIT_FAIL


def _emit_document(args, obj) -> None:
    if args.format == "dot":
        print(to_dot(obj), end="")
    elif args.format == "text":
        print(repr(obj))
    else:
        print(serialize.dumps(obj), end="")


# ----------------------------------------------------------------------
# Verbs


def cmd_verify(args) -> int:
    obj = load_input(args.input[0])
    samples = _gallery_samples(args.input[0])
    what = args.what
    if what == "presheaf":
        return _emit_result(args, "presheaf", verify_presheaf(as_presheaf(obj)))
    if what == "sheaf":
        p = as_presheaf(obj)
        if p.enumerable:
            return _emit_result(args, "sheaf", is_sheaf(p))
        w = find_sheaf_witness(p, samples.get("glueing"))
        if w is None:
            raise Undecided("no violation among the sampled sections; infinite rings cannot be checked exhaustively")
        return _emit_result(args, "sheaf", w, {"mode": "witness search"})
    m = as_meadow(obj)
    if what == "premeadow":
        return _emit_result(args, "premeadow", verify_premeadow(m, None if m.enumerable else "probes"))
    if what == "common":
        if m.enumerable:
            return _emit_result(args, "common", verify_common(m) if args.witness else is_common(m))
        w = is_common(m, "probes")
        if w is True:
            raise Undecided("no element without a maximal J among the probes; infinite fibers cannot be checked exhaustively")
        return _emit_result(args, "common", w, {"mode": "witness search"})
    raise InputError(f"unknown --what {what}")


def cmd_build(args) -> int:
    obj = load_input(args.input[0])
    verb = args.verb
    if verb == "T":
        out = as_meadow(obj)
    elif verb == "sheafify":
        out = sheafify(as_presheaf(obj))[0]
    elif verb == "meadowify":
        out = meadowify(as_meadow(obj))
    elif verb == "direct-image":
        if not args.map:
            raise InputError("direct-image needs --map FILE with a continuous-map document")
        f = load_input(args.map)
        if not isinstance(f, ContinuousMap):
            raise InputError("--map must hold a continuous-map document")
        out = direct_image(f, as_presheaf(obj))
    else:
        raise InputError(f"unknown --verb {verb}")
    _emit_document(args, out)
    return EXIT_PASS


def cmd_dot(args) -> int:
    obj = load_input(args.input[0])
    if not isinstance(obj, (Presheaf, Meadow)):
        raise InputError(f"cannot draw a {type(obj).__name__}")
    print(to_dot(obj), end="")
    return EXIT_PASS


def cmd_gallery(args) -> int:
    if not args.name:
        for name, entry in GALLERY.items():
            print(f"{name}\t{entry.description}" if args.format == "text" else name)
        return EXIT_PASS
    try:
        obj = gallery(args.name, args.part)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    _emit_document(args, obj)
    return EXIT_PASS


def cmd_corpus(args) -> int:
    try:
        rings = [parse_ring_token(t) for t in args.rings.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    count = 0
    summary: dict = {}
    for p in corpus(args.max_points, rings):
        count += 1
        if args.format == "text":
            key = (len(p.space.points), repr(p.space))
            summary[key] = summary.get(key, 0) + 1
        else:
            print(json.dumps(p.to_json(), sort_keys=True, separators=(",", ":")))
    if args.format == "text":
        for (_, space), n in sorted(summary.items()):
            print(f"{n}\t{space}")
    print(f"{count} presheaves", file=sys.stderr)
    return EXIT_PASS


def cmd_equiv(args) -> int:
    m = as_meadow(load_input(args.input[0]))
    if m.enumerable:
        return _emit_result(args, "equivalence", functorequi_equivalence(m))
    # infinite fibers: conditions in witness mode, isomorphism left open
    samples = _gallery_samples(args.input[0]).get("condition2", "probes")
    c1 = condition1_check(m, "probes")
    c2 = condition2_check(m, samples)
    r = Report("conditions (1) and (2)", mode="sample")
    r.results = {"condition1": c1, "condition2": c2}
    if r.passed:
        raise Undecided("no violation among the samples; infinite fibers cannot be checked exhaustively")
    return _emit_result(args, "conditions", r)


def cmd_iso(args) -> int:
    if len(args.input) != 2:
        raise InputError("iso needs exactly two --input documents")
    m, n = (as_meadow(load_input(s)) for s in args.input)
    h = meadow_iso_search(m, n)
    if h is None:
        return _emit_result(args, "isomorphic", Witness("not-isomorphic", {}))
    return _emit_result(args, "isomorphic", True, {"index_map": h.index_map})


VERBS = {
    "verify": cmd_verify,
    "build": cmd_build,
    "dot": cmd_dot,
    "gallery": cmd_gallery,
    "corpus": cmd_corpus,
    "equiv": cmd_equiv,
    "iso": cmd_iso,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meadowsheaf",
        description="Build and check presheaves of rings on finite spaces and their meadows.",
    )
    sub = parser.add_subparsers(dest="verb", metavar="VERB", required=True)

    def common(p, inputs=True, fmt="text"):
        if inputs:
            p.add_argument(
                "--input", action="append", required=True,
                help="document file, '-' for stdin, or gallery:NAME[:PART]",
            )
        p.add_argument("--format", choices=["json", "dot", "text"], default=fmt)
        p.add_argument("--witness", action="store_true", help="print counterexamples in full")

    p = sub.add_parser("verify", help="run a verifier")
    common(p)
    p.add_argument("--what", choices=["presheaf", "sheaf", "premeadow", "common"], required=True)

    p = sub.add_parser("build", help="construct T, a sheafification, a meadowification or a direct image")
    common(p, fmt="json")
    p.add_argument("--verb", dest="build_verb", choices=["T", "sheafify", "meadowify", "direct-image"], required=True)
    p.add_argument("--map", help="continuous-map document for direct-image")

    p = sub.add_parser("dot", help="render the lattice diagram as DOT")
    common(p, fmt="dot")

    p = sub.add_parser("gallery", help="list or print the worked examples")
    p.add_argument("name", nargs="?")
    p.add_argument("--part", help="sub-document of an entry (e.g. F-prime)")
    p.add_argument("--format", choices=["json", "dot", "text"], default="json")

    p = sub.add_parser("corpus", help="stream every small presheaf as JSON lines")
    p.add_argument("--max-points", type=int, default=3)
    p.add_argument("--rings", default="zmod2,zmod3")
    p.add_argument("--format", choices=["json", "text"], default="json")

    p = sub.add_parser("equiv", help="compare conditions (1),(2) with meadowify(M) ~ M")
    common(p)

    p = sub.add_parser("iso", help="search for a meadow isomorphism")
    common(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "build":
        args.verb_name, args.verb = "build", args.build_verb
        handler = cmd_build
    else:
        handler = VERBS[args.verb]
    try:
        return handler(args)
    except (InputError, MeadowSheafError, NotEnumerable) as exc:
        kind = "undecided" if isinstance(exc, Undecided) else "error"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
