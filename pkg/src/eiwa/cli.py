"""Command-line front end: translate, parse, regress, serve."""

from __future__ import annotations

import argparse
import json
import sys

from . import chart, regression
from .errors import LoadError, UnknownTokenError
from .preparse import split_sentences, tokenize
from .resources import load_bundle
from .service import make_server
from .transfer import translate


def _add_resource_flags(sub):
    sub.add_argument("--grammar", required=True)
    sub.add_argument("--lexicon", required=True)
    sub.add_argument("--taxonomy", required=True)
    sub.add_argument("--xforms", required=True)
    sub.add_argument("--config", required=True)


def _load(args):
    return load_bundle(args.grammar, args.lexicon, args.taxonomy, args.xforms, args.config)


def _read_text(args):
    if args.text is not None:
        return args.text
    with open(args.input, encoding="utf-8") as handle:
        return handle.read()


def _beam_flag(value):
    if value == "inf":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"beam must be an integer or 'inf', got {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("beam must be >= 1")
    return n


def _resolve_beam(value):
    if value is None:
        return "config"
    return None if value == "inf" else value


def _dump(obj):
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def cmd_translate(args):
    bundle = _load(args)
    results = translate(_read_text(args), bundle, beam=_resolve_beam(args.beam), kbest=args.kbest)
    for result in results:
        print(_dump(result.to_json()))
    return 0


def cmd_parse(args):
    bundle = _load(args)
    for sentence in split_sentences(_read_text(args)):
        tokens = tokenize(sentence)
        try:
            forest = chart.parse_to_forest(tokens, bundle)
        except UnknownTokenError as err:
            print(_dump({"sentence": sentence, "error": str(err)}))
            continue
        print(
            _dump(
                {
                    "sentence": sentence,
                    "tokens": [t.norm for t in tokens],
                    "forest": chart.serialize_forest(forest),
                    "parse_count": str(chart.count_structures(forest)),
                    "interpretation_count": str(chart.count_parses(forest)),
                }
            )
        )
    return 0


def cmd_regress(args):
    bundle = _load(args)
    with open(args.corpus, encoding="utf-8") as handle:
        corpus = regression.load_corpus(handle.read())
    report = regression.run_suite(corpus, bundle)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(report.to_jsonl())
    summary = dict(report.summary)
    if args.baseline:
        with open(args.baseline, encoding="utf-8") as handle:
            baseline = regression.RunReport.from_jsonl(handle.read())
        diff = regression.diff_runs(baseline, report)
        print(_dump({"summary": summary, "diff": diff.to_json()}))
        return 1 if diff.regressions else 0
    print(_dump({"summary": summary}))
    return 0


def cmd_serve(args):
    bundle = _load(args)
    server = make_server(bundle, host=args.host, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="eiwa", description="Rule-based English-to-Japanese translation engine")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("translate", help="translate text, one JSON object per sentence")
    _add_resource_flags(p)
    p.add_argument("--beam", type=_beam_flag, default=None, help="per-node beam width, or 'inf'")
    p.add_argument("--kbest", type=int, default=None)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--input", help="read text from a file")
    p.set_defaults(func=cmd_translate)

    p = subs.add_parser("parse", help="emit forest debug form and ambiguity counts")
    _add_resource_flags(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--input")
    p.set_defaults(func=cmd_parse)

    p = subs.add_parser("regress", help="run a golden corpus; nonzero exit on regressions")
    _add_resource_flags(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="write the JSON-lines report here")
    p.add_argument("--baseline", help="prior report to diff against")
    p.set_defaults(func=cmd_regress)

    p = subs.add_parser("serve", help="start the HTTP service")
    _add_resource_flags(p)
    p.add_argument("--port", type=int, default=8085)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LoadError as err:
        print(f"load error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
