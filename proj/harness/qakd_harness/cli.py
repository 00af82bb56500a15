import argparse
import json
import subprocess
import sys

from .decode import prediction_record
from .manifest import load_manifest
from .schemas import KINDS, validate_jsonl

EXIT_USAGE, EXIT_UNAVAILABLE = 2, 3


def _read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def cmd_dump_predictions(args):
    m = load_manifest(args.manifest)
    tokens = {r["id"]: r["tokens"] for r in _read_jsonl(m.output("tokens")) if r["source"] == "student"}
    with open(m.output("predictions"), "w", encoding="utf-8") as out:
        for rec in _read_jsonl(m.output("student_logits")):
            pred = prediction_record(rec["id"], tokens.get(rec["id"]), rec["start"], rec["end"], args.top_k,
                                     args.max_answer_len)
            out.write(json.dumps(pred) + "\n")
    return 0


def _needs_models(name):
    def run(args):
        load_manifest(args.manifest)
        print(f"{name}: model backend not installed in this build", file=sys.stderr)
        return EXIT_UNAVAILABLE
    return run


def cmd_validate(args):
    n = validate_jsonl(args.kind, args.file)
    print(json.dumps({"kind": args.kind, "records": n}))
    if args.qakd:
        return subprocess.run([args.qakd, "validate", "--kind", args.kind, args.file]).returncode
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="qakd-harness", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dump-tokens", help="student/teacher tokens.jsonl and logits.jsonl per model")
    s.add_argument("manifest")
    s.set_defaults(func=_needs_models("dump-tokens"))

    s = sub.add_parser("dump-predictions", help="top-k spans from student logits",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    s.add_argument("manifest")
    s.add_argument("--top-k", type=int, default=5)
    s.add_argument("--max-answer-len", type=int, default=30)
    s.set_defaults(func=cmd_dump_predictions)

    s = sub.add_parser("dump-embeddings", help="one sentence embedding per question id")
    s.add_argument("manifest")
    s.set_defaults(func=_needs_models("dump-embeddings"))

    s = sub.add_parser("al-loop", help="fine-tune, dump predictions, call qakd select, repeat",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    s.add_argument("manifest")
    s.add_argument("--schedule", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7")
    s.add_argument("--strategy", default="lc")
    s.add_argument("--qakd", default="qakd", help="path to the qakd binary")
    s.set_defaults(func=_needs_models("al-loop"))

    s = sub.add_parser("validate", help="check a JSONL file against its schema")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("file")
    s.add_argument("--qakd", help="also run `qakd validate` with this binary")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
