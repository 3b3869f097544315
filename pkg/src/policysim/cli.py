"""Command-line entry point: compare, eval, normalize, generate, bench."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import PolicyError
from .model import Request, UNKNOWN, classify_decision, show_term
from .xacml import parse_file, translate

IO_ERROR = 5


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def resolve_key(key: str, names) -> str | None:
    """Match a request key to a schema attribute: exact, local name, or key+'-id'."""
    k = key.strip().lower()
    for cand in (k, k.rsplit(":", 1)[-1], k + "-id", k.rsplit(":", 1)[-1] + "-id"):
        if cand in names:
            return cand
    return None


def cmd_compare(args) -> int:
    from .similarity import classify

    nodes = [parse_file(args.policy1), parse_file(args.policy2)]
    report = classify(*nodes, trace=args.trace, witness=args.witness)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
        return 0
    print(f"relation: {report.relation}")
    for part, rel in report.per_component.items():
        q = report.queries[part]
        print(f"  {part}: {rel}  (fwd={q.fwd}, bwd={q.bwd}, disjoint={q.disj})")
    print("atoms: " + ", ".join(report.vocabulary))
    for key, w in report.witnesses.items():
        if w is None:
            print(f"witness {key}: none")
        else:
            flag = "" if w.exact else " (approximate)"
            print(f"witness {key}: {json.dumps(w.request, ensure_ascii=False)}{flag}")
    for name, tr in report.traces.items():
        print(f"\ntrace [{name}]")
        print("\n".join(tr.lines()))
    return 0


def cmd_eval(args) -> int:
    from .semantics import eval_request

    node = parse_file(args.policy)
    tr = translate(node)
    data = json.loads(Path(args.request).read_text(encoding="utf-8"))
    raw = data.get("attributes", data) if isinstance(data, dict) else None
    if not isinstance(raw, dict):
        raise PolicyError("request file must hold a JSON object of attributes")
    values = {}
    for key, value in raw.items():
        name = resolve_key(key, tr.schema.names)
        if name is not None:
            values[name] = UNKNOWN if value is None else str(value)
    req = Request.of(tr.schema, values, strict=args.strict)
    decision = eval_request(tr.terms[0], req)
    print(classify_decision(decision))
    return 0


def cmd_normalize(args) -> int:
    from .atomizer import atomize
    from .rewrite import rewrite
    from .ring import algebra_to_ring, sempair_to_terms
    from .semantics import absolute_semantics, show_set
    from . import terms as t

    node = parse_file(args.policy)
    tr = translate(node)
    term = tr.terms[0]
    sem = absolute_semantics(term, tr.schema)
    pair = atomize(sem, sem, tr.schema)
    permit, deny = sempair_to_terms(pair)[0]
    print(f"sepl: {show_term(term)}")
    print(f"accept: {show_set(sem.accept)}")
    print(f"deny: {show_set(sem.deny)}")
    for label, e in (("permit", permit), ("deny", deny)):
        print(f"{label} term: {t.show(e)}")
        print(f"{label} normal form: {algebra_to_ring(e).show()}")
        if args.trace:
            print("\n".join(rewrite(e)[1].lines()))
    return 0


def cmd_generate(args) -> int:
    from .generate import GenConfig, generate

    try:
        cfg = GenConfig(rule_count=args.rules, attribute_count=args.attrs,
                        values_per_attribute=args.values, permit_ratio=args.permit_ratio,
                        combiner=args.combiner, seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for p in generate(cfg, args.out, count=args.count):
        print(p)
    return 0


def cmd_bench(args) -> int:
    from .bench import BenchConfig, run_bench, summarize, write_csv

    cfg = BenchConfig(rule_counts=_int_list(args.rules), param_counts=_int_list(args.params),
                      pair_counts=_int_list(args.pairs), repetitions=args.reps,
                      values_per_attribute=args.values, relation=args.relation,
                      seed=args.seed, workers=args.workers)
    records = run_bench(cfg)
    if args.out == "-":
        write_csv(records, sys.stdout)
    else:
        write_csv(records, args.out)
        for (rules, params, pairs), s in summarize(records).items():
            print(f"rules={rules} params={params} pairs={pairs}: "
                  f"mean {s['meanTotalMillis']:.2f} ms, total {s['sumTotalMillis']:.1f} ms")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="policysim", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="classify the relation between two policies")
    p.add_argument("policy1")
    p.add_argument("policy2")
    p.add_argument("--trace", action="store_true", help="print rewrite derivations")
    p.add_argument("--witness", action="store_true", help="search for distinguishing requests")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("eval", help="evaluate a policy against one request")
    p.add_argument("policy")
    p.add_argument("--request", required=True, help='JSON file {"attributes": {...}}')
    p.add_argument("--strict", action="store_true", help="reject unbound attributes")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("normalize", help="show a policy's SePL term and ring normal forms")
    p.add_argument("policy")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("generate", help="write random policies")
    p.add_argument("--rules", type=int, required=True)
    p.add_argument("--attrs", type=int, default=3)
    p.add_argument("--values", type=int, default=3)
    p.add_argument("--permit-ratio", type=float, default=0.5)
    p.add_argument("--combiner", default="first-applicable")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="time comparisons of random policy pairs")
    p.add_argument("--rules", default="4,8,12,16,20")
    p.add_argument("--params", default="3")
    p.add_argument("--pairs", default="1")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--values", type=int, default=3)
    p.add_argument("--relation", default=None,
                   choices=("Converge", "Extend", "Restrict", "Shuffle", "Diverge"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PolicyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
