"""Phase 7b: CLI entry point – algebra / word / rauzy subcommands."""

from __future__ import annotations

import argparse
import random
from typing import Callable

from cogrowth.config import DEFAULT_CONFIG, DEFAULT_LIMITS, Limits
from cogrowth.counting import avoidance_automaton, classify_growth, growth_values, transfer_matrix
from cogrowth.display import (
    bounds_as_dict,
    lemma_as_dict,
    render_bounds,
    render_error,
    render_json,
    render_lemma,
    render_lines,
    render_series,
    render_text,
    render_tsv,
)
from cogrowth.freealg import field_from_name, format_poly, is_member, parse_poly
from cogrowth.groebner import (
    Presentation,
    certify_finite_basis,
    check_confluence,
    cogrowth_algebra,
    complete,
    format_certificate,
    load_presentation,
    obstructions_of_algebra,
    reduce_in,
)
from cogrowth.langword import (
    check_period_bounds,
    colength,
    complexity,
    make_source,
    recurrence_window,
    word_obstructions,
)
from cogrowth.models import Alphabet, CompletionOutcome, ResourceLimitError, UsageError
from cogrowth.rauzy import (
    check_del_edge_lemma,
    entropy_regulator,
    er_profile,
    line_graph,
    random_strong_digraph,
    rauzy_graph,
    to_dot,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_NOT_CERTIFIED = 3


class _Parser(argparse.ArgumentParser):
    """Reports bad arguments as UsageError so they share exit code 1."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-len", type=int, default=None, help="Largest word length considered")
    common.add_argument("--format", choices=["tsv", "json", "dot", "text"], default=None,
                        help="Output format")
    common.add_argument("--limit-states", type=int, default=None,
                        help="Cap on oracle columns and lemma-check graph size")
    common.add_argument("--limit-basis", type=int, default=None, help="Cap on basis size")
    common.add_argument("--seed-cap", type=int, default=None,
                        help="Cap on the generated prefix length of a word source")
    common.add_argument("--config", default=None, help="Path to limits JSON")
    common.add_argument("--seed", type=int, default=None, help="Seed for random instances")

    parser = _Parser(prog="cogrowth",
                     description="Obstructions, cogrowth and Gröbner bases for algebras and words")
    sub = parser.add_subparsers(dest="command")

    # --- algebra ---
    p_alg = sub.add_parser("algebra", help="Finitely presented associative algebras")
    alg = p_alg.add_subparsers(dest="action")
    for name, text in [("obstructions", "Obstructions up to --max-len"),
                       ("cogrowth", "Cogrowth O_A(1..--max-len)"),
                       ("growth", "Growth V(0..--max-len)"),
                       ("nf", "Normal form of a polynomial"),
                       ("member", "Ideal membership of a polynomial"),
                       ("certify", "Finite Gröbner basis certificate")]:
        p = alg.add_parser(name, help=text, parents=[common])
        p.add_argument("--relations", required=True, help="Path to a relation file")
        if name == "growth":
            p.add_argument("--matrix", action="store_true",
                           help="Also print the live-state transfer matrix")
        if name in ("nf", "member"):
            p.add_argument("--poly", required=name == "member", help="Polynomial text")
        if name == "nf":
            p.add_argument("--echo", action="store_true",
                           help="Print the parsed relation file before the result")
        if name == "certify":
            p.add_argument("--N", dest="N", type=int, required=True, help="Segment start N")
            p.add_argument("--verify", action="store_true",
                           help="Also reduce every processed composition")

    # --- word ---
    p_word = sub.add_parser("word", help="Infinite words")
    word = p_word.add_subparsers(dest="action")
    for name, text in [("obstructions", "Minimal forbidden words"),
                       ("cogrowth", "Cogrowth O_W(1..--max-len)"),
                       ("complexity", "Factor counts p(1..--max-len)"),
                       ("recurrence", "Uniform recurrence window at level --t")]:
        p = word.add_parser(name, help=text, parents=[common])
        p.add_argument("--source", required=True, help="fib | periodic:<w> | morphic:... | prefix:...")
        p.add_argument("--alphabet", default=None, help="Letters, precedence ascending")
        if name == "recurrence":
            p.add_argument("--t", type=int, required=True, help="Factor length")
            p.add_argument("--search-limit", type=int, default=1000, help="Largest window tried")
    p = word.add_parser("colength", help="Colength of a period", parents=[common])
    p.add_argument("--period", required=True, help="The period u of u^inf")
    p.add_argument("--alphabet", default=None, help="Letters, precedence ascending")
    word.add_parser("bounds", help="Exhaustive colength bound check over binary periods",
                    parents=[common])

    # --- rauzy ---
    p_rz = sub.add_parser("rauzy", help="Rauzy graphs")
    rz = p_rz.add_subparsers(dest="action")
    for name, text in [("graph", "Rauzy graph R_n"),
                       ("er", "Entropy regulator of R_n"),
                       ("profile", "er(R_n) against 2^O(n) for n up to --max-len"),
                       ("lemma-check", "Edge-deletion check on line-graph iterates")]:
        p = rz.add_parser(name, help=text, parents=[common])
        p.add_argument("--source", required=name != "lemma-check", default=None,
                       help="Word source descriptor")
        if name != "profile":
            p.add_argument("--n", type=int, default=None, help="Factor length of the vertices")
        if name == "graph":
            p.add_argument("--line", type=int, default=0, help="Apply the line graph this many times")
        if name == "lemma-check":
            p.add_argument("--random", type=int, default=None,
                           help="Check this many random strongly connected digraphs")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None or getattr(args, "action", None) is None:
            parser.print_help()
            return EXIT_USAGE
        limits = _load_limits(args)
        handler = _COMMANDS[(args.command, args.action)]
        return handler(args, limits)
    except UsageError as e:
        render_error(str(e))
        return EXIT_USAGE
    except ResourceLimitError as e:
        render_error(_describe_limit(e))
        return EXIT_RESOURCE


def _describe_limit(e: ResourceLimitError) -> str:
    message = str(e)
    if isinstance(e.partial, CompletionOutcome):
        message += (f"; partial result: {len(e.partial.basis)} basis elements, "
                    f"exact up to word length {e.partial.obstructions_exact_upto}")
    elif isinstance(e.partial, set):
        message += f"; partial result: {len(e.partial)} reducible words"
    return message


def _load_limits(args: argparse.Namespace) -> Limits:
    overrides = dict(
        max_states=args.limit_states,
        max_basis=args.limit_basis,
        max_prefix_len=args.seed_cap,
        seed=args.seed,
    )
    if args.config is not None:
        return Limits.from_json(args.config, **overrides)
    if DEFAULT_CONFIG.exists():
        return Limits.from_json(DEFAULT_CONFIG, **overrides)
    return DEFAULT_LIMITS.replace(**overrides)


def _fmt(args: argparse.Namespace, default: str, allowed: tuple[str, ...]) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} not supported here (use {', '.join(allowed)})")
    return fmt


def _max_len(args: argparse.Namespace, default: int) -> int:
    n = args.max_len if args.max_len is not None else default
    if n < 1:
        raise UsageError("--max-len must be at least 1")
    return n


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def _presentation(args: argparse.Namespace, limits: Limits) -> Presentation:
    return load_presentation(args.relations, field_from_name(limits.coefficient_field))


def _cmd_algebra_obstructions(args: argparse.Namespace, limits: Limits) -> int:
    pres = _presentation(args, limits)
    n = _max_len(args, 6)
    words = [pres.alphabet.render(w) for w in obstructions_of_algebra(pres.relations, n, limits)]
    if _fmt(args, "text", ("text", "tsv", "json")) == "json":
        render_json({"max_len": n, "obstructions": words})
    else:
        render_lines(words)
    return EXIT_OK


def _cmd_algebra_cogrowth(args: argparse.Namespace, limits: Limits) -> int:
    pres = _presentation(args, limits)
    n = _max_len(args, 6)
    values = cogrowth_algebra(pres.relations, n, limits)
    if _fmt(args, "tsv", ("tsv", "json")) == "json":
        render_json({"max_len": n, "cogrowth": values})
    else:
        render_series(values)
    return EXIT_OK


def _cmd_algebra_growth(args: argparse.Namespace, limits: Limits) -> int:
    pres = _presentation(args, limits)
    n = _max_len(args, 6)
    obstructions = obstructions_of_algebra(pres.relations, n, limits)
    values = growth_values(obstructions, pres.alphabet, n)
    matrix = transfer_matrix(avoidance_automaton(obstructions, pres.alphabet)) if args.matrix else None
    if _fmt(args, "tsv", ("tsv", "json")) == "json":
        data = {"max_len": n, "growth": values, "class": classify_growth(values)}
        if matrix is not None:
            data["matrix"] = matrix.tolist()
        render_json(data)
        return EXIT_OK
    render_series(values, start=0)
    if matrix is not None:
        print("# transfer matrix")
        render_tsv(matrix.tolist())
    return EXIT_OK


def _cmd_algebra_nf(args: argparse.Namespace, limits: Limits) -> int:
    pres = _presentation(args, limits)
    if args.echo:
        render_text(pres.render())
    if args.poly is None:
        if not args.echo:
            raise UsageError("--poly is required unless --echo is given")
        return EXIT_OK
    p = parse_poly(args.poly, pres.alphabet, field_from_name(limits.coefficient_field),
                   source="--poly")
    bound = _max_len(args, 2 * max(p.degree, pres.max_degree, 1))
    nf, outcome = reduce_in(pres, p, bound, limits)
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json({"normal_form": format_poly(nf, pres.alphabet),
                     "status": outcome.status.value})
    else:
        print(format_poly(nf, pres.alphabet))
    return EXIT_OK


def _cmd_algebra_member(args: argparse.Namespace, limits: Limits) -> int:
    pres = _presentation(args, limits)
    p = parse_poly(args.poly, pres.alphabet, field_from_name(limits.coefficient_field),
                   source="--poly")
    bound = _max_len(args, 2 * max(p.degree, pres.max_degree, 1))
    outcome = complete(pres.relations, max(bound, pres.max_degree), limits)
    verdict = is_member(p, outcome.basis, outcome.saturated)
    text = "unknown" if verdict is None else str(verdict).lower()
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json({"member": text, "status": outcome.status.value})
    else:
        print(f"member={text}")
    return EXIT_OK


def _cmd_algebra_certify(args: argparse.Namespace, limits: Limits) -> int:
    pres = _presentation(args, limits)
    cert = certify_finite_basis(pres.relations, args.N, limits)
    residues = None
    if args.verify:
        residues = len(check_confluence(complete(pres.relations, 2 * args.N, limits)))
    if _fmt(args, "text", ("text", "json")) == "json":
        data = {
            "verdict": cert.verdict.value,
            "N": cert.N,
            "m": cert.m,
            "status": cert.status.value,
            "basis": [format_poly(g, pres.alphabet) for g in cert.basis],
            "obstruction_lengths": list(cert.obstruction_lengths),
        }
        if residues is not None:
            data["confluence_residues"] = residues
        render_json(data)
    else:
        render_text(format_certificate(cert, pres.alphabet))
        if residues is not None:
            print(f"confluence_residues={residues}")
    return EXIT_OK if cert.certified else EXIT_NOT_CERTIFIED


# ---------------------------------------------------------------------------
# word
# ---------------------------------------------------------------------------

def _alphabet(args: argparse.Namespace) -> Alphabet | None:
    return Alphabet.of(args.alphabet) if args.alphabet else None


def _cmd_word_obstructions(args: argparse.Namespace, limits: Limits) -> int:
    source = make_source(args.source, _alphabet(args))
    report = word_obstructions(source, _max_len(args, 10), limits)
    if _fmt(args, "text", ("text", "tsv", "json")) == "json":
        render_json({"source": source.name, "max_len": report.max_len,
                     "obstructions": list(report.obstructions),
                     "cogrowth": list(report.cogrowth)})
    else:
        render_lines(report.obstructions)
    return EXIT_OK


def _cmd_word_cogrowth(args: argparse.Namespace, limits: Limits) -> int:
    source = make_source(args.source, _alphabet(args))
    report = word_obstructions(source, _max_len(args, 10), limits)
    if _fmt(args, "tsv", ("tsv", "json")) == "json":
        render_json({"source": source.name, "cogrowth": list(report.cogrowth)})
    else:
        render_series(report.cogrowth)
    return EXIT_OK


def _cmd_word_complexity(args: argparse.Namespace, limits: Limits) -> int:
    source = make_source(args.source, _alphabet(args))
    values = complexity(source, _max_len(args, 10), limits)
    if _fmt(args, "tsv", ("tsv", "json")) == "json":
        render_json({"source": source.name, "complexity": values})
    else:
        render_series(values)
    return EXIT_OK


def _cmd_word_recurrence(args: argparse.Namespace, limits: Limits) -> int:
    source = make_source(args.source, _alphabet(args))
    window = recurrence_window(source, args.t, args.search_limit, limits)
    text = "unknown" if window is None else str(window)
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json({"source": source.name, "t": args.t, "window": window})
    else:
        print(text)
    return EXIT_OK


def _cmd_word_colength(args: argparse.Namespace, limits: Limits) -> int:
    result = colength(args.period, _alphabet(args), limits)
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json({"period": result.period, "minimal_period": result.minimal_period,
                     "colength": result.colength, "obstructions": list(result.obstructions)})
    else:
        print(f"colength={result.colength}")
        render_lines(result.obstructions)
    return EXIT_OK


def _cmd_word_bounds(args: argparse.Namespace, limits: Limits) -> int:
    report = check_period_bounds(_max_len(args, limits.exhaustive_cap), limits)
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json(bounds_as_dict(report))
    else:
        render_bounds(report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# rauzy
# ---------------------------------------------------------------------------

def _n(args: argparse.Namespace) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


def _cmd_rauzy_graph(args: argparse.Namespace, limits: Limits) -> int:
    H = rauzy_graph(make_source(args.source), _n(args), limits)
    for _ in range(args.line):
        H = line_graph(H)
        if len(H.edges) > limits.max_states:
            raise ResourceLimitError("max_states", limits.max_states)
    fmt = _fmt(args, "dot", ("dot", "text", "json"))
    if fmt == "dot":
        render_text(to_dot(H, f"R{args.n}"))
    elif fmt == "json":
        render_json({"vertices": list(H.vertices),
                     "edges": [[e.tail, e.head, e.label] for e in H.edges]})
    else:
        render_lines(H.vertices)
        render_tsv((e.tail, e.head, e.key) for e in H.edges)
    return EXIT_OK


def _cmd_rauzy_er(args: argparse.Namespace, limits: Limits) -> int:
    er = entropy_regulator(rauzy_graph(make_source(args.source), _n(args), limits))
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json({"n": args.n, "er": er.value})
    else:
        print(er)
    return EXIT_OK


def _cmd_rauzy_profile(args: argparse.Namespace, limits: Limits) -> int:
    rows = er_profile(make_source(args.source), _max_len(args, 20), limits)
    if _fmt(args, "tsv", ("tsv", "json")) == "json":
        render_json([{"n": n, "er": er.value, "cogrowth": c, "bound": b}
                     for n, er, c, b in rows])
    else:
        render_tsv((n, er, c, b) for n, er, c, b in rows)
    return EXIT_OK


def _cmd_rauzy_lemma_check(args: argparse.Namespace, limits: Limits) -> int:
    graphs = []
    if args.source is not None:
        graphs.append((f"{args.source}:R{_n(args)}",
                       rauzy_graph(make_source(args.source), args.n, limits)))
    if args.random is not None:
        rng = random.Random(limits.seed)
        graphs += [(f"random{i}", random_strong_digraph(rng)) for i in range(args.random)]
    if not graphs:
        raise UsageError("give --source with --n, or --random K")
    reports = [(name, check_del_edge_lemma(H, limits.max_states)) for name, H in graphs]
    if _fmt(args, "text", ("text", "json")) == "json":
        render_json([lemma_as_dict(name, r) for name, r in reports])
    else:
        for name, r in reports:
            render_lemma(name, r)
    return EXIT_OK


_COMMANDS: dict[tuple[str, str], Callable[[argparse.Namespace, Limits], int]] = {
    ("algebra", "obstructions"): _cmd_algebra_obstructions,
    ("algebra", "cogrowth"): _cmd_algebra_cogrowth,
    ("algebra", "growth"): _cmd_algebra_growth,
    ("algebra", "nf"): _cmd_algebra_nf,
    ("algebra", "member"): _cmd_algebra_member,
    ("algebra", "certify"): _cmd_algebra_certify,
    ("word", "obstructions"): _cmd_word_obstructions,
    ("word", "cogrowth"): _cmd_word_cogrowth,
    ("word", "complexity"): _cmd_word_complexity,
    ("word", "recurrence"): _cmd_word_recurrence,
    ("word", "colength"): _cmd_word_colength,
    ("word", "bounds"): _cmd_word_bounds,
    ("rauzy", "graph"): _cmd_rauzy_graph,
    ("rauzy", "er"): _cmd_rauzy_er,
    ("rauzy", "profile"): _cmd_rauzy_profile,
    ("rauzy", "lemma-check"): _cmd_rauzy_lemma_check,
}
