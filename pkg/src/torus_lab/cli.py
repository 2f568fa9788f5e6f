"""Command-line front end.

Every subcommand writes to stdout and returns an exit code: 0 on success,
1 on a domain error (reported as ``error[<name>]: <message>`` on stderr)
and 2 when verification fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Any, Callable, Optional, Sequence, Union

from dotenv import load_dotenv

from common.context import FIELDS, OUTPUTS, Context
from common.errors import InvalidInputError, TorusLabError, UnsupportedError
from common.utils import format_vector, parse_vector
from torus_lab.algebra_core import default_truncation
from torus_lab.classification import (
    e_vanishes,
    g_formula,
    is_rigid,
    rigid_sequences,
    strongly_reduced_bands,
)
from torus_lab.component_graph import (
    build_gamma,
    build_gamma_prime,
    code_of,
    complete_cluster,
    export,
    seed_graph,
)
from torus_lab.farey_geometry import (
    curve_vector,
    decompose_z3,
    gvector_to_curve,
    unified_point,
)
from torus_lab.markov_numbers import (
    cc_function,
    collision_scan,
    m_dp,
    m_recurrence,
    m_subsets,
    triple_tree,
)
from torus_lab.rep_lab import (
    DecoratedRep,
    admissible_pairs,
    coextend,
    decorated,
    e_invariant,
    g_vector_copresentation,
)
from torus_lab.snake_graphs import (
    SignFunction,
    matchings,
    matchings_bruteforce,
    string_from_signs,
)
from torus_lab.strings_bands import (
    NegativeSimple,
    PsiCode,
    SeqForm,
    StringWord,
    format_code,
    format_psi,
    format_seq,
    parse_code,
    parse_psi,
    parse_seq,
    psi_decode,
    psi_encode,
    seq_to_word,
    to_seq,
)

logger = logging.getLogger(__name__)

Component = Union[SeqForm, NegativeSimple]

_NEGATIVE_RE = re.compile(r"^S([123])-$")


def _component(text: str) -> Component:
    """Read ``S1-``..``S3-`` or a code in either notation."""
    match = _NEGATIVE_RE.match(text.strip())
    if match:
        return NegativeSimple(int(match.group(1)))
    return to_seq(parse_code(text))


def _psi(text: str) -> PsiCode:
    component = _component(text)
    if isinstance(component, NegativeSimple):
        return code_of(component)
    return psi_encode(component)


def _write(ctx: Context, lines: Sequence[str], data: Any = None) -> None:
    if ctx.output == "json" and data is not None:
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in lines))


# --------------------------------------------------------------------------
# Subcommands


def cmd_enumerate(args: argparse.Namespace, ctx: Context) -> int:
    items: list[SeqForm] = []
    if args.kind in ("rigid", "all"):
        items += rigid_sequences(ctx.max_n, ctx.max_a)
    if args.kind in ("band", "all"):
        items += strongly_reduced_bands(ctx.max_n, ctx.max_a)
    rows = [(format_seq(s), format_psi(psi_encode(s))) for s in items]
    _write(ctx, [f"{seq}\t{psi}" for seq, psi in rows], [{"seq": s, "psi": p} for s, p in rows])
    return 0


def cmd_encode(args: argparse.Namespace, ctx: Context) -> int:
    _write(ctx, [format_psi(psi_encode(parse_seq(args.code)))])
    return 0


def cmd_decode(args: argparse.Namespace, ctx: Context) -> int:
    _write(ctx, [format_code(psi_decode(parse_psi(args.code)))])
    return 0


def _e_by_pairs(m_dec: DecoratedRep, n_dec: DecoratedRep, p: int) -> int:
    decoration = sum(vi * di for vi, di in zip(n_dec.v, m_dec.module.dims))
    if m_dec.module.is_zero() or n_dec.module.is_zero():
        return decoration
    if not (isinstance(m_dec.word, StringWord) and isinstance(n_dec.word, StringWord)):
        raise UnsupportedError("admissible pairs are counted between strings only")
    shifted = coextend(n_dec.word, p)
    if shifted is None:
        return decoration
    return decoration + len(admissible_pairs(shifted, m_dec.word))


def _shares_x1(left: Component, right: Component) -> bool:
    return (
        isinstance(left, SeqForm)
        and isinstance(right, SeqForm)
        and not (left.is_band or right.is_band or left.is_simple or right.is_simple)
        and left.x1 == right.x1
    )


def cmd_e_inv(args: argparse.Namespace, ctx: Context) -> int:
    left, right = _component(args.left), _component(args.right)
    m_dec, n_dec = decorated(left), decorated(right)
    if args.method == "comb":
        if _shares_x1(left, right):
            vanishes = e_vanishes(right, left)  # type: ignore[arg-type]
        else:
            # decorations, simples, bands and mixed x₁ are decided by Hom
            logger.info("e-inv: no combinatorial rule for this pair, using Hom")
            vanishes = e_invariant(m_dec, n_dec, ctx.p_override, ctx.field) == 0
        _write(ctx, ["0" if vanishes else ">0"])
        return 0
    if args.method == "hom":
        value = e_invariant(m_dec, n_dec, ctx.p_override, ctx.field)
    else:
        p = default_truncation(m_dec.module, n_dec.module, p=ctx.p_override)
        value = _e_by_pairs(m_dec, n_dec, p)
    _write(ctx, [str(value)])
    return 0


def _kind(component: Component) -> str:
    if isinstance(component, NegativeSimple):
        return "neg_simple"
    return "band" if component.is_band else "rigid_string"


_TAU_KIND = {"neg_simple": "injective_shift", "rigid_string": "tau_rigid", "band": "band"}


def cmd_gvec(args: argparse.Namespace, ctx: Context) -> int:
    component = _component(args.code)
    kind = _kind(component)
    if kind == "rigid_string" and not is_rigid(component):  # type: ignore[arg-type]
        raise InvalidInputError(f"{format_code(component)} is not rigid")
    if args.algebra == "tau-prime":
        if args.method == "copresentation":
            raise UnsupportedError("copresentations are computed over Λ only")
        g = g_formula(_TAU_KIND[kind], component)
        if g is None:
            raise UnsupportedError(f"no closed form for the τ-shift of {format_code(component)}")
        value = g.g
    elif args.method == "formula":
        g = g_formula(kind, component)
        assert g is not None
        value = g.g
    else:
        value = g_vector_copresentation(decorated(component), ctx.p_override)
    _write(ctx, [format_vector(value)], list(value))
    return 0


def cmd_graph(args: argparse.Namespace, ctx: Context) -> int:
    fmt = args.format or ("json" if ctx.output == "json" else "dot")
    if ctx.max_n == 0:
        g = seed_graph()
    elif args.algebra == "lambda-prime":
        g = build_gamma_prime(ctx.max_n, ctx.max_a, ctx.threads)
    else:
        g = build_gamma(ctx.max_n, ctx.max_a, ctx.threads)
    sys.stdout.write(export(g, fmt))
    return 0


def cmd_mutate(args: argparse.Namespace, ctx: Context) -> int:
    first, second = complete_cluster(_psi(args.z1), _psi(args.z2))
    labels = [format_psi(first), format_psi(second)]
    _write(ctx, labels, labels)
    return 0


def cmd_markov(args: argparse.Namespace, ctx: Context) -> int:
    component = _component(args.code)
    if args.method == "cc":
        value = int(cc_function(component).evaluate())
    elif isinstance(component, NegativeSimple) or component.is_band:
        raise UnsupportedError("m is defined for strings; use --method cc for negative simples")
    elif args.method == "recurrence":
        value = m_recurrence(component)
    else:
        word = seq_to_word(component)
        assert isinstance(word, StringWord)
        value = m_dp(word) if args.method == "dp" else m_subsets(word)
    _write(ctx, [str(value)], str(value))
    return 0


def cmd_markov_tree(args: argparse.Namespace, ctx: Context) -> int:
    tree = triple_tree(args.depth)
    nodes = sorted(tree.nodes, key=lambda path: (len(path), path))
    rows = [("".join(map(str, path)) or "-", tree.nodes[path]["triple"]) for path in nodes]
    _write(
        ctx,
        [f"{path}\t{triple}" for path, triple in rows],
        [{"path": path, "triple": list(triple.as_tuple())} for path, triple in rows],
    )
    return 0


def cmd_scan(args: argparse.Namespace, ctx: Context) -> int:
    found = collision_scan(ctx.max_n, ctx.max_a, ctx.threads)
    lines = [f"{c.value}\t{' '.join(map(str, c.sequences))}" for c in found] or ["no collisions"]
    _write(ctx, lines, [{"value": str(c.value), "sequences": c.sequences} for c in found])
    return 0


def cmd_farey(args: argparse.Namespace, ctx: Context) -> int:
    if args.action == "to-g":
        curve = curve_vector(args.family, (args.a, args.b), args.rotation)
        _write(ctx, [format_vector(curve.v)], list(curve.v))
    elif args.action == "from-g":
        curve = gvector_to_curve(parse_vector(args.vector))
        point = format_vector(unified_point(curve))
        _write(ctx, [f"{curve}\t{point}"], {"curve": str(curve), "point": point})
    else:
        parts = decompose_z3(parse_vector(args.vector), ctx.stern_brocot_cap)
        _write(
            ctx,
            [f"{k}\t{curve}\t{format_vector(curve.v)}" for curve, k in parts],
            [{"weight": k, "curve": str(curve), "v": list(curve.v)} for curve, k in parts],
        )
    return 0


def cmd_snake(args: argparse.Namespace, ctx: Context) -> int:
    sf = SignFunction.parse(args.signs)
    if args.method == "brute":
        value = matchings_bruteforce(sf)
    elif args.method == "string":
        value = m_dp(string_from_signs(sf))
    else:
        value = matchings(sf)
    _write(ctx, [str(value)], str(value))
    return 0


def cmd_verify(args: argparse.Namespace, ctx: Context) -> int:
    from torus_lab.graph import graph

    outcome = graph.invoke({"suite": args.suite}, context=ctx)
    results = outcome["results"]
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if r.flagged:
            status += "*"
        lines.append(f"{status}\t{r.name}\t{r.detail}")
    data = {
        "passed": outcome["passed"],
        "results": [
            {"name": r.name, "passed": r.passed, "detail": r.detail, "flagged": r.flagged}
            for r in results
        ],
    }
    _write(ctx, lines, data)
    return 0 if outcome["passed"] else 2


# --------------------------------------------------------------------------
# Argument parsing


def _options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-n", type=int, help="maximal sequence length")
    common.add_argument("--max-a", type=int, help="maximal entry a")
    common.add_argument("--p", dest="p_override", type=int, help="truncation level (default nil+2)")
    common.add_argument("--field", choices=FIELDS, help="field for rank computations")
    common.add_argument("--output", choices=OUTPUTS, help="output format")
    common.add_argument("--threads", type=int, help="worker count")
    common.add_argument("--cap", dest="stern_brocot_cap", type=int, help="Farey triangles searched by decompose")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Return the parser with one subcommand per operation."""
    common = _options()
    parser = argparse.ArgumentParser(
        prog="torus-lab",
        description="Jacobian algebras of the once-punctured torus: strings, bands, "
        "g-vectors, component graphs, Markov numbers, Farey points and snake graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace, Context], int], help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=handler)
        return p

    p = add("enumerate", cmd_enumerate, "list rigid strings and strongly reduced bands")
    p.add_argument("--kind", choices=("rigid", "band", "all"), default="all")

    p = add("encode", cmd_encode, "sequence form to Ψ-code")
    p.add_argument("code")
    p = add("decode", cmd_decode, "Ψ-code to sequence form")
    p.add_argument("code")

    p = add("e-inv", cmd_e_inv, "E-invariant E(LEFT, RIGHT)")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--method", choices=("comb", "hom", "pairs"), default="hom")

    p = add("gvec", cmd_gvec, "g-vector of a component")
    p.add_argument("code")
    p.add_argument("--method", choices=("formula", "copresentation"), default="formula")
    p.add_argument("--algebra", choices=("lambda", "tau-prime"), default="lambda")

    p = add("graph", cmd_graph, "export Γ or Γ′ up to the bounds")
    p.add_argument("--algebra", choices=("lambda", "lambda-prime"), default="lambda")
    p.add_argument("--format", choices=("dot", "json"))

    p = add("mutate", cmd_mutate, "the two completions of an edge")
    p.add_argument("z1")
    p.add_argument("z2")

    p = add("markov", cmd_markov, "Markov number of a rigid string")
    p.add_argument("code")
    p.add_argument("--method", choices=("dp", "subsets", "recurrence", "cc"), default="dp")

    p = add("markov-tree", cmd_markov_tree, "Markov triples by mutation from (1,1,1)")
    p.add_argument("--depth", type=int, default=3)

    add("scan", cmd_scan, "look for equal Markov numbers")

    p = add("farey", cmd_farey, "Farey points and curve vectors")
    actions = p.add_subparsers(dest="action", required=True)
    to_g = actions.add_parser("to-g", help="curve vector of a family at a Farey point")
    to_g.add_argument("family", choices=("ccw", "cw", "closed"))
    to_g.add_argument("a", type=int)
    to_g.add_argument("b", type=int)
    to_g.add_argument("--rotation", type=int, default=0)
    from_g = actions.add_parser("from-g", help="curve of a g-vector")
    from_g.add_argument("vector")
    decompose = actions.add_parser("decompose", help="compatible decomposition of an integer vector")
    decompose.add_argument("vector")

    p = add("snake", cmd_snake, "perfect matchings of the snake graph of SIGNS (e.g. +-+)")
    p.add_argument("signs")
    p.add_argument("--method", choices=("transfer", "brute", "string"), default="transfer")

    p = add("verify", cmd_verify, "run the verification suite")
    p.add_argument("--suite", choices=("fast", "all"), default="fast")
    return parser


def context_from_args(args: argparse.Namespace) -> Context:
    """Build a Context from the flags that were given; the rest comes from the environment."""
    names = ("max_n", "max_a", "p_override", "field", "output", "threads", "stern_brocot_cap")
    given = {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}
    if getattr(args, "verbose", False):
        given["log_level"] = "INFO"
    return Context(**given)


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        ctx = context_from_args(args)
        logging.basicConfig(level=ctx.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
        return args.handler(args, ctx)
    except TorusLabError as e:
        sys.stderr.write(f"error[{e.name}]: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
