"""``algfib`` command line.

Exit codes: 0 success, 1 validation defects, 2 residue at the stage budget
(outputs are still written), 3 usage error, 4 cell cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import io as aio
from .algebraic import AlgebraicComplex, algebraic_defects, check_alg_morphism
from .colimits import general_colimit
from .errors import AlgfibError, BudgetExhausted, CellLimitExceeded, SchemaError
from .free import canonical_retract, counit_eval, free, growth_csv, growth_stats, unit
from .groupoid import generating_maps, groupoidify, interval_nerve
from .horns import Horn, Mode, check_fibrancy, enumerate_horns, find_fillers, horns_brute_force
from .solid import Member, SolidFamily, alg_colimit, identify_fillers, pushout_along_free
from .sset import (
    TruncatedSimplicialSet,
    boundary_complex,
    horn_complex,
    nerve,
    retruncate,
    standard_simplex,
    validate_sset,
)

EXIT_OK, EXIT_DEFECT, EXIT_RESIDUE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Outcome:
    payload: object
    code: int = EXIT_OK
    extra: dict = field(default_factory=dict)  # path -> text

    def text(self) -> str:
        if isinstance(self.payload, str):
            return self.payload
        return aio.to_text(self.payload)


# ---------------------------------------------------------------------------
# helpers


def _load(args, want=None):
    if not args.input:
        raise UsageError("--in is required")
    value = aio.parse_presentation(args.input)
    if want is not None and not isinstance(value, want):
        names = want.__name__ if isinstance(want, type) else "/".join(w.__name__ for w in want)
        raise UsageError(f"--in must hold a {names}, got {type(value).__name__}")
    return value


def _complex(value) -> TruncatedSimplicialSet:
    return value.underlying if isinstance(value, AlgebraicComplex) else value


def _mode(args) -> Mode:
    return Mode.parse(args.mode)


def _staged_payload(S, *, with_stages: bool = True) -> dict:
    residue = S.residue
    uncovered = S.uncovered
    out = aio.dump_alg(
        S.result,
        residue=residue,
        uncovered=uncovered if uncovered else None,
        stage_of=S.stage_of if with_stages else None,
    )
    out["budget"] = {"dim": S.budget[0], "stages": S.budget[1]}
    return out


def _staged_code(S) -> int:
    return EXIT_RESIDUE if (S.residue or S.uncovered) else EXIT_OK


def _horn_arg(text: str) -> Horn:
    try:
        return Horn.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"--horn must be JSON {{n, k, faces}}: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> Outcome:
    D = args.dim if args.dim is not None else 2
    shape = args.shape
    if args.category:
        C = aio.parse_presentation(args.category)
        X = nerve(C, D)
    elif shape == "simplex":
        X = standard_simplex(args.n, D)
    elif shape == "boundary":
        X = boundary_complex(args.n, D)[0]
    elif shape == "horn":
        X = horn_complex(args.n, args.k, D)[0]
    elif shape == "point":
        X = standard_simplex(0, D)
    elif shape == "interval":
        X = interval_nerve(D)[0]
    elif shape and shape.startswith("builtin:"):
        X = _complex(aio.parse_presentation(shape))
        if args.dim is not None:
            X = retruncate(X, D)
    else:
        raise UsageError("build needs --shape or --category")
    return Outcome(aio.dump_sset(X))


def cmd_horns(args) -> Outcome:
    X = _complex(_load(args))
    mode = _mode(args)
    dims = args.dims
    horns = horns_brute_force(X, mode, dims) if args.oracle else enumerate_horns(X, mode, dims)
    counts: dict = {}
    for h in horns:
        key = f"{h.n},{h.k}"
        counts[key] = counts.get(key, 0) + 1
    out: dict = {"mode": mode.value, "counts": counts, "total": len(horns)}
    if args.list:
        out["horns"] = [h.to_json() for h in horns]
    return Outcome(out)


def cmd_fillers(args) -> Outcome:
    X = _complex(_load(args))
    if not args.horn:
        raise UsageError("--horn is required")
    h = _horn_arg(args.horn)
    fs = find_fillers(X, h)
    return Outcome({"horn": h.to_json(), "fillers": fs}, EXIT_OK if fs else EXIT_DEFECT)


def cmd_check(args) -> Outcome:
    value = _load(args)
    X = _complex(value)
    mode = _mode(args) if args.mode else (value.mode if isinstance(value, AlgebraicComplex) else Mode.KAN)
    violations = validate_sset(X)
    unfilled = check_fibrancy(X, mode, args.dims)
    out: dict = {
        "mode": mode.value,
        "simplicial_violations": [v.to_json() for v in violations],
        "unfilled_horns": [h.to_json() for h in unfilled],
    }
    bad = bool(violations or unfilled)
    if isinstance(value, AlgebraicComplex):
        defects = algebraic_defects(X, value.mode, value.table)
        out["filler_defects"] = [d.to_json() for d in defects]
        bad = bad or bool(defects)
    return Outcome(out, EXIT_DEFECT if bad else EXIT_OK)


def _free_outcome(args, X: TruncatedSimplicialSet) -> Outcome:
    mode = _mode(args)
    D = args.dim if args.dim is not None else X.truncation
    M = args.stages
    S = free(X, mode, D, M)
    extra = {}
    if args.stats:
        extra[args.stats] = growth_csv(growth_stats(S))
    return Outcome(_staged_payload(S), _staged_code(S), extra)


def cmd_free(args) -> Outcome:
    return _free_outcome(args, _complex(_load(args)))


def cmd_counit_check(args) -> Outcome:
    Z = _load(args, AlgebraicComplex)
    defects = algebraic_defects(Z.underlying, Z.mode, Z.table)
    if defects:
        return Outcome({"filler_defects": [d.to_json() for d in defects]}, EXIT_DEFECT)
    rows = []
    ok = True
    for M in range(args.stages + 1):
        F = free(Z.underlying, Z.mode, Z.truncation, M)
        eps = counit_eval(Z, F)
        eta = unit(Z.underlying, F)
        triangle = all(eps.map.mapping[eta.mapping[t]] == t for t in Z.underlying.tokens())
        preserved = not check_alg_morphism(eps.map, F.result, Z)
        ok = ok and triangle and preserved
        rows.append({"stages": M, "triangle_identity": triangle, "preserves_fillers": preserved,
                     "free_nondegenerate": list(F.underlying.nondegenerate_counts())})
    return Outcome({"mode": Z.mode.value, "checks": rows}, EXIT_OK if ok else EXIT_DEFECT)


def cmd_retract(args) -> Outcome:
    if args.n is None or args.k is None:
        raise UsageError("retract needs --n and --k")
    mode = _mode(args)
    D = args.dim if args.dim is not None else args.n
    R = canonical_retract(args.n, args.k, mode, D, args.stages)
    out = {
        "n": args.n, "k": args.k, "mode": mode.value, "dim": D, "stages": args.stages,
        "retraction_holds": R.holds,
        "r_preserves_fillers": not check_alg_morphism(R.r.map, R.r.source, R.r.target),
        "r": dict(sorted(R.r.map.mapping.items())),
    }
    return Outcome(out, EXIT_OK if R.holds else EXIT_DEFECT)


def _family_from_diagram(loaded, target: str) -> SolidFamily:
    spec = loaded.spec
    if target not in spec.nodes:
        raise UsageError(f"--target {target!r} is not a node of the diagram")
    members = []
    for e in spec.edges:
        if e.target == target:
            if e.source not in loaded.algebras:
                raise UsageError(f"member {e.source!r} must be an algsset/v1 node")
            members.append(Member(loaded.algebras[e.source], e.map, e.name))
    modes = {m.algebra.mode for m in members}
    if len(modes) != 1:
        raise UsageError("family members must exist and share one mode")
    return SolidFamily(spec.nodes[target], tuple(members), modes.pop())


def cmd_identify(args) -> Outcome:
    loaded = _load(args, aio.LoadedDiagram)
    fam = _family_from_diagram(loaded, args.target)
    ident = identify_fillers(fam)
    A = AlgebraicComplex(ident.complex, fam.mode, ident.table)
    out = aio.dump_alg(A, partial=True)
    out["rounds"] = ident.rounds
    out["projection"] = dict(ident.projection.mapping)
    out["merged"] = [[list(v) for v in r] for r in ident.merged]
    return Outcome(out)


def cmd_pushout_free(args) -> Outcome:
    loaded = _load(args, aio.LoadedDiagram)
    spec = loaded.spec
    edges = {e.name: e for e in spec.edges}
    if "i" not in edges or "a" not in edges:
        raise UsageError("pushout-free diagram needs edges named 'i' (A -> B) and 'a' (A -> Y)")
    i, a = edges["i"], edges["a"]
    if a.target not in loaded.algebras:
        raise UsageError("the target of 'a' must be an algsset/v1 node")
    S = pushout_along_free(i.map, a.map, loaded.algebras[a.target], args.stages)
    return Outcome(_staged_payload(S), _staged_code(S))


def cmd_colimit(args) -> Outcome:
    loaded = _load(args, aio.LoadedDiagram)
    if not loaded.is_algebraic:
        col = general_colimit(loaded.spec)
        return Outcome(aio.dump_sset(col.apex))
    S = alg_colimit(loaded.algebras, loaded.spec.edges, args.stages)
    return Outcome(_staged_payload(S), _staged_code(S))


def cmd_groupoidify(args) -> Outcome:
    X = _load(args, AlgebraicComplex)
    if X.mode is not Mode.QUASI:
        raise UsageError("groupoidify needs a quasi-mode algsset")
    S = groupoidify(X, args.stages)
    return Outcome(_staged_payload(S), _staged_code(S))


def cmd_interval(args) -> Outcome:
    D = args.dim if args.dim is not None else 2
    return Outcome(aio.dump_sset(interval_nerve(D)[0]))


def cmd_generator(args) -> Outcome:
    mode = _mode(args)
    D = args.dim if args.dim is not None else (args.n or 1)
    G = generating_maps(mode, args.kind, args.n, args.k, D, args.stages)
    out = {
        "kind": args.kind, "mode": mode.value, "dim": D, "stages": args.stages,
        "source_nondegenerate": list(G.source.underlying.nondegenerate_counts()),
        "target_nondegenerate": list(G.target.underlying.nondegenerate_counts()),
        "levelwise_injective": G.map.map.is_injective(),
        "preserves_fillers": not check_alg_morphism(G.map.map, G.source.result, G.target.result),
        "map": dict(sorted(G.map.map.mapping.items())),
    }
    return Outcome(out)


def cmd_stats(args) -> Outcome:
    X = _complex(_load(args))
    mode = _mode(args)
    D = args.dim if args.dim is not None else X.truncation
    S = free(X, mode, D, args.stages)
    return Outcome(growth_csv(growth_stats(S)))


def cmd_export(args) -> Outcome:
    value = _load(args)
    if isinstance(value, AlgebraicComplex):
        return Outcome(aio.dump_alg(value))
    if isinstance(value, TruncatedSimplicialSet):
        return Outcome(aio.dump_sset(value))
    if isinstance(value, aio.LoadedDiagram):
        nodes = {n: loaded for n, loaded in value.spec.nodes.items()}
        nodes.update(value.algebras)
        return Outcome(aio.dump_diagram(nodes, value.spec.edges))
    return Outcome(aio.dump_category(value))


COMMANDS = {
    "build": (cmd_build, "build a standard complex or a nerve"),
    "horns": (cmd_horns, "count or list horns"),
    "fillers": (cmd_fillers, "list fillers of one horn"),
    "check": (cmd_check, "validate identities and report unfilled horns"),
    "free": (cmd_free, "staged free algebraic complex"),
    "counit-check": (cmd_counit_check, "check the counit and the triangle identity"),
    "retract": (cmd_retract, "canonical retraction of a free horn inclusion"),
    "identify": (cmd_identify, "identify filler images for a family"),
    "pushout-free": (cmd_pushout_free, "algebraic pushout along a free map"),
    "colimit": (cmd_colimit, "colimit of a diagram"),
    "groupoidify": (cmd_groupoidify, "glue outer-horn fillers onto a quasi complex"),
    "interval": (cmd_interval, "nerve of the walking isomorphism"),
    "generator": (cmd_generator, "free image of a generating inclusion"),
    "stats": (cmd_stats, "stage growth CSV"),
    "export": (cmd_export, "re-emit a presentation canonically"),
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="algfib", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--in", dest="input", help="presentation file, JSON text, or builtin:NAME")
        s.add_argument("--diagram", dest="input", help="alias of --in for diagram commands")
        s.add_argument("--out", help="output file (default: stdout)")
        s.add_argument("--mode", choices=["kan", "quasi"], default=None if name == "check" else "kan")
        s.add_argument("--dim", type=int, help="truncation D")
        s.add_argument("--stages", type=int, default=1, help="stage budget M")
        s.add_argument("--stats", help="write stage growth CSV here")
        s.add_argument("--oracle", action="store_true", help="use brute-force horn enumeration")
        s.add_argument("--seedless", action="store_true", help="run twice and require identical output")
        s.add_argument("--dims", type=int, nargs="+", help="restrict horn dimensions")
        s.add_argument("--list", action="store_true", help="list every horn")
        s.add_argument("--horn", help='horn as JSON, e.g. {"n":2,"k":1,"faces":["12","01"]}')
        s.add_argument("--n", type=int)
        s.add_argument("--k", type=int)
        s.add_argument("--kind", choices=["horn", "boundary", "interval"], default="horn")
        s.add_argument("--shape", help="simplex | boundary | horn | point | interval | builtin:NAME")
        s.add_argument("--category", help="category/v1 file for build")
        s.add_argument("--target", default="X", help="target node for identify")
    return p


def _run(args) -> Outcome:
    handler = COMMANDS[args.command][0]
    if args.stages is not None and args.stages < 0:
        raise UsageError("--stages must be >= 0")
    return handler(args)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required; see --help")
        outcome = _run(args)
        if args.seedless:
            again = _run(args)
            if again.text() != outcome.text() or again.extra != outcome.extra:
                print("algfib: output differs between identical runs", file=sys.stderr)
                return EXIT_DEFECT
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except CellLimitExceeded as exc:
        print(f"algfib: {exc}", file=sys.stderr)
        return EXIT_CAP
    except BudgetExhausted as exc:
        print(f"algfib: {exc}", file=sys.stderr)
        return EXIT_RESIDUE
    except (SchemaError, AlgfibError, ValueError, KeyError) as exc:
        report = getattr(exc, "report", None)
        print(f"algfib: {exc}", file=sys.stderr)
        if report:
            for item in report[:20]:
                detail = item.to_json() if hasattr(item, "to_json") else item
                print(f"  {json.dumps(detail, sort_keys=True)}", file=sys.stderr)
        return EXIT_DEFECT
    except OSError as exc:
        print(f"algfib: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = outcome.text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for path, body in outcome.extra.items():
        with open(path, "w") as fh:
            fh.write(body)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
