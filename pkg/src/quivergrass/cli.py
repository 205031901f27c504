"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 mathematically infeasible request,
4 internal error.
"""
import argparse
import hashlib
import json
import os
import sys
import time
from typing import List, Optional

from . import __version__
from .algebra import projective_radical_layers, truncated_module_basis, validate
from .degeneration import CancellationToken, unipotent_degenerate
from .equations import big_presentation, evaluate_membership, sigma_ideal
from .errors import QuiverGrassError, ValidationError
from .io import (
    dump_module,
    dump_skeleta,
    dump_submodule,
    parse_algebra,
    parse_curve,
    parse_point,
    parse_sequence,
    parse_skeleta,
    parse_submodule,
)
from .layering import dominates, validate_sequence
from .realize import realize_point, relations_check
from .skeleta import BIG, ProjectiveContext, critical_data, enumerate_skeleta

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4


class Infeasible(QuiverGrassError):
    pass


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _seed(args) -> int:
    env = os.environ.get("QUIVERGRASS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"QUIVERGRASS_SEED must be an integer, got {env!r}") from None
    return args.seed


def _emit(args, text: str, inputs: List[str], started: float) -> None:
    if not args.out:
        sys.stdout.write(text)
        return
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    manifest = {
        "command": args.command,
        "inputs": {p: _digest(p) for p in inputs},
        "seed": _seed(args),
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }
    with open(args.out + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def cmd_info(args) -> str:
    alg = parse_algebra(_read(args.algebra))
    rep = validate(alg)
    q = alg.quiver
    lines = [f"vertices {len(q.vertices)}; arrows {len(q.arrows)}; L = {alg.L}",
             f"relations {rep.relation_count} + {rep.appended_paths} paths of length {alg.L + 1} = {rep.effective_count} effective"]
    for v in q.vertices:
        tb = truncated_module_basis(alg, [v])
        layers = [sum(layer) for layer in tb.layer_dims()]
        while len(layers) > 1 and not layers[-1]:
            layers.pop()
        lines.append(f"dim Λe_{v} = {tb.dim}; layers {','.join(map(str, layers))}")
        by_target = [sum(1 for e in tb.elements if e.target == w) for w in q.vertices]
        lines.append(f"  dim e_j Λe_{v}: " + " ".join(f"{w}={d}" for w, d in zip(q.vertices, by_target)))
        seq = projective_radical_layers(alg, [v])
        lines.append(f"  radical layers {json.dumps(seq.to_list(), separators=(',', ':'))}")
    return "\n".join(lines) + "\n"


def cmd_skeleta(args) -> str:
    alg = parse_algebra(_read(args.algebra))
    seq = parse_sequence(args.sequence)
    check = validate_sequence(seq, alg)
    if not check:
        raise ValidationError(f"invalid sequence: {check.reason}")
    ctx = ProjectiveContext.for_sequence(alg, seq, args.setting)
    sks = enumerate_skeleta(ctx, seq, args.dedupe, parallel=args.parallel)
    if args.require_nonempty and not sks:
        raise Infeasible("no skeleton is compatible with the sequence")
    return dump_skeleta(ctx, sks, seq)


def _pick(args, alg):
    ctx, sks = parse_skeleta(_read(args.skeleton), alg)
    if not 1 <= args.index <= len(sks):
        raise ValidationError(f"skeleton index {args.index} out of range 1..{len(sks)}")
    return ctx, sks[args.index - 1]


def cmd_equations(args) -> str:
    alg = parse_algebra(_read(args.algebra))
    ctx, sk = _pick(args, alg)
    ideal = big_presentation(sk, ctx, parallel=args.parallel) if ctx.setting == BIG else sigma_ideal(sk, ctx, parallel=args.parallel)
    if args.format == "json":
        return json.dumps(ideal.to_json(), indent=2) + "\n"
    return ideal.to_text()


def cmd_check_point(args) -> str:
    alg = parse_algebra(_read(args.algebra))
    ctx, sk = _pick(args, alg)
    crit = critical_data(sk, ctx)
    point = parse_point(_read(args.point), crit)
    ideal = sigma_ideal(sk, ctx, critical=crit)
    member = evaluate_membership(ideal, point)
    m = realize_point(sk, crit, point)
    verdict = relations_check(m)
    lines = [f"membership {'true' if member else 'false'}",
             f"relations {'pass' if verdict else 'fail'}"]
    if not verdict:
        lines.append(f"witness relation {verdict.relation} at vertex {verdict.vertex} basis vector {verdict.basis_index}")
    return "\n".join(lines) + "\n"


def cmd_realize(args) -> str:
    alg = parse_algebra(_read(args.algebra))
    ctx, sk = _pick(args, alg)
    crit = critical_data(sk, ctx)
    point = parse_point(_read(args.point), crit)
    return dump_module(realize_point(sk, crit, point))


def cmd_degenerate(args) -> str:
    alg = parse_algebra(_read(args.algebra))
    sub = parse_submodule(_read(args.submodule), alg)
    ctx = sub.ctx
    seed = _seed(args)
    token = CancellationToken()
    out = []
    for step, path in enumerate(args.curve, start=1):
        curve = parse_curve(_read(path), ctx)
        rep = unipotent_degenerate(ctx, sub, curve, seed=seed, token=token)
        out.append(f"step {step}: {rep.layering.to_list()} -> {rep.limit_layering.to_list()} "
                   f"verdict {rep.verdict}; iso {rep.iso.kind}")
        out.append(dump_submodule(rep.limit).rstrip("\n"))
        if rep.verdict == "violates":
            raise QuiverGrassError("internal: limit layering does not dominate")
        sub = rep.limit
    return "\n".join(out) + "\n"


def cmd_dominance(args) -> str:
    a, b = parse_sequence(args.seq_a), parse_sequence(args.seq_b)
    ab, ba = dominates(a, b), dominates(b, a)
    if ab and ba:
        verdict = "equal"
    elif ab:
        verdict = "a-dominates-b"
    elif ba:
        verdict = "b-dominates-a"
    else:
        verdict = "incomparable"
    return f"{verdict}\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivergrass", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("algebra", help="algebra JSON file")
        sp.add_argument("--out", help="output file (a manifest is written beside it)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--parallel", type=int, default=1, help="worker threads")

    sp = sub.add_parser("info", help="dimensions and radical layers of the indecomposable projectives")
    common(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("skeleta", help="enumerate skeleta compatible with a semisimple sequence")
    common(sp)
    sp.add_argument("--sequence", required=True, help="e.g. [[2,0],[0,3]]")
    sp.add_argument("--setting", choices=["small", "big"], default="small")
    sp.add_argument("--dedupe", action="store_true", help="one skeleton per slot-permutation orbit")
    sp.add_argument("--require-nonempty", action="store_true")
    sp.set_defaults(func=cmd_skeleta)

    for name, func, help_text in (("equations", cmd_equations, "generators of the ideal of a skeleton"),
                                  ("check-point", cmd_check_point, "test a point against the ideal"),
                                  ("realize", cmd_realize, "module of a point, as matrices")):
        sp = sub.add_parser(name, help=help_text)
        common(sp)
        sp.add_argument("--skeleton", required=True, help="skeleton file")
        sp.add_argument("--index", type=int, default=1, help="which skeleton of the file (1-based)")
        if name == "equations":
            sp.add_argument("--format", choices=["text", "json"], default="text")
        else:
            sp.add_argument("--point", required=True, help="point JSON file")
        sp.set_defaults(func=func)

    sp = sub.add_parser("degenerate", help="limits of unipotent curves applied to a submodule")
    common(sp)
    sp.add_argument("--submodule", required=True)
    sp.add_argument("--curve", required=True, action="append", help="curve file; repeat for successive steps")
    sp.set_defaults(func=cmd_degenerate)

    sp = sub.add_parser("dominance", help="compare two semisimple sequences")
    common(sp, algebra=False)
    sp.add_argument("--seq-a", required=True)
    sp.add_argument("--seq-b", required=True)
    sp.set_defaults(func=cmd_dominance)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    inputs = [getattr(args, k) for k in ("algebra", "skeleton", "point", "submodule") if getattr(args, k, None)]
    inputs += list(getattr(args, "curve", None) or [])
    try:
        text = args.func(args)
        _emit(args, text, inputs, started)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - anything else is a bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
