"""Command-line front end.

Reports go to stdout and are deterministic; progress messages go to stderr.
Exit codes: 0 success, 2 bad input, 3 inconclusive or incomplete result.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from . import linalg as la
from .discform import FqfMap, disc_form_of
from .lattice import Lattice, LatticeError, ParseError, build_lattice, discriminant_group

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCOMPLETE = 3


class InputError(ValueError):
    pass


def parse_vector(text: str, dim: int | None = None) -> list:
    """``(a,b,...)`` with rational entries."""
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise InputError(f"vector must be parenthesized: {text!r}")
    parts = [p.strip() for p in t[1:-1].split(",")]
    try:
        v = [la.normalize(Fraction(p)) for p in parts if p]
    except ValueError as exc:
        raise InputError(f"bad vector entry in {text!r}") from exc
    if dim is not None and len(v) != dim:
        raise InputError(f"vector {text!r} has length {len(v)}, lattice has rank {dim}")
    return v


def fmt_vec(v) -> str:
    return "(" + ",".join(str(a) for a in v) + ")"


def fmt_matrix(M) -> list[str]:
    return ["  " + " ".join(f"{str(la.normalize(a)):>4}" for a in row) for row in M]


def _lattice(expr: str) -> Lattice:
    try:
        return build_lattice(expr)
    except ParseError as exc:
        raise InputError(f"cannot parse lattice expression: {exc}") from exc


def load_disc_maps(path: str, L: Lattice) -> list[FqfMap]:
    """One map per line: the images of the generators of ``D(L)`` as
    exponent vectors, e.g. ``(1,0) (0,3)``."""
    q = disc_form_of(L)
    maps = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            imgs = [tuple(int(a) for a in parse_vector(tok)) for tok in line.split()]
            if len(imgs) != len(q.orders):
                raise InputError(f"{path}:{n}: expected {len(q.orders)} images")
            f = FqfMap.from_images(imgs, q.orders, q.orders)
            if not f.preserves(q, q):
                raise InputError(f"{path}:{n}: map does not preserve the discriminant form")
            maps.append(f)
    return maps


def _group(L: Lattice, flags: str):
    from .ogroup import parse_group_flags

    disc_maps = None
    for tok in flags.split(","):
        tok = tok.strip()
        if tok.startswith("disc="):
            disc_maps = load_disc_maps(tok[5:], L)
    try:
        return parse_group_flags(L, flags, disc_maps)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_lattice_info(args, out) -> int:
    from .buildings import is_maximal

    L = _lattice(args.expr)
    D = discriminant_group(L)
    p, m = L.signature
    out.append(f"lattice {args.expr}")
    out.append(f"rank {L.rank}")
    out.append(f"signature ({p},{m})")
    out.append(f"det {L.det}")
    out.append("gram")
    out.extend(fmt_matrix(L.gram))
    out.append("discriminant group " + (" + ".join(f"C{d}" for d in D.invariant_factors) or "trivial"))
    for i, g in enumerate(D.generator_lifts):
        out.append(f"  generator {i}: {fmt_vec(g)}")
    out.append(f"discriminant form {disc_form_of(L)}")
    out.append(f"maximal {'yes' if is_maximal(L) else 'no'}")
    return EXIT_OK


def cmd_overlattice(args, out) -> int:
    from .buildings import split_maximal_overlattice

    L = _lattice(args.expr)
    Lp, E = split_maximal_overlattice(L)
    ok = la.mat_mul(la.mat_mul(la.transpose(E), Lp.gram), E) == [list(r) for r in L.gram]
    out.append(f"lattice {args.expr}")
    out.append(f"index {abs(la.det(E))}")
    out.append("overlattice gram")
    out.extend(fmt_matrix(Lp.gram))
    out.append("embedding (columns: basis of L in overlattice coordinates)")
    out.extend(fmt_matrix(E))
    out.append(f"gram transport {'verified' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_INCOMPLETE


def cmd_orbit_eq(args, out) -> int:
    from .ogroup import is_member
    from .orbits import equivalent

    L = _lattice(args.expr)
    spec = _group(L, args.group)
    v1 = parse_vector(args.v1, L.rank)
    v2 = parse_vector(args.v2, L.rank)
    res = equivalent(L, spec, v1, v2)
    out.append(f"lattice {args.expr}")
    out.append(f"group {spec.describe()}")
    out.append(f"v1 {fmt_vec(v1)}")
    out.append(f"v2 {fmt_vec(v2)}")
    if res.witness is not None:
        w = res.witness
        ok = w(list(v1)) == list(v2) and is_member(spec, w)
        out.append(f"verdict {res.status} (witness {'verified' if ok else 'NOT verified'})")
        out.append("witness")
        out.extend(fmt_matrix(w.matrix))
    else:
        out.append(f"verdict {res.status} (no witness)")
    if res.reason:
        out.append(f"reason {res.reason}")
    if res.inconclusive_reason:
        out.append(f"inconclusive {res.inconclusive_reason}")
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_vinberg(args, out) -> int:
    from .vinberg import default_control_vector, vinberg_roots

    L = _lattice(args.expr)
    x0 = parse_vector(args.base, L.rank) if args.base else default_control_vector(L)
    norms = [int(k) for k in args.norms.split(",")] if args.norms else None
    res = vinberg_roots(L, x0, norms=norms, budget=args.budget)
    out.append(f"lattice {args.expr}")
    out.append(f"control vector {fmt_vec(x0)}")
    out.append(f"root norms {','.join(str(k) for k in res.norms)}")
    out.append(f"terminated {'yes' if res.terminated else 'no'}")
    for v in res.roots:
        out.append(f"root {fmt_vec(v)} norm {L.norm(v)}")
    out.append(f"chamber symmetries {len(res.symmetries)}")
    return EXIT_OK if res.terminated else EXIT_INCOMPLETE


def cmd_building(args, out) -> int:
    from .buildings import building_context, building_descend, dumps_building, to_dot

    L = _lattice(args.expr)
    spec = _group(L, args.group)
    ctx = building_context(L, budget=args.budget)
    B = building_descend(ctx, spec)
    out.append(dumps_building(B).rstrip("\n"))
    if B.note:
        out.append(f"# {B.note}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(B))
    if not B.complete:
        out.append(f"# incomplete: {B.note}")
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_cosets(args, out) -> int:
    from .buildings import building_context
    from .cosets import coset_key_for, coset_transversal, member_via_embedding

    L = _lattice(args.expr)
    spec = _group(L, args.group)
    ctx = building_context(L, budget=args.budget)
    key = coset_key_for(spec, ctx.Lp, ctx.embed)
    member = None if key is not None else member_via_embedding(spec, ctx.Lp, ctx.embed)
    T = coset_transversal(ctx.G2_gens, member, args.budget, key)
    out.append(f"lattice {args.expr}")
    out.append(f"group {spec.describe()} inside O+ of the maximal overlattice")
    out.append(f"index {T.index}{'' if T.complete else ' (incomplete)'}")
    if args.list:
        for i, r in enumerate(T.representatives):
            out.append(f"representative {i}")
            out.extend(fmt_matrix(r.matrix))
    return EXIT_OK if T.complete else EXIT_INCOMPLETE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latorbits", description="Orbits and buildings of orthogonal groups of even lattices.")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; computations are sequential")
    sub = p.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", help="lattice information")
    lsub = lat.add_subparsers(dest="lattice_command", required=True)
    info = lsub.add_parser("info", help="Gram matrix, signature and discriminant form")
    info.add_argument("expr")
    info.set_defaults(func=cmd_lattice_info)

    ov = sub.add_parser("overlattice", help="maximal even overlattice and embedding")
    ov.add_argument("expr")
    ov.set_defaults(func=cmd_overlattice)

    oe = sub.add_parser("orbit-eq", help="decide whether two vectors lie in one orbit")
    oe.add_argument("expr")
    oe.add_argument("v1")
    oe.add_argument("v2")
    oe.add_argument("--group", default="stable,plus", help="comma list of stable, plus, so, disc=FILE")
    oe.set_defaults(func=cmd_orbit_eq)

    vb = sub.add_parser("vinberg", help="simple roots of a Lorentzian lattice")
    vb.add_argument("expr")
    vb.add_argument("--base", help="control vector, e.g. (1,1,0,0)")
    vb.add_argument("--norms", help="comma list of root norms, e.g. -2,-4")
    vb.add_argument("--budget", type=int, default=64)
    vb.set_defaults(func=cmd_vinberg)

    bd = sub.add_parser("building", help="Tits building of a subgroup of O+")
    bd.add_argument("expr")
    bd.add_argument("--group", default="stable,plus")
    bd.add_argument("--dot", help="write a DOT graph to this file")
    bd.add_argument("--budget", type=int, default=10000)
    bd.set_defaults(func=cmd_building)

    cs = sub.add_parser("cosets", help="coset transversal inside O+ of the maximal overlattice")
    cs.add_argument("expr")
    cs.add_argument("--group", default="stable,plus")
    cs.add_argument("--budget", type=int, default=10000)
    cs.add_argument("--list", action="store_true", help="print the representatives")
    cs.set_defaults(func=cmd_cosets)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    pkg_log = logging.getLogger("latorbits")
    handler = None
    if args.verbose:
        handler = logging.StreamHandler(stderr)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        pkg_log.addHandler(handler)
        pkg_log.setLevel(logging.INFO)
    out: list[str] = []
    try:
        code = args.func(args, out)
    except (InputError, LatticeError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except NotImplementedError as exc:
        print(f"unsupported: {exc}", file=stderr)
        return EXIT_INCOMPLETE
    finally:
        if handler is not None:
            pkg_log.removeHandler(handler)
            pkg_log.setLevel(logging.NOTSET)
    print("\n".join(out), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
