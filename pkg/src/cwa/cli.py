"""Command line interface.

Exit codes: 0 success, 1 invalid input (syntax, references or validation),
2 a check failed, 64 bad command line usage.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import invariants
from .chains import ChainHomotopy, InvalidComplexError, homology
from .complexes import (
    CwaPresentation,
    PresentationError,
    cone,
    dimension,
    paste,
    quotient,
    suspend,
    underlying_chain,
    wedge,
)
from .rewriting import (
    CoreChangeError,
    CoreMismatchError,
    change_core_equivalence,
    change_core_retract,
    flatten,
    order_flattened,
)
from .textformat import (
    DocumentError,
    DocumentModel,
    FormatError,
    MapEntry,
    Ref,
    parses,
    serialize,
    validate_document,
)

EXIT_OK, EXIT_INVALID, EXIT_CHECK, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str) -> DocumentModel:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = parses(text)
    except (FormatError, DocumentError) as e:
        raise InvalidInput(f"{path}:{e}") from None
    bad = validate_document(doc)
    if bad:
        raise InvalidInput("\n".join(f"{path}: {name}: {v}" for name, v in bad))
    return doc


def _pick(doc: DocumentModel, name: str | None, what: str = "complex") -> list[str]:
    if name is not None:
        if name not in doc.complexes:
            raise UsageError(f"no {what} named {name!r}")
        return [name]
    if not doc.complexes:
        raise UsageError("the document declares no complexes")
    return list(doc.complexes)


def _one(doc: DocumentModel, name: str | None) -> str:
    names = _pick(doc, name)
    if len(names) > 1:
        raise UsageError(f"several complexes ({', '.join(names)}); choose one with --complex")
    return names[0]


def _result_doc(cores, complexes, maps=None) -> DocumentModel:
    doc = DocumentModel()
    for c in cores:
        doc.cores.setdefault(c.name, c)
    for name, x in complexes:
        doc.cores.setdefault(x.core.name, x.core)
        doc.complexes[name] = x
    for name, e in (maps or []):
        doc.maps[name] = e
    return doc


def cmd_validate(args) -> tuple[int, list[str]]:
    out = []
    for path in args.files:
        doc = _load(path)
        for kind, names in (("core", doc.cores), ("complex", doc.complexes),
                            ("map", doc.maps), ("homotopy", doc.homotopies)):
            for name in names:
                out.append(f"ok {kind} {name}")
    return EXIT_OK, out


def cmd_info(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    out = []
    for name in _pick(doc, args.complex):
        x = doc.complexes[name]
        kind = "proper" if x.proper else "generalized"
        out.append(f"complex {name} core={x.core.name} ({kind}, {len(x)} cells)")
        for layer, cells in x.layers.items():
            desc = " ".join(f"{a.id}(dim={a.a_dim})" for a in cells)
            out.append(f"  layer {layer}: {desc}")
        if x.proper:
            out.append(f"  dimension: {dimension(x)}")
        out.append(f"  euler characteristic: {invariants.euler_characteristic(x)}")
    return EXIT_OK, out


def _homology_lines(x: CwaPresentation, max_degree: int | None) -> list[str]:
    h = homology(underlying_chain(x), max_degree)
    lines = [f"H~_{d} = {g}" for d, g in h.nontrivial().items()
             if max_degree is None or d <= max_degree]
    return lines or ["H~_* = 0"]


def cmd_homology(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    names = _pick(doc, args.complex)
    out = []
    for name in names:
        if len(names) > 1:
            out.append(f"[{name}]")
        out += _homology_lines(doc.complexes[name], args.max_degree)
    return EXIT_OK, out


def _construct(fn, x):
    try:
        return fn(x)
    except (ValueError, PresentationError) as e:
        raise InvalidInput(str(e)) from None


def cmd_cone(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    name = _one(doc, args.complex)
    y = _construct(cone, doc.complexes[name])
    return EXIT_OK, serialize(_result_doc([], [(f"cone-{name}", y)])).splitlines()


def cmd_suspend(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    name = _one(doc, args.complex)
    y = _construct(suspend, doc.complexes[name])
    return EXIT_OK, serialize(_result_doc([], [(f"susp-{name}", y)])).splitlines()


def cmd_wedge(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    for n in (args.first, args.second):
        _pick(doc, n)
    x, y = doc.complexes[args.first], doc.complexes[args.second]
    w = _construct(lambda _: wedge(x, y), None)
    return EXIT_OK, serialize(_result_doc([], [(f"{args.first}-v-{args.second}", w)])).splitlines()


def cmd_paste(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    if args.along not in doc.maps:
        raise UsageError(f"no map named {args.along!r}")
    e = doc.maps[args.along]
    if e.source.name not in doc.complexes or e.source.cells is None or e.target.name not in doc.complexes:
        raise UsageError("paste needs a map from=<complex>[<cells>] to=<complex>")
    x, y = doc.complexes[e.source.name], doc.complexes[e.target.name]
    z = _construct(lambda _: paste(x, e.source.cells, e.map, y), None)
    return EXIT_OK, serialize(_result_doc([], [(f"paste-{args.along}", z)])).splitlines()


def cmd_quotient(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    name = _one(doc, args.complex)
    cells = [c for c in args.cells.split(",") if c]
    z = _construct(lambda x: quotient(x, cells), doc.complexes[name])
    return EXIT_OK, serialize(_result_doc([], [(f"{name}-mod", z)])).splitlines()


def _flatten(args):
    doc = _load(args.file)
    real = _load(args.realization)
    name = _one(doc, args.complex)
    rname = _one(real, args.realization_name)
    try:
        flat = flatten(doc.complexes[name], real.complexes[rname])
    except (CoreMismatchError, ValueError, PresentationError) as e:
        raise InvalidInput(str(e)) from None
    return name, flat


def cmd_flatten(args) -> tuple[int, list[str]]:
    name, flat = _flatten(args)
    text = serialize(_result_doc([], [(f"flat-{name}", flat.presentation)])).splitlines()
    order = order_flattened(flat)
    text.append("")
    text.append("# provenance: new chain cell <- original chain cell, sign")
    for (cell, b), ((a, c), s) in sorted(flat.provenance.items()):
        text.append(f"#   ({cell}, {b}) <- ({a}, {c}) {s:+d}")
    text.append(f"# support layers: {len(order.layers)}")
    return EXIT_OK, text


def _homotopy(doc: DocumentModel, name: str | None, chain) -> ChainHomotopy:
    if name is None:
        return ChainHomotopy.zero(chain)
    if name not in doc.homotopies:
        raise UsageError(f"no homotopy named {name!r}")
    return doc.homotopies[name].homotopy


def _core_change(args):
    doc = _load(args.file)
    maps = _load(args.maps)
    name = _one(doc, args.complex)
    x = doc.complexes[name]
    for m in (args.alpha, args.beta):
        if m not in maps.maps:
            raise UsageError(f"no map named {m!r} in {args.maps}")
    alpha, beta = maps.maps[args.alpha], maps.maps[args.beta]
    target = maps.cores.get(alpha.target.name)
    if target is None:
        raise InvalidInput(f"map {args.alpha!r} must end at a core")
    try:
        if args.h_a is None and args.h_b is None:
            res = change_core_retract(x, alpha.map, beta.map, target)
        else:
            h_a = _homotopy(maps, args.h_a, x.core.chain)
            h_b = _homotopy(maps, args.h_b, target.chain)
            res = change_core_equivalence(x, alpha.map, beta.map, h_a, h_b, target)
    except CoreChangeError as e:
        raise InvalidInput(str(e)) from None
    return name, x, res


def cmd_change_core(args) -> tuple[int, list[str]]:
    name, x, res = _core_change(args)
    new = f"{name}-over-{res.presentation.core.name}"
    maps = [("phi", MapEntry(Ref(name), Ref(new), res.phi))]
    if res.psi is not None:
        maps.append(("psi", MapEntry(Ref(new), Ref(name), res.psi)))
    doc = _result_doc([], [(name, x), (new, res.presentation)], maps)
    return EXIT_OK, serialize(doc).splitlines()


def cmd_check(args) -> tuple[int, list[str]]:
    doc = _load(args.file)
    names = _pick(doc, args.complex)
    basic = {
        "cone_acyclic": invariants.check_cone_acyclic,
        "suspension_shift": invariants.check_suspension_shift,
        "euler": invariants.check_euler,
        "contractible_core": invariants.check_contractible_core,
    }
    chosen = [k for k in basic if getattr(args, k)]
    extra = args.dimension_additivity is not None or args.retract_summand is not None
    if not chosen and not extra:
        chosen = list(basic)
    verdicts = []
    for name in names:
        x = doc.complexes[name]
        for k in chosen:
            try:
                verdicts.append((name, basic[k](x)))
            except ValueError as e:
                verdicts.append((name, invariants.Verdict(k.replace("_", "-"), False, detail=str(e))))
    if args.dimension_additivity is not None:
        real = _load(args.dimension_additivity)
        a_as = real.complexes[_one(real, None)]
        for name in names:
            try:
                verdicts.append((name, invariants.check_dimension_additivity(doc.complexes[name], a_as)))
            except (ValueError, PresentationError) as e:
                raise InvalidInput(str(e)) from None
    if args.retract_summand is not None:
        if args.alpha is None or args.beta is None:
            raise UsageError("--retract-summand needs --alpha and --beta")
        ns = argparse.Namespace(file=args.file, maps=args.retract_summand, complex=_one(doc, args.complex),
                                alpha=args.alpha, beta=args.beta, h_a=None, h_b=None)
        name, x, res = _core_change(ns)
        verdicts.append((name, invariants.check_retract_summand(x, res.presentation, res.phi, res.psi)))
    out = [f"{name}: {v}" for name, v in verdicts]
    return (EXIT_OK if all(v.passed for _, v in verdicts) else EXIT_CHECK), out


def cmd_fuzz(args) -> tuple[int, list[str]]:
    from . import generators as gen

    rng = random.Random(args.seed)
    fails = 0
    counts: dict[str, int] = {}

    def record(name: str, ok: bool) -> None:
        nonlocal fails
        counts[name] = counts.get(name, 0) + 1
        if not ok:
            fails += 1
            out.append(f"FAIL {name} (case {counts[name]})")

    out: list[str] = []
    for _ in range(args.count):
        x = gen.random_presentation(rng, gen.random_core(rng))
        record("cone-acyclic", invariants.check_cone_acyclic(x).passed)
        record("suspension-shift", invariants.check_suspension_shift(x).passed)
        record("euler", invariants.check_euler(x).passed)
        fc = gen.random_flatten_case(rng)
        flat = flatten(fc.x, fc.a_as)
        record("flatten-homology", homology(underlying_chain(flat.presentation))
               == homology(underlying_chain(fc.x)))
        record("layer-order", not order_flattened(flat).lex_violations)
        rc = gen.random_retract_case(rng)
        res = change_core_retract(rc.x, rc.alpha, rc.beta, rc.core)
        record("retract-summand", invariants.check_retract_summand(rc.x, res.presentation,
                                                                    res.phi, res.psi).passed)
        ec = gen.random_equivalence_case(rng)
        res = change_core_equivalence(ec.x, ec.alpha, ec.beta, ec.h_a, ec.h_b, ec.core)
        record("equivalence", invariants.check_homology_equal(ec.x, res.presentation).passed)
        cc = gen.random_contractible_case(rng)
        record("contractible-core", invariants.check_contractible_core(cc.x).passed)
    for name in sorted(counts):
        out.append(f"{name}: {counts[name]} cases")
    out.append(f"seed {args.seed}: {'ok' if not fails else f'{fails} failures'}")
    return (EXIT_OK if not fails else EXIT_CHECK), out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cwa", description="Presentations built from cells of a chosen core space.")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_complex(sp):
        sp.add_argument("--complex", metavar="NAME", help="complex to use (default: all / the only one)")
        return sp

    s = sub.add_parser("validate", help="parse and validate files")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_validate)

    s = with_complex(sub.add_parser("info", help="cells per layer, dimension, Euler characteristic"))
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = with_complex(sub.add_parser("homology", help="reduced integral homology"))
    s.add_argument("file")
    s.add_argument("--max-degree", type=int, metavar="D")
    s.set_defaults(func=cmd_homology)

    for name, func, desc in (("cone", cmd_cone, "reduced cone"), ("suspend", cmd_suspend, "suspension")):
        s = with_complex(sub.add_parser(name, help=desc))
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("wedge", help="wedge of two complexes over the same core")
    s.add_argument("file")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_wedge)

    s = sub.add_parser("paste", help="paste along a map from a subcomplex")
    s.add_argument("file")
    s.add_argument("--along", required=True, metavar="MAP",
                   help="map declared as from=<complex>[<cells>] to=<complex>")
    s.set_defaults(func=cmd_paste)

    s = with_complex(sub.add_parser("quotient", help="collapse a subcomplex"))
    s.add_argument("file")
    s.add_argument("--cells", required=True, help="comma separated cell ids")
    s.set_defaults(func=cmd_quotient)

    s = with_complex(sub.add_parser("flatten", help="rewrite over the core of a presentation of the core"))
    s.add_argument("file")
    s.add_argument("realization", help="file presenting the core over another core")
    s.add_argument("--realization-name", metavar="NAME")
    s.set_defaults(func=cmd_flatten)

    s = with_complex(sub.add_parser("change-core", help="rebuild over a new core"))
    s.add_argument("file")
    s.add_argument("maps", help="file with the new core, the maps and optional homotopies")
    s.add_argument("--alpha", required=True, help="map from the old core to the new one")
    s.add_argument("--beta", required=True, help="map from the new core to the old one")
    s.add_argument("--h-a", metavar="NAME", help="homotopy id - beta alpha on the old core")
    s.add_argument("--h-b", metavar="NAME", help="homotopy id - alpha beta on the new core")
    s.set_defaults(func=cmd_change_core)

    s = with_complex(sub.add_parser("check", help="run consequence checkers (default: the basic ones)"))
    s.add_argument("file")
    s.add_argument("--cone-acyclic", action="store_true")
    s.add_argument("--suspension-shift", action="store_true")
    s.add_argument("--euler", action="store_true")
    s.add_argument("--contractible-core", action="store_true")
    s.add_argument("--dimension-additivity", metavar="REALIZATION")
    s.add_argument("--retract-summand", metavar="MAPS")
    s.add_argument("--alpha")
    s.add_argument("--beta")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fuzz", help="random corpus through every checker")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=50)
    s.set_defaults(func=cmd_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, lines = args.func(args)
    except UsageError as e:
        print(f"cwa: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInput, InvalidComplexError) as e:
        print(f"cwa: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    text = "\n".join(lines) + "\n" if lines else ""
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
