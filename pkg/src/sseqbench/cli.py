"""Command line: sseqbench <group> <command> [options].

Exit codes: 0 all checks pass, 1 a check failed, 2 the fixture or input is unusable.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chart import ChartError, Chart, validate
from .families import FIXTURES, FixtureError, families_verify, ingest
from .spectral_maps import ChartMap, IncompleteFixture, Inapplicable, MapError, build_fiber_chart, delete_differential_check, ko_psi_minus_one, parse_target
from .toda import RelationError, check_relation_chain, force_nonzero_from_empty


class InputError(Exception):
    pass


def _out(args, name: str, text: str) -> None:
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fixtures(args) -> Path:
    return Path(args.fixtures) if args.fixtures else FIXTURES


def cmd_ext_compute(args) -> int:
    from .resolution import export_chart, minimal_resolution
    from .steenrod import algebra_by_name

    alg = algebra_by_name(args.algebra)
    res = minimal_resolution(alg, args.stems, args.filtration)
    lines = [f"Ext over {args.algebra}, stems 0..{args.stems}, filtrations 0..{args.filtration}"]
    for f in range(args.filtration, -1, -1):
        row = " ".join(f"{res.dim(s, f) or '.':>2}" for s in range(args.stems + 1))
        lines.append(f"{f:>3} | {row}")
    lines.append("    + " + " ".join(f"{s:>2}" for s in range(args.stems + 1)))
    _out(args, f"ext_{args.algebra}.txt", "\n".join(lines) + "\n")
    if args.out:
        export_chart(res).save(Path(args.out) / f"ext_{args.algebra}.json")
    return 0


def cmd_chart_validate(args) -> int:
    chart = Chart.load(args.file)
    rep = validate(chart)
    _out(args, "validate.txt", rep.text())
    return 0 if rep.ok else 1


def cmd_chart_render(args) -> int:
    from .render import RenderOptions, render_chart

    chart = Chart.load(args.file)
    window = tuple(int(x) for x in args.window.split(",")) if args.window else None
    svg = render_chart(chart, RenderOptions(window=window, labels=not args.no_labels))
    _out(args, Path(args.file).stem + ".svg", svg)
    return 0


def cmd_fiber_build(args) -> int:
    if args.ko:
        from .ko import ko_chart

        f = ko_psi_minus_one(ko_chart(), args.N)
    else:
        f = ChartMap.load(args.map or _fixtures(args) / "tmf/qp.json")
    fib = build_fiber_chart(f, two_local=args.two_local)
    _out(args, "fiber.txt", fib.text())
    if args.out:
        fib.chart.save(Path(args.out) / "fiber.json")
    return 0


def cmd_delete_diff(args) -> int:
    if args.row:
        fx = ingest(_fixtures(args))
        row = fx.row(args.row)
        f, spec, r = fx.qp, row.target_spec(), row.page
    else:
        if not (args.target and args.page):
            raise InputError("give --row, or --target and --page")
        if args.ko:
            from .ko import ko_chart

            f = ko_psi_minus_one(ko_chart(), 3)
        else:
            f = ChartMap.load(args.map or _fixtures(args) / "tmf/qp.json")
        spec, r = args.target, args.page
    try:
        rec = delete_differential_check(parse_target(f.source, spec), r, f)
    except Inapplicable as exc:
        _out(args, "delete_diff.txt", f"inapplicable: {exc}\n")
        return 1
    _out(args, "delete_diff.txt", rec.text())
    return 0 if rec.detected_permanent else 1


def cmd_toda_verify(args) -> int:
    fx = ingest(_fixtures(args))
    names = [args.chain] if args.chain else sorted(fx.chains)
    ok = True
    lines = []
    for n in names:
        if n not in fx.chains:
            raise InputError(f"no chain {n}")
        res = check_relation_chain(fx.chains[n], fx.db)
        ok &= res.ok
        lines.append(f"chain {n}: {'ok' if res.ok else 'FAIL ' + res.failure}")
        for s in res.steps:
            rel = fx.db.get(s.relation)
            lines.append(f"  {res.words[s.index]} = {res.words[s.index + 1]}  [{rel.id}: {rel.provenance}]")
    _out(args, "toda.txt", "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_toda_force(args) -> int:
    fx = ingest(_fixtures(args))
    names = [args.bracket] if args.bracket else sorted(fx.brackets)
    ok = True
    lines = []
    for n in names:
        if n not in fx.brackets:
            raise InputError(f"no bracket {n}")
        fr = force_nonzero_from_empty(fx.brackets[n], fx.db)
        ok &= fr.status == "proved"
        lines.append(f"{n}: {fr.text()}")
    _out(args, "force.txt", "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_moore_replay(args) -> int:
    from .moore import CofiberLadder, LiftScript, replay_lift_argument

    script = LiftScript.load(args.script)
    sphere = Path(args.sphere) if args.sphere else _fixtures(args) / "sphere/sphere.json"
    ladder = CofiberLadder.load(sphere, script.i)
    res = replay_lift_argument(script, ladder)
    _out(args, f"replay_{script.name}.txt", res.text())
    return 0 if res.ok else 1


def cmd_families_verify(args) -> int:
    fx = ingest(_fixtures(args))
    rep = families_verify(fx)
    _out(args, "families.txt", rep.text())
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sseqbench", description=__doc__.splitlines()[0])
    p.add_argument("--fixtures", help="fixture directory (default: the shipped fixtures)")
    p.add_argument("--out", help="write outputs into this directory instead of stdout")
    top = p.add_subparsers(dest="group", required=True)

    ext = top.add_parser("ext").add_subparsers(dest="command", required=True)
    c = ext.add_parser("compute", help="minimal resolution over A(n)")
    c.add_argument("--algebra", default="A1")
    c.add_argument("--stems", type=int, default=20)
    c.add_argument("--filtration", type=int, default=8)
    c.set_defaults(func=cmd_ext_compute)

    ch = top.add_parser("chart").add_subparsers(dest="command", required=True)
    c = ch.add_parser("validate")
    c.add_argument("file")
    c.set_defaults(func=cmd_chart_validate)
    c = ch.add_parser("render")
    c.add_argument("file")
    c.add_argument("--window", help="s0,s1,f0,f1")
    c.add_argument("--no-labels", action="store_true")
    c.set_defaults(func=cmd_chart_render)

    fb = top.add_parser("fiber").add_subparsers(dest="command", required=True)
    c = fb.add_parser("build")
    c.add_argument("--map", help="map JSON (default: q - p from the fixtures)")
    c.add_argument("--ko", action="store_true", help="use psi^N - 1 on the KO chart")
    c.add_argument("-N", type=int, default=3)
    c.add_argument("--two-local", action="store_true")
    c.set_defaults(func=cmd_fiber_build)

    dd = top.add_parser("delete-diff").add_subparsers(dest="command", required=True)
    c = dd.add_parser("check")
    c.add_argument("--row", help="detection row id from the fixtures")
    c.add_argument("--map")
    c.add_argument("--ko", action="store_true")
    c.add_argument("--target", help='e.g. "h2g@23,5"')
    c.add_argument("--page", type=int)
    c.set_defaults(func=cmd_delete_diff)

    td = top.add_parser("toda").add_subparsers(dest="command", required=True)
    c = td.add_parser("verify")
    c.add_argument("--chain")
    c.set_defaults(func=cmd_toda_verify)
    c = td.add_parser("force")
    c.add_argument("--bracket")
    c.set_defaults(func=cmd_toda_force)

    mo = top.add_parser("moore").add_subparsers(dest="command", required=True)
    c = mo.add_parser("replay")
    c.add_argument("--script", required=True)
    c.add_argument("--sphere", help="sphere fixture (default: shipped)")
    c.set_defaults(func=cmd_moore_replay)

    fa = top.add_parser("families").add_subparsers(dest="command", required=True)
    c = fa.add_parser("verify")
    c.set_defaults(func=cmd_families_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FixtureError, IncompleteFixture, ChartError, MapError, RelationError, InputError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
