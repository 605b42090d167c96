"""Command line interface.

Exit codes: 0 success or match, 2 certified mismatch, 1 input error.
``--fan`` and ``--periodic`` accept a JSON path or the name of a built-in
fixture.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fixtures as fx
from .cellular import (
    CellularError,
    cech_nerve,
    cocellular,
    compare_2pb,
    cprime_2na,
    double_complex_2pc,
)
from .complexes import ComplexError, homology
from .equivariant import (
    EquivariantError,
    check_2main_c,
    check_freeness,
    coinvariants_homology,
    equivariant_cocellular,
    group_cohomology,
    invariants_complex,
    materialize_window,
    tate,
    trivial_rep,
)
from .fans import (
    ConeSubset,
    FanError,
    check_alpha,
    check_locally_closed,
    maximal_intersection_counts,
    sample_openness,
    support,
    validate_fan,
)
from .io import (
    InputError,
    dumps,
    emit_dot,
    fan_to_json,
    parse_fan,
    parse_group,
    parse_periodic,
    parse_rep,
    periodic_to_json,
)

OK, MISMATCH, INPUT = 0, 2, 1


@dataclass
class Result:
    code: int
    payload: dict
    table: list[tuple[str, str]] = field(default_factory=list)


def _load_fan(args):
    src = args.fan
    if src is None:
        raise InputError("SCHEMA_ERROR", "--fan is required")
    if not Path(src).exists() and src in {**fx.FINITE_FIXTURES, **fx.EXTRA_FIXTURES}:
        fan, sub = fx.load_fixture(src)
    else:
        fan, sub = parse_fan(src)
    if args.subset:
        try:
            sub = ConeSubset(fan, args.subset)
        except FanError as e:
            raise InputError("SCHEMA_ERROR", f"--subset: {e}") from None
    if sub is None:
        sub = ConeSubset(fan, [i for i in fan.ids if fan[i].dim > 0])
    return fan, sub


def _load_periodic(args):
    src = args.periodic
    if src is None:
        raise InputError("SCHEMA_ERROR", "--periodic is required")
    if src == "tate" and not Path(src).exists():
        return tate()
    return parse_periodic(src)


def _rep(args, group):
    if args.rep:
        return parse_rep(args.rep, group)
    return trivial_rep(group)


def _require_alpha(t):
    if not check_alpha(t):
        raise InputError("ALPHA_VIOLATED", "subset is not closed under passing to larger cones")


def cmd_fixtures(args) -> Result:
    items = fx.fixture_list()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for info in items:
            if info.name == "tate":
                data = periodic_to_json(tate())
            else:
                fan, sub = fx.load_fixture(info.name)
                data = fan_to_json(fan, sub)
            (out / f"{info.name}.json").write_text(dumps(data) + "\n")
    return Result(OK, {"fixtures": [{"name": i.name, "description": i.description} for i in items]},
                  [(i.name, i.description) for i in items])


def cmd_validate(args) -> Result:
    fan, sub = _load_fan(args)
    rep = validate_fan(fan)
    payload = {"fan": rep.to_json(), "warnings": list(fan.warnings)}
    table = [("fan valid", str(rep.ok))]
    code = OK if rep.ok else MISMATCH
    if rep.ok:
        alpha = check_alpha(sub)
        payload["alpha"] = alpha
        payload["locally_closed"] = check_locally_closed(fan, sub.members)
        table.append(("alpha", str(alpha)))
        if alpha:
            sup = support(sub)
            payload["support"] = sup.to_json()
            table += [("d", str(sup.d)), ("open_in_span", str(sup.open_in_span)),
                      ("homology_point", str(sup.homology_point))]
            if sup.open_in_span:
                counts = maximal_intersection_counts(sub)
                bad_counts = sorted(k for k, (n, want) in counts.items() if n != want)
                bad_samples = sample_openness(sub, samples=args.samples, seed=args.seed)
                payload["openness_crosscheck"] = {
                    "count_violations": bad_counts,
                    "sample_violations": len(bad_samples),
                    "samples": args.samples,
                    "seed": args.seed,
                }
                table += [("count violations", str(len(bad_counts))),
                          ("sample violations", str(len(bad_samples)))]
                if bad_samples:
                    code = MISMATCH
        else:
            code = MISMATCH
    return Result(code, payload, table)


def _graded_result(name, c, t, args) -> Result:
    h = homology(c)
    if args.dot:
        emit_dot(t, args.dot, name=t.fan.name or "T")
    return Result(OK, {"homology": h.to_json(), "groups": h.describe(), "complex": c.to_json()},
                  [(f"H^{q}", g) for q, g in h.describe().items()] or [("homology", "0")])


def cmd_cellular(args) -> Result:
    fan, sub = _load_fan(args)
    _require_alpha(sub)
    return _graded_result("cellular", cocellular(sub), sub, args)


def cmd_cech(args) -> Result:
    fan, sub = _load_fan(args)
    _require_alpha(sub)
    return _graded_result("cech", cech_nerve(sub), sub, args)


def cmd_compare(args) -> Result:
    fan, sub = _load_fan(args)
    _require_alpha(sub)
    rep = compare_2pb(sub)
    code = OK if rep.homology_match else MISMATCH
    return Result(code, rep.to_json(), [
        ("open_in_span", str(rep.open_in_span)), ("d", str(rep.d)),
        ("homology_match", str(rep.homology_match)), ("chain_map_certified", str(rep.chain_map_certified)),
        ("cocellular", str(rep.cocellular_homology.describe())),
        ("cech shifted", str(rep.cech_homology.describe())),
    ])


def cmd_2pc(args) -> Result:
    fan, sub = _load_fan(args)
    res = double_complex_2pc(sub, cover=args.cover)
    code = OK if res.columns_acyclic and res.diagonal_quasi_iso else MISMATCH
    return Result(code, res.to_json(), [("columns_acyclic", str(res.columns_acyclic)),
                                        ("diagonal_quasi_iso", str(res.diagonal_quasi_iso))])


def cmd_2na(args) -> Result:
    fan, sub = _load_fan(args)
    taus = [args.tau] if args.tau else sub.ids
    out = {}
    code = OK
    for tau in taus:
        res = cprime_2na(sub, tau)
        out[tau] = res.to_json()
        if not res.quasi_iso:
            code = MISMATCH
    return Result(code, {"cones": out}, [(tau, str(v["quasi_iso"])) for tau, v in out.items()])


def cmd_equivariant(args) -> Result:
    pf = _load_periodic(args)
    radius = args.radius or pf.default_radius
    free = check_freeness(pf, args.word_bound, radius)
    gamma = pf.check_gamma(radius)
    win = materialize_window(pf, radius)
    if args.dot:
        emit_dot(win.subset, args.dot, name=pf.name or "window")
    payload = {
        "freeness": free,
        "word_bound": args.word_bound,
        "gamma": gamma,
        "radius": radius,
        "window_cones": len(win.fan) - 1,
        "window_subset": win.subset.ids if win.subset else [],
        "boundary": win.boundary,
    }
    table = [("freeness", f"{free} (word length <= {args.word_bound})"), ("gamma", str(gamma))]
    if not free:
        return Result(MISMATCH, payload, table)
    c = equivariant_cocellular(pf, args.word_bound, radius)
    payload["complex"] = c.to_json()
    payload["formally_valid"] = c.validate()
    a = _rep(args, pf.group)
    h = homology(invariants_complex(c, a))
    payload["invariants_homology"] = h.to_json()
    table.append(("invariants homology", str(h.describe())))
    return Result(OK, payload, table)


def cmd_group_cohomology(args) -> Result:
    if args.group:
        g = parse_group(args.group)
    elif args.periodic:
        g = _load_periodic(args).group
    else:
        raise InputError("SCHEMA_ERROR", "--group or --periodic is required")
    a = _rep(args, g)
    coh = group_cohomology(g, a)
    hom = coinvariants_homology(g, a)
    return Result(OK, {"cohomology": coh.to_json(), "homology": hom.to_json(),
                       "cohomology_groups": coh.describe(), "homology_groups": hom.describe()},
                  [("H^*", str(coh.describe())), ("H_*", str(hom.describe()))])


def cmd_2main_c(args) -> Result:
    pf = _load_periodic(args)
    if args.group:
        g = parse_group(args.group)
        if g.resolution is None:
            raise InputError("NO_RESOLUTION", "--group file has no resolution")
        pf.group.set_resolution(g.resolution, g.augmentation)
    a = _rep(args, pf.group)
    rep = check_2main_c(pf, a, args.word_bound, args.radius)
    return Result(OK if rep.match else MISMATCH, rep.to_json(),
                  [("match", str(rep.match)), ("degrees", str(rep.invariants_homology.describe())),
                   ("group side", str(rep.group_cohomology_shifted.describe()))])


COMMANDS = {
    "fixtures": (cmd_fixtures, "list built-in fixtures (write them as JSON with --out DIR)"),
    "validate": (cmd_validate, "check fan axioms, conditions on the subset and openness"),
    "cellular": (cmd_cellular, "homology of the co-cellular complex"),
    "cech": (cmd_cech, "homology of the Cech nerve"),
    "compare-2pb": (cmd_compare, "co-cellular versus Cech homology shifted by d"),
    "check-2pc": (cmd_2pc, "double complex: column exactness and diagonal quasi-isomorphism"),
    "cprime-2na": (cmd_2na, "C' complex of one cone (or all cones) and its quasi-isomorphism"),
    "equivariant": (cmd_equivariant, "equivariant co-cellular complex of a periodic fan"),
    "group-cohomology": (cmd_group_cohomology, "group cohomology and homology from a resolution"),
    "check-2main-c": (cmd_2main_c, "invariants versus shifted group cohomology"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conecell", description="Exact cellular complexes of smooth fans.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--fan")
    p.add_argument("--subset", nargs="+")
    p.add_argument("--periodic")
    p.add_argument("--group")
    p.add_argument("--rep")
    p.add_argument("--radius", type=int)
    p.add_argument("--word-bound", type=int, default=8)
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--out")
    p.add_argument("--tau")
    p.add_argument("--dot")
    p.add_argument("--cover", choices=["all", "maximal"], default="all")
    return p


def _print(res: Result, as_json: bool, out):
    if as_json:
        out.write(dumps(res.payload) + "\n")
        return
    width = max((len(k) for k, _ in res.table), default=0)
    for k, v in res.table:
        out.write(f"{k.ljust(width)}  {v}\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        res = fn(args)
    except (InputError, FanError, CellularError, EquivariantError, ComplexError) as e:
        code = getattr(e, "code", "ERROR")
        if args.json:
            out.write(dumps({"error": code, "message": str(e)}) + "\n")
        else:
            sys.stderr.write(f"error: {e}\n")
        return INPUT
    _print(res, args.json, out)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
