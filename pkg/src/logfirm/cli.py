"""Command-line interface: JSON in, JSON out, deterministic SVG figures.

Exit codes: 0 for a positive answer, 1 for a negative mathematical answer
(not firm, not a member, not additive, not in the image), 2 for input or
usage errors, 3 when a resource budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .campana import (
    MonomialIdeal,
    NotContaining,
    NotUnimodular,
    ZeroOrUnitIdeal,
    campana_member,
    intersection_multiplicity,
    m_multiplicity,
    variant_multiplicities,
)
from .fan import (
    ConeComplexMap,
    InvalidMap,
    NotPrimitive,
    OutsideSupport,
    SupportMismatch,
    common_refinement,
    cone_complex,
    lattice_points_box,
    sigma_n,
    star_subdivision,
)
from .firm import FiberProblem, LogPointQuery, firm_check, firm_check_pushout
from .firmament import (
    Firmament,
    NotAdditive,
    contact_order,
    firmament_enumerate_box,
    firmament_from_charts,
    firmament_member,
)
from .intlinalg import ResourceLimit
from .lift import (
    DVRTargetPoint,
    LiftSolution,
    MonomialChart,
    describe_lift,
    log_smooth_primes,
)
from .monoid import (
    AffineMonoid,
    HomNotRepresentable,
    MonoidHom,
    NotSharp,
    dual,
    faces,
    fs_pushout,
    saturate,
)
from .svg import RankUnsupported, emit_point_grid


@dataclass(frozen=True)
class CommandResult:
    status: str                 # "ok" | "infeasible" | "error"
    payload: object
    diagnostics: tuple[str, ...] = ()

    @property
    def exit_code(self) -> int:
        return {"ok": 0, "infeasible": 1, "error": 2, "limit": 3}[self.status]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# JSON (de)serialization


def _load(arg: str):
    """Inline JSON if the argument looks like JSON, else a file path."""
    text = arg.strip()
    if text and text[0] in "[{":
        return json.loads(text)
    with open(arg, "r", encoding="utf-8") as fh:
        return json.load(fh)


def monoid_from_json(d) -> AffineMonoid:
    return saturate(d["rank"], [tuple(g) for g in d["generators"]],
                    group=d.get("group"))


def monoid_to_json(m: AffineMonoid):
    gens = m.hilbert if m.sharp else m.generating_set()
    return {"rank": m.ambient_rank, "generators": [list(g) for g in gens]}


def hom_from_json(d, default_source: AffineMonoid | None = None) -> MonoidHom:
    source = (monoid_from_json(d["source"]) if "source" in d
              else default_source)
    if source is None:
        raise _UsageError("hom JSON needs a source monoid")
    target = monoid_from_json(d["target"])
    return MonoidHom(source, target,
                     tuple(tuple(r) for r in d["matrix"]))


def fan_from_json(d):
    return cone_complex(d["ambient_rank"],
                        [[tuple(r) for r in c["rays"]] for c in d["cones"]],
                        scale=d.get("scale", 1))


def fan_to_json(c):
    return {"ambient_rank": c.ambient_rank, "scale": c.scale,
            "cones": [{"rays": [list(r) for r in cone.rays]}
                      for cone in c.maximal]}


def map_to_json(f: ConeComplexMap):
    return {"source": fan_to_json(f.source), "target": fan_to_json(f.target),
            "cones": [{"target": t, "matrix": [list(r) for r in m]}
                      for t, m in f.assignments]}


def firmament_from_json(d) -> Firmament:
    if "charts" in d:
        base = monoid_from_json(d["base"])
        thetas = [hom_from_json(h, base) for h in d["charts"]]
        return firmament_from_charts(base, thetas)
    source = fan_from_json(d["source"])
    target = fan_from_json(d["target"])
    assignments = tuple((a["target"], tuple(tuple(r) for r in a["matrix"]))
                        for a in d["cones"])
    return Firmament(ConeComplexMap(source, target, assignments))


def _parse_point(arg: str):
    """Point syntax "[a,b,...]" with an optional "@cone_i" suffix."""
    text = arg.strip()
    cone = None
    if "@" in text:
        text, _, tail = text.partition("@")
        tail = tail.strip()
        if tail.startswith("cone_"):
            tail = tail[len("cone_"):]
        cone = int(tail)
    coords = json.loads(text)
    return tuple(coords), cone


def ideal_from_json(d) -> MonomialIdeal:
    return MonomialIdeal.of(d["vars"], [tuple(g) for g in d["generators"]])


# ---------------------------------------------------------------------------
# subcommand handlers (each returns a CommandResult)


def _cmd_monoid(args) -> CommandResult:
    m = monoid_from_json(_load(args.monoid)) if args.monoid else None
    if args.action == "saturate":
        return CommandResult("ok", monoid_to_json(m))
    if args.action == "dual":
        return CommandResult("ok", monoid_to_json(dual(m)))
    if args.action == "faces":
        out = [{"generators": list(f.generator_subset),
                "normal": list(f.normal)} for f in faces(m)]
        return CommandResult("ok", {"faces": out})
    theta = hom_from_json(_load(args.theta))
    psi = hom_from_json(_load(args.psi), theta.source)
    res = fs_pushout(theta, psi)
    payload = {
        "free_rank": res.free_rank,
        "torsion_orders": list(res.torsion_orders),
        "characteristic": monoid_to_json(res.characteristic),
        "saturated": res.amalgam_equals_saturation() is None,
    }
    return CommandResult("ok", payload)


def _cmd_firm(args) -> CommandResult:
    pd = _load(args.problem)
    base = monoid_from_json(pd["base"])
    prob = FiberProblem(base, tuple(hom_from_json(h, base)
                                    for h in pd["components"]))
    qd = _load(args.query)
    point_monoid = monoid_from_json(qd["point_monoid"])
    psi = MonoidHom(base, point_monoid,
                    tuple(tuple(r) for r in qd["matrix"]))
    q = LogPointQuery(point_monoid, psi)
    if args.method == "pushout":
        res = firm_check_pushout(prob, q, budget=args.bound)
        witness = None
        if res.firm:
            witness = {"component": res.component_index,
                       "face_normal": list(res.face.normal)}
        payload = {"firm": res.firm, "witness": witness, "method": "pushout"}
        return CommandResult("ok" if res.firm else "infeasible", payload)
    w = firm_check(prob, q, budget=args.bound)
    witness = None
    if w is not None:
        witness = {"component": w.component_index,
                   "matrix": [list(r) for r in w.hom.matrix]}
    payload = {"firm": w is not None, "witness": witness,
               "method": "factorization"}
    return CommandResult("ok" if w is not None else "infeasible", payload)


def _cmd_firmament(args) -> CommandResult:
    if args.action == "member":
        gamma = firmament_from_json(_load(args.map))
        coords, _cone = _parse_point(args.point)
        member = firmament_member(gamma, coords, budget=args.bound)
        return CommandResult("ok" if member else "infeasible",
                             {"member": member})
    if args.action == "contact":
        m = monoid_from_json(_load(args.monoid))
        vals = _load(args.vals)
        if isinstance(vals, dict):
            vals = {tuple(json.loads(k)): v for k, v in vals.items()}
        c = contact_order(m, vals)
        return CommandResult("ok", {"coordinates": list(c.point.coordinates)})
    gamma = firmament_from_json(_load(args.map))
    if gamma.map.target.ambient_rank != 2:
        raise RankUnsupported("SVG output needs a rank-2 target")
    members = {p.coordinates for p in firmament_enumerate_box(gamma, args.box)}
    doc = emit_point_grid(args.box, members)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(doc)
    return CommandResult("ok", {"members": len(members), "box": args.box,
                                "output": args.output})


def _cmd_fan(args) -> CommandResult:
    if args.action == "subdivide":
        fan = fan_from_json(_load(args.fan))
        sub, f = star_subdivision(fan, tuple(json.loads(args.vector)))
        return CommandResult("ok", {"fan": fan_to_json(sub),
                                    "map": map_to_json(f)})
    if args.action == "refine":
        f1 = fan_from_json(_load(args.first))
        f2 = fan_from_json(_load(args.second))
        return CommandResult("ok", fan_to_json(common_refinement(f1, f2)))
    if args.action == "sigma-n":
        return CommandResult("ok", fan_to_json(sigma_n(args.rank, args.n)))
    fan = fan_from_json(_load(args.fan))
    pts = sorted((p.cone_index, p.coordinates)
                 for p in lattice_points_box(fan, args.box))
    return CommandResult("ok", {"points": [
        {"cone": c, "coordinates": list(v)} for c, v in pts]})


def _fraction_str(f: Fraction) -> str:
    return str(f)


def _cmd_lift(args) -> CommandResult:
    if args.action == "primes":
        matrix = _load(args.matrix)
        primes = sorted(log_smooth_primes(matrix))
        return CommandResult("ok", {"primes": primes})
    chart_data = _load(args.chart)
    if isinstance(chart_data, dict):
        chart_data = chart_data["matrix"]
    chart = MonomialChart(tuple(tuple(r) for r in chart_data))
    vals = tuple(json.loads(args.vals))
    out = describe_lift(chart, DVRTargetPoint(vals),
                        residue_char=args.residue_char)
    if not isinstance(out, LiftSolution):
        return CommandResult("infeasible",
                             {"in_firmament": False,
                              "valuations": list(out.valuations)})
    payload = {
        "in_firmament": True,
        "exponents": list(out.exponents),
        "unit_matrix": [[_fraction_str(x) for x in row]
                        for row in out.unit_matrix],
        "root_orders": list(out.root_orders),
        "ramification_primes": sorted(out.ramification_primes),
        "unit_constraints": [list(c) for c in out.unit_constraints],
        "etale": out.etale,
    }
    return CommandResult("ok", payload)


def _cmd_campana(args) -> CommandResult:
    i = ideal_from_json(_load(args.ideal))
    if args.action == "mult":
        payload = {"m": m_multiplicity(i)}
        if args.variants:
            m_a, m_b, m_c, m_d = variant_multiplicities(i)
            payload.update({"m_a": m_a, "m_b": m_b, "m_c": m_c,
                            "m_d_threshold": m_d})
        return CommandResult("ok", payload)
    n = intersection_multiplicity(i, json.loads(args.vals), in_z=args.in_z)
    member = campana_member(n, args.m)
    payload = {"member": member, "n": "in_z" if args.in_z else n}
    return CommandResult("ok" if member else "infeasible", payload)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> _Parser:
    parser = _Parser(prog="logfirm")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output (always on)")
    parser.add_argument("--bound", type=int, default=None,
                        help="search/ILP budget")
    sub = parser.add_subparsers(dest="command", required=True)

    p_monoid = sub.add_parser("monoid")
    sm = p_monoid.add_subparsers(dest="action", required=True)
    for name in ("saturate", "dual", "faces"):
        p = sm.add_parser(name)
        p.add_argument("--monoid", required=True)
    p = sm.add_parser("pushout")
    p.add_argument("--theta", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--monoid")
    p_monoid.set_defaults(func=_cmd_monoid, monoid=None)

    p_firm = sub.add_parser("firm")
    sf = p_firm.add_subparsers(dest="action", required=True)
    p = sf.add_parser("check")
    p.add_argument("--problem", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--method", choices=("factorization", "pushout"),
                   default="factorization")
    p_firm.set_defaults(func=_cmd_firm)

    p_fmt = sub.add_parser("firmament")
    sfm = p_fmt.add_subparsers(dest="action", required=True)
    p = sfm.add_parser("member")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p = sfm.add_parser("contact")
    p.add_argument("--monoid", required=True)
    p.add_argument("--vals", required=True)
    p = sfm.add_parser("svg")
    p.add_argument("--map", required=True)
    p.add_argument("--box", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p_fmt.set_defaults(func=_cmd_firmament)

    p_fan = sub.add_parser("fan")
    sfa = p_fan.add_subparsers(dest="action", required=True)
    p = sfa.add_parser("subdivide")
    p.add_argument("--fan", required=True)
    p.add_argument("--vector", required=True)
    p = sfa.add_parser("refine")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p = sfa.add_parser("sigma-n")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = sfa.add_parser("points")
    p.add_argument("--fan", required=True)
    p.add_argument("--box", type=int, required=True)
    p_fan.set_defaults(func=_cmd_fan)

    p_lift = sub.add_parser("lift")
    sl = p_lift.add_subparsers(dest="action", required=True)
    p = sl.add_parser("solve")
    p.add_argument("--chart", required=True)
    p.add_argument("--vals", required=True)
    p.add_argument("--residue-char", type=int, default=None)
    p = sl.add_parser("primes")
    p.add_argument("--matrix", "--mat", dest="matrix", required=True)
    p_lift.set_defaults(func=_cmd_lift)

    p_cmp = sub.add_parser("campana")
    sc = p_cmp.add_subparsers(dest="action", required=True)
    p = sc.add_parser("mult")
    p.add_argument("--ideal", required=True)
    p.add_argument("--variants", action="store_true")
    p = sc.add_parser("member")
    p.add_argument("--ideal", required=True)
    p.add_argument("--vals", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--in-z", action="store_true")
    p_cmp.set_defaults(func=_cmd_campana)
    return parser


_INPUT_ERRORS = (
    _UsageError, ValueError, KeyError, TypeError, OSError,
    json.JSONDecodeError, RankUnsupported, NotPrimitive, OutsideSupport,
    SupportMismatch, InvalidMap, HomNotRepresentable, NotSharp,
    NotContaining, NotUnimodular, ZeroOrUnitIdeal,
)


def dispatch(argv) -> CommandResult:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except NotAdditive as exc:
        return CommandResult("infeasible", {"additive": False},
                             (str(exc),))
    except ResourceLimit as exc:
        return CommandResult("limit", {"error": "resource limit"},
                             (str(exc),))
    except _INPUT_ERRORS as exc:
        return CommandResult("error",
                             {"error": f"{type(exc).__name__}: {exc}"},
                             (str(exc),))


def main(argv=None) -> int:
    result = dispatch(sys.argv[1:] if argv is None else list(argv))
    sys.stdout.write(json.dumps(result.payload, sort_keys=True) + "\n")
    for line in result.diagnostics:
        sys.stderr.write(line + "\n")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
