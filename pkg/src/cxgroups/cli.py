"""Command line interface.  Every command prints one JSON document (DOT for
``export-dot``).  Exit status: 0 success, 1 failed check or domain error,
2 usage error."""
from __future__ import annotations

import argparse
import sys

from . import fixtures
from . import io as fio
from .actions import Quotient, automorphism_group, covolume, inversion_free_subgroups, validate_action
from .bijection import OvergroupContext, bijection_audit, conjugacy_oracle, conjugacy_solve, enumerate_overgroups
from .complexes import CogMorphism, MorphismToGroup, is_covering, validate_cog, validate_morphism
from .developments import develop, universal_cover
from .fp_groups import DEFAULT_BUDGET, BudgetExceeded, abelianization, pi1_presentation, todd_coxeter
from .functoriality import induced_maps
from .groups import GroupError
from .scwol import (Scwol, barycentric_subdivision, bfs_spanning_tree, connectivity, simple_connectivity, to_dot,
                    validate_scwol)


class UsageError(Exception):
    pass


def _load(path):
    try:
        return fio.load_json(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from None


def _scwol_of(path) -> Scwol:
    data, base = _load(path)
    kind = fio.detect_kind(data)
    if kind == "scwol":
        return Scwol.from_json(data)
    sdata, _ = fio._resolve(data["scwol"] if kind != "morphism" else data["source"], base)
    if kind == "morphism":
        sdata, _ = fio._resolve(sdata["scwol"], base)
    return Scwol.from_json(sdata)


def _complex(path):
    data, base = _load(path)
    return fio.complex_from_json(data, base)


def _action(path):
    data, base = _load(path)
    return fio.action_from_json(data, base)


def _morphism(path):
    data, base = _load(path)
    return fio.morphism_from_json(data, base)


def _tree(arg, scwol):
    if arg is None:
        return bfs_spanning_tree(scwol)
    return tuple(sorted(x for x in arg.split(",") if x))


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    data, base = _load(args.file)
    kind = fio.detect_kind(data)
    if kind == "scwol":
        rep = validate_scwol(Scwol.from_json(data))
    elif kind == "complex":
        c = fio.complex_from_json(data, base)
        rep = validate_scwol(c.scwol)
        if rep.ok:
            rep = validate_cog(c)
    elif kind == "action":
        rep = validate_action(fio.action_from_json(data, base))
    else:
        rep = validate_morphism(fio.morphism_from_json(data, base))
    return {"kind": kind, **rep.to_json()}, rep.ok


def cmd_subdivide(args):
    s = _scwol_of(args.file)
    return barycentric_subdivision(s).to_json(), True


def cmd_aut(args):
    s = _scwol_of(args.file)
    aut = automorphism_group(s, args.cap)
    out = {"order": aut.group.order(), "generators": fio.subgroup_to_json(aut, aut.group)["generators"],
           "acts_without_inversions": validate_action(aut).ok}
    if args.subgroups:
        out["inversion_free_subgroups"] = [fio.subgroup_to_json(aut, h) for h in inversion_free_subgroups(aut)]
    return out, True


def cmd_quotient(args):
    act = _action(args.action)
    q = Quotient(act)
    c = q.default_choices()
    if args.choices:
        data, _ = _load(args.choices)
        c = fio.choices_from_json(data)
    cog = q.induced_cog(c)
    rep = validate_cog(cog)
    return {"quotient": q.scwol.to_json(), "choices": c.to_json(), "complex": fio.complex_to_json(cog),
            "valid": rep.ok, "errors": rep.to_json()["errors"]}, rep.ok


def cmd_covolume(args):
    act = _action(args.action)
    sub = None
    if args.subgroup:
        data, _ = _load(args.subgroup)
        sub = fio.group_from_json(data)
    return {"covolume": str(covolume(act, sub))}, True


def cmd_develop(args):
    cog = _complex(args.complex)
    if args.morphism:
        phi = _morphism(args.morphism)
        if not isinstance(phi, MorphismToGroup):
            raise UsageError("--morphism must be a morphism to a group")
        rep = validate_morphism(phi)
        if not rep.ok:
            return {"valid": False, **rep.to_json()}, False
        dev = develop(phi.source, phi)
        s = dev.scwol
        return {"partial": False, "scwol": s.to_json(), "vertices": len(s.vertices), "edges": len(s.edges),
                "connected": connectivity(s)["connected"],
                "simply_connected": simple_connectivity(s, args.budget)["answer"]}, True
    uc = universal_cover(cog, _tree(args.tree, cog.scwol), args.budget, radius=args.radius)
    if uc.finite:
        s = uc.development.scwol
        return {"partial": False, "pi1_order": uc.pi1.order(), "scwol": s.to_json(),
                "vertices": len(s.vertices), "edges": len(s.edges)}, True
    return {**uc.ball.to_json(), "reason": uc.reason}, True


def cmd_pi1(args):
    cog = _complex(args.complex)
    tree = _tree(args.tree, cog.scwol)
    p = pi1_presentation(cog, tree)
    out = {"tree": list(tree), "presentation": p.to_json(), "text": str(p)}
    if args.abelianization:
        ab = abelianization(p)
        out["abelianization"] = {"invariants": list(ab.torsion), "free_rank": ab.free_rank, "text": str(ab)}
    if args.order:
        try:
            out["order"] = todd_coxeter(p, (), args.budget).index
        except BudgetExceeded:
            out["order"] = None
            out["order_note"] = f"coset enumeration exceeded {args.budget} rows"
    return out, True


def cmd_cover_check(args):
    m = _morphism(args.morphism)
    if not isinstance(m, CogMorphism):
        raise UsageError("cover-check needs a morphism of complexes of groups")
    rep = validate_morphism(m)
    if not rep.ok:
        return {"valid": False, **rep.to_json()}, False
    cov = is_covering(m)
    return {"valid": True, **cov.to_json()}, cov.covering


def cmd_induced_maps(args):
    m = _morphism(args.morphism)
    if not isinstance(m, CogMorphism):
        raise UsageError("induced-maps needs a morphism of complexes of groups")
    ip = induced_maps(m, base=args.base, budget=args.budget)
    return ip.to_json(), all(ip.checks.values())


def _context(args):
    s = _scwol_of(args.scwol)
    aut = automorphism_group(s)
    gamma = aut.group.subgroup([])
    if args.gamma:
        data, _ = _load(args.gamma)
        gamma = fio.subgroup_from_json(aut, data)
    return aut, gamma


def cmd_overgroups(args):
    aut, gamma = _context(args)
    ctx = OvergroupContext(aut, gamma, budget=args.budget)
    overs = enumerate_overgroups(ctx)
    return {"count": len(overs), "overgroups": [fio.subgroup_to_json(aut, h) for h in overs]}, True


def cmd_bijection_audit(args):
    aut, gamma = _context(args)
    ctx = OvergroupContext(aut, gamma, budget=args.budget)
    rep = bijection_audit(ctx)
    return rep, rep["ok"]


def cmd_conjugacy(args):
    aut, gamma = _context(args)
    data, _ = _load(args.H)
    H = fio.subgroup_from_json(aut, data)
    res = conjugacy_solve(aut, H, gamma, args.budget)
    oracle = conjugacy_oracle(aut, H, gamma)
    g = {c: aut.cells[res.g[k]] for k, c in enumerate(aut.cells)}
    ok = all(res.checks.values()) and oracle is not None
    return {"g": g, "checks": res.checks, "oracle_found": oracle is not None, "note": res.note}, ok


def cmd_export_dot(args):
    return to_dot(_scwol_of(args.file)), True


def cmd_fixture(args):
    name = args.name
    if name in fixtures.SCWOLS:
        return fixtures.SCWOLS[name]().to_json(), True
    if name in fixtures.ACTIONS:
        return fio.action_to_json(fixtures.ACTIONS[name]()), True
    if name in fixtures.COMPLEXES:
        return fio.complex_to_json(fixtures.COMPLEXES[name]()), True
    if name == "d3_segment_to_s3":
        return fio.morphism_to_json(fixtures.d3_segment_to_s3()), True
    raise UsageError(f"unknown fixture {name}")


FIXTURE_NAMES = sorted([*fixtures.SCWOLS, *fixtures.ACTIONS, *fixtures.COMPLEXES, "d3_segment_to_s3"])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cxgroups", description="Complexes of groups on finite scwols.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="coset table row budget")
        return sp

    add("validate", cmd_validate, "validate a scwol, complex, action or morphism").add_argument("file")
    add("subdivide", cmd_subdivide, "barycentric subdivision").add_argument("file")
    sp = add("aut", cmd_aut, "automorphism group of a scwol")
    sp.add_argument("file")
    sp.add_argument("--cap", type=int, default=20000)
    sp.add_argument("--subgroups", action="store_true", help="list subgroups acting without inversions")
    sp = add("quotient", cmd_quotient, "quotient scwol and induced complex of groups")
    sp.add_argument("action")
    sp.add_argument("--choices")
    sp = add("covolume", cmd_covolume, "exact covolume")
    sp.add_argument("action")
    sp.add_argument("--subgroup")
    sp = add("develop", cmd_develop, "development or universal cover")
    sp.add_argument("complex")
    sp.add_argument("--morphism")
    sp.add_argument("--tree")
    sp.add_argument("--radius", type=int, default=4)
    sp = add("pi1", cmd_pi1, "fundamental group presentation")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--tree", help="comma separated maximal tree edges")
    sp.add_argument("--abelianization", action="store_true")
    sp.add_argument("--order", action="store_true", help="order by coset enumeration")
    sp = add("cover-check", cmd_cover_check, "covering test for a morphism")
    sp.add_argument("morphism")
    sp = add("induced-maps", cmd_induced_maps, "maps of fundamental groups and universal covers")
    sp.add_argument("morphism")
    sp.add_argument("--base")
    for name, func, help_ in [("overgroups", cmd_overgroups, "overgroups acting without inversions"),
                              ("bijection-audit", cmd_bijection_audit, "overgroups versus coverings"),
                              ("conjugacy", cmd_conjugacy, "conjugate a free subgroup into H")]:
        sp = add(name, func, help_)
        sp.add_argument("--scwol", required=True)
        sp.add_argument("--gamma", help="subgroup of Aut(X) as cell maps; default trivial")
        if name == "conjugacy":
            sp.add_argument("--H", required=True)
    add("export-dot", cmd_export_dot, "DOT for the 1-skeleton").add_argument("file")
    add("fixture", cmd_fixture, "print a built-in fixture").add_argument("name", choices=FIXTURE_NAMES)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, ok = args.func(args)
    except UsageError as exc:
        print(f"cxgroups: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, GroupError, BudgetExceeded, KeyError) as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        witness = getattr(exc, "witness", None)
        if witness is not None:
            report["witness"] = witness
        sys.stdout.write(fio.dumps(report))
        return 1
    if isinstance(out, str):
        sys.stdout.write(out if out.endswith("\n") else out + "\n")
    else:
        sys.stdout.write(fio.dumps(out))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
