"""Command-line frontend over JSON workspaces.

Exit codes: 0 pass, 1 mathematical failure, 2 input or usage error.
"""

import argparse
import json
import os
import re
import sys

from .algkit import (
    AlgebraError, check_algebra, cyclic_group_table, diagonal_algebra, dihedral_group_table, ground_algebra,
    group_algebra, matrix_algebra, truncated_polynomial_algebra,
)
from .bgdkit import BialgebroidError, check_bialgebroid, sweedler_bialgebroid
from .cgdkit import CoalgebroidError, check_coalgebroid
from .examples import (
    BaseChangeData, ExampleError, abelian_group_table, apply_drinfeld_twist, bicharacter_ad, build_azumaya_cell,
    build_bicharacter_twist, build_blowup, build_inverse_azumaya_cell, check_twist, group_bialgebroid,
    sqm_base_change,
)
from .exactfield import Field, FieldError
from .modkit import ModuleError, check_bimodule
from .moritakit import (
    CellError, check_one_cell, check_two_cell, compose_bgd, endomorphism_bialgebroid, morita_verdict,
)
from .report import Report, jsonable
from .serialize import Workspace, WorkspaceError

STRUCTURAL = (AlgebraError, ModuleError, CoalgebroidError, BialgebroidError, CellError, ExampleError)

CHECKERS = {
    "algebras": check_algebra,
    "bimodules": check_bimodule,
    "coalgebroids": check_coalgebroid,
    "bialgebroids": check_bialgebroid,
    "one_cells": check_one_cell,
    "two_cells": check_two_cell,
    "twists": check_twist,
}


class UsageError(ValueError):
    pass


# named algebras and bialgebras for ``build``


def _split_field(spec, field):
    """Strip an optional field suffix (``Mat2Q``, ``Mat2GF7``) and check it against the workspace."""
    m = re.fullmatch(r"(.*?\d)(Q|GF(\d+))", spec)
    if m:
        named = Field() if m.group(2) == "Q" else Field(int(m.group(3)))
        if named != field:
            raise UsageError("%s names field %s but the workspace is over %s" % (spec, named.name, field.name))
        return m.group(1)
    return spec


def group_orders(spec):
    """``Z2xZ2`` -> ``(2, 2)``."""
    parts = spec.split("x")
    if not all(re.fullmatch(r"Z\d+", p) for p in parts):
        raise UsageError("unknown abelian group %r (use e.g. Z3 or Z2xZ2)" % spec)
    orders = tuple(int(p[1:]) for p in parts)
    if any(n < 1 for n in orders):
        raise UsageError("group orders must be positive")
    return orders


def group_table(spec):
    m = re.fullmatch(r"D(\d+)", spec)
    if m:
        return dihedral_group_table(int(m.group(1)))
    return abelian_group_table(group_orders(spec))


def parse_algebra(spec, ws):
    """An algebra by workspace name or by a standard name: k, Diag<n>, Mat<n>, Trunc<n>, Z<n>, Z2xZ2, D<m>."""
    if spec in ws.objects["algebras"]:
        return ws.objects["algebras"][spec]
    f = ws.field
    s = _split_field(spec, f)
    if s in ("k", "Q", "ground"):
        return ground_algebra(f)
    for pat, fn in ((r"Mat(\d+)", matrix_algebra), (r"Diag(\d+)", diagonal_algebra),
                    (r"Trunc(\d+)", truncated_polynomial_algebra)):
        m = re.fullmatch(pat, s)
        if m:
            try:
                return fn(f, int(m.group(1)), name=spec)
            except AlgebraError as e:
                raise UsageError(str(e))
    s = re.sub(r"^[kQ](?=[ZD])", "", s)
    try:
        return group_algebra(f, group_table(s), name=spec)
    except UsageError:
        raise UsageError("unknown algebra %r" % spec)


def parse_bialgebra(spec, ws):
    """A bialgebroid by workspace name, ``E(<algebra>)``, or a group name (``QZ2``, ``Z2xZ2``, ``D4``)."""
    if spec in ws.objects["bialgebroids"]:
        return ws.objects["bialgebroids"][spec]
    m = re.fullmatch(r"E\((.+)\)", spec)
    if m:
        return sweedler_bialgebroid(parse_algebra(m.group(1), ws))
    s = re.sub(r"^[kQ](?=[ZD])", "", _split_field(spec, ws.field))
    try:
        table = group_table(s)
    except UsageError:
        raise UsageError("unknown bialgebra %r" % spec)
    try:
        return group_bialgebroid(ws.field, table, name=spec)
    except AlgebraError as e:
        raise UsageError(str(e))


BICHARACTERS = {
    "trivial": lambda x, y: 1,
    "ad": bicharacter_ad,
    # bicharacter_ad with one value flipped: not bilinear
    "broken": lambda x, y: -bicharacter_ad(x, y) if (x, y) == (3, 3) else bicharacter_ad(x, y),
}


# subcommands


def cmd_check(ws, args):
    kind, obj = ws.resolve(args.name)
    rep = CHECKERS[kind](obj)
    rep.subject = args.name
    return rep, None


def cmd_morita(ws, args):
    P = ws.get(args.cell, "one_cells")
    rep = morita_verdict(P)
    rep.subject = args.cell
    if args.certificate and rep.meta.get("equivalent"):
        with open(args.certificate, "w") as fh:
            json.dump(jsonable(rep.meta["certificate"]), fh, sort_keys=True, indent=1)
            fh.write("\n")
    return rep, None


def _added(kind, names, extra=None):
    rep = Report("build %s" % kind)
    rep.meta["added"] = names
    if extra:
        rep.meta.update(extra)
    return rep


def cmd_build(ws, args):
    k = args.kind
    need = {"sweedler": ["algebra"], "azumaya": ["algebra"], "blowup": ["bialgebra"], "twist": ["group"],
            "basechange": ["algebra", "bialgebra"], "endo": ["cell"]}[k]
    for opt in need:
        if getattr(args, opt) is None:
            raise UsageError("build %s needs --%s" % (k, opt))
    name = args.name
    if k == "sweedler":
        R = parse_algebra(args.algebra, ws)
        return _added(k, {"bialgebroid": ws.add_bialgebroid(sweedler_bialgebroid(R), name)}), ws
    if k == "azumaya":
        R = parse_algebra(args.algebra, ws)
        out = {"cell": ws.add_one_cell(build_azumaya_cell(R), name or "azumaya(%s)" % args.algebra)}
        if args.inverse:
            try:
                Q = build_inverse_azumaya_cell(R)
            except ExampleError as e:
                raise UsageError(str(e))
            out["inverse"] = ws.add_one_cell(Q, "inverse(%s)" % out["cell"])
        return _added(k, out), ws
    if k == "blowup":
        if args.n is None or args.n < 1:
            raise UsageError("build blowup needs --n >= 1")
        B = parse_bialgebra(args.bialgebra, ws)
        A, P = build_blowup(B, args.n, eps_form=args.eps)
        prefix = name or "blowup(%s,%d)" % (args.bialgebra, args.n)
        out = {"bialgebroid": ws.add_bialgebroid(A, prefix + ".A"), "cell": ws.add_one_cell(P, prefix + ".P")}
        return _added(k, out), ws
    if k == "twist":
        orders = group_orders(args.group)
        chi = BICHARACTERS.get(args.bichar)
        if chi is None:
            raise UsageError("unknown bicharacter %r (known: %s)" % (args.bichar, ", ".join(sorted(BICHARACTERS))))
        if args.bichar != "trivial" and orders != (2, 2):
            raise UsageError("bicharacter %r is defined on Z2xZ2" % args.bichar)
        ambient = emb = None
        if args.ambient:
            if args.ambient != "D4" or orders != (2, 2):
                raise UsageError("only the Klein subgroup of D4 is supported as an ambient group")
            ambient, emb = dihedral_group_table(4), [(g % 2) * 4 + 2 * (g // 2) for g in range(4)]
        prefix = name or "twist(%s,%s)" % (args.ambient or args.group, args.bichar)
        TD = build_bicharacter_twist(ws.field, orders, chi, ambient=ambient, embedding=emb, name=prefix)
        out = {"twist": ws.add_twist(TD, prefix)}
        rep = check_twist(TD)
        if not rep.ok:
            rep.subject = "build twist"
            rep.meta["added"] = out
            return rep, ws
        Bt, P = apply_drinfeld_twist(TD, check=False)
        out["bialgebroid"] = ws.add_bialgebroid(Bt, prefix + ".B~")
        out["cell"] = ws.add_one_cell(P, prefix + ".P")
        return _added(k, out), ws
    if k == "basechange":
        R = parse_algebra(args.algebra, ws)
        B = parse_bialgebra(args.bialgebra, ws)
        try:
            D = BaseChangeData(build_azumaya_cell(R), build_inverse_azumaya_cell(R), B)
            A, X, Y = sqm_base_change(D)
        except ExampleError as e:
            raise UsageError(str(e))
        prefix = name or "basechange(%s,%s)" % (args.algebra, args.bialgebra)
        out = {"bialgebroid": ws.add_bialgebroid(A, prefix + ".A"), "X": ws.add_one_cell(X, prefix + ".X"),
               "Y": ws.add_one_cell(Y, prefix + ".Y")}
        return _added(k, out), ws
    rep, ws = cmd_endo(ws, argparse.Namespace(cell=args.cell, name=name))
    return rep, ws


def cmd_compose(ws, args):
    P, Q = ws.get(args.first, "one_cells"), ws.get(args.second, "one_cells")
    PQ = compose_bgd(P, Q, name=args.name or "%s.%s" % (args.first, args.second), check=False)
    rep = check_one_cell(PQ)
    rep.meta["added"] = {"cell": ws.add_one_cell(PQ, PQ.name)}
    return rep, ws


def cmd_endo(ws, args):
    P = ws.get(args.cell, "one_cells")
    try:
        E = endomorphism_bialgebroid(P).bialgebroid
    except (CellError, ModuleError) as e:
        rep = Report("End(%s)" % args.cell)
        rep.add("endo.strong", False, str(e))
        return rep, None
    rep = check_bialgebroid(E)
    rep.subject = "End(%s)" % args.cell
    rep.meta["added"] = {"bialgebroid": ws.add_bialgebroid(E, args.name or "End(%s)" % args.cell)}
    rep.meta["dims"] = {"E": E.dim, "T": E.base.dim}
    return rep, ws


def cmd_report(ws, args):
    targets = args.names or ["%s:%s" % kn for kn in ws.names()]
    rep = Report("workspace")
    for t in targets:
        kind, obj = ws.resolve(t)
        sub = CHECKERS[kind](obj)
        rep.merge(sub, prefix="%s:%s/" % (kind, t.split(":", 1)[-1]))
    return rep, None


COMMANDS = {"check": cmd_check, "morita": cmd_morita, "build": cmd_build, "compose": cmd_compose,
            "endo": cmd_endo, "report": cmd_report}


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", "-w", default=argparse.SUPPRESS, help="workspace JSON file")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--field", default=argparse.SUPPRESS, help="Q or GF:p")
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="also write the report here")
    p = argparse.ArgumentParser(prog="monmorita", parents=[common],
                                description="Check bialgebroids, 1-cells and monoidal Morita equivalences.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="run the checker for one object")
    c.add_argument("name", help="object name, optionally kind:name")
    c = sub.add_parser("morita", parents=[common], help="monoidal Morita verdict for a 1-cell")
    c.add_argument("cell")
    c.add_argument("--certificate", help="write the certificate here on success")
    c = sub.add_parser("build", parents=[common], help="run an example builder into the workspace")
    c.add_argument("kind", choices=("azumaya", "blowup", "twist", "basechange", "sweedler", "endo"))
    c.add_argument("--algebra")
    c.add_argument("--bialgebra")
    c.add_argument("--n", type=int)
    c.add_argument("--eps", choices=("diagonal", "scalar"), default="diagonal")
    c.add_argument("--group")
    c.add_argument("--bichar", default="ad")
    c.add_argument("--ambient")
    c.add_argument("--inverse", action="store_true", help="azumaya: also build the inverse cell")
    c.add_argument("--cell")
    c.add_argument("--name")
    c = sub.add_parser("compose", parents=[common], help="compose two 1-cells over their middle bialgebroid")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--name")
    c = sub.add_parser("endo", parents=[common], help="endomorphism bialgebroid of a strong 1-cell")
    c.add_argument("cell")
    c.add_argument("--name")
    c = sub.add_parser("report", parents=[common], help="run all checkers on the workspace")
    c.add_argument("names", nargs="*")
    return p


def _load(args, writes):
    field = Field.parse(args.field) if getattr(args, "field", None) else None
    path = getattr(args, "workspace", None)
    if path is None:
        raise UsageError("--workspace is required")
    if not os.path.exists(path):
        if writes:
            return Workspace(field or Field())
        raise UsageError("workspace %s does not exist" % path)
    return Workspace.load(path, field)


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = make_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "json")
    writes = args.command in ("build", "compose", "endo")
    try:
        ws = _load(args, writes)
        rep, changed = COMMANDS[args.command](ws, args)
        if changed is not None:
            changed.save(args.workspace)
    except (UsageError, WorkspaceError, FieldError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except STRUCTURAL as e:
        print("error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 2
    text = rep.to_json() if fmt == "json" else rep.render_text()
    out.write(text)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
