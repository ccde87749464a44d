"""Command-line front end.

Every command reads a chart document (``--chart FILE``) and expressions.  An
expression argument is either inline text or ``@path`` to read it from a
file.  Output is text (default) or JSON (``--json``, schema 1).

Exit codes: 0 success, 1 parse or validation error, 2 a mathematical
precondition failed or a ``verify`` identity does not hold, 3 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .algebra import Poly, Space, format_monomial, format_poly, format_scalar, parity_of
from .brackets import VectorField, commutator, de_rham, interior, schouten_sym
from .chartdoc import Workspace, as_poly, eval_list, eval_text, load_chart, parse_field
from .errors import (
    ChartMismatchError,
    InvariantError,
    ParityError,
    PreconditionError,
    ProvenanceError,
    SuperBracketsError,
)
from .expr import Call, ParseError, parse, parse_list
from .geometry import anticotangent, mx_transform, weight_components, weight_of

SCHEMA = 1
DEFAULT_SEED = 0


# ----------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: str
    result: Poly | None = None
    named: dict = field(default_factory=dict)  # name -> Poly, shown after the result
    residuals: dict = field(default_factory=dict)  # name -> Poly, expected zero
    checks: dict = field(default_factory=dict)  # name -> bool
    info: dict = field(default_factory=dict)  # extra JSON-safe data
    verify: bool = False

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and all(not r.terms for r in self.residuals.values())


def term_list(f: Poly) -> list[dict]:
    return [
        {"monomial": format_monomial(f.space, m) or "1", "coefficient": format_scalar(c)}
        for m, c in f.sorted_terms()
    ]


def parity_label(f: Poly) -> str:
    p = parity_of(f)
    return {0: "even", 1: "odd"}.get(p, p)


def weight_label(f: Poly):
    w = weight_of(f)
    return list(w) if isinstance(w, tuple) else w


def _weight_text(w) -> str:
    return f"({w[0]},{w[1]})" if isinstance(w, list) else str(w)


def poly_json(f: Poly) -> dict:
    return {"terms": term_list(f), "parity": parity_label(f), "weight": weight_label(f)}


def render_json(rep: Report) -> str:
    out: dict = {"schema": SCHEMA, "command": rep.command}
    if rep.result is not None:
        out["chart"] = list(rep.result.space.names)
        out["result"] = term_list(rep.result)
        out["parity"] = parity_label(rep.result)
        out["weight"] = weight_label(rep.result)
    if rep.named:
        out["named"] = {k: poly_json(v) for k, v in rep.named.items()}
    if rep.residuals:
        out["residuals"] = {k: term_list(v) for k, v in rep.residuals.items()}
    if rep.checks:
        out["checks"] = dict(rep.checks)
    if rep.info:
        out["info"] = rep.info
    if rep.verify:
        out["ok"] = rep.ok
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


def _info_text(key, value) -> list[str]:
    if isinstance(value, dict):
        lines = [f"{key}:"]
        for k, v in value.items():
            lines.append(f"  {k}: {json.dumps(v) if not isinstance(v, str) else v}")
        return lines
    return [f"{key}: {json.dumps(value) if not isinstance(value, str) else value}"]


def render_text(rep: Report) -> str:
    lines = []
    if rep.result is not None:
        lines.append(f"result: {format_poly(rep.result)}")
        lines.append(f"parity: {parity_label(rep.result)}")
        lines.append(f"weight: {_weight_text(weight_label(rep.result))}")
    for k, v in rep.named.items():
        lines.append(f"{k}: {format_poly(v)}")
    for k, v in rep.residuals.items():
        lines.append(f"residual {k}: {format_poly(v)}")
    for k, v in rep.checks.items():
        lines.append(f"check {k}: {'pass' if v else 'FAIL'}")
    for k, v in rep.info.items():
        lines.extend(_info_text(k, v))
    if rep.verify:
        lines.append("ok" if rep.ok else "FAILED")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# argument helpers


def read_expr(arg: str) -> str:
    if arg.startswith("@"):
        return Path(arg[1:]).read_text()
    return arg


def _expr(ws: Workspace, arg: str, what: str):
    try:
        return eval_text(read_expr(arg), ws)
    except ParseError as exc:
        raise ParseError(f"in {what}: {exc.message}", exc.line, exc.col) from None


def _poly(ws: Workspace, arg: str, what: str, target: Space | None = None) -> Poly:
    return as_poly(_expr(ws, arg, what), ws, target)


def _list(ws: Workspace, arg: str | None, what: str) -> list:
    if not arg:
        return []
    try:
        return eval_list(read_expr(arg), ws)
    except ParseError as exc:
        raise ParseError(f"in {what}: {exc.message}", exc.line, exc.col) from None


def _field(ws: Workspace, arg: str, what: str) -> VectorField:
    try:
        return parse_field(read_expr(arg), ws)
    except ParseError as exc:
        raise ParseError(f"in {what}: {exc.message}", exc.line, exc.col) from None


def _call(ws: Workspace, kind: str, head: list[str], tail: list[str], index=None, what="") -> Poly:
    """Build an operator node from argument texts and evaluate it."""
    try:
        h = tuple(parse(read_expr(a)) for a in head)
        t = []
        for a in tail:
            t.extend(parse_list(read_expr(a)))
        node = Call(kind, h, tuple(t), index if kind != "hb" else len(t))
    except ParseError as exc:
        raise ParseError(f"in {what or kind}: {exc.message}", exc.line, exc.col) from None
    from .chartdoc import evaluate

    v = evaluate(node, ws)
    return as_poly(v, ws)


# ----------------------------------------------------------------------
# commands


def cmd_eval(ws, a) -> Report:
    return Report("eval", _poly(ws, a.expr, "expression"))


def cmd_bracket(ws, a) -> Report:
    kind = {"even": "pb", "odd": "sb", "odd-sym": "sbs"}[a.kind]
    return Report("bracket", _call(ws, kind, [a.F, a.G], [], what="bracket"))


def cmd_derived(ws, a) -> Report:
    args = [a.args] if a.args else []
    res = _call(ws, "hb", [a.master], args, what="derived")
    return Report("derived", res)


def cmd_koszul(ws, a) -> Report:
    from .koszul import HigherPoissonStructure

    res = _call(ws, "koszul", [a.P], [a.forms], what="koszul")
    P = _poly(ws, a.P, "P", anticotangent(ws.base))
    st = HigherPoissonStructure(P)
    rep = Report("koszul", res)
    rep.info["master_self_commutator_zero"] = st.valid
    return rep


def cmd_alpha(ws, a) -> Report:
    from .koszul import alpha, alpha_via_hamiltonian

    P = _poly(ws, a.P, "P", anticotangent(ws.base))
    K = alpha(P)
    rep = Report("alpha", K if a.route == "explicit" else alpha_via_hamiltonian(P))
    if a.route == "both":
        rep.result = K
        rep.checks["routes_agree"] = K == alpha_via_hamiltonian(P)
    return rep


def _shift_datum(ws, a):
    from .quasitriangular import ShiftDatum

    H = _expr(ws, a.H, "H")
    r = _expr(ws, a.r, "r")
    s = ws.join([H, r], lambda c: c.kind == "cotangent", "a shift")
    Hs = ws.on(H, s)
    rp = as_poly(r, ws)
    base = s.parent
    if set(rp.space.variables[i].name for i in rp.support()) <= set(base.index):
        rp = ws.on(rp, base)
    else:
        rp = ws.on(rp, s)
    return ShiftDatum(Hs, rp, a.t)


def cmd_shift(ws, a) -> Report:
    from .brackets import poisson
    from .quasitriangular import classify, generalized_ybe_residual, master_equation_residual, shift

    d = _shift_datum(ws, a)
    Hp = shift(d)
    rep = Report("shift", Hp)
    rep.residuals["(H,H)"] = poisson(d.H, d.H)
    rep.residuals["(H',H')"] = poisson(Hp, Hp)
    rep.named["master_residual"] = master_equation_residual(d)
    rep.named["ybe_residual"] = generalized_ybe_residual(d)
    rep.info["kind"] = classify(d)
    return rep


def cmd_decompose(ws, a) -> Report:
    from .quasitriangular import coboundary_decompose, shift

    d = _shift_datum(ws, a)
    H, Hr, rr = coboundary_decompose(d)
    Hp = shift(d)
    rep = Report("decompose", Hp)
    rep.named["H"] = H
    rep.named["(H,r)"] = Hr
    rep.named["{r,r}_H/2"] = rr
    rep.checks["sum_equals_shift"] = H + Hr + rr == Hp
    return rep


def cmd_weights(ws, a) -> Report:
    target = ws.chart if a.on_chart else None
    f = _poly(ws, a.expr, "expression", target)
    rep = Report("weights", f)
    rep.info["components"] = {
        f"({w[0]},{w[1]})": format_poly(p) for w, p in weight_components(f).items()
    }
    return rep


def _mx_for(ws: Workspace, f: Poly, inverse: bool):
    names = {f.space.variables[i].name for i in f.support()}
    for s in ws.family:
        if s.kind not in ("cotangent", "anticotangent"):
            continue
        try:
            mx = mx_transform(s)
        except ProvenanceError:
            continue
        side = mx.target if inverse else mx.source
        if names <= set(side.index):
            return mx, side
    raise ProvenanceError("no Mackenzie-Xu chart holds the expression")


def cmd_mx(ws, a) -> Report:
    f = as_poly(_expr(ws, a.expr, "expression"), ws)
    mx, side = _mx_for(ws, f, a.inverse)
    g = ws.on(f, side)
    out = mx.backward(g) if a.inverse else mx.forward(g)
    rep = Report("mx", out)
    rep.info["signs"] = {k: v for k, v in mx.signs}
    return rep


# -- verify -------------------------------------------------------------


def verify_jacobi(ws, a) -> Report:
    from .homotopy import extract_linfty, verify_generalized_jacobi

    Q = _field(ws, a.field, "field")
    if Q.parity != 1:
        raise ParityError("the field must be odd")
    L = extract_linfty(Q, a.max_arity)
    jr = verify_generalized_jacobi(L, a.max_arity)
    rep = Report("verify jacobi", verify=True)
    rep.residuals["[Q,Q]"] = _field_poly(commutator(Q, Q))
    rep.checks["generalized_jacobi"] = jr.ok
    rep.info["arity_residuals"] = {str(k): v for k, v in sorted(jr.residuals.items())}
    rep.info["nonzero_arities"] = L.nonzero_arities()
    rep.info["curved"] = L.is_curved()
    if jr.first_failure:
        rep.info["first_failure"] = list(jr.first_failure)
    return rep


def _field_poly(X: VectorField) -> Poly:
    """Encode a field as its linear Hamiltonian so it prints as one polynomial."""
    from .brackets import linear_hamiltonian

    return linear_hamiltonian(X)


def verify_master(ws, a) -> Report:
    from .quasitriangular import master_equation_residual

    d = _shift_datum(ws, a)
    rep = Report("verify master", verify=True)
    rep.residuals["H(x,dr/dx)"] = master_equation_residual(d)
    return rep


def verify_ybe(ws, a) -> Report:
    from .quasitriangular import generalized_ybe_residual

    d = _shift_datum(ws, a)
    rep = Report("verify ybe", verify=True)
    rep.residuals["(H,H(x,dr/dx))"] = generalized_ybe_residual(d)
    return rep


def verify_alpha(ws, a) -> Report:
    from .brackets import poisson
    from .generators import random_poly
    from .koszul import alpha, alpha_via_hamiltonian

    S = anticotangent(ws.base)
    P = _poly(ws, a.P, "P", S)
    rng = random.Random(a.seed)
    if a.Q:
        Qs = [_poly(ws, a.Q, "Q", S)]
    else:
        Qs = [random_poly(S, rng, parity=rng.randint(0, 1), max_degree=3) for _ in range(a.samples)]
    rep = Report("verify alpha", alpha(P), verify=True)
    rep.checks["routes_agree"] = alpha(P) == alpha_via_hamiltonian(P)
    bad = 0
    pp = parity_of(P)
    for Q in Qs:
        for Pp in P.parity_parts().values() or [P]:
            for Qp in Q.parity_parts().values() or [Q]:
                sgn = 1 if parity_of(Pp) == 1 else -1
                lhs = alpha(schouten_sym(Pp, Qp))
                rhs = poisson(alpha(Pp), alpha(Qp)).scale(sgn)
                if lhs != rhs:
                    bad += 1
    rep.checks["intertwining"] = bad == 0
    rep.info["samples"] = len(Qs)
    rep.info["P_parity"] = {0: "even", 1: "odd"}.get(pp, pp)
    return rep


def verify_cartan(ws, a) -> Report:
    from .generators import random_field

    base = ws.base
    rng = random.Random(a.seed)
    if a.X and a.Y:
        pairs = [(_field(ws, a.X, "X"), _field(ws, a.Y, "Y"))]
    elif a.X or a.Y:
        raise PreconditionError("give both --X and --Y, or neither")
    else:
        pairs = [
            (random_field(base, rng, rng.randint(0, 1)), random_field(base, rng, rng.randint(0, 1)))
            for _ in range(a.samples)
        ]
    bad_cartan = bad_comm = 0
    for X, Y in pairs:
        if X.space != base or Y.space != base:
            raise ChartMismatchError("Cartan check needs fields on the base chart")
        d = de_rham(interior(X).space)
        lhs = interior(commutator(X, Y))
        rhs = commutator(commutator(d, interior(X)), interior(Y))
        if X.parity:
            rhs = rhs.scale(-1)
        if lhs != rhs:
            bad_cartan += 1
        if not commutator(interior(X), interior(Y)).is_zero():
            bad_comm += 1
    rep = Report("verify cartan", verify=True)
    rep.checks["cartan_formula"] = bad_cartan == 0
    rep.checks["interiors_commute"] = bad_comm == 0
    rep.info["samples"] = len(pairs)
    return rep


def verify_koszul_classical(ws, a) -> Report:
    from .koszul import classical_koszul_check

    S = anticotangent(ws.base)
    P = _poly(ws, a.P, "P", S)
    fs = [as_poly(v, ws, ws.base) for v in _list(ws, a.functions, "functions")]
    kr = classical_koszul_check(P, fs)
    rep = Report("verify koszul-classical", verify=True)
    rep.checks.update(kr.checks)
    rep.info["self_commutator_zero"] = not schouten_sym(P, P).terms
    return rep


VERIFY = {
    "jacobi": verify_jacobi,
    "master": verify_master,
    "ybe": verify_ybe,
    "alpha": verify_alpha,
    "cartan": verify_cartan,
    "koszul-classical": verify_koszul_classical,
}


# ----------------------------------------------------------------------
# argument parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chart", required=True, help="chart document")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="text output (default)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for sampled checks (default {DEFAULT_SEED})")
    common.add_argument("--max-arity", type=int, default=4, help="largest arity for L-infinity checks")

    p = argparse.ArgumentParser(
        prog="superbrackets",
        description="Exact brackets on supermanifold charts.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    s.add_argument("expr")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("bracket", parents=[common], help="canonical bracket of two expressions")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--kind", choices=["even", "odd", "odd-sym"], default="even")
    s.set_defaults(run=cmd_bracket)

    s = sub.add_parser("derived", parents=[common], help="higher derived bracket of a master Hamiltonian")
    s.add_argument("--master", required=True)
    s.add_argument("--args", default="", help="comma-separated base functions")
    s.set_defaults(run=cmd_derived)

    s = sub.add_parser("koszul", parents=[common], help="higher Koszul bracket of forms")
    s.add_argument("--P", required=True)
    s.add_argument("--forms", required=True, help="comma-separated forms")
    s.set_defaults(run=cmd_koszul)

    s = sub.add_parser("alpha", parents=[common], help="the Hamiltonian K_P on T*(Pi T M)")
    s.add_argument("--P", required=True)
    s.add_argument("--route", choices=["explicit", "hamiltonian", "both"], default="explicit")
    s.set_defaults(run=cmd_alpha)

    for name, fn, hlp in (("shift", cmd_shift, "gradient shift H(x, p + t dr/dx)"),
                          ("decompose", cmd_decompose, "H + (H,r) + {r,r}_H/2 for quadratic H")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--H", required=True)
        s.add_argument("--r", required=True)
        s.add_argument("--t", default=None, help="name of a parameter declared with 'param'")
        s.set_defaults(run=fn)

    s = sub.add_parser("weights", parents=[common], help="bi-weight of an expression")
    s.add_argument("expr")
    s.add_argument("--on-chart", action="store_true", help="measure on the document chart itself")
    s.set_defaults(run=cmd_weights)

    s = sub.add_parser("mx", parents=[common], help="Mackenzie-Xu relabeling")
    s.add_argument("expr")
    s.add_argument("--inverse", action="store_true")
    s.set_defaults(run=cmd_mx)

    v = sub.add_parser("verify", help="check an identity")
    vs = v.add_subparsers(dest="check", required=True)
    s = vs.add_parser("jacobi", parents=[common], help="generalized Jacobi identities of a field")
    s.add_argument("--field", required=True, help='components, e.g. "xi1 = -xi2*xi3; xi2 = ..."')
    s.set_defaults(run=verify_jacobi)
    for name, fn, text in (
        ("master", verify_master, "H(x, t dr/dx) = 0 on the zero section"),
        ("ybe", verify_ybe, "(H, H(x, t dr/dx)) = 0 (generalized Yang-Baxter)"),
    ):
        s = vs.add_parser(name, parents=[common], help=text)
        s.add_argument("--H", required=True)
        s.add_argument("--r", required=True)
        s.add_argument("--t", default=None)
        s.set_defaults(run=fn)
    s = vs.add_parser("alpha", parents=[common], help="two routes to K_P and bracket intertwining")
    s.add_argument("--P", required=True)
    s.add_argument("--Q", default=None)
    s.add_argument("--samples", type=int, default=10)
    s.set_defaults(run=verify_alpha)
    s = vs.add_parser("cartan", parents=[common], help="Cartan formula for interior products")
    s.add_argument("--X", default=None)
    s.add_argument("--Y", default=None)
    s.add_argument("--samples", type=int, default=10)
    s.set_defaults(run=verify_cartan)
    s = vs.add_parser("koszul-classical", parents=[common], help="coordinate identities of the Koszul bracket")
    s.add_argument("--P", required=True)
    s.add_argument("--functions", default="")
    s.set_defaults(run=verify_koszul_classical)
    return p


def _error(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        doc = load_chart(Path(a.chart).read_text())
    except OSError as exc:
        return _error(f"cannot read chart: {exc.strerror}", 1)
    except ParseError as exc:
        return _error(f"{a.chart}:{exc}", 1)
    try:
        rep = a.run(doc.workspace, a)
    except ParseError as exc:
        return _error(str(exc), 1)
    except OSError as exc:
        return _error(f"cannot read expression file: {exc.strerror}", 1)
    except (ChartMismatchError, ProvenanceError) as exc:
        pos = getattr(exc, "pos", None)
        return _error(f"{pos[0]}:{pos[1]}: {exc}" if pos and pos[0] else str(exc), 1)
    except (PreconditionError, ParityError) as exc:
        return _error(str(exc), 2)
    except InvariantError as exc:
        return _error(f"internal invariant breach: {exc}", 3)
    except SuperBracketsError as exc:
        return _error(str(exc), 1)
    except Exception as exc:  # anything else is a bug
        return _error(f"internal error: {type(exc).__name__}: {exc}", 3)
    stdout.write(render_json(rep) if a.fmt == "json" else render_text(rep))
    if rep.verify and not rep.ok:
        return 2
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
