"""Chart documents and expression evaluation.

A chart document is line oriented::

    # comment
    var x1 even
    var xi1 odd
    param t                      # formal even scalar (never gets a momentum)
    apply bundle rank=2 shifted=true [parities=0,1]
    apply cotangent | anticotangent | antitangent
    let H = xi1*p_x1

``var``/``param`` lines declare the base chart; ``apply`` lines build derived
charts left to right; ``let`` binds a name to an evaluated expression.

Evaluation works over a *family* of charts derived from the base (forms,
multivectors, phase spaces, bundle and dual bundle).  Every intermediate
result lives on the smallest chart of the family that contains all variables
it mentions, so ``st_x1*st_x2`` lands on the multivector chart and
``p_x1 + pi_x1`` on T*(Pi T M) without the user naming charts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .algebra import MIXED, Poly, Space, embed, parity_of, partial
from .brackets import VectorField, de_rham, poisson, schouten, schouten_sym, split_bracket
from .errors import ChartMismatchError, ParityError, PreconditionError, ProvenanceError
from .expr import RESERVED, BinOp, Call, Neg, Node, Num, ParseError, Pow, Var, parse, parse_list
from .geometry import (
    anticotangent,
    antitangent,
    base_space,
    cotangent,
    mx_transform,
    vector_bundle,
    with_parameters,
)

# ----------------------------------------------------------------------
# chart family


def _add(out: list, s: Space | None):
    if s is not None and s not in out:
        out.append(s)


def chart_family(chart: Space) -> list[Space]:
    """All charts reachable from ``chart``'s base, smallest first."""
    out: list[Space] = []
    base = chart.root()
    for s in (base, antitangent(base), anticotangent(base), cotangent(base),
              cotangent(antitangent(base)), cotangent(anticotangent(base))):
        _add(out, s)
    # a bundle somewhere on the provenance chain
    s = chart
    bundle = None
    while s is not None:
        if s.kind in ("bundle", "dual-bundle"):
            bundle = s
            break
        s = s.parent
    if bundle is not None:
        T = cotangent(bundle)
        mx = mx_transform(T)
        for s in (bundle, T, mx.target.parent, mx.target, anticotangent(bundle)):
            _add(out, s)
        try:
            _add(out, mx_transform(anticotangent(bundle)).target)
        except ProvenanceError:
            pass
    _add(out, chart)
    return sorted(out, key=lambda s: s.n)


@dataclass
class Workspace:
    """A chart family plus named values; resolves and joins charts."""

    chart: Space
    lets: dict = field(default_factory=dict)

    def __post_init__(self):
        self.family = chart_family(self.chart)

    @property
    def base(self) -> Space:
        return self.chart.root()

    def find(self, names: Iterable[str], pred: Callable[[Space], bool] | None = None) -> Space | None:
        names = set(names)
        for s in self.family:
            if names <= set(s.index) and (pred is None or pred(s)):
                return s
        return None

    def join(self, values, pred=None, what: str = "expression") -> Space:
        names: set[str] = set()
        for v in values:
            if isinstance(v, Poly):
                names |= {v.space.variables[i].name for i in v.support()}
        s = self.find(names, pred)
        if s is None:
            raise ChartMismatchError(
                f"no chart holds {what} over variables {sorted(names)}"
            )
        return s

    def on(self, v, s: Space) -> Poly:
        return embed(v, s) if isinstance(v, Poly) else s.const(v)


# ----------------------------------------------------------------------
# chart documents


@dataclass
class ChartDocument:
    chart: Space
    workspace: Workspace
    directives: list[str]


_KINDS = {"even": 0, "odd": 1, "0": 0, "1": 1}


def _bool(text: str, line: int, col: int) -> bool:
    t = text.lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise ParseError(f"expected a boolean, got {text!r}", line, col)


def _check_name(name: str, line: int, col: int):
    if not (name[:1].isalpha() or name[:1] == "_") or not all(c.isalnum() or c == "_" for c in name):
        raise ParseError(f"invalid name {name!r}", line, col)
    if name in RESERVED:
        raise ParseError(f"{name!r} is reserved", line, col)


def load_chart(text: str) -> ChartDocument:
    """Parse a chart document (see module docstring)."""
    base_vars: list[tuple[str, int]] = []
    params: list[tuple[str, int]] = []
    chart: Space | None = None
    ws: Workspace | None = None
    directives = []
    seen: set[str] = set()

    def current() -> Space:
        nonlocal chart
        if chart is None:
            b = base_space(base_vars)
            chart = with_parameters(b, params) if params else b
        return chart

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        words = stripped.split()
        head = words[0]
        directives.append(stripped)
        if head in ("var", "param"):
            if chart is not None:
                raise ParseError(f"{head} after apply/let", lineno, col)
            if head == "var":
                if len(words) != 3 or words[2] not in _KINDS:
                    raise ParseError("expected: var <name> even|odd", lineno, col)
                par = _KINDS[words[2]]
            else:
                if len(words) not in (2, 3) or (len(words) == 3 and words[2] != "even"):
                    raise ParseError("expected: param <name> [even]", lineno, col)
                par = 0
            name = words[1]
            _check_name(name, lineno, col + len(head) + 1)
            if name in seen:
                raise ParseError(f"duplicate name {name!r}", lineno, col)
            seen.add(name)
            (base_vars if head == "var" else params).append((name, par))
        elif head == "apply":
            if ws is not None and ws.lets:
                raise ParseError("apply after let", lineno, col)
            if len(words) < 2:
                raise ParseError("expected: apply <construction>", lineno, col)
            s = current()
            what = words[1]
            try:
                if what == "cotangent":
                    chart = cotangent(s)
                elif what == "anticotangent":
                    chart = anticotangent(s)
                elif what == "antitangent":
                    chart = antitangent(s)
                elif what == "bundle":
                    opts = {}
                    for w in words[2:]:
                        if "=" not in w:
                            raise ParseError(f"expected key=value, got {w!r}", lineno, col)
                        k, v = w.split("=", 1)
                        opts[k] = v
                    unknown = set(opts) - {"rank", "shifted", "parities"}
                    if unknown:
                        raise ParseError(f"unknown bundle option {sorted(unknown)[0]!r}", lineno, col)
                    shifted = _bool(opts.get("shifted", "true"), lineno, col)
                    if "parities" in opts:
                        pars = [_KINDS.get(p) for p in opts["parities"].split(",")]
                        if None in pars:
                            raise ParseError("parities must be 0/1 or even/odd", lineno, col)
                    else:
                        if "rank" not in opts or not opts["rank"].isdigit():
                            raise ParseError("bundle needs rank=<n> or parities=...", lineno, col)
                        pars = [0] * int(opts["rank"])
                    if "rank" in opts and opts["rank"].isdigit() and int(opts["rank"]) != len(pars):
                        raise ParseError("rank does not match parities", lineno, col)
                    chart = vector_bundle(s, pars, shifted=shifted)
                else:
                    raise ParseError(f"unknown construction {what!r}", lineno, col)
            except (ProvenanceError, ValueError) as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), lineno, col) from None
            for v in chart.variables:
                if v.name in RESERVED:
                    raise ParseError(f"derived name {v.name!r} is reserved", lineno, col)
        elif head == "let":
            m = stripped[3:].split("=", 1)
            if len(m) != 2:
                raise ParseError("expected: let <name> = <expr>", lineno, col)
            name = m[0].strip()
            _check_name(name, lineno, col + 4)
            if ws is None:
                ws = Workspace(current())
            if name in ws.lets or any(name in s.index for s in ws.family):
                raise ParseError(f"duplicate name {name!r}", lineno, col)
            expr_col = col + stripped.index("=") + 1
            try:
                node = parse(m[1])
            except ParseError as exc:
                raise ParseError(exc.message, lineno, expr_col + exc.col - 1) from None
            ws.lets[name] = evaluate(node, ws)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    s = current()
    if ws is None:
        ws = Workspace(s)
    return ChartDocument(s, ws, directives)


# ----------------------------------------------------------------------
# evaluation


def _is_const(v) -> bool:
    if not isinstance(v, Poly):
        return True
    return all(not any(m) for m in v.terms)


def _const_value(v) -> Fraction:
    if isinstance(v, Poly):
        return Fraction(v.constant_term())
    return Fraction(v)


def _err_at(node: Node, exc: Exception):
    line, col = getattr(node, "pos", (0, 0))
    raise ParseError(str(exc), line, col) from None


def evaluate(node: Node, ws: Workspace):
    """Evaluate an AST to a Poly (or a Fraction for chart-free constants)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name in ws.lets:
            return ws.lets[node.name]
        s = ws.find([node.name])
        if s is None:
            _err_at(node, ChartMismatchError(f"unknown identifier {node.name!r}"))
        return s.var(node.name)
    if isinstance(node, Neg):
        v = evaluate(node.arg, ws)
        return -v
    if isinstance(node, Pow):
        v = evaluate(node.base, ws)
        return v ** node.exponent
    if isinstance(node, BinOp):
        a = evaluate(node.left, ws)
        b = evaluate(node.right, ws)
        if node.op == "/":
            if not _is_const(b) or _const_value(b) == 0:
                _err_at(node, PreconditionError("division only by a nonzero constant"))
            q = _const_value(b)
            return a.scale(1 / q) if isinstance(a, Poly) else a / q
        if not isinstance(a, Poly) and not isinstance(b, Poly):
            return {"+": a + b, "-": a - b, "*": a * b}[node.op]
        s = ws.join([a, b])
        a, b = ws.on(a, s), ws.on(b, s)
        return {"+": a + b, "-": a - b, "*": a * b}[node.op]
    if isinstance(node, Call):
        return _call(node, ws)
    raise TypeError(node)


def _has_pairs(parity: int):
    return lambda s: bool(s.pairs) and s.bracket_parity() == parity


def _kind(*kinds):
    return lambda s: s.kind in kinds


def _call(node: Call, ws: Workspace):
    kind = node.kind
    try:
        if kind == "partial":
            v = evaluate(node.head[0], ws)
            s = ws.find(_names(v) | {node.index})
            if s is None:
                raise ChartMismatchError(f"unknown variable {node.index!r}")
            return partial(ws.on(v, s), node.index)
        if kind == "d":
            v = evaluate(node.head[0], ws)
            s = ws.join([v], _kind("antitangent"), "a form")
            return de_rham(s)(ws.on(v, s))
        if kind in ("pb", "sb", "sbs"):
            a = evaluate(node.head[0], ws)
            b = evaluate(node.head[1], ws)
            if kind == "pb":
                s = ws.join([a, b], _has_pairs(0), "an even bracket")
                br = poisson
            else:
                s = ws.join([a, b], _kind("anticotangent"), "a Schouten bracket")
                br = schouten if kind == "sb" else schouten_sym
            return split_bracket(br, ws.on(a, s), ws.on(b, s))
        if kind == "hb":
            from .homotopy import higher_poisson, higher_schouten

            H = evaluate(node.head[0], ws)
            args = [evaluate(a, ws) for a in node.tail]
            par = parity_of(H) if isinstance(H, Poly) else 0
            if par == MIXED:
                raise ParityError("a master Hamiltonian must be homogeneous")
            if par == 1:
                s = ws.join([H], _has_pairs(0), "an odd master Hamiltonian")
                fn = higher_schouten
            else:
                s = ws.join([H], lambda c: c.kind == "anticotangent" and c.parent.kind == "base",
                            "an even master Hamiltonian")
                fn = higher_poisson
            base = s.parent
            return fn(ws.on(H, s), [_on_exact(ws, a, base, "bracket arguments") for a in args])
        if kind == "koszul":
            from .koszul import higher_koszul

            P = evaluate(node.head[0], ws)
            forms = [evaluate(a, ws) for a in node.tail]
            S = anticotangent(ws.base)
            A = antitangent(ws.base)
            return higher_koszul(_on_exact(ws, P, S, "P"), [_on_exact(ws, w, A, "forms") for w in forms])
        if kind == "alpha":
            from .koszul import alpha

            P = evaluate(node.head[0], ws)
            return alpha(_on_exact(ws, P, anticotangent(ws.base), "P"))
        if kind == "shift":
            from .quasitriangular import ShiftDatum, shift

            H = evaluate(node.head[0], ws)
            r = evaluate(node.tail[0], ws)
            s = ws.join([H, r], _kind("cotangent"), "a shift")
            r = ws.on(r, s.parent) if _fits(r, s.parent) else ws.on(r, s)
            return shift(ShiftDatum(ws.on(H, s), r, node.index))
    except ParseError:
        raise
    except (ChartMismatchError, ParityError, ProvenanceError, PreconditionError) as exc:
        exc.pos = node.pos
        raise
    raise TypeError(kind)


def _names(v) -> set[str]:
    if isinstance(v, Poly):
        return {v.space.variables[i].name for i in v.support()}
    return set()


def _fits(v, s: Space) -> bool:
    return _names(v) <= set(s.index)


def _on_exact(ws: Workspace, v, s: Space, what: str) -> Poly:
    if not _fits(v, s):
        extra = sorted(_names(v) - set(s.index))
        raise ChartMismatchError(f"{what} must live on {s!r}; found {extra}")
    return ws.on(v, s)


def eval_text(text: str, ws: Workspace):
    return evaluate(parse(text), ws)


def eval_list(text: str, ws: Workspace) -> list:
    return [evaluate(n, ws) for n in parse_list(text)]


def as_poly(v, ws: Workspace, target: Space | None = None) -> Poly:
    """Promote a value to a Poly on ``target`` (default: the smallest chart holding it)."""
    s = target or ws.join([v])
    return ws.on(v, s) if _fits(v, s) else _on_exact(ws, v, s, "value")


def parse_field(text: str, ws: Workspace, parity: int | None = None) -> VectorField:
    """``"xi1 = -xi2*xi3; xi2 = ..."`` -> VectorField on the smallest chart holding it."""
    comps = {}
    names = set()
    offset = 0
    for part in text.split(";"):
        if not part.strip():
            offset += len(part) + 1
            continue
        if "=" not in part:
            raise ParseError("field components are written as <coordinate> = <expr>", 1, offset + 1)
        k, e = part.split("=", 1)
        k = k.strip()
        try:
            comps[k] = eval_text(e, ws)
        except ParseError as exc:
            raise ParseError(exc.message, exc.line, offset + len(k) + exc.col + 1) from None
        names.add(k)
        offset += len(part) + 1
    vals = list(comps.values())
    s = ws.find(names | set().union(*(_names(v) for v in vals)) if vals else names)
    if s is None:
        raise ChartMismatchError(f"no chart holds the field components {sorted(names)}")
    cs = {k: ws.on(v, s) for k, v in comps.items()}
    cs = {k: v for k, v in cs.items() if v.terms}
    return VectorField(s, cs, parity)
