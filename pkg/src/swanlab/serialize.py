"""Text and JSON formats: expressions for elements, residue functions and data.

Expressions use ``+ - * / ^ **``, integers, ``s``, ``g`` (the generator of
F_q when f > 1), and for elements of K also ``pi[t]`` (t a rational, e.g.
``pi[1/2]``), ``zeta_p`` and ``lam`` (zeta_p - 1).
"""

from __future__ import annotations

import ast
import json
from fractions import Fraction

import numpy as np

from .datum import RamDatum, RamPair
from .errors import InvalidInput
from .residue_field import DiffForm, Fq, RatFun, get_fq, ratfun_str


def _prep(text: str) -> str:
    return text.replace("^", "**").strip()


def _evaluate(text: str, atoms: dict, from_int, pi=None):
    try:
        tree = ast.parse(_prep(text), mode="eval")
    except SyntaxError as exc:
        raise InvalidInput(f"cannot parse {text!r}: {exc.msg}") from None

    def rational(node) -> Fraction:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -rational(node.operand)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            return rational(node.left) / rational(node.right)
        raise InvalidInput("pi[...] needs a rational index")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return from_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in atoms:
                raise InvalidInput(f"unknown symbol {node.id!r}")
            return atoms[node.id]()
        if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name) \
                and node.value.id == "pi" and pi is not None:
            return pi(rational(node.slice))
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -ev(node.operand)
            if isinstance(node.op, ast.UAdd):
                return ev(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)) \
                        and not (isinstance(node.right, ast.UnaryOp)
                                 and isinstance(node.right.operand, ast.Constant)):
                    raise InvalidInput("exponents must be integers")
                n = int(rational(node.right))
                return ev(node.left) ** n
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
        raise InvalidInput(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_ratfun(text: str, F: Fq) -> RatFun:
    gen = F.ctx.gen() if F.f > 1 else None
    atoms = {"s": lambda: RatFun.s(F)}
    if gen is not None:
        atoms["g"] = lambda: RatFun.const(F, gen)
    return _evaluate(text, atoms, lambda c: RatFun.const(F, c))


def _no_zeta_p2():
    raise InvalidInput("zeta_p2 is not modelled: order p^2 characters are given as "
                       "towers (u0, z), which only need zeta_p")


def parse_elem(text: str, K):
    """An element of K from an expression string."""
    kf = K.k
    atoms = {"s": K.s, "zeta_p": K.zeta, "lam": K.lam, "zeta_p2": _no_zeta_p2}
    if kf.f > 1:
        atoms["g"] = lambda: K.const(kf.lift_const(K.F.ctx.gen()))
    return _evaluate(text, atoms, K.from_int, K.pi)


def _poly_expr(A, kf, shift: int) -> str:
    terms = []
    for (_, i, j, l), c in sorted(((idx, int(v)) for idx, v in np.ndenumerate(A) if v),
                                  key=lambda t: (t[0][1], t[0][3], t[0][2])):
        parts = [str(c)] if c != 1 else []
        if j:
            parts.append("g" if j == 1 else f"g^{j}")
        if i:
            parts.append("s" if i == 1 else f"s^{i}")
        lv = Fraction(shift + l, kf.e)
        if lv:
            parts.append(f"pi[{lv}]")
        terms.append("*".join(parts) if parts else "1")
    return " + ".join(terms) if terms else "0"


def format_elem(x) -> str:
    """Expression string for an element of K (accepted by :func:`parse_elem`)."""
    from .local_field import Frac
    if isinstance(x, Frac):
        return f"({format_elem(x.num)})/({format_elem(x.den)})"
    if x.X is None:
        return "0"
    kf = x.L.k
    num = _poly_expr(x.X, kf, x.k)
    D = kf.trim(x.D)
    if D.shape == kf.one().shape and np.array_equal(D, kf.one()):
        return num
    return f"({num})/({_poly_expr(D, kf, 0)})"


def format_ratfun(a: RatFun) -> str:
    return ratfun_str(a)


# ---------------------------------------------------------------------------
# ramification data

def pair_to_json(q: RamPair) -> dict:
    return {"delta": str(q.delta), "omega": format_ratfun(q.omega.a)}


def datum_to_json(dat: RamDatum, f: int = 1) -> dict:
    out = {"p": dat.p, "pairs": [pair_to_json(q) for q in dat.pairs]}
    if f != 1:
        out["f"] = f
    return out


def datum_from_json(obj, f: int | None = None) -> RamDatum:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        p = int(obj["p"])
        F = get_fq(p, int(obj.get("f", f or 1)))
        pairs = [RamPair(Fraction(q["delta"]), DiffForm(parse_ratfun(str(q["omega"]), F)))
                 for q in obj["pairs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed datum: {exc}") from None
    return RamDatum(p, pairs)


__all__ = ["parse_ratfun", "parse_elem", "format_elem", "format_ratfun", "pair_to_json",
           "datum_to_json", "datum_from_json"]
