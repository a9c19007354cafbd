"""Reading and writing system files.

Grammar (one statement per line, ``#`` starts a comment)::

    name      = <text>            optional
    dim       = <d>
    modulus   = <p>               default modulus for every component
    component = <i>               starts component i (1, 2, ...); optional for one component
    modulus   = <p>               inside a component: that component's prime
    relation  = "<poly>"          exactly one per component

A file with one component is the principal system R_d/(p, f); with several
components it is the product of the principal systems, in component order.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .laurent import PolySyntaxError, parse_poly, render
from .shiftsys import Presentation, PresentationError, Principal, Product, principal, product

_LINE = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*(.*?)\s*$")


class SystemFileError(ValueError):
    def __init__(self, message: str, path: str = "<string>", line: int = 0):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}" if line else f"{path}: {message}")


@dataclass
class _Component:
    index: int
    line: int
    modulus: int | None = None
    relation: tuple[str, int] | None = None  # (text, line)


@dataclass
class _State:
    name: str = ""
    dim: int | None = None
    modulus: int | None = None
    comps: list[_Component] = field(default_factory=list)


def _int_value(val: str, key: str, path: str, ln: int) -> int:
    try:
        return int(val)
    except ValueError:
        raise SystemFileError(f"{key} must be an integer, got {val!r}", path, ln) from None


def _unquote(val: str, path: str, ln: int) -> str:
    if len(val) >= 2 and val[0] == val[-1] == '"':
        return val[1:-1]
    raise SystemFileError("relation must be a double-quoted polynomial", path, ln)


def parse_system(text: str, path: str = "<string>") -> Presentation:
    st = _State()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise SystemFileError(f"expected 'key = value', got {raw.strip()!r}", path, ln)
        key, val = m.group(1).lower(), m.group(2)
        if key == "name":
            st.name = val.strip('"')
        elif key == "dim":
            if st.dim is not None:
                raise SystemFileError("dim given twice", path, ln)
            st.dim = _int_value(val, key, path, ln)
            if st.dim < 1:
                raise SystemFileError("dim must be positive", path, ln)
        elif key == "modulus":
            q = _int_value(val, key, path, ln)
            if q < 2:
                raise SystemFileError("modulus must be at least 2", path, ln)
            if st.comps:
                st.comps[-1].modulus = q
            else:
                st.modulus = q
        elif key == "component":
            i = _int_value(val, key, path, ln)
            if i != len(st.comps) + 1:
                raise SystemFileError(f"components must be numbered 1, 2, ... in order (got {i})", path, ln)
            st.comps.append(_Component(i, ln))
        elif key == "relation":
            if not st.comps:
                st.comps.append(_Component(1, ln))
            comp = st.comps[-1]
            if comp.relation is not None:
                raise SystemFileError(f"component {comp.index} already has a relation", path, ln)
            comp.relation = (_unquote(val, path, ln), ln)
        else:
            raise SystemFileError(f"unknown key {key!r}", path, ln)
    if st.dim is None:
        raise SystemFileError("missing 'dim'", path)
    if not st.comps:
        raise SystemFileError("no relation given", path)
    factors = []
    for comp in st.comps:
        q = comp.modulus or st.modulus
        if q is None:
            raise SystemFileError(f"component {comp.index} has no modulus", path, comp.line)
        if comp.relation is None:
            raise SystemFileError(f"component {comp.index} has no relation", path, comp.line)
        text_f, rl = comp.relation
        try:
            f = parse_poly(text_f, st.dim, q)
        except PolySyntaxError as exc:
            raise SystemFileError(f"bad polynomial: {exc.args[0]}", path, rl) from None
        try:
            cname = st.name if len(st.comps) == 1 else f"{st.name}.{comp.index}" if st.name else ""
            factors.append(principal(q, f, cname))
        except PresentationError as exc:
            raise SystemFileError(str(exc), path, rl) from None
    if len(factors) == 1:
        return factors[0]
    return product(factors, st.name)


def load_system(path: str | os.PathLike) -> Presentation:
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SystemFileError(exc.strerror or str(exc), path) from None
    pres = parse_system(text, path)
    if not pres.name:
        base = os.path.splitext(os.path.basename(path))[0]
        pres = Presentation(pres.dim, pres.modulus, pres.rank, pres.relations, pres.provenance, base)
    return pres


def format_system(pres: Presentation) -> str:
    """Inverse of parse_system for principal systems and products of them."""
    prov = pres.provenance
    out = []
    if pres.name:
        out.append(f"name = {pres.name}")
    out.append(f"dim = {pres.dim}")
    if isinstance(prov, Principal):
        out.append(f"modulus = {prov.p}")
        out.append(f'relation = "{render(prov.f)}"')
    elif isinstance(prov, Product):
        out.append(f"modulus = {pres.modulus}")
        for i, fac in enumerate(prov.factors, 1):
            if not isinstance(fac.provenance, Principal):
                raise SystemFileError("only products of principal systems have a file form")
            out.append(f"component = {i}")
            if fac.modulus != pres.modulus:
                out.append(f"modulus = {fac.modulus}")
            out.append(f'relation = "{render(fac.provenance.f)}"')
    else:
        raise SystemFileError("only principal systems and their products have a file form")
    return "\n".join(out) + "\n"
