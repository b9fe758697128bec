"""JSON workspace files: named operads, cooperads, coalgebras, twisting
morphisms, coalgebra morphisms, and the arity-one objects (modules,
module maps, twisting cochains).

Scalars are strings, ``"a/b"`` over Q or ``"r mod p"`` over F_p; plain
integers are accepted on input.  Every object is validated while loading.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

from .coalg import (CoalgebraMorphism, CoalgebraPresentation, cofree_conilpotent,
                    make_morphism, sub_coalgebra, validate_coalgebra, zero_coalgebra)
from .comodule import (AlgebraModule, ModuleMap, PolyAlgebra, preset_cochain, projection,
                       trivial_module, truncated_y_module)
from .gradedlin import QQ, AlgebraError, Field, GradedBasis
from .sigmaop import (Cooperad, Operad, TableOperad, linear_dual_cooperad,
                      operadic_desuspension, preset_operad)
from .twisting import ARITY_ONE, make_twisting, preset_twisting

SCHEMA = "cobarkit-workspace/1"
SECTIONS = ("operads", "cooperads", "coalgebras", "twisting", "morphisms",
            "modules", "module_maps")


class WorkspaceError(AlgebraError):
    """Malformed file or unresolved reference (a usage error, not a failed check)."""


class ValidationFailure(AlgebraError):
    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = violations
        super().__init__("; ".join(f"{n}: {m}" for n, m in violations))


@dataclass
class Workspace:
    field: Field = QQ
    max_arity: int = 5
    operads: dict = dc_field(default_factory=dict)
    cooperads: dict = dc_field(default_factory=dict)
    coalgebras: dict = dc_field(default_factory=dict)
    twisting: dict = dc_field(default_factory=dict)
    morphisms: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    module_maps: dict = dc_field(default_factory=dict)
    raw: dict = dc_field(default_factory=dict)
    violations: list = dc_field(default_factory=list)

    def get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            known = ", ".join(table) or "none"
            raise WorkspaceError(f"no {section[:-1] if section.endswith('s') else section}"
                                 f" named {name!r} (known: {known})")
        return table[name]

    def to_json(self) -> str:
        return json.dumps(self.raw, indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# scalars and small helpers

def scalar(F: Field, x):
    if isinstance(x, bool):
        raise WorkspaceError(f"{x!r} is not a scalar")
    if isinstance(x, int):
        return F(x)
    if isinstance(x, str):
        try:
            return F.parse_scalar(x)
        except (ValueError, ZeroDivisionError) as e:
            raise WorkspaceError(f"cannot read scalar {x!r}: {e}") from None
    raise WorkspaceError(f"{x!r} is not a scalar (use a string such as \"1/2\")")


def _vec(F: Field, v, what: str) -> dict:
    if not isinstance(v, dict):
        raise WorkspaceError(f"{what} must be an object mapping labels to scalars")
    return {k: scalar(F, x) for k, x in v.items()}


def _basis(items, what: str) -> GradedBasis:
    try:
        return GradedBasis.of((str(l), int(d), int(w)) for l, d, w in items)
    except (TypeError, ValueError) as e:
        raise WorkspaceError(f"{what}: expected [[label, degree, weight], ...] ({e})") from None


def _need(spec: dict, key: str, what: str):
    if key not in spec:
        raise WorkspaceError(f"{what} is missing {key!r}")
    return spec[key]


# ---------------------------------------------------------------------------
# builders

def _build_operad(ws: Workspace, name: str, spec: dict) -> Operad:
    F, N = ws.field, ws.max_arity
    if "preset" in spec:
        P = preset_operad(spec["preset"], int(spec.get("max_arity", N)), F)
        for _ in range(int(spec.get("desuspensions", 0))):
            P = operadic_desuspension(P)
        return P
    if "explicit" in spec:
        e = spec["explicit"]
        comps = {int(n): {k: int(d) for k, d in ks.items()}
                 for n, ks in _need(e, "components", name).items()}
        swaps = {(k, int(j)): _vec(F, v, f"{name} swap") for k, j, v in e.get("swaps", [])}
        comp = {(a, int(i), b): _vec(F, v, f"{name} composition")
                for a, i, b, v in e.get("compositions", [])}
        P = TableOperad(name, max(comps), comps, _need(e, "unit", name), swaps, comp,
                        metadata={"field": F.name, "sigma_split": F.characteristic == 0})
        return P
    raise WorkspaceError(f"operad {name!r} needs 'preset' or 'explicit'")


def _build_cooperad(ws: Workspace, name: str, spec: dict) -> Cooperad:
    src = _need(spec, "dual_of", f"cooperad {name!r}")
    if src in ws.operads:
        P = ws.operads[src]
    else:
        P = preset_operad(src, ws.max_arity, ws.field)
    return linear_dual_cooperad(P)


def _cooperad_ref(ws: Workspace, ref: str) -> Cooperad:
    if ref in ws.cooperads:
        return ws.cooperads[ref]
    raise WorkspaceError(f"no cooperad named {ref!r}")


def _build_coalgebra(ws: Workspace, name: str, spec: dict) -> CoalgebraPresentation:
    F = ws.field
    kind = next((k for k in ("cofree", "sub", "zero", "explicit") if k in spec), None)
    if kind is None:
        raise WorkspaceError(f"coalgebra {name!r} needs one of cofree/sub/zero/explicit")
    s = spec[kind]
    if kind == "cofree":
        C = _cooperad_ref(ws, _need(s, "cooperad", name))
        gens = _basis(_need(s, "generators", name), name)
        return cofree_conilpotent(C, gens, int(_need(s, "max_weight", name)), F, name)
    if kind == "zero":
        X = zero_coalgebra(_cooperad_ref(ws, _need(s, "cooperad", name)), F)
        X.name = name
        return X
    if kind == "sub":
        amb = ws.get("coalgebras", _need(s, "ambient", name))
        span = [(lab, _vec(F, v, f"{name} span")) for lab, v in _need(s, "span", name)]
        d = {g: _vec(F, v, f"{name} differential") for g, v in s.get("differential", {}).items()}
        return sub_coalgebra(amb, span, d or None, name)
    C = _cooperad_ref(ws, _need(s, "cooperad", name))
    gens = _basis(_need(s, "generators", name), name)
    d = {g: _vec(F, v, f"{name} differential") for g, v in s.get("differential", {}).items()}
    dec = {}
    for g, terms in s.get("decomposition", {}).items():
        dec[g] = {}
        for op, word, x in terms:
            key = (C.parse(op), tuple(word))
            dec[g][key] = dec[g].get(key, 0) + scalar(F, x)
    X = CoalgebraPresentation(C, gens, d, dec, F, name)
    rep = validate_coalgebra(X)
    if not rep.ok:
        raise AlgebraError("; ".join(rep.violations))
    return X


def _build_twisting(ws: Workspace, name: str, spec: dict):
    F = ws.field
    if "preset" in spec:
        p = spec["preset"]
        if p in ARITY_ONE:
            return preset_cochain(p, F)
        return preset_twisting(p, ws.max_arity, F)
    e = _need(spec, "explicit", f"twisting {name!r}")
    C = _cooperad_ref(ws, _need(e, "source", name))
    P = ws.get("operads", _need(e, "target", name))
    images = {}
    for c, v in _need(e, "images", name):
        images[C.parse(c)] = {P.parse(k): scalar(F, x) for k, x in v.items()}
    return make_twisting(C, P, images, name, bool(e.get("koszul", False)))


def _build_morphism(ws: Workspace, name: str, spec: dict) -> CoalgebraMorphism:
    F = ws.field
    src = ws.get("coalgebras", _need(spec, "source", name))
    tgt = ws.get("coalgebras", _need(spec, "target", name))
    images = {g: _vec(F, v, f"{name} image") for g, v in spec.get("images", {}).items()}
    return make_morphism(src, tgt, images, name)


def _build_module(ws: Workspace, name: str, spec: dict) -> AlgebraModule:
    F = ws.field
    A = PolyAlgebra(tuple(spec.get("algebra", ("x", "y"))), F)
    if "truncated_y" in spec:
        M = truncated_y_module(int(spec["truncated_y"]), A)
    elif spec.get("trivial"):
        M = trivial_module(A)
    else:
        basis = _basis(_need(spec, "basis", name), name)
        act = {v: {m: _vec(F, img, f"{name} action") for m, img in mat.items()}
               for v, mat in spec.get("action", {}).items()}
        for v in A.variables:
            act.setdefault(v, {})
        M = AlgebraModule(A, basis, act, name)
    M.name = name
    bad = M.check()
    if bad:
        raise AlgebraError("; ".join(bad))
    return M


def _build_module_map(ws: Workspace, name: str, spec: dict) -> ModuleMap:
    src = ws.get("modules", _need(spec, "source", name))
    tgt = ws.get("modules", _need(spec, "target", name))
    if spec.get("projection"):
        f = projection(src, tgt)
    else:
        images = {m: _vec(ws.field, v, f"{name} image") for m, v in spec.get("images", {}).items()}
        f = ModuleMap(src, tgt, images, name)
        bad = f.check()
        if bad:
            raise AlgebraError("; ".join(bad))
    f.name = name
    return f


_BUILDERS = {
    "operads": _build_operad,
    "cooperads": _build_cooperad,
    "coalgebras": _build_coalgebra,
    "twisting": _build_twisting,
    "morphisms": _build_morphism,
    "modules": _build_module,
    "module_maps": _build_module_map,
}


# ---------------------------------------------------------------------------
# entry points

def parse_text(text: str, source: str = "<string>") -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise WorkspaceError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise WorkspaceError(f"{source}: top level must be an object")
    return data


def build(data: dict, collect: bool = False) -> Workspace:
    """Build a workspace; object failures raise ValidationFailure unless ``collect``."""
    schema = data.get("schema")
    if schema != SCHEMA:
        raise WorkspaceError(f"unsupported schema {schema!r}; expected {SCHEMA!r}")
    unknown = set(data) - {"schema", "field", "max_arity", "description", *SECTIONS}
    if unknown:
        raise WorkspaceError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    try:
        F = Field.parse(str(data.get("field", "Q")))
    except AlgebraError as e:
        raise WorkspaceError(str(e)) from None
    ws = Workspace(F, int(data.get("max_arity", 5)), raw=data)
    for section in SECTIONS:
        entries = data.get(section, {})
        if not isinstance(entries, dict):
            raise WorkspaceError(f"section {section!r} must be an object")
        for name, spec in entries.items():
            if not isinstance(spec, dict):
                raise WorkspaceError(f"{section}.{name} must be an object")
            try:
                obj = _BUILDERS[section](ws, name, spec)
            except WorkspaceError:
                raise
            except AlgebraError as e:
                ws.violations.append((f"{section}.{name}", str(e)))
                continue
            except (KeyError, TypeError, ValueError) as e:
                raise WorkspaceError(f"{section}.{name}: malformed entry ({e})") from None
            getattr(ws, section)[name] = obj
    if ws.violations and not collect:
        raise ValidationFailure(ws.violations)
    return ws


def fixture_names() -> list[str]:
    root = resources.files("cobarkit") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    fname = name if name.endswith(".json") else f"{name}.json"
    p = resources.files("cobarkit") / "fixtures" / fname
    if not p.is_file():
        raise WorkspaceError(f"no bundled fixture {name!r} (available: {', '.join(fixture_names())})")
    return p.read_text(encoding="utf-8")


def load(path: str | Path | None = None, fixture: str | None = None,
         collect: bool = False) -> Workspace:
    if fixture is not None:
        return build(parse_text(fixture_text(fixture), fixture), collect)
    if path is None:
        raise WorkspaceError("give a workspace file or --fixture")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise WorkspaceError(f"cannot read {path}: {e.strerror}") from None
    return build(parse_text(text, str(path)), collect)


def dump(ws: Workspace, path: str | Path) -> None:
    Path(path).write_text(ws.to_json() + "\n", encoding="utf-8")
