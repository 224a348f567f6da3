"""Instance files: JSON input with a polytope pair and height functions.

Lattice points are map keys written as comma-joined integers (``"-1,0"``).
Heights may be ``"auto"``, in which case seeded generic heights are drawn
(seed ``s`` for Delta, ``s + 1`` for the dual).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import InstanceError, NotGenericHeights, ValidationError
from .polyhedra import LatticePolytope, fractional_dual_vertices, lattice_points, polar_dual
from .subdivision import HeightFunction, Subdivision, boundary_restriction, generic_heights, require_generic


def _schema() -> dict:
    return json.loads(resources.files("syzmodel").joinpath("schema/instance.schema.json").read_text())


def parse_point(key: str, d: int, where: str) -> tuple[int, ...]:
    try:
        p = tuple(int(x) for x in key.split(","))
    except ValueError:
        raise InstanceError(f"bad lattice point key {key!r}", where) from None
    if len(p) != d:
        raise InstanceError(f"point {key!r} has {len(p)} coordinates, expected {d}", where)
    return p


def format_point(p) -> str:
    return ",".join(str(int(x)) for x in p)


def _line_of(text: str, path) -> int | None:
    """Best-effort line number of the last named key in ``path``."""
    names = [p for p in path if isinstance(p, str)]
    if not names:
        return None
    needle = json.dumps(names[-1])
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


@dataclass
class Instance:
    name: str
    d: int
    delta: LatticePolytope
    delta_dual: LatticePolytope
    lam: HeightFunction
    nu: HeightFunction
    seed: int
    sha256: str
    lambda_auto: bool
    nu_auto: bool
    options: dict = field(default_factory=dict)

    @cached_property
    def central_S(self) -> Subdivision:
        return require_generic(self.delta, self.lam)

    @cached_property
    def central_T(self) -> Subdivision:
        return require_generic(self.delta_dual, self.nu)

    @cached_property
    def S(self) -> Subdivision:
        return boundary_restriction(self.central_S)

    @cached_property
    def T(self) -> Subdivision:
        return boundary_restriction(self.central_T)

    def option(self, key, default):
        return self.options.get(key, default)


def _heights(raw, P: LatticePolytope, d: int, name: str) -> HeightFunction:
    pts = set(lattice_points(P))
    vals = {}
    for key, h in raw.items():
        p = parse_point(key, d, f"{name}[{key!r}]")
        if p not in pts:
            raise InstanceError(f"{p} is not a lattice point of the polytope", f"{name}[{key!r}]")
        vals[p] = h
    origin = (0,) * d
    if origin not in vals:
        raise InstanceError("heights must include the origin", name)
    missing = [v for v in P.vertices if tuple(v) not in vals]
    if missing:
        raise InstanceError(f"heights missing at vertex {missing[0]}", name)
    return HeightFunction(vals)


def load_instance_text(text: str, seed: int | None = None) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(e.msg, f"line {e.lineno}, column {e.colno}") from None
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        line = _line_of(text, list(e.absolute_path))
        where = f"field {path}" + (f" (line {line})" if line else "")
        raise InstanceError(e.message, where) from None
    d = data["d"]
    for key in ("delta_vertices", "delta_dual_vertices"):
        for i, v in enumerate(data.get(key, [])):
            if len(v) != d:
                raise InstanceError(f"vertex has {len(v)} coordinates, expected {d}", f"field {key}/{i}")
    delta = LatticePolytope.from_points([tuple(v) for v in data["delta_vertices"]])
    if not delta.is_full_dimensional:
        raise InstanceError("polytope is not full dimensional", "field delta_vertices")
    bad = fractional_dual_vertices(delta)
    if bad:
        pretty = "(" + ", ".join(str(x) for x in bad[0]) + ")"
        raise ValidationError(f"polytope is not reflexive: dual vertex {pretty} is not integral")
    dual = polar_dual(delta)
    if "delta_dual_vertices" in data:
        given = LatticePolytope.from_points([tuple(v) for v in data["delta_dual_vertices"]])
        if sorted(given.vertices) != sorted(dual.vertices):
            raise InstanceError("does not match the polar dual of delta_vertices", "field delta_dual_vertices")
    seed = data.get("seed", 0) if seed is None else seed
    opts = data.get("options", {})
    raw_l, raw_n = data.get("lambda", "auto"), data.get("nu", "auto")
    lam = (
        generic_heights(delta, seed, opts.get("lambda_points", "all"))
        if raw_l == "auto"
        else _heights(raw_l, delta, d, "lambda")
    )
    nu = (
        generic_heights(dual, seed + 1, opts.get("nu_points", "all"))
        if raw_n == "auto"
        else _heights(raw_n, dual, d, "nu")
    )
    inst = Instance(
        name=data.get("name", "instance"),
        d=d,
        delta=delta,
        delta_dual=dual,
        lam=lam,
        nu=nu,
        seed=seed,
        sha256=hashlib.sha256(text.encode()).hexdigest(),
        lambda_auto=raw_l == "auto",
        nu_auto=raw_n == "auto",
        options=opts,
    )
    for label, get in (("lambda", lambda: inst.central_S), ("nu", lambda: inst.central_T)):
        try:
            get()
        except NotGenericHeights as e:
            raise NotGenericHeights(f"{label}: {e}") from None
    return inst


def load_instance(path: str | Path, seed: int | None = None) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InstanceError(str(e.strerror or e), str(path)) from None
    return load_instance_text(text, seed)


def heights_to_json(h: HeightFunction) -> dict:
    return {format_point(p): int(v) for p, v in sorted(h.values.items())}
