"""The JSON instance format shared by the catalog, the demos and the CLI.

An instance file is one JSON object.  Fields, in canonical order::

    name        optional string
    ground      {"size": n, "labels": [...]}           labels optional
    hypergraph  {"edges": [[v_1, ..., v_r], ...]}      optional
    matroids    [{"kind": "uniform", "rank": 2}
                 {"kind": "partition", "parts": [[0, 1], [2]], "capacities": [1, 1]}
                 {"kind": "explicit", "table": [0, 1, ...]}
                 {"kind": "star", "side": 0}]          star needs the hypergraph
    b           "ones" or one block per matroid:
                 {"kind": "ones"} | {"kind": "interior", "target": "1"}
                 {"kind": "max", "weights": [...]} | {"kind": "table", "values": [...]}
    a           "ones" or a vector of rationals
    k           rational
    functions   [[rational, ...], ...]                 optional
    sets        [subset, ...]                          optional (common independent sets)
    family      [subset, ...]                          optional (for the chain tools)

Rationals are written as ``"p/q"`` strings (plain integers are accepted on
input).  Subsets are sorted element lists or hex mask strings such as
``"0x1f"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InputError
from .lp import rational
from .matroids import (
    ExplicitMatroid,
    GroundSet,
    Hypergraph,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    elements_of,
    mask_of,
    star_matroids,
)
from .setfunctions import PDSTuple, SetFunction, interior_pds

FIELD_ORDER = ("name", "ground", "hypergraph", "matroids", "b", "a", "k", "functions", "sets", "family")


def fmt(x) -> str:
    """Exact rational text, always ``p/q``."""
    q = rational(x)
    return f"{q.numerator}/{q.denominator}"


def parse_subset(value, ground: GroundSet) -> int:
    if isinstance(value, str):
        try:
            mask = int(value, 16)
        except ValueError:
            raise InputError(f"bad subset mask {value!r}") from None
        return ground.check(mask)
    if isinstance(value, list):
        if any(not isinstance(x, int) for x in value):
            raise InputError(f"subset elements must be integers: {value!r}")
        if len(set(value)) != len(value):
            raise InputError(f"repeated element in subset {value!r}")
        return ground.check(mask_of(value))
    raise InputError(f"a subset is an element list or a hex mask string, got {value!r}")


def _rational(value, what: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{what} must be an integer or a 'p/q' string, got {value!r}")
    return rational(value)


@dataclass
class Instance:
    ground: GroundSet
    matroids: list[Matroid]
    b: PDSTuple | None = None
    a: tuple[Fraction, ...] | None = None
    k: Fraction | None = None
    functions: list[tuple[Fraction, ...]] = field(default_factory=list)
    sets: list[int] = field(default_factory=list)
    family: list[int] = field(default_factory=list)
    hypergraph: Hypergraph | None = None
    name: str | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.ground.size

    def system(self):
        from .polytopes import IntersectionSystem

        if not self.matroids:
            raise InputError("instance has no matroids")
        return IntersectionSystem(self.matroids, self.b)

    def require_k(self) -> Fraction:
        if self.k is None:
            raise InputError("instance has no threshold k")
        return self.k

    def complex_spec(self):
        from .collapse import ComplexSpec

        return ComplexSpec(self.system(), self.a, self.require_k())

    def rainbow_instance(self):
        from .rainbow import RainbowInstance

        if not self.functions:
            raise InputError("instance has no functions")
        return RainbowInstance(self.system(), self.require_k(), self.functions, self.hypergraph, self.name)


def _parse_matroid(block: dict, ground: GroundSet, hg: Hypergraph | None, validate: bool) -> Matroid:
    kind = block.get("kind")
    if kind == "uniform":
        return UniformMatroid(ground, int(block["rank"]))
    if kind == "partition":
        parts = [parse_subset(p, ground) for p in block["parts"]]
        return PartitionMatroid(ground, parts, block.get("capacities"))
    if kind == "explicit":
        return ExplicitMatroid(ground, block["table"], validate=validate)
    if kind == "star":
        if hg is None:
            raise InputError("a star matroid needs the hypergraph block")
        side = int(block["side"])
        if not 0 <= side < hg.r:
            raise InputError(f"star side {side} out of range for r={hg.r}")
        return star_matroids(hg)[side]
    raise InputError(f"unknown matroid kind {kind!r}")


def parse_function(block, n: int) -> SetFunction:
    if block == "ones" or block.get("kind") == "ones":
        return SetFunction.ones(n)
    kind = block.get("kind")
    if kind == "interior":
        target = block.get("target")
        return interior_pds(n, None if target is None else _rational(target, "target"))
    if kind == "max":
        w = [_rational(x, "weight") for x in block["weights"]]
        if len(w) != n:
            raise InputError(f"max weights need {n} entries")
        return SetFunction.max_of(w)
    if kind == "table":
        return SetFunction(n, [_rational(x, "table value") for x in block["values"]])
    raise InputError(f"unknown set function kind {kind!r}")


def parse_instance(data: dict, validate: bool = True) -> Instance:
    """Build domain objects from a decoded instance object.

    With ``validate=False`` explicit rank tables and ``b`` tuples are
    accepted unchecked, so that ``check`` can report on them.
    """
    if not isinstance(data, dict):
        raise InputError("an instance file holds one JSON object")
    unknown = set(data) - set(FIELD_ORDER)
    if unknown:
        raise InputError(f"unknown instance fields: {sorted(unknown)}")
    try:
        hg = None
        if "hypergraph" in data:
            hg = Hypergraph(tuple(tuple(e) for e in data["hypergraph"]["edges"]))
        if "ground" in data:
            g = data["ground"]
            labels = tuple(g["labels"]) if g.get("labels") else None
            ground = GroundSet(int(g["size"]), labels)
        elif hg is not None:
            ground = GroundSet(len(hg.edges))
        else:
            raise InputError("instance needs a ground block")
        if hg is not None and len(hg.edges) != ground.size:
            raise InputError("hypergraph edge count must equal the ground set size")
        matroids = [_parse_matroid(m, ground, hg, validate) for m in data.get("matroids", [])]
        b = None
        if "b" in data and data["b"] != "ones":
            blocks = data["b"]
            if matroids and len(blocks) != len(matroids):
                raise InputError("need one b block per matroid")
            b = PDSTuple([parse_function(x, ground.size) for x in blocks], validate=validate)
        a = None
        if "a" in data and data["a"] != "ones":
            a = tuple(_rational(x, "a entry") for x in data["a"])
            if len(a) != ground.size:
                raise InputError(f"a needs {ground.size} entries")
        k = _rational(data["k"], "k") if "k" in data else None
        functions = []
        for vec in data.get("functions", []):
            f = tuple(_rational(x, "function value") for x in vec)
            if len(f) != ground.size:
                raise InputError(f"function vectors need {ground.size} entries")
            functions.append(f)
        sets = [parse_subset(s, ground) for s in data.get("sets", [])]
        family = [parse_subset(s, ground) for s in data.get("family", [])]
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed instance: {exc!r}") from None
    return Instance(ground, matroids, b, a, k, functions, sets, family, hg, data.get("name"), data)


def load_instance(path: str | Path, validate: bool = True) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_instance(data, validate)


def _matroid_block(m: Matroid, hg: Hypergraph | None) -> dict:
    if hg is not None:
        for side, star in enumerate(star_matroids(hg)):
            if star == m:
                return {"kind": "star", "side": side}
    return m.describe()


def _function_block(f: SetFunction) -> dict:
    if all(x == 1 for x in f.table):
        return {"kind": "ones"}
    return {"kind": "table", "values": [fmt(x) for x in f.table]}


def instance_to_dict(inst: Instance) -> dict:
    """Canonical encoding; keys appear in ``FIELD_ORDER``."""
    out: dict[str, Any] = {}
    if inst.name:
        out["name"] = inst.name
    g: dict[str, Any] = {"size": inst.ground.size}
    if inst.ground.labels:
        g["labels"] = list(inst.ground.labels)
    out["ground"] = g
    if inst.hypergraph is not None:
        out["hypergraph"] = {"edges": [list(e) for e in inst.hypergraph.edges]}
    if inst.matroids:
        out["matroids"] = [_matroid_block(m, inst.hypergraph) for m in inst.matroids]
    if inst.b is not None and not all(x == 1 for f in inst.b for x in f.table):
        out["b"] = [_function_block(f) for f in inst.b]
    else:
        out["b"] = "ones"
    out["a"] = "ones" if inst.a is None or all(x == 1 for x in inst.a) else [fmt(x) for x in inst.a]
    if inst.k is not None:
        out["k"] = fmt(inst.k)
    if inst.functions:
        out["functions"] = [[fmt(x) for x in f] for f in inst.functions]
    if inst.sets:
        out["sets"] = [elements_of(s) for s in inst.sets]
    if inst.family:
        out["family"] = [elements_of(s) for s in inst.family]
    return out


def to_text(obj: dict) -> str:
    """Canonical text for instances, reports and certificates."""
    def emit(value, indent: int) -> str:
        pad = " " * indent
        flat = json.dumps(value)
        if indent and len(flat) + indent <= 76:
            return flat
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [f'{pad} {json.dumps(k)}: {emit(v, indent + 1)}' for k, v in value.items()]
            return "{\n" + ",\n".join(items) + f"\n{pad}}}"
        if isinstance(value, list):
            if all(not isinstance(x, (list, dict)) for x in value):
                return flat
            items = [f"{pad} {emit(v, indent + 1)}" for v in value]
            return "[\n" + ",\n".join(items) + f"\n{pad}]"
        return flat

    return emit(obj, 0) + "\n"
