"""JSON instance documents and random instance families.

Document layout (``schema_version`` 1)::

    {
      "schema_version": 1,
      "n": 3,
      "function": {"kind": "cut", "edges": [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0]]},
      "matroid": {"kind": "uniform", "k": 1},
      "metadata": {"name": "triangle"}
    }

Function kinds: ``cut`` (edges ``[u, v, w]``), ``coverage`` (``sets`` per
element, optional universe ``weights``), ``facility`` (``benefits`` as
clients x n), ``modular`` (``weights``). Matroid kinds: ``uniform`` (``k``),
``partition`` (``parts`` per element, ``capacities`` per part), ``graphic``
(``num_vertices``, one ``[u, v]`` edge per element).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .functions import (
    CoverageFunction,
    CutFunction,
    FacilityLocationFunction,
    ModularFunction,
    SubmodularOracle,
)
from .matroids import GraphicMatroid, MatroidOracle, PartitionMatroid, UniformMatroid

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_WEIGHT = 1e9

_weight = {"type": "number", "minimum": 0, "maximum": MAX_WEIGHT}
_index = {"type": "integer", "minimum": 0}

FUNCTION_SCHEMAS: dict[str, dict] = {
    "cut": {
        "type": "object",
        "required": ["kind", "edges"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "cut"},
            "edges": {
                "type": "array",
                "items": {"type": "array", "prefixItems": [_index, _index, _weight], "minItems": 3, "maxItems": 3},
            },
        },
    },
    "coverage": {
        "type": "object",
        "required": ["kind", "sets"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "coverage"},
            "sets": {"type": "array", "items": {"type": "array", "items": _index}},
            "weights": {"type": "array", "items": _weight},
        },
    },
    "facility": {
        "type": "object",
        "required": ["kind", "benefits"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "facility"},
            "benefits": {"type": "array", "minItems": 1, "items": {"type": "array", "items": _weight}},
        },
    },
    "modular": {
        "type": "object",
        "required": ["kind", "weights"],
        "additionalProperties": False,
        "properties": {"kind": {"const": "modular"}, "weights": {"type": "array", "items": _weight}},
    },
}

MATROID_SCHEMAS: dict[str, dict] = {
    "uniform": {
        "type": "object",
        "required": ["kind", "k"],
        "additionalProperties": False,
        "properties": {"kind": {"const": "uniform"}, "k": _index},
    },
    "partition": {
        "type": "object",
        "required": ["kind", "parts", "capacities"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "partition"},
            "parts": {"type": "array", "items": _index},
            "capacities": {"type": "array", "minItems": 1, "items": _index},
        },
    },
    "graphic": {
        "type": "object",
        "required": ["kind", "num_vertices", "edges"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "graphic"},
            "num_vertices": {"type": "integer", "minimum": 1},
            "edges": {
                "type": "array",
                "items": {"type": "array", "prefixItems": [_index, _index], "minItems": 2, "maxItems": 2},
            },
        },
    },
}

DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "n", "function", "matroid"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "n": {"type": "integer", "minimum": 1},
        "function": {"type": "object", "required": ["kind"], "properties": {"kind": {"enum": sorted(FUNCTION_SCHEMAS)}}},
        "matroid": {"type": "object", "required": ["kind"], "properties": {"kind": {"enum": sorted(MATROID_SCHEMAS)}}},
        "metadata": {"type": "object"},
    },
}


class InstanceError(ValueError):
    """Malformed or invalid instance document.

    ``location`` is ``line L, column C`` for syntax errors and a field path
    such as ``function.edges[2][2]`` for validation errors.
    """

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class InstanceParseError(InstanceError):
    pass


class InstanceValidationError(InstanceError):
    pass


@dataclass
class Instance:
    function: SubmodularOracle
    matroid: MatroidOracle
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.function.n

    def __iter__(self):
        return iter((self.function, self.matroid))

    def to_dict(self) -> dict[str, Any]:
        return dump_instance(self.function, self.matroid, self.metadata)


def _path(prefix: str, parts) -> str:
    out = prefix
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out.lstrip(".")


def _validate(doc: Any, schema: dict, prefix: str = "") -> None:
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise InstanceValidationError(err.message, _path(prefix, err.absolute_path) or "<document>")


def _check_length(values: list, n: int, where: str) -> None:
    if len(values) != n:
        raise InstanceValidationError(f"expected {n} entries, found {len(values)}", where)


def parse_instance(doc: Any) -> Instance:
    _validate(doc, DOCUMENT_SCHEMA)
    n = doc["n"]
    fdoc, mdoc = doc["function"], doc["matroid"]
    _validate(fdoc, FUNCTION_SCHEMAS[fdoc["kind"]], "function")
    _validate(mdoc, MATROID_SCHEMAS[mdoc["kind"]], "matroid")

    kind = fdoc["kind"]
    if kind == "cut":
        for j, (u, v, _) in enumerate(fdoc["edges"]):
            for slot, end in enumerate((u, v)):
                if end >= n:
                    raise InstanceValidationError(f"vertex {end} outside 0..{n - 1}", f"function.edges[{j}][{slot}]")
        f: SubmodularOracle = CutFunction(n, fdoc["edges"])
    elif kind == "coverage":
        _check_length(fdoc["sets"], n, "function.sets")
        universe = 1 + max((max(s) for s in fdoc["sets"] if s), default=-1)
        weights = fdoc.get("weights")
        if weights is not None and len(weights) < universe:
            raise InstanceValidationError(
                f"{len(weights)} weights but items up to {universe - 1} are covered", "function.weights"
            )
        f = CoverageFunction(fdoc["sets"], weights)
    elif kind == "facility":
        for j, row in enumerate(fdoc["benefits"]):
            _check_length(row, n, f"function.benefits[{j}]")
        f = FacilityLocationFunction(fdoc["benefits"])
    else:
        _check_length(fdoc["weights"], n, "function.weights")
        f = ModularFunction(fdoc["weights"])

    kind = mdoc["kind"]
    if kind == "uniform":
        M: MatroidOracle = UniformMatroid(n, mdoc["k"])
    elif kind == "partition":
        _check_length(mdoc["parts"], n, "matroid.parts")
        caps = mdoc["capacities"]
        for i, p in enumerate(mdoc["parts"]):
            if p >= len(caps):
                raise InstanceValidationError(f"part {p} has no capacity", f"matroid.parts[{i}]")
        sizes = np.bincount(mdoc["parts"], minlength=len(caps))
        for p, (cap, size) in enumerate(zip(caps, sizes)):
            if cap > size:
                log.warning("matroid.capacities[%d]: capacity %d exceeds part size %d", p, cap, size)
        M = PartitionMatroid(mdoc["parts"], caps)
    else:
        _check_length(mdoc["edges"], n, "matroid.edges")
        V = mdoc["num_vertices"]
        for j, (u, v) in enumerate(mdoc["edges"]):
            for slot, end in enumerate((u, v)):
                if end >= V:
                    raise InstanceValidationError(f"vertex {end} outside 0..{V - 1}", f"matroid.edges[{j}][{slot}]")
        M = GraphicMatroid(V, mdoc["edges"])
    return Instance(f, M, dict(doc.get("metadata", {})))


def load_instance(source: str | Path) -> Instance:
    """Load from a file path or from the JSON text itself."""
    if isinstance(source, Path) or not str(source).lstrip().startswith("{"):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = str(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return parse_instance(doc)


def dump_instance(f: SubmodularOracle, M: MatroidOracle, metadata: dict | None = None) -> dict[str, Any]:
    if isinstance(f, CutFunction):
        fdoc: dict[str, Any] = {"kind": "cut", "edges": [[u, v, w] for u, v, w in f.edges]}
    elif isinstance(f, CoverageFunction):
        fdoc = {"kind": "coverage", "sets": [list(s) for s in f.sets], "weights": f.weights.tolist()}
    elif isinstance(f, FacilityLocationFunction):
        fdoc = {"kind": "facility", "benefits": f.benefits.tolist()}
    elif isinstance(f, ModularFunction):
        fdoc = {"kind": "modular", "weights": f.weights.tolist()}
    else:
        raise TypeError(f"cannot serialize function of kind {f.kind!r}")
    if isinstance(M, UniformMatroid):
        mdoc: dict[str, Any] = {"kind": "uniform", "k": M.k}
    elif isinstance(M, PartitionMatroid):
        mdoc = {"kind": "partition", "parts": M.parts.tolist(), "capacities": M.capacities.tolist()}
    elif isinstance(M, GraphicMatroid):
        mdoc = {"kind": "graphic", "num_vertices": M.num_vertices, "edges": [list(e) for e in M.edges]}
    else:
        raise TypeError(f"cannot serialize matroid of kind {M.kind!r}")
    doc = {"schema_version": SCHEMA_VERSION, "n": f.n, "function": fdoc, "matroid": mdoc}
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


# Random families --------------------------------------------------------

# Weights are multiples of 2^-10, so every sum of them is exact and an
# oracle returns the same float whatever the batch shape or summation order.
_GRID = 1024.0


def _dyadic(x):
    return np.round(np.asarray(x) * _GRID) / _GRID


def random_cut(n: int, rng: np.random.Generator, density: float = 0.5, max_weight: float = 10.0) -> CutFunction:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                edges.append((u, v, float(_dyadic(rng.uniform(1.0, max_weight)))))
    return CutFunction(n, edges)


def random_coverage(n: int, rng: np.random.Generator, universe: int | None = None, per_set: int = 4) -> CoverageFunction:
    universe = universe or 2 * n
    sets = [sorted(rng.choice(universe, size=min(per_set, universe), replace=False).tolist()) for _ in range(n)]
    weights = _dyadic(rng.uniform(0.5, 5.0, size=universe))
    return CoverageFunction(sets, weights.tolist())


def random_facility(n: int, rng: np.random.Generator, clients: int | None = None) -> FacilityLocationFunction:
    clients = clients or 2 * n
    return FacilityLocationFunction(_dyadic(rng.uniform(0.0, 10.0, size=(clients, n))))


def random_partition(n: int, rng: np.random.Generator, num_parts: int = 3, capacity: int = 1) -> PartitionMatroid:
    parts = np.arange(n) % num_parts
    rng.shuffle(parts)
    return PartitionMatroid(parts.tolist(), [capacity] * num_parts)


def random_instance(family: str, n: int, seed: int, k: int = 3) -> Instance:
    """Instance of the named family with a uniform (even seed) or partition (odd seed) matroid."""
    rng = np.random.default_rng(seed)
    if family == "cut":
        f: SubmodularOracle = random_cut(n, rng)
    elif family == "coverage":
        f = random_coverage(n, rng)
    elif family == "facility":
        f = random_facility(n, rng)
    else:
        raise ValueError(f"unknown instance family {family!r}")
    if seed % 2 == 0:
        M: MatroidOracle = UniformMatroid(n, k)
    else:
        M = random_partition(n, rng, num_parts=k)
    return Instance(f, M, {"family": family, "seed": seed})
