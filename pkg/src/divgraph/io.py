"""File formats.

Graph file: JSON with ``name`` (string), ``vertices`` (array of strings)
and ``edges`` (array of [u, v, multiplicity]); multiplicity defaults to 1.

Divisor file: JSON object mapping vertex names to integer coefficients;
omitted vertices mean 0.

Morphism file: JSON with ``source`` and ``target`` (inline graph object,
graph file path, or family spec), ``vertex_map`` (object), ``edge_map``
(array of [source_edge, target_edge] with edges as [u, v] or [u, v, copy]),
optional ``local_degree`` (object, default 1 per vertex) and optional
``marked_legs`` (object; branch/ramification marks echoed in reports).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from . import families
from .divisors import Divisor
from .errors import InvalidInputError
from .graphs import Multigraph, build_graph
from .harmonic import GraphMorphism, build_morphism


def _load_json(path: Union[str, Path]):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}")


def graph_from_doc(doc: dict) -> tuple[str, Multigraph]:
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise InvalidInputError("graph document needs 'vertices' and 'edges' fields")
    name = str(doc.get("name", "graph"))
    edges = []
    for entry in doc["edges"]:
        if not isinstance(entry, (list, tuple)) or len(entry) not in (2, 3):
            raise InvalidInputError(f"edge entry {entry!r} is not [u, v] or [u, v, mult]")
        edges.append(tuple(entry))
    return name, build_graph(doc["vertices"], edges)


def graph_to_doc(graph: Multigraph, name: str) -> dict:
    return {
        "name": name,
        "vertices": list(graph.vertices),
        "edges": [[u, v, m] for u, v, m in graph.edges],
    }


def load_graph(path: Union[str, Path]) -> tuple[str, Multigraph]:
    return graph_from_doc(_load_json(path))


def resolve_graph(ref: str, base_dir: Union[str, Path, None] = None) -> tuple[str, Multigraph]:
    """Resolve a graph reference: an existing file path wins, then a family
    spec such as ``banana(3)``."""
    candidate = Path(ref)
    if base_dir is not None and not candidate.is_absolute():
        based = Path(base_dir) / candidate
        if based.exists():
            candidate = based
    if candidate.exists():
        return load_graph(candidate)
    if families.is_family_spec(ref):
        return ref, families.from_spec(ref)
    raise InvalidInputError(f"{ref!r} is neither a readable graph file nor a family spec")


def load_divisor(path: Union[str, Path], graph: Multigraph) -> Divisor:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise InvalidInputError("divisor document must be a vertex->coefficient object")
    values = {}
    for key, val in doc.items():
        if not isinstance(val, int):
            raise InvalidInputError(f"divisor coefficient for {key!r} must be an integer")
        values[str(key)] = val
    return Divisor.from_map(graph, values)


def divisor_to_doc(divisor: Divisor) -> dict[str, int]:
    return divisor.to_map()


def _resolve_graph_field(doc: dict, field: str, base_dir) -> tuple[str, Multigraph]:
    if field not in doc:
        raise InvalidInputError(f"morphism document needs a {field!r} field")
    ref = doc[field]
    if isinstance(ref, dict):
        return graph_from_doc(ref)
    return resolve_graph(str(ref), base_dir)


def load_morphism(path: Union[str, Path]) -> GraphMorphism:
    doc = _load_json(path)
    base_dir = Path(path).parent
    _, source = _resolve_graph_field(doc, "source", base_dir)
    _, target = _resolve_graph_field(doc, "target", base_dir)
    if "vertex_map" not in doc or "edge_map" not in doc:
        raise InvalidInputError("morphism document needs 'vertex_map' and 'edge_map'")
    edge_map = []
    for entry in doc["edge_map"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise InvalidInputError(
                f"edge_map entry {entry!r} is not [source_edge, target_edge]"
            )
        edge_map.append((entry[0], entry[1]))
    return build_morphism(
        source,
        target,
        vertex_map=doc["vertex_map"],
        edge_map=edge_map,
        local_degree=doc.get("local_degree"),
        marked_legs=doc.get("marked_legs"),
    )
