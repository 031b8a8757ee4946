"""Resumable batch runs of the existence search over graph families.

A batch config names built-in family graphs and a (d, r) grid; each unit of
work is one (graph, d, r) search.  Results append to a JSON-lines file, one
record per unit, keyed so that re-running an identical config skips all
completed work.  Units can run in parallel; records are still written in
config order, so the output file is deterministic apart from the elapsed
time field.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Union

from . import __version__
from .brill_noether import (
    RR_SHORTCUT,
    SearchLimits,
    bn_bound,
    find_gdr,
    rho,
)
from .divisors import rank_at_least
from .errors import DivGraphError, InvalidInputError
from .graphs import Multigraph, genus
from .io import resolve_graph


def serialize_bound(bound) -> Union[int, str]:
    return "rr-shortcut" if bound is RR_SHORTCUT else bound


def unit_key(graph_ref: str, d: int, r: int, limits: SearchLimits) -> str:
    return (
        f"{graph_ref}|d={d}|r={r}"
        f"|max_k={limits.max_k}|max_classes={limits.max_classes}"
    )


def expand_units(config: dict, base_dir=None) -> list[tuple[str, Multigraph, int, int]]:
    """Resolve the config into concrete (ref, graph, d, r) units, keeping
    only instances with rho >= 0 and preserving config order."""
    if "graphs" not in config:
        raise InvalidInputError("batch config needs a 'graphs' list")
    params = config.get("params", {})
    if "pairs" in params:
        pairs = [(int(d), int(r)) for d, r in params["pairs"]]
    else:
        d_max = int(params.get("d_max", 4))
        r_max = int(params.get("r_max", 2))
        pairs = [(d, r) for r in range(r_max + 1) for d in range(d_max + 1)]
    units = []
    for ref in config["graphs"]:
        _, graph = resolve_graph(str(ref), base_dir)
        g = genus(graph)
        for d, r in pairs:
            if rho(g, d, r) >= 0:
                units.append((str(ref), graph, d, r))
    return units


def run_unit(args: tuple[str, Multigraph, int, int, SearchLimits]) -> dict:
    """Run one search unit and build its record.  Failures become error
    records, never silent skips."""
    ref, graph, d, r, limits = args
    g = genus(graph)
    record: dict = {
        "key": unit_key(ref, d, r, limits),
        "graph": ref,
        "genus": g,
        "d": d,
        "r": r,
    }
    start = time.perf_counter()
    try:
        record["rho"] = rho(g, d, r)
        record["theorem_bound"] = serialize_bound(bn_bound(g, d, r))
        result = find_gdr(graph, d, r, limits)
        witness_map = result.witness.to_map() if result.witness is not None else None
        verified = (
            result.witness is not None
            and result.witness.degree == d
            and rank_at_least(result.witness.graph, result.witness, r)
        )
        record.update(
            found=result.found,
            k=result.k,
            witness=witness_map,
            classes_examined=result.classes_examined,
            exhausted=result.exhausted,
            limit_hit=result.limit_hit,
            verified=verified if result.found else None,
        )
    except DivGraphError as exc:
        record.update(error=exc.slug, message=str(exc))
    record["elapsed_ms"] = round(1000 * (time.perf_counter() - start), 3)
    record["engine_version"] = __version__
    return record


def load_recorded_keys(out_path: Union[str, Path]) -> set[str]:
    path = Path(out_path)
    keys: set[str] = set()
    if path.exists():
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                keys.add(json.loads(line)["key"])
            except (json.JSONDecodeError, KeyError):
                raise InvalidInputError(f"corrupt record in {out_path}: {line[:80]}")
    return keys


def batch_run(
    config: dict,
    out_path: Union[str, Path],
    jobs: int = 1,
    base_dir=None,
) -> dict:
    """Run every unit of the config that has no record yet.

    Appends records to ``out_path`` in config order and returns a summary.
    ``jobs`` > 1 runs units in a process pool; the file order is unchanged.
    """
    limits_cfg = config.get("limits", {})
    limits = SearchLimits(
        max_k=limits_cfg.get("max_k"),
        max_classes=limits_cfg.get("max_classes"),
        jobs=1,
    )
    units = expand_units(config, base_dir)
    done = load_recorded_keys(out_path)
    todo = [
        (ref, graph, d, r)
        for ref, graph, d, r in units
        if unit_key(ref, d, r, limits) not in done
    ]

    summary = {
        "total_units": len(units),
        "skipped": len(units) - len(todo),
        "new_units": len(todo),
        "found": 0,
        "not_found": 0,
        "errors": 0,
    }
    if not todo:
        return summary

    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    work = [(ref, graph, d, r, limits) for ref, graph, d, r in todo]

    def write_all(records) -> None:
        with path.open("a", encoding="utf-8") as sink:
            for record in records:
                sink.write(json.dumps(record, sort_keys=True) + "\n")
                sink.flush()
                if "error" in record:
                    summary["errors"] += 1
                elif record["found"]:
                    summary["found"] += 1
                else:
                    summary["not_found"] += 1

    if jobs <= 1:
        write_all(map(run_unit, work))
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            write_all(pool.map(run_unit, work))
    return summary
