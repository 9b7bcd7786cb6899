"""JSON file formats: groups, graphs, and result reports.

Permutations are 0-based image arrays; group orders are decimal strings so
that exact big integers survive the round trip.  Loading re-validates every
invariant (table laws, centrality, almost simplicity).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .cayley import ColorCayleyGraph, build_central_cayley
from .errors import InternalError, InvalidInputError
from .group import ClassPartition, FiniteGroup
from .iso import IsoResult
from .perm import PermutationGroup

PathLike = Union[str, Path]

EMIT_CHAIN_RECOUNT_LIMIT = 10**8


def _read_json(path: PathLike) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read JSON from {path}: {exc}") from exc


def _write_json(path: PathLike, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


# -- groups -----------------------------------------------------------------


def group_to_dict(G: FiniteGroup) -> dict:
    out = {"order": G.order, "table": G.table.tolist()}
    if G.names is not None:
        out["names"] = list(G.names)
    return out


def group_from_dict(data: dict) -> FiniteGroup:
    if not isinstance(data, dict) or "table" not in data:
        raise InvalidInputError("group file needs a 'table' field")
    table = data["table"]
    if "order" in data and len(table) != int(data["order"]):
        raise InvalidInputError("declared order does not match the table")
    return FiniteGroup(table, names=data.get("names"), check=True)


def save_group(G: FiniteGroup, path: PathLike) -> None:
    _write_json(path, group_to_dict(G))


def load_group(path: PathLike) -> FiniteGroup:
    return group_from_dict(_read_json(path))


# -- graphs -----------------------------------------------------------------


def graph_to_dict(gamma: ColorCayleyGraph, inline_group: bool = True) -> dict:
    return {
        "group": group_to_dict(gamma.group),
        "colors": [list(c) for c in gamma.partition.classes],
    }


def graph_from_dict(data: dict, base_dir: Optional[Path] = None) -> ColorCayleyGraph:
    if not isinstance(data, dict) or "colors" not in data or "group" not in data:
        raise InvalidInputError("graph file needs 'group' and 'colors' fields")
    grp = data["group"]
    if isinstance(grp, str):
        path = Path(grp)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        G = load_group(path)
    else:
        G = group_from_dict(grp)
    colors = data["colors"]
    if not colors or list(colors[0]) != [0]:
        raise InvalidInputError("color class 0 must be exactly [0]")
    partition = ClassPartition(tuple(tuple(int(x) for x in c) for c in colors))
    return build_central_cayley(G, partition)


def save_graph(gamma: ColorCayleyGraph, path: PathLike) -> None:
    _write_json(path, graph_to_dict(gamma))


def load_graph(path: PathLike) -> ColorCayleyGraph:
    return graph_from_dict(_read_json(path), base_dir=Path(path).parent)


# -- results ------------------------------------------------------------------


def result_to_dict(result: IsoResult) -> dict:
    return {
        "verdict": result.verdict,
        "representative": (
            result.representative.tolist() if result.representative is not None else None
        ),
        "aut_generators": [g.tolist() for g in result.aut_generators],
        "aut_order": str(result.aut_order),
        "decided_at_step": result.decided_at_step,
    }


def result_from_dict(data: dict) -> IsoResult:
    rep = data.get("representative")
    return IsoResult(
        data["verdict"],
        np.asarray(rep, dtype=np.int32) if rep is not None else None,
        [np.asarray(g, dtype=np.int32) for g in data.get("aut_generators", [])],
        int(data["aut_order"]),
        int(data.get("decided_at_step", 5)),
    )


def verify_emitted_order(result: IsoResult, degree: int) -> str:
    """Recompute the order of the emitted generators before writing a report.

    Small groups get a full independent stabilizer chain.  Beyond the recount
    limit the chain is built with the claimed order as its stopping target:
    reaching it proves the generators reach at least the claimed order (the
    transversal product never exceeds the generated group's order), which is
    the direction a fabricated order would break.
    """
    if result.aut_order <= 1 or not result.aut_generators:
        if result.aut_order > 1:
            raise InternalError("nontrivial order with no generators")
        return "chain"
    if result.aut_order <= EMIT_CHAIN_RECOUNT_LIMIT:
        got = PermutationGroup(result.aut_generators, degree).order
        if got != result.aut_order:
            raise InternalError(
                f"emitted aut_order {result.aut_order} but chain recount gives {got}"
            )
        return "chain"
    got = PermutationGroup(
        result.aut_generators, degree, known_order=result.aut_order
    ).order
    if got != result.aut_order:
        raise InternalError("known-order chain failed to certify the emitted order")
    return "chain-lower-bound"


def report_to_dict(
    result: IsoResult,
    *,
    n: int,
    m: Optional[int] = None,
    section_kind: Optional[str] = None,
    fixture: Optional[dict] = None,
    elapsed: Optional[float] = None,
) -> dict:
    recount = verify_emitted_order(result, n)
    out = result_to_dict(result)
    out.update(
        {
            "n": n,
            "m": m,
            "type": section_kind,
            "timing_seconds": round(elapsed, 6) if elapsed is not None else None,
            "order_verification": recount,
            "fixture": fixture or {},
        }
    )
    return out


def emit_report(result: IsoResult, path: PathLike, **meta) -> dict:
    payload = report_to_dict(result, **meta)
    _write_json(path, payload)
    return payload
