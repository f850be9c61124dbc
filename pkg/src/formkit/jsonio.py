"""JSON schemas for lattices, forms, orders, operators, and instance data.

Generated instances and hand-written files share these schemas, so the CLI
verifies both identically. Composition keys are "g;f" (g after f); hom-set
keys are "X,Y", so object names may not contain commas and morphism names
may not contain semicolons.
"""

from __future__ import annotations

import json
from typing import Any

from .forms import CategoryPresentation, FormInstance
from .groups import FiniteGroup
from .lattice import FiniteLattice, MonotoneMap
from .partitions import Partition
from .topogenous import ClosureOperator, InteriorOperator, TopogenousOrder
from .topologies import FiniteTopology


class SchemaError(ValueError):
    """Malformed input document; the message carries the offending path."""


def _need(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    return doc[key]


# -- lattice ------------------------------------------------------------------


def lattice_to_dict(lat: FiniteLattice) -> dict:
    out = {"size": lat.size, "leq": lat.leq_matrix()}
    if lat.labels:
        out["labels"] = list(lat.labels)
    return out


def lattice_from_dict(doc: dict, where: str = "lattice") -> FiniteLattice:
    size = _need(doc, "size", where)
    leq = _need(doc, "leq", where)
    if not isinstance(leq, list) or len(leq) != size:
        raise SchemaError(f"{where}.leq: expected {size} rows")
    for i, row in enumerate(leq):
        if not isinstance(row, list) or len(row) != size:
            raise SchemaError(f"{where}.leq[{i}]: expected {size} entries")
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != size):
        raise SchemaError(f"{where}.labels: expected {size} names")
    try:
        return FiniteLattice([[bool(v) for v in row] for row in leq], labels)
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# -- form ---------------------------------------------------------------------


def form_to_dict(form: FormInstance) -> dict:
    base = form.base
    return {
        "objects": list(base.objects),
        "homs": {f"{x},{y}": list(ms) for (x, y), ms in sorted(base.homs.items())},
        "compose": {f"{g};{f}": h for (g, f), h in sorted(base.compose_table.items())},
        "identities": dict(sorted(base.identities.items())),
        "fibres": {x: lattice_to_dict(form.fibre(x)) for x in base.objects},
        "push": {f: list(form.push_maps[f].table) for f in base.morphisms()},
        "pull": {f: list(form.pull_maps[f].table) for f in base.morphisms()},
    }


def form_from_dict(doc: dict, where: str = "form") -> FormInstance:
    objects = _need(doc, "objects", where)
    if any("," in x for x in objects):
        raise SchemaError(f"{where}.objects: names may not contain commas")
    homs_doc = _need(doc, "homs", where)
    homs: dict[tuple[str, str], list[str]] = {}
    for key, ms in homs_doc.items():
        parts = key.split(",")
        if len(parts) != 2 or parts[0] not in objects or parts[1] not in objects:
            raise SchemaError(f"{where}.homs[{key!r}]: key must be 'X,Y' over declared objects")
        homs[(parts[0], parts[1])] = list(ms)
    compose_doc = _need(doc, "compose", where)
    compose: dict[tuple[str, str], str] = {}
    for key, h in compose_doc.items():
        parts = key.split(";")
        if len(parts) != 2:
            raise SchemaError(f"{where}.compose[{key!r}]: key must be 'g;f'")
        compose[(parts[0], parts[1])] = h
    identities = _need(doc, "identities", where)
    try:
        base = CategoryPresentation(objects, homs, compose, identities)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    fibres_doc = _need(doc, "fibres", where)
    fibres = {
        x: lattice_from_dict(_need(fibres_doc, x, f"{where}.fibres"), f"{where}.fibres[{x}]")
        for x in objects
    }
    push_doc = _need(doc, "push", where)
    pull_doc = _need(doc, "pull", where)
    push = {}
    pull = {}
    for f in base.morphisms():
        x, y = base.dom[f], base.cod[f]
        try:
            push[f] = MonotoneMap(fibres[x], fibres[y], _need(push_doc, f, f"{where}.push"))
            pull[f] = MonotoneMap(fibres[y], fibres[x], _need(pull_doc, f, f"{where}.pull"))
        except (ValueError, IndexError) as exc:
            raise SchemaError(f"{where}: morphism {f!r}: {exc}") from exc
    try:
        return FormInstance(base, fibres, push, pull)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# -- order and operators --------------------------------------------------------


def order_to_dict(order: TopogenousOrder, form_id: str | None = None) -> dict:
    rel = {}
    for x, rows in sorted(order.rel.items()):
        n = len(rows)
        rel[x] = [[bool((rows[a] >> b) & 1) for b in range(n)] for a in range(n)]
    return {"form": form_id, "rel": rel}


def order_from_dict(doc: dict, where: str = "order") -> TopogenousOrder:
    rel_doc = _need(doc, "rel", where)
    rel = {}
    for x, rows in rel_doc.items():
        n = len(rows)
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError(f"{where}.rel[{x}][{i}]: expected {n} entries")
        rel[x] = tuple(
            sum(1 << b for b in range(n) if rows[a][b]) for a in range(n)
        )
    return TopogenousOrder(rel)


def operator_to_dict(op: ClosureOperator | InteriorOperator) -> dict:
    return {"map": {x: list(t) for x, t in sorted(op.maps.items())}}


def operator_from_dict(doc: dict, kind: str, where: str = "operator"):
    maps_doc = _need(doc, "map", where)
    maps = {x: tuple(t) for x, t in maps_doc.items()}
    if kind == "closure":
        return ClosureOperator(maps)
    if kind == "interior":
        return InteriorOperator(maps)
    raise ValueError(f"kind must be 'closure' or 'interior', got {kind!r}")


# -- instance payloads ----------------------------------------------------------


def topology_to_dict(t: FiniteTopology) -> dict:
    return {"n": t.n, "opens": sorted(t.opens)}


def topology_from_dict(doc: dict, where: str = "topology") -> FiniteTopology:
    n = _need(doc, "n", where)
    opens = _need(doc, "opens", where)
    try:
        return FiniteTopology(n, frozenset(opens))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def group_to_dict(g: FiniteGroup) -> dict:
    return {"order": g.n, "cayley": [list(row) for row in g.table], "name": g.name}


def group_from_dict(doc: dict, where: str = "group") -> FiniteGroup:
    order = _need(doc, "order", where)
    cayley = _need(doc, "cayley", where)
    if len(cayley) != order:
        raise SchemaError(f"{where}.cayley: expected {order} rows")
    try:
        return FiniteGroup(cayley, doc.get("name", "G"))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def partition_to_dict(p: Partition) -> dict:
    return {"n": p.n, "blocks": list(p.blocks)}


def partition_from_dict(doc: dict, where: str = "partition") -> Partition:
    _need(doc, "n", where)
    blocks = _need(doc, "blocks", where)
    if len(blocks) != doc["n"]:
        raise SchemaError(f"{where}.blocks: expected {doc['n']} entries")
    return Partition.of(blocks)


# -- files ----------------------------------------------------------------------


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON") from exc


def dump_json(doc: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
