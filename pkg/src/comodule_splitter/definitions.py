"""Definition documents: the JSON formats the CLI reads and writes.

Three document kinds, all integer-exact:

* coalgebra: {"p", "basis", "delta": {label: [[label, label, coeff]]},
  "counit": {label: value}, "grouplikes": [[...]] (optional)}
* comodule: {"over": path, "basis", "psi": {label: [[label, sigma_label,
  coeff]]}, and optionally all three of "unit", "augmentation",
  "action": {"0": [[...]], ...}} -- the enriched form is what the splitting
  commands need
* map: {"source": path, "target": path, "matrix": [[...]]}

Paths inside documents resolve relative to the document that mentions them.
Loaders raise ParseError for anything structurally wrong; mathematical
problems (a declared grouplike that is not one, say) surface later through
the validators, not here.  Writers emit every label explicitly and leave
ordering to the JSON serializer, so a write/load round trip reproduces the
in-memory object exactly, minus the fields files do not carry (product
tables and sigma-side action matrices).
"""

from __future__ import annotations

import json
import os

from .coalgebra import Coalgebra, GroupLikeSet, find_grouplikes
from .comodule import Comodule, ComoduleAlgebra, ComoduleMap
from .errors import ParseError
from .field_linalg import FieldMatrix
from .generators import ExampleBundle


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return doc


def _dump_json(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ParseError(f"{path}: missing required key {key!r}")
    return doc[key]


def _label_index(labels: list[str], path: str) -> dict[str, int]:
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ParseError(f"{path}: basis must be a list of strings")
    if len(set(labels)) != len(labels):
        raise ParseError(f"{path}: basis labels must be unique")
    return {lab: i for i, lab in enumerate(labels)}


def _triples_from(entries, index_a: dict, index_b: dict, path: str, what: str):
    triples = []
    if not isinstance(entries, list):
        raise ParseError(f"{path}: {what} entries must be lists")
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], int)):
            raise ParseError(f"{path}: bad {what} entry {entry!r}")
        a, b, coeff = entry
        if a not in index_a or b not in index_b:
            raise ParseError(f"{path}: {what} references unknown label in {entry!r}")
        triples.append((index_a[a], index_b[b], coeff))
    return tuple(triples)


def _int_vector(raw, dim: int, path: str, what: str) -> tuple[int, ...]:
    if not (isinstance(raw, list) and len(raw) == dim and all(isinstance(x, int) for x in raw)):
        raise ParseError(f"{path}: {what} must be a list of {dim} integers")
    return tuple(raw)


def _int_matrix(raw, p: int, nrows: int, ncols: int, path: str, what: str) -> FieldMatrix:
    if not (isinstance(raw, list) and len(raw) == nrows):
        raise ParseError(f"{path}: {what} must have {nrows} rows")
    for row in raw:
        if not (isinstance(row, list) and len(row) == ncols and all(isinstance(x, int) for x in row)):
            raise ParseError(f"{path}: {what} rows must be lists of {ncols} integers")
    return FieldMatrix(p, raw, ncols=ncols)


def load_coalgebra(path: str) -> Coalgebra:
    doc = _load_json(path)
    p = _require(doc, "p", path)
    if not isinstance(p, int) or not _is_prime(p):
        raise ParseError(f"{path}: p must be a prime integer")
    labels = _require(doc, "basis", path)
    index = _label_index(labels, path)
    dim = len(labels)
    delta_doc = _require(doc, "delta", path)
    if not isinstance(delta_doc, dict):
        raise ParseError(f"{path}: delta must be an object keyed by basis label")
    for key in delta_doc:
        if key not in index:
            raise ParseError(f"{path}: delta keyed by unknown label {key!r}")
    delta = tuple(
        _triples_from(delta_doc.get(lab, []), index, index, path, "delta") for lab in labels
    )
    counit_doc = _require(doc, "counit", path)
    if not isinstance(counit_doc, dict):
        raise ParseError(f"{path}: counit must be an object keyed by basis label")
    for key, val in counit_doc.items():
        if key not in index or not isinstance(val, int):
            raise ParseError(f"{path}: bad counit entry {key!r}")
    counit = tuple(counit_doc.get(lab, 0) for lab in labels)
    grouplikes = None
    if "grouplikes" in doc:
        raw = doc["grouplikes"]
        if not isinstance(raw, list):
            raise ParseError(f"{path}: grouplikes must be a list of vectors")
        grouplikes = tuple(_int_vector(v, dim, path, "grouplike") for v in raw)
    return Coalgebra(p, dim, tuple(labels), delta, counit, grouplikes)


def coalgebra_to_doc(c: Coalgebra) -> dict:
    doc = {
        "p": c.p,
        "basis": list(c.labels),
        "delta": {
            c.labels[i]: [[c.labels[j], c.labels[k], coeff] for j, k, coeff in c.delta[i]]
            for i in range(c.dim)
        },
        "counit": {c.labels[i]: c.counit[i] for i in range(c.dim)},
    }
    if c.declared_grouplikes is not None:
        doc["grouplikes"] = [list(g) for g in c.declared_grouplikes]
    return doc


def _resolve(base_path: str, ref: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(base_path)), ref)


def load_comodule(path: str) -> tuple[Comodule, ComoduleAlgebra | None]:
    """Load a comodule document; the second component is the enriched
    comodule algebra when the document carries unit, augmentation, and
    action, and None when it carries none of them."""
    doc = _load_json(path)
    over = load_coalgebra(_resolve(path, _require(doc, "over", path)))
    labels = _require(doc, "basis", path)
    index = _label_index(labels, path)
    sigma_index = {lab: i for i, lab in enumerate(over.labels)}
    dim = len(labels)
    psi_doc = _require(doc, "psi", path)
    if not isinstance(psi_doc, dict):
        raise ParseError(f"{path}: psi must be an object keyed by basis label")
    for key in psi_doc:
        if key not in index:
            raise ParseError(f"{path}: psi keyed by unknown label {key!r}")
    psi = tuple(
        _triples_from(psi_doc.get(lab, []), index, sigma_index, path, "psi") for lab in labels
    )
    base = Comodule(over, dim, tuple(labels), psi)

    enrich_keys = [k for k in ("unit", "augmentation", "action") if k in doc]
    if not enrich_keys:
        return base, None
    if len(enrich_keys) != 3:
        raise ParseError(
            f"{path}: unit, augmentation, and action must be given together"
            f" (found only {enrich_keys})"
        )
    if over.declared_grouplikes is None:
        raise ParseError(f"{path}: the over-coalgebra must declare its grouplikes")
    grouplikes = find_grouplikes(over, "declared")
    unit = _int_vector(doc["unit"], dim, path, "unit")
    augmentation = _int_vector(doc["augmentation"], dim, path, "augmentation")
    action_doc = doc["action"]
    if not isinstance(action_doc, dict):
        raise ParseError(f"{path}: action must be an object keyed by grouplike index")
    if set(action_doc) != {str(i) for i in range(len(grouplikes))}:
        raise ParseError(
            f"{path}: action must have one matrix per grouplike (0..{len(grouplikes) - 1})"
        )
    action = tuple(
        _int_matrix(action_doc[str(i)], over.p, dim, dim, path, f"action[{i}]")
        for i in range(len(grouplikes))
    )
    ma = ComoduleAlgebra(base, grouplikes, action, unit, augmentation)
    return base, ma


def comodule_to_doc(m: Comodule, ma: ComoduleAlgebra | None, over_ref: str) -> dict:
    doc = {
        "over": over_ref,
        "basis": list(m.labels),
        "psi": {
            m.labels[i]: [[m.labels[a], m.over.labels[k], coeff] for a, k, coeff in m.psi[i]]
            for i in range(m.dim)
        },
    }
    if ma is not None:
        doc["unit"] = list(ma.unit)
        doc["augmentation"] = list(ma.augmentation)
        doc["action"] = {
            str(i): ma.action[i].rows_as_lists() for i in range(len(ma.grouplikes))
        }
    return doc


def load_map(path: str) -> ComoduleMap:
    doc = _load_json(path)
    source, _ = load_comodule(_resolve(path, _require(doc, "source", path)))
    target, _ = load_comodule(_resolve(path, _require(doc, "target", path)))
    matrix = _int_matrix(
        _require(doc, "matrix", path), source.p, target.dim, source.dim, path, "matrix"
    )
    return ComoduleMap(source, target, matrix)


def map_to_doc(f: ComoduleMap, source_ref: str, target_ref: str) -> dict:
    return {"source": source_ref, "target": target_ref, "matrix": f.matrix.rows_as_lists()}


# -- bundles ---------------------------------------------------------------------------


def write_coalgebra(c: Coalgebra, path: str) -> None:
    _dump_json(coalgebra_to_doc(c), path)


def write_bundle(bundle: ExampleBundle, dirpath: str) -> list[str]:
    """Write a splitting bundle as definition files plus a manifest.

    Layout: <name>.sigma.json, <name>.comodule.json (enriched),
    <name>.target.json (the over-coalgebra as a plain comodule),
    <name>.map.json, and <name>.bundle.json tying them together.
    """
    if bundle.comodule_algebra is None or bundle.splitting_map is None:
        raise ParseError(f"bundle {bundle.name} has no comodule algebra and map to write")
    os.makedirs(dirpath, exist_ok=True)
    name = bundle.name
    sigma_file = f"{name}.sigma.json"
    comodule_file = f"{name}.comodule.json"
    target_file = f"{name}.target.json"
    map_file = f"{name}.map.json"
    manifest_file = f"{name}.bundle.json"

    ma = bundle.comodule_algebra
    f = bundle.splitting_map
    write_coalgebra(bundle.coalgebra, os.path.join(dirpath, sigma_file))
    _dump_json(
        comodule_to_doc(ma.base, ma, sigma_file), os.path.join(dirpath, comodule_file)
    )
    _dump_json(
        comodule_to_doc(f.target, None, sigma_file), os.path.join(dirpath, target_file)
    )
    _dump_json(
        map_to_doc(f, comodule_file, target_file), os.path.join(dirpath, map_file)
    )
    manifest = {
        "name": name,
        "comodule": comodule_file,
        "map": map_file,
        "expected": bundle.expected_outcome,
    }
    _dump_json(manifest, os.path.join(dirpath, manifest_file))
    return [sigma_file, comodule_file, target_file, map_file, manifest_file]


def load_bundle(manifest_path: str) -> tuple[str, ComoduleAlgebra, ComoduleMap, str]:
    doc = _load_json(manifest_path)
    name = _require(doc, "name", manifest_path)
    expected = _require(doc, "expected", manifest_path)
    _, ma = load_comodule(_resolve(manifest_path, _require(doc, "comodule", manifest_path)))
    if ma is None:
        raise ParseError(f"{manifest_path}: bundle comodule must be enriched")
    f = load_map(_resolve(manifest_path, _require(doc, "map", manifest_path)))
    if not isinstance(name, str) or not isinstance(expected, str):
        raise ParseError(f"{manifest_path}: name and expected must be strings")
    return name, ma, f, expected
