"""JSON documents for grids, signature sets, bases and parameters.

Complex numbers are written as ``[re, im]``; a bare number is accepted on
input.  Signature values are listed in canonical count order.  A signature may
instead carry ``"generator": {"weights": [...], "vectors": [[...], ...]}``,
which is expanded into values when the document is loaded.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .engine import FibParams, SignatureGrid
from .errors import DocumentError, HolantError
from .fibonacci_d3 import FibParamsD3, OrthoTripleD3, d3_generate
from .fibonacci_d4 import NAMES as D4_NAMES
from .fibonacci_d4 import FibParamsD4, OrthoQuadD4, d4_generate
from .signature import Signature, entry_count

D3_NAMES = ("s", "x", "y", "t")


def parse_complex(raw: Any, where: str) -> complex:
    if isinstance(raw, bool):
        raise DocumentError(f"{where}: expected a number or [re, im], got {raw!r}")
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
    ):
        return complex(raw[0], raw[1])
    raise DocumentError(f"{where}: expected a number or [re, im], got {raw!r}")


def emit_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _field(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in doc:
        raise DocumentError(f"{where}: missing field {key!r}")
    return doc[key]


def _domain(doc: dict) -> int:
    d = _field(doc, "domain", "document")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise DocumentError(f"document.domain: expected an integer >= 2, got {d!r}")
    return d


def basis_from_spec(spec: dict, d: int, where: str):
    weights = _field(spec, "weights", where)
    vectors = _field(spec, "vectors", where)
    if not isinstance(weights, list) or not isinstance(vectors, list):
        raise DocumentError(f"{where}: weights and vectors must be lists")
    w = tuple(parse_complex(v, f"{where}.weights[{k}]") for k, v in enumerate(weights))
    vecs = []
    for k, vec in enumerate(vectors):
        if not isinstance(vec, list):
            raise DocumentError(f"{where}.vectors[{k}]: expected a list")
        vecs.append(tuple(parse_complex(v, f"{where}.vectors[{k}][{c}]") for c, v in enumerate(vec)))
    if d == 3:
        return OrthoTripleD3(w, tuple(vecs))
    if d == 4:
        return OrthoQuadD4(w, tuple(vecs))
    raise DocumentError(f"{where}: generators are only available for domains 3 and 4")


def emit_basis(basis) -> dict:
    return {
        "domain": len(basis.weights),
        "weights": [emit_complex(w) for w in basis.weights],
        "vectors": [[emit_complex(v) for v in vec] for vec in basis.vectors],
    }


def parse_basis(text: str):
    doc = _loads(text)
    return basis_from_spec(doc, _domain(doc), "document")


def _parse_signature(entry: Any, d: int, where: str) -> tuple[str, Signature]:
    name = _field(entry, "name", where)
    if not isinstance(name, str):
        raise DocumentError(f"{where}.name: expected a string")
    where = f"signature {name!r}"
    arity = _field(entry, "arity", where)
    if not isinstance(arity, int) or isinstance(arity, bool) or arity < 0:
        raise DocumentError(f"{where}.arity: expected a non-negative integer")
    has_values, has_gen = "values" in entry, "generator" in entry
    if has_values == has_gen:
        raise DocumentError(f"{where}: give exactly one of 'values' or 'generator'")
    try:
        if has_values:
            raw = entry["values"]
            if not isinstance(raw, list):
                raise DocumentError(f"{where}.values: expected a list")
            expected = entry_count(d, arity)
            if len(raw) != expected:
                raise DocumentError(f"{where}: expected {expected} values, got {len(raw)}")
            values = [parse_complex(v, f"{where}.values[{k}]") for k, v in enumerate(raw)]
            return name, Signature(d, arity, values)
        basis = basis_from_spec(entry["generator"], d, f"{where}.generator")
        gen = d3_generate if d == 3 else d4_generate
        return name, gen(basis, arity)
    except DocumentError:
        raise
    except HolantError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _parse_signatures(doc: dict, d: int) -> dict[str, Signature]:
    entries = _field(doc, "signatures", "document")
    if not isinstance(entries, list):
        raise DocumentError("document.signatures: expected a list")
    sigs: dict[str, Signature] = {}
    for k, entry in enumerate(entries):
        name, sig = _parse_signature(entry, d, f"signatures[{k}]")
        if name in sigs:
            raise DocumentError(f"signature {name!r} defined twice")
        sigs[name] = sig
    return sigs


def parse_signature_set(text: str) -> tuple[int, dict[str, Signature]]:
    """Domain and named signatures of a document (vertices/edges ignored)."""
    doc = _loads(text)
    d = _domain(doc)
    return d, _parse_signatures(doc, d)


def parse_grid(text: str) -> SignatureGrid:
    doc = _loads(text)
    d = _domain(doc)
    sigs = _parse_signatures(doc, d)
    vertices = _field(doc, "vertices", "document")
    edges = _field(doc, "edges", "document")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise DocumentError("document.vertices: expected a list of signature names")
    if not isinstance(edges, list):
        raise DocumentError("document.edges: expected a list of [u, v] pairs")
    pairs = []
    for k, e in enumerate(edges):
        if not (
            isinstance(e, list)
            and len(e) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in e)
        ):
            raise DocumentError(f"edges[{k}]: expected [u, v] with integer vertex indices")
        pairs.append((e[0], e[1]))
    grid = SignatureGrid(d, sigs, vertices, pairs)
    problems = grid.structural_problems()
    if problems:
        raise DocumentError(
            "; ".join(msg if v is None else f"vertex {v}: {msg}" for v, msg in problems)
        )
    return grid


def emit_signature(name: str, sig: Signature) -> dict:
    return {"name": name, "arity": sig.arity, "values": [emit_complex(v) for v in sig.values]}


def emit_signature_set(d: int, sigs: dict[str, Signature]) -> dict:
    return {"domain": d, "signatures": [emit_signature(n, s) for n, s in sigs.items()]}


def emit_grid(grid: SignatureGrid) -> dict:
    doc = emit_signature_set(grid.domain_size, dict(grid.signatures))
    doc["vertices"] = list(grid.vertices)
    doc["edges"] = [[u, v] for u, v in grid.edges]
    return doc


def parse_params(text: str) -> FibParams:
    doc = _loads(text)
    d = _domain(doc)
    if d == 3:
        names, cls = D3_NAMES, FibParamsD3
    elif d == 4:
        names, cls = D4_NAMES, FibParamsD4
    else:
        raise DocumentError(f"document.domain: parameters exist only for domains 3 and 4, got {d}")
    return cls(*(parse_complex(_field(doc, n, "document"), f"document.{n}") for n in names))


def emit_params(P: FibParams) -> dict:
    doc: dict[str, Any] = {"domain": 3 if isinstance(P, FibParamsD3) else 4}
    for name, value in P.as_dict().items():
        doc[name] = emit_complex(value)
    return doc


def dumps(doc: Any, indent: int = 2) -> str:
    """JSON text with scalar-only lists kept on one line.

    Floats use Python's shortest round-trip repr (at most 17 significant
    digits), so parsing the output recovers every value exactly.
    """
    return _dump(json.loads(json.dumps(doc, default=_default)), indent, 0)


def _dump(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (list, dict)) for v in obj) or _is_complex_list(obj):
            return json.dumps(obj)
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return json.dumps(obj)


def _is_complex_list(obj: list) -> bool:
    return all(
        isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)
        for v in obj
    )


def _default(obj: Any) -> Any:
    if isinstance(obj, complex):
        return emit_complex(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")
