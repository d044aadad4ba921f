"""Shipped Borcherds-Cartan data and datum file input/output."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List

from .config import data_dir, datum_path
from .errors import DatumError
from .types import CartanDatum

IMAGINARY_TAU = "1/(1-q^(2*l))"

RAW_DATA = [
    {"name": "sl2", "nodes": ["1"], "a": [[2]], "s": [1], "tau": {}},
    {"name": "sl3", "nodes": ["1", "2"], "a": [[2, -1], [-1, 2]], "s": [1, 1], "tau": {}},
    {"name": "iso1", "nodes": ["1"], "a": [[0]], "s": [1], "tau": {"1,*": IMAGINARY_TAU}},
    {"name": "noniso1", "nodes": ["1"], "a": [[-2]], "s": [1], "tau": {"1,*": IMAGINARY_TAU}},
    {"name": "mixed2", "nodes": ["1", "2"], "a": [[2, -1], [-1, 0]], "s": [1, 1], "tau": {"2,*": IMAGINARY_TAU}},
]


def _default_data() -> List[CartanDatum]:
    return [CartanDatum.from_dict(item) for item in RAW_DATA]


def load_datum(path: str | Path) -> CartanDatum:
    """Read a datum file; the file stem names the datum when the document does not."""

    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DatumError(f"malformed datum file {path}: {exc}") from exc
    if not isinstance(payload, dict) or "a" not in payload:
        raise DatumError(f"malformed datum file {path}: expected an object with an 'a' matrix")
    payload.setdefault("name", path.stem)
    try:
        return CartanDatum.from_dict(payload)
    except (TypeError, ValueError) as exc:
        raise DatumError(f"malformed datum file {path}: {exc}") from exc


def save_datum(datum: CartanDatum, path: str | Path | None = None) -> Path:
    target = Path(path) if path is not None else datum_path(datum.name)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = {"nodes": datum.nodes, "a": datum.a, "s": datum.s, "tau": datum.tau}
    target.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return target


def load_catalog() -> List[CartanDatum]:
    """All shipped data, writing any missing datum file under the data directory."""

    data_dir().mkdir(parents=True, exist_ok=True)
    catalog = []
    for datum in _default_data():
        path = datum_path(datum.name)
        if path.exists():
            try:
                catalog.append(load_datum(path))
                continue
            except DatumError:
                pass
        save_datum(datum, path)
        catalog.append(datum)
    return catalog


def datum_by_name(name: str) -> CartanDatum | None:
    for datum in load_catalog():
        if datum.name == name:
            return datum
    return None


def load_tau_overrides(path: str | Path) -> Dict[str, str]:
    """Read a tau override table: an object mapping "node,l" or "node,*" to rational-function text."""

    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DatumError(f"malformed tau file {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise DatumError(f"malformed tau file {path}: expected an object")
    return {str(key): str(value) for key, value in payload.items()}
