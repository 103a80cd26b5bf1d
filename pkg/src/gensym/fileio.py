"""JSON file formats for metrics and affine surfaces."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .curvature import MetricField
from .extension import AffineSurface, PhiTensor
from .jets.expr import FUNCTIONS

SLOTS = ("x", "y", "u", "v")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class FileFormatError(ValueError):
    pass


def _read_json(path) -> object:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}: invalid JSON: {exc}") from exc


def _rename(expr: str, mapping: dict) -> str:
    if not mapping:
        return expr
    return _IDENT.sub(lambda m: mapping.get(m.group(0), m.group(0)), expr)


def _coord_mapping(coords) -> dict:
    coords = list(coords)
    if len(coords) != 4 or len(set(coords)) != 4 or not all(isinstance(c, str) for c in coords):
        raise FileFormatError("coords must list four distinct names")
    for c in coords:
        if not _IDENT.fullmatch(c) or c in FUNCTIONS or c in ("e", "pi"):
            raise FileFormatError(f"invalid coordinate name {c!r}")
    if tuple(coords) == SLOTS:
        return {}
    # substitution is a single regex pass, so permutations of x, y, u, v are safe
    return {c: s for c, s in zip(coords, SLOTS)}


def metric_from_dict(data: dict, source: str = "<metric>") -> MetricField:
    if not isinstance(data, dict) or "g" not in data:
        raise FileFormatError(f"{source}: expected an object with a 'g' entry")
    mapping = _coord_mapping(data.get("coords", SLOTS))
    params = data.get("params", {}) or {}
    if not isinstance(params, dict) or not all(isinstance(v, (int, float)) for v in params.values()):
        raise FileFormatError(f"{source}: params must map names to numbers")
    g = data["g"]
    if not isinstance(g, list) or len(g) != 4 or any(not isinstance(r, list) or len(r) != 4 for r in g):
        raise FileFormatError(f"{source}: g must be a 4x4 array")
    rows = [[None if e is None else _rename(str(e), mapping) for e in r] for r in g]
    return MetricField.from_strings(rows, {k: float(v) for k, v in params.items()},
                                    str(data.get("label", "")))


def load_metric_file(path) -> MetricField:
    return metric_from_dict(_read_json(path), str(path))


def metric_to_dict(m: MetricField) -> dict:
    from .jets import print_expr
    return {
        "label": m.label,
        "coords": list(SLOTS),
        "params": dict(m.params),
        "g": [[print_expr(m.components[i][j]) for j in range(4)] for i in range(4)],
    }


def phi_from_data(data, source: str = "<phi>") -> PhiTensor:
    if isinstance(data, dict):
        data = data.get("phi")
    if not isinstance(data, list) or len(data) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in data):
        raise FileFormatError(f"{source}: phi must be a 2x2 array")
    return PhiTensor([[None if e is None else str(e) for e in r] for r in data])


def load_surface_file(path, phi_path=None) -> tuple[AffineSurface, PhiTensor]:
    data = _read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("gamma"), dict):
        raise FileFormatError(f"{path}: expected an object with a 'gamma' mapping")
    params = {k: float(v) for k, v in (data.get("params") or {}).items()}
    surface = AffineSurface.from_keys({k: str(v) for k, v in data["gamma"].items()}, params,
                                      str(data.get("label", Path(path).stem)))
    if phi_path is not None:
        phi = phi_from_data(_read_json(phi_path), str(phi_path))
    elif "phi" in data:
        phi = phi_from_data(data["phi"], str(path))
    else:
        phi = PhiTensor.zero()
    return surface, phi


__all__ = ["FileFormatError", "load_metric_file", "load_surface_file", "metric_from_dict",
           "metric_to_dict", "phi_from_data"]
