"""Text serialization for hypermatrices, decompositions, and run reports.

The on-disk format is JSON.  Complex entries are stored as [re, im] pairs in
row-major order with the last index varying fastest and 0-based indexing;
floats rely on the shortest round-trip repr, so parse(serialize(h)) == h
bit-exactly for finite doubles.  NaN and infinity are rejected on both
paths.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .core import as_hypermatrix
from .errors import ParseError
from .spectral import LiftedPair, SpectralPair

FORMAT_VERSION = "1"

__all__ = [
    "FORMAT_VERSION",
    "serialize_hypermatrix",
    "parse_hypermatrix",
    "read_hypermatrix",
    "write_hypermatrix",
    "serialize_spectral_pair",
    "parse_spectral_pair",
    "serialize_lifted_pair",
    "parse_lifted_pair",
    "read_decomposition",
    "write_decomposition",
    "format_float",
    "sha256_of_file",
    "build_report",
    "render_report",
]


def _entries_payload(a) -> list:
    flat = a.ravel()
    if not np.all(np.isfinite(flat)):
        raise ParseError("refusing to serialize non-finite entries")
    return [[float(z.real), float(z.imag)] for z in flat]


def _hypermatrix_payload(a, metadata=None) -> dict:
    a = as_hypermatrix(a)
    payload = {
        "version": FORMAT_VERSION,
        "order": int(a.ndim),
        "shape": [int(s) for s in a.shape],
        "entries": _entries_payload(a),
    }
    if metadata:
        payload["metadata"] = dict(metadata)
    return payload


def _payload_to_array(payload, context="hypermatrix") -> np.ndarray:
    for key in ("order", "shape", "entries"):
        if key not in payload:
            raise ParseError(f"{context}: missing field {key!r}")
    shape = tuple(int(s) for s in payload["shape"])
    order = int(payload["order"])
    if order != len(shape) or order < 1 or any(s < 1 for s in shape):
        raise ParseError(f"{context}: order {order} inconsistent with shape {shape}")
    entries = payload["entries"]
    expected = int(np.prod(shape))
    if len(entries) != expected:
        raise ParseError(
            f"{context}: expected {expected} entries for shape {shape}, found {len(entries)}"
        )
    flat = np.empty(expected, dtype=np.complex128)
    for idx, pair in enumerate(entries):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ParseError(f"{context}: entry {idx} is not an [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ParseError(f"{context}: entry {idx} is not finite")
        flat[idx] = complex(re, im)
    return flat.reshape(shape)


def serialize_hypermatrix(a, metadata=None) -> str:
    return json.dumps(_hypermatrix_payload(a, metadata), allow_nan=False, indent=1)


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed file: {exc.msg} at line {exc.lineno}, column {exc.colno}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc


def parse_hypermatrix(text: str) -> np.ndarray:
    payload = _loads(text)
    if not isinstance(payload, dict):
        raise ParseError("top-level value must be an object")
    return _payload_to_array(payload)


def read_hypermatrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypermatrix(fh.read())


def write_hypermatrix(path, a, metadata=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_hypermatrix(a, metadata))
        fh.write("\n")


# ----------------------------------------------------------- decompositions


def serialize_spectral_pair(pair: SpectralPair, metadata=None) -> str:
    payload = {
        "version": FORMAT_VERSION,
        "kind": "spectral_pair",
        "components": {
            "u": _hypermatrix_payload(pair.u),
            "v": _hypermatrix_payload(pair.v),
            "mu": _hypermatrix_payload(pair.mu),
            "nu": _hypermatrix_payload(pair.nu),
        },
    }
    if metadata:
        payload["metadata"] = dict(metadata)
    return json.dumps(payload, allow_nan=False, indent=1)


def parse_spectral_pair(text: str) -> SpectralPair:
    payload = _loads(text)
    if payload.get("kind") != "spectral_pair":
        raise ParseError(f"expected kind 'spectral_pair', got {payload.get('kind')!r}")
    comps = payload.get("components", {})
    try:
        return SpectralPair(
            u=_payload_to_array(comps["u"], "component u"),
            v=_payload_to_array(comps["v"], "component v"),
            mu=_payload_to_array(comps["mu"], "component mu"),
            nu=_payload_to_array(comps["nu"], "component nu"),
        )
    except KeyError as exc:
        raise ParseError(f"missing component {exc.args[0]!r}") from exc


def serialize_lifted_pair(lp: LiftedPair, metadata=None) -> str:
    payload = {
        "version": FORMAT_VERSION,
        "kind": "lifted_pair",
        "block_size": int(lp.block_size),
        "components": {
            "big_u": _hypermatrix_payload(lp.big_u),
            "big_v": _hypermatrix_payload(lp.big_v),
            "mu": _hypermatrix_payload(lp.mu),
            "nu": _hypermatrix_payload(lp.nu),
        },
    }
    if metadata:
        payload["metadata"] = dict(metadata)
    return json.dumps(payload, allow_nan=False, indent=1)


def parse_lifted_pair(text: str) -> LiftedPair:
    payload = _loads(text)
    if payload.get("kind") != "lifted_pair":
        raise ParseError(f"expected kind 'lifted_pair', got {payload.get('kind')!r}")
    comps = payload.get("components", {})
    try:
        return LiftedPair(
            big_u=_payload_to_array(comps["big_u"], "component big_u"),
            big_v=_payload_to_array(comps["big_v"], "component big_v"),
            mu=_payload_to_array(comps["mu"], "component mu"),
            nu=_payload_to_array(comps["nu"], "component nu"),
            block_size=int(payload["block_size"]),
        )
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc


def read_decomposition(path):
    """Read either decomposition kind, dispatching on the 'kind' field."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    payload = _loads(text)
    kind = payload.get("kind")
    if kind == "spectral_pair":
        return parse_spectral_pair(text)
    if kind == "lifted_pair":
        return parse_lifted_pair(text)
    raise ParseError(f"unknown decomposition kind {kind!r}")


def write_decomposition(path, obj, metadata=None) -> None:
    if isinstance(obj, SpectralPair):
        text = serialize_spectral_pair(obj, metadata)
    elif isinstance(obj, LiftedPair):
        text = serialize_lifted_pair(obj, metadata)
    else:
        raise ParseError(f"cannot serialize object of type {type(obj).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")


# ------------------------------------------------------------------ reports


def format_float(x: float) -> str:
    """Decimal string with 17 significant digits (lossless for doubles)."""
    return format(float(x), ".17g")


def sha256_of_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def build_report(command, argv, inputs=None, residuals=None, checks=None,
                 seed=None, wall_time=None, extra=None) -> dict:
    """Assemble a run report; deterministic apart from the wall-time field.

    ``checks`` maps a name to (value, tolerance); the pass flag is derived.
    """
    report = {
        "version": FORMAT_VERSION,
        "command": command,
        "argv": list(argv),
        "inputs": {str(k): v for k, v in (inputs or {}).items()},
        "residuals": {k: format_float(v) for k, v in (residuals or {}).items()},
        "checks": {},
        "seed": seed,
    }
    for name, (value, tol) in (checks or {}).items():
        report["checks"][name] = {
            "value": format_float(value),
            "tolerance": format_float(tol),
            "pass": bool(value <= tol),
        }
    if extra:
        report["extra"] = extra
    report["all_pass"] = all(c["pass"] for c in report["checks"].values())
    report["wall_time_s"] = None if wall_time is None else round(float(wall_time), 6)
    return report


def render_report(report: dict) -> str:
    return json.dumps(report, allow_nan=False, indent=1, sort_keys=True)
