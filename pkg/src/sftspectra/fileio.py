"""Serialization: structured-text documents, CSV tables, and manifests.

Every writer pins its format exactly: floats carry 17 significant digits
(enough for a lossless double roundtrip), the decimal separator is '.',
lines end with '\n', and rows follow a canonical order.  Re-running a
computation with the same inputs therefore reproduces artifacts byte for
byte, which the manifest hashes certify.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from .convex import CmsFunction, GridFunction, grid_function
from .errors import ConfigInvalidError
from .oracle import OrbitCatalog
from .paths import PathClaimReport
from .potentials import Potential
from .sft import Sft, build_sft
from .spectra import SpectrumGraph, UscReport, spectrum_graph
from .thermo import PressureCurve


def fmt(x: float) -> str:
    """Canonical float rendering: 17 significant digits, '.' separator."""
    return format(float(x), ".17g")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(text)


def _write_json(path: str, payload) -> None:
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigInvalidError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _csv(path: str, header: str, rows, preamble: str = "") -> None:
    lines = [preamble] if preamble else []
    lines.append(header)
    lines.extend(",".join(fmt(x) for x in row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _read_csv(path: str, n_columns: int) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#") or line[0].isalpha():
                continue
            parts = line.split(",")
            if len(parts) != n_columns:
                raise ConfigInvalidError(
                    f"{path}: expected {n_columns} columns, got {len(parts)}")
            rows.append([float(p) for p in parts])
    if not rows:
        raise ConfigInvalidError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


# -- subshifts ---------------------------------------------------------------

def save_sft(sft: Sft, path: str) -> None:
    payload = {"alphabet": sft.alphabet_size,
               "transitions": sft.transitions.astype(int).tolist()}
    _write_json(path, payload)


def load_sft(path: str) -> Sft:
    doc = _read_json(path)
    if not isinstance(doc, dict) or "alphabet" not in doc or "transitions" not in doc:
        raise ConfigInvalidError(f"{path}: need keys 'alphabet' and 'transitions'")
    return build_sft(int(doc["alphabet"]), doc["transitions"])


# -- potentials --------------------------------------------------------------

def _word_key(word: tuple[int, ...], alphabet_size: int) -> str:
    if alphabet_size <= 10:
        return "".join(str(s) for s in word)
    return ",".join(str(s) for s in word)


def _parse_word(key: str, alphabet_size: int) -> tuple[int, ...]:
    if alphabet_size <= 10:
        return tuple(int(c) for c in key)
    return tuple(int(p) for p in key.split(","))


def save_potential(phi: Potential, path: str) -> None:
    table = {_word_key(w, phi.sft.alphabet_size): v
             for w, v in phi.table.items()}
    _write_json(path, {"depth": phi.depth, "table": table})


def load_potential(sft: Sft, path: str) -> Potential:
    doc = _read_json(path)
    if not isinstance(doc, dict) or "depth" not in doc or "table" not in doc:
        raise ConfigInvalidError(f"{path}: need keys 'depth' and 'table'")
    table = {_parse_word(k, sft.alphabet_size): float(v)
             for k, v in doc["table"].items()}
    return Potential(sft, int(doc["depth"]), table)


# -- tables ------------------------------------------------------------------

def save_grid_function(f: GridFunction, path: str) -> None:
    _csv(path, "x,value", zip(f.x, f.values))


def load_grid_function(path: str) -> GridFunction:
    data = _read_csv(path, 2)
    return grid_function(data[:, 0], data[:, 1])


def save_cms(h: CmsFunction, path: str) -> None:
    meta = (f"# maximizer={fmt(h.base.x[h.maximizer_index])}"
            f" max_value={fmt(h.max_value)}")
    _csv(path, "x,value", zip(h.base.x, h.base.values), preamble=meta)


def save_spectrum_graph(g: SpectrumGraph, path: str) -> None:
    _csv(path, "alpha,entropy", zip(g.alphas, g.values))


def load_spectrum_graph(path: str) -> SpectrumGraph:
    data = _read_csv(path, 2)
    return spectrum_graph(data[:, 0], data[:, 1], check_concave=False)


def save_pressure_curve(curve: PressureCurve, path: str) -> None:
    _csv(path, "t,pressure", zip(curve.t_grid, curve.values))


def save_path_samples(samples, path: str) -> None:
    _csv(path, "t,s,integral,entropy,pressure",
         ((p.t, p.s, p.integral, p.entropy, p.pressure) for p in samples))


def save_catalog(catalog: OrbitCatalog, path: str) -> None:
    lines = ["period,word"]
    for orbit in catalog:
        key = _word_key(orbit.word.symbols, catalog.sft.alphabet_size)
        lines.append(f"{orbit.period},{key}")
    _write_text(path, "\n".join(lines) + "\n")


# -- reports -----------------------------------------------------------------

def save_claim_report(report: PathClaimReport, path: str) -> None:
    payload = {
        "all_passed": report.all_passed,
        "checks": [{"claim_id": c.claim_id,
                    "passed": c.passed,
                    "worst_slack": c.worst_slack,
                    "witness_index": c.witness_index,
                    "detail": c.detail} for c in report.checks],
    }
    _write_json(path, payload)


def save_usc_report(report: UscReport, path: str) -> None:
    payload = {
        "delta": report.delta,
        "upper_ok": report.upper_ok,
        "lower_monotone": report.lower_monotone,
        "rows": [{"t": r.t,
                  "excess_upper": r.excess_upper,
                  "excess_lower": r.excess_lower,
                  "delta": report.delta} for r in report.rows],
    }
    _write_json(path, payload)


# -- manifest ----------------------------------------------------------------

def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: str, names) -> str:
    """Hash every named artifact (paths relative to out_dir) into
    manifest.txt, sorted by name; returns the manifest path."""
    lines = [f"{sha256_file(os.path.join(out_dir, name))}  {name}"
             for name in sorted(names)]
    path = os.path.join(out_dir, "manifest.txt")
    _write_text(path, "\n".join(lines) + "\n")
    return path


__all__ = [
    "fmt", "save_sft", "load_sft", "save_potential", "load_potential",
    "save_grid_function", "load_grid_function", "save_cms",
    "save_spectrum_graph", "load_spectrum_graph", "save_pressure_curve",
    "save_path_samples", "save_catalog", "save_claim_report",
    "save_usc_report", "sha256_file", "write_manifest",
]
