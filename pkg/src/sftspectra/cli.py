"""Command-line front end: batch computations emitting plot-ready artifacts.

One process runs one command described by a config document; artifacts land
in the config's out_dir together with a manifest of content hashes.  All
float output goes through the canonical 17-significant-digit format, so a
rerun with the same config reproduces every artifact byte for byte.

Exit codes: 0 success, 1 internal error, 2 hypothesis violation,
3 invalid config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import fileio
from .convex import cms_from_samples
from .errors import (ConfigInvalidError, HypothesisViolationError,
                     SftSpectraError)
from .oracle import enumerate_orbits, periodic_pressure, word_count_spectrum
from .paths import single_sided_path, two_sided_path, verify_path_claims
from .potentials import Potential, periodic_orbit, tabulate
from .realize import realize_many, realize_pressure, realize_spectrum
from .sft import Sft, topological_entropy
from .spectra import entropy_spectrum, usc_failure_demo
from .thermo import PressureCurve, pressure_curve

COMMANDS = ("pressure", "spectrum", "path", "realize", "demo-usc",
            "oracle-check")


def _key_line(text: str, key: str) -> int:
    """1-based line of a key's first appearance, for line-precise errors."""
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return 1


class _Config:
    """Parsed run configuration with config-relative path resolution."""

    def __init__(self, path: str):
        self.path = path
        try:
            with open(path, "r", encoding="utf-8") as handle:
                self.text = handle.read()
        except OSError as exc:
            raise ConfigInvalidError(f"{path}: {exc.strerror}") from exc
        try:
            doc = json.loads(self.text)
        except json.JSONDecodeError as exc:
            raise ConfigInvalidError(
                f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise ConfigInvalidError(f"{path}:1: config must be an object")
        self.doc = doc
        self.base = os.path.dirname(os.path.abspath(path))

        self.command = self.require("command", str)
        if self.command not in COMMANDS:
            self.fail("command", f"unknown command {self.command!r}; "
                                 f"choose from {', '.join(COMMANDS)}")
        self.sft_path = self.resolve(self.require("sft_path", str))
        self.out_dir = self.resolve(self.require("out_dir", str))
        params = doc.get("params", {})
        if not isinstance(params, dict):
            self.fail("params", "params must be an object")
        self.params = params
        seed = doc.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            self.fail("seed", "seed must be an integer")
        self.seed = seed

    def fail(self, key: str, message: str):
        raise ConfigInvalidError(
            f"{self.path}:{_key_line(self.text, key)}: {message}")

    def require(self, key: str, kind):
        if key not in self.doc:
            raise ConfigInvalidError(
                f"{self.path}:1: missing required key {key!r}")
        value = self.doc[key]
        if not isinstance(value, kind):
            self.fail(key, f"{key} must be a {kind.__name__}")
        return value

    def resolve(self, rel: str) -> str:
        return rel if os.path.isabs(rel) else os.path.join(self.base, rel)

    def param(self, key: str, default=None, required: bool = False):
        if key in self.params:
            return self.params[key]
        if required:
            self.fail("params", f"command {self.command!r} needs params.{key}")
        return default


def _load_potential_param(cfg: _Config, sft: Sft) -> Potential:
    spec = cfg.param("potential", required=True)
    if isinstance(spec, str):
        return fileio.load_potential(sft, cfg.resolve(spec))
    if isinstance(spec, dict):
        try:
            table = {fileio._parse_word(k, sft.alphabet_size): float(v)
                     for k, v in spec["table"].items()}
            return Potential(sft, int(spec["depth"]), table)
        except (KeyError, TypeError, ValueError) as exc:
            cfg.fail("potential", f"inline potential invalid: {exc}")
    cfg.fail("potential", "potential must be a path or an inline document")


def _grid_param(cfg: _Config, key: str, default: dict) -> np.ndarray:
    spec = cfg.param(key, default)
    if isinstance(spec, list):
        return np.asarray([float(v) for v in spec])
    if not isinstance(spec, dict):
        cfg.fail("params", f"{key} must be a list or a range object")
    if "log10_min" in spec:
        grid = np.logspace(float(spec["log10_min"]), float(spec["log10_max"]),
                           int(spec["n"]))
        if spec.get("include_zero", False):
            grid = np.concatenate([[0.0], grid])
        return grid
    return np.linspace(float(spec["min"]), float(spec["max"]), int(spec["n"]))


def _cmd_pressure(cfg: _Config, sft: Sft) -> list[str]:
    phi = _load_potential_param(cfg, sft)
    t_grid = _grid_param(cfg, "t_grid", {"min": -10.0, "max": 10.0, "n": 81})
    curve = pressure_curve(sft, phi, t_grid)
    fileio.save_pressure_curve(curve, os.path.join(cfg.out_dir, "pressure.csv"))
    return ["pressure.csv"]


def _cmd_spectrum(cfg: _Config, sft: Sft) -> list[str]:
    phi = _load_potential_param(cfg, sft)
    n_alpha = int(cfg.param("n_alpha", 201))
    t_max = float(cfg.param("t_max", 60.0))
    graph = entropy_spectrum(sft, phi, n_alpha, t_max)
    fileio.save_spectrum_graph(graph, os.path.join(cfg.out_dir, "spectrum.csv"))
    return ["spectrum.csv"]


def _cmd_path(cfg: _Config, sft: Sft) -> list[str]:
    kind = cfg.param("kind", required=True)
    depth = int(cfg.param("depth", 3))
    orbit = periodic_orbit(sft, cfg.param("orbit", required=True))
    if kind == "single":
        s_grid = _grid_param(cfg, "s_grid",
                             {"log10_min": 0.0, "log10_max": 3.0, "n": 60,
                              "include_zero": True})
        samples = single_sided_path(sft, orbit, depth, s_grid)
        report = verify_path_claims(samples, topological_entropy(sft),
                                    strict_single_sided=True)
    elif kind == "two-sided":
        orbit_b = periodic_orbit(sft, cfg.param("orbit_b", required=True))
        t_grid = _grid_param(cfg, "t_grid", {"min": -1.0, "max": 1.0, "n": 41})
        samples = two_sided_path(sft, orbit, orbit_b, depth, t_grid)
        report = verify_path_claims(samples, topological_entropy(sft))
    else:
        cfg.fail("kind", "path kind must be 'single' or 'two-sided'")
    fileio.save_path_samples(samples, os.path.join(cfg.out_dir, "path.csv"))
    fileio.save_claim_report(report, os.path.join(cfg.out_dir, "claims.json"))
    return ["path.csv", "claims.json"]


def _cmd_realize(cfg: _Config, sft: Sft) -> list[str]:
    target = cfg.param("target", required=True)
    if not isinstance(target, dict) or "kind" not in target or "csv" not in target:
        cfg.fail("target", "target needs 'kind' and 'csv'")
    kind = target["kind"]
    csv_path = cfg.resolve(target["csv"])
    depth = int(cfg.param("depth", 1))
    n_runs = int(cfg.param("N", 1))
    tol = float(cfg.param("tol", 1e-4))

    artifacts = []
    rows = []
    if kind == "pressure":
        if n_runs != 1:
            cfg.fail("N", "pressure targets support a single run")
        grid = fileio.load_grid_function(csv_path)
        result = realize_pressure(sft, grid, depth, tol=tol)
        results = [result]
        witnesses = {}
    elif kind == "spectrum":
        data = fileio._read_csv(csv_path, 2)
        h = cms_from_samples(data[:, 0], data[:, 1],
                             float(data[:, 1].max()), max(tol, 1e-8))
        if n_runs == 1:
            results = [realize_spectrum(sft, h, depth, tol)]
            witnesses = {}
        else:
            many = realize_many(sft, h, depth, n_runs, tol, seed=cfg.seed)
            results = list(many.results)
            witnesses = many.witnesses
    else:
        cfg.fail("target", "target kind must be 'pressure' or 'spectrum'")

    for j, res in enumerate(results):
        name = f"potential_{j}.json"
        fileio.save_potential(res.potential, os.path.join(cfg.out_dir, name))
        artifacts.append(name)
        rows.append(f"{j},{fileio.fmt(res.target_error)},{res.iterations},"
                    f"{int(res.converged)}")
    with open(os.path.join(cfg.out_dir, "errors.csv"), "w",
              encoding="ascii", newline="") as handle:
        handle.write("run,target_error,iterations,converged\n")
        handle.write("".join(row + "\n" for row in rows))
    artifacts.append("errors.csv")

    lines = ["i,j,orbit_i,orbit_j,avg_i,avg_j,separation,resolved"]
    for (i, j), w in sorted(witnesses.items()):
        if w is None:
            lines.append(f"{i},{j},,,,,,0")
        else:
            wi = fileio._word_key(w.orbit1.word.symbols, sft.alphabet_size)
            wj = fileio._word_key(w.orbit2.word.symbols, sft.alphabet_size)
            lines.append(f"{i},{j},{wi},{wj},{fileio.fmt(w.avg1)},"
                         f"{fileio.fmt(w.avg2)},"
                         f"{fileio.fmt(abs(w.avg1 - w.avg2))},1")
    if len(lines) > 1:
        with open(os.path.join(cfg.out_dir, "witnesses.csv"), "w",
                  encoding="ascii", newline="") as handle:
            handle.write("".join(line + "\n" for line in lines))
        artifacts.append("witnesses.csv")
    return artifacts


def _cmd_demo_usc(cfg: _Config, sft: Sft) -> list[str]:
    t_list = cfg.param("t_list", [0.2, 0.1, 0.05, 0.01])
    n_alpha = int(cfg.param("n_alpha", 201))
    report = usc_failure_demo(sft, t_list, n_alpha)
    artifacts = ["usc_report.json", "base_spectrum.csv"]
    fileio.save_usc_report(report, os.path.join(cfg.out_dir, "usc_report.json"))
    fileio.save_spectrum_graph(report.base_graph,
                               os.path.join(cfg.out_dir, "base_spectrum.csv"))
    for i, graph in enumerate(report.graphs):
        name = f"spectrum_{i}.csv"
        fileio.save_spectrum_graph(graph, os.path.join(cfg.out_dir, name))
        artifacts.append(name)
    return artifacts


def _cmd_oracle_check(cfg: _Config, sft: Sft) -> list[str]:
    phi = _load_potential_param(cfg, sft)
    max_period = int(cfg.param("max_period", 12))
    t = float(cfg.param("t", 1.0))
    n_list = [int(n) for n in cfg.param("n_list", [4, 8, 12])]
    word_n = int(cfg.param("word_n", 20))
    bins = int(cfg.param("bins", 7))

    catalog = enumerate_orbits(sft, max_period)
    fileio.save_catalog(catalog, os.path.join(cfg.out_dir, "catalog.csv"))

    from .thermo import pressure as exact_pressure
    reference = exact_pressure(sft, phi, t)
    rows = []
    for n in n_list:
        estimate = periodic_pressure(sft, phi, t, n)
        rows.append((n, estimate, reference, abs(estimate - reference)))
    fileio._csv(os.path.join(cfg.out_dir, "periodic_pressure.csv"),
                "n,estimate,reference,abs_error", rows)

    histogram = word_count_spectrum(sft, phi, word_n, bins)
    fileio.save_spectrum_graph(histogram,
                               os.path.join(cfg.out_dir, "word_spectrum.csv"))
    reference_graph = entropy_spectrum(sft, phi, 201)
    # The histogram is compared vertically at its own bin centers; that is
    # the sup-norm the coherence invariant is stated in.
    interp = np.interp(histogram.alphas, reference_graph.alphas,
                       reference_graph.values)
    sup_gap = float(np.abs(histogram.values - interp).max())
    errors = [r[3] for r in rows]
    fileio._write_json(os.path.join(cfg.out_dir, "oracle_report.json"), {
        "periodic_pressure_errors": errors,
        "errors_decreasing": all(b < a for a, b in zip(errors, errors[1:])),
        "word_spectrum_sup_gap": sup_gap,
    })
    return ["catalog.csv", "periodic_pressure.csv", "word_spectrum.csv",
            "oracle_report.json"]


_RUNNERS = {
    "pressure": _cmd_pressure,
    "spectrum": _cmd_spectrum,
    "path": _cmd_path,
    "realize": _cmd_realize,
    "demo-usc": _cmd_demo_usc,
    "oracle-check": _cmd_oracle_check,
}


def run(config_path: str, verbose: bool = False) -> int:
    cfg = _Config(config_path)
    sft = fileio.load_sft(cfg.sft_path)
    os.makedirs(cfg.out_dir, exist_ok=True)
    if verbose:
        print(f"running {cfg.command} -> {cfg.out_dir}", file=sys.stderr)
    artifacts = _RUNNERS[cfg.command](cfg, sft)
    fileio.write_manifest(cfg.out_dir, artifacts)
    if verbose:
        for name in artifacts + ["manifest.txt"]:
            print(f"  wrote {name}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sftspectra",
        description="Pressure, entropy spectra, and realization on subshifts "
                    "of finite type; emits deterministic CSV/JSON artifacts.")
    parser.add_argument("--config", required=True,
                        help="path to a JSON run configuration")
    parser.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="worker budget; accepted for interface "
                             "stability, current computations are "
                             "sequential and deterministic")
    parser.add_argument("--verbose", action="store_true",
                        help="report progress on stderr")
    args = parser.parse_args(argv)
    try:
        return run(args.config, verbose=args.verbose)
    except ConfigInvalidError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except HypothesisViolationError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 2
    except SftSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
