"""Command-line interface.

::

    graphvariate analyze --input-path data.csv --graph-kind correlation --node-function ico
    graphvariate connectivity --input-path data.csv --graph-kind coherence --band 8 13
    graphvariate cluster --input-path data.csv
    graphvariate simulate ar-detect --sizes 2 4 8 --populations 5 10 --repetitions 1
    graphvariate simulate spheroid --deltas 0.5 --replicates 1

Settings come from built-in defaults, then ``--config file.json``, then
explicit flags.  Every command writes CSV tables and a ``manifest.json`` whose
``config`` entry can be passed back through ``--config`` to repeat the run.
Exit codes: 0 success, 2 input/output problem, 3 invalid configuration,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import platform
import sys
from dataclasses import dataclass
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy

from .connectivity import (
    WindowScheme,
    connectivity_graph,
    gvd,
    prepare_node_function,
    windowed_gvd,
)
from .core import iter_graph_weighted_slices, local_clustering
from .experiments.ar import METHODS, ArModel, correlated_source_experiment
from .experiments.spheroid import GridWorld, spheroid_experiment
from .io import CsvFormatError, ingest_csv, read_matrix, write_matrix, write_table
from .signals import WeightedGraph, canonical_tag, node_subset
from .spectral import bandpass_taps

EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC = 2, 3, 4

GRAPH_KINDS = ("correlation", "coherence", "pli", "external")
NODE_FUNCTIONS = ("sqd", "ico", "env_sqd", "env_ico", "phase_sign")
BAND_FUNCTIONS = ("env_sqd", "env_ico", "phase_sign")


class ConfigError(ValueError):
    pass


def _tuple_or_none(v, cast=float):
    return None if v is None else tuple(cast(x) for x in v)


@dataclass(frozen=True)
class AnalysisConfig:
    input_path: str | None = None
    sample_rate: float = 1.0
    band: tuple[float, float] | None = None
    graph_kind: str = "correlation"
    node_function: str = "ico"
    window_scheme: tuple[int, int, int] | None = None
    module_nodes: tuple[int, ...] | None = None
    graph_path: str | None = None
    output_dir: str = "graphvariate-out"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "band", _tuple_or_none(self.band))
        object.__setattr__(self, "window_scheme", _tuple_or_none(self.window_scheme, int))
        object.__setattr__(self, "module_nodes", _tuple_or_none(self.module_nodes, int))

    def validate(self, command: str = "analyze") -> None:
        if not self.input_path:
            raise ConfigError("input_path is required")
        if not (self.sample_rate > 0):
            raise ConfigError("sample_rate must be positive")
        if self.graph_kind not in GRAPH_KINDS:
            raise ConfigError(f"graph_kind must be one of {GRAPH_KINDS}, got {self.graph_kind!r}")
        if self.node_function not in NODE_FUNCTIONS:
            raise ConfigError(
                f"node_function must be one of {NODE_FUNCTIONS}, got {self.node_function!r}"
            )
        needs_band = self.graph_kind in ("coherence", "pli") or (
            command == "analyze" and self.node_function in BAND_FUNCTIONS
        )
        if needs_band and self.band is None:
            raise ConfigError(f"a band is required for {self.graph_kind}/{self.node_function}")
        if self.band is not None:
            if len(self.band) != 2:
                raise ConfigError("band needs exactly two edges")
            try:
                bandpass_taps(self.sample_rate, *self.band)
            except ValueError as exc:
                raise ConfigError(f"invalid band: {exc}") from None
        if self.graph_kind == "external" and not self.graph_path:
            raise ConfigError("graph_kind=external needs graph_path")
        if self.window_scheme is not None:
            if len(self.window_scheme) != 3:
                raise ConfigError("window_scheme is (tau, T, offset)")
            if self.graph_kind == "external":
                raise ConfigError("window_scheme re-estimates the graph per epoch; not available for external graphs")
            try:
                WindowScheme(*self.window_scheme)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None


@dataclass(frozen=True)
class ArDetectConfig:
    sizes: tuple[int, ...] = (2, 4, 8, 16, 32, 64, 128, 256, 512)
    populations: tuple[int, ...] = tuple(range(5, 55, 5))
    repetitions: int = 1
    length: int = 1000
    output_dir: str = "graphvariate-out"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(h) for h in self.sizes))
        object.__setattr__(self, "populations", tuple(int(m) for m in self.populations))

    def validate(self, command: str = "") -> None:
        if not self.sizes or any(h < 2 or h % 2 for h in self.sizes):
            raise ConfigError("sizes must be even numbers >= 2")
        if not self.populations or any(m < 2 for m in self.populations):
            raise ConfigError("populations must be >= 2")
        if self.repetitions < 1 or self.length < 3:
            raise ConfigError("repetitions must be >= 1 and length >= 3")


@dataclass(frozen=True)
class SpheroidConfig:
    deltas: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    replicates: int = 20
    length: int = 1000
    noise_sd: float = 0.3
    dims: tuple[int, int, int] = (10, 10, 10)
    output_dir: str = "graphvariate-out"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    def validate(self, command: str = "") -> None:
        if not self.deltas or any(d < 0 for d in self.deltas):
            raise ConfigError("deltas must be non-negative")
        if self.replicates < 1 or self.length < 1 or self.noise_sd < 0:
            raise ConfigError("replicates/length must be positive and noise_sd non-negative")
        if len(self.dims) != 3 or min(self.dims) < 2:
            raise ConfigError("dims must be three sizes >= 2")


def config_to_dict(config) -> dict:
    return {
        k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(config).items()
    }


def config_from_dict(cls, data: dict):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file of settings (flags take precedence)")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1, help="BLAS threads (default 1)")


def _analysis_flags(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--input-path", dest="input_path", default=S)
    p.add_argument("--sample-rate", dest="sample_rate", type=float, default=S)
    p.add_argument("--band", nargs=2, type=float, metavar=("LOW", "HIGH"), default=S)
    p.add_argument("--graph-kind", dest="graph_kind", choices=GRAPH_KINDS, default=S)
    p.add_argument("--graph-path", dest="graph_path", default=S)
    p.add_argument("--node-function", dest="node_function", choices=NODE_FUNCTIONS, default=S)
    p.add_argument(
        "--window-scheme", dest="window_scheme", nargs=3, type=int,
        metavar=("TAU", "T", "OFFSET"), default=S,
    )
    p.add_argument("--module-nodes", dest="module_nodes", nargs="+", type=int, default=S)


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = _Parser(prog="graphvariate", description="Graph-variate signal analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("analyze", "node GVD connectivity, clustering and connectivity matrices"),
        ("connectivity", "connectivity matrix only"),
        ("cluster", "per-sample local clustering coefficients only"),
    ):
        p = sub.add_parser(name, help=text)
        _analysis_flags(p)
        _common(p)
    sim = sub.add_parser("simulate", help="run a simulation experiment")
    kinds = sim.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    ar = kinds.add_parser("ar-detect", help="correlated-source detection p-value grids")
    ar.add_argument("--sizes", nargs="+", type=int, default=S)
    ar.add_argument("--populations", nargs="+", type=int, default=S)
    ar.add_argument("--repetitions", type=int, default=S)
    ar.add_argument("--length", type=int, default=S)
    _common(ar)
    sp = kinds.add_parser("spheroid", help="spheroid detection tables")
    sp.add_argument("--deltas", nargs="+", type=float, default=S)
    sp.add_argument("--replicates", type=int, default=S)
    sp.add_argument("--length", type=int, default=S)
    sp.add_argument("--noise-sd", dest="noise_sd", type=float, default=S)
    sp.add_argument("--dims", nargs=3, type=int, default=S)
    _common(sp)
    return parser


def resolve_config(cls, args: argparse.Namespace):
    """Defaults, then the JSON file, then explicit flags."""
    data: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON ({exc})") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        # a manifest from an earlier run works as a config file
        data.update(loaded["config"] if "config" in loaded else loaded)
    names = {f.name for f in dataclasses.fields(cls)}
    for k, v in vars(args).items():
        if k in names and v is not None:
            data[k] = v
    return config_from_dict(cls, data)


def _versions() -> dict:
    try:
        own = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        own = "unknown"
    return {
        "graphvariate": own,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def _write_manifest(out: Path, command: str, config, threads: int, **extra) -> None:
    manifest = {
        "command": command,
        "config": config_to_dict(config),
        "seed": config.seed,
        "threads": threads,
        "versions": _versions(),
        **extra,
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_graph(config: AnalysisConfig, signal, band_margin: int) -> WeightedGraph:
    if config.graph_kind == "external":
        w = read_matrix(config.graph_path)
        if w.shape != (signal.n, signal.n):
            raise ConfigError(f"external graph is {w.shape}, signal has {signal.n} nodes")
        try:
            return WeightedGraph(w, "generic")
        except ValueError as exc:
            raise ConfigError(f"external graph: {exc}") from None
    margin = band_margin if config.graph_kind == "pli" else None
    return connectivity_graph(config.graph_kind, signal, band=config.band, margin=margin)


def _signal_and_graph(config: AnalysisConfig):
    signal = ingest_csv(config.input_path, config.sample_rate)
    if config.module_nodes is not None:
        try:
            node_subset(config.module_nodes, signal.n)
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"module_nodes: {exc}") from None
    band_fn = config.node_function in BAND_FUNCTIONS
    kind = prepare_node_function(
        config.node_function, signal, band=config.band if band_fn else None
    )
    graph = _load_graph(config, signal, kind.margin)
    return signal, graph, kind


def _sample_header(p: int) -> list[int]:
    return list(range(p))


def run_analyze(config: AnalysisConfig, command: str = "analyze", threads: int = 1) -> Path:
    config.validate(command)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    signal, graph, kind = _signal_and_graph(config)
    labels = signal.node_labels or [f"node{i}" for i in range(signal.n)]
    extra = {"margins": {"unreliable_samples_per_side": kind.margin}}
    if command in ("analyze", "connectivity"):
        write_matrix(out / "connectivity.csv", graph.weights, labels, labels)
    if command in ("analyze", "cluster"):
        cloc = local_clustering(iter_graph_weighted_slices(graph, signal, kind))
        write_matrix(out / "clustering.csv", cloc, labels, _sample_header(signal.p))
    if command == "analyze":
        result = gvd(signal, graph, kind)
        write_matrix(out / "node_gvd.csv", result.node_values, labels, _sample_header(signal.p))
        extra["warnings"] = list(result.warnings)
        if config.window_scheme is not None:
            scheme = WindowScheme(*config.window_scheme)
            table = windowed_gvd(
                signal, scheme, config.graph_kind, config.node_function,
                band=config.band, module_nodes=config.module_nodes,
            )
            rows = [(e, w, float(table[e, w])) for e in range(table.shape[0]) for w in range(table.shape[1])]
            write_table(out / "windowed_gvd.csv", ["epoch", "window", "value"], rows)
        elif config.module_nodes is not None:
            idx = node_subset(config.module_nodes, signal.n)
            series = result.node_values[idx].sum(axis=0)
            write_table(out / "module_gvd.csv", ["sample", "value"], [(t, float(v)) for t, v in enumerate(series)])
    _write_manifest(out, command, config, threads, **extra)
    return out


def run_ar_detect(config: ArDetectConfig, threads: int = 1) -> Path:
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    grids = {
        m: np.empty((config.repetitions, len(config.populations), len(config.sizes)))
        for m in METHODS
    }
    rows = []
    model = ArModel()
    for rep in range(config.repetitions):
        for c, h in enumerate(config.sizes):
            for r, pop in enumerate(config.populations):
                res = correlated_source_experiment(h, pop, config.seed, model, config.length, rep)
                for m in METHODS:
                    t = res.tests[m]
                    grids[m][rep, r, c] = t.p_value
                    rows.append((m, rep, h, pop, float(t.statistic), float(t.p_value), float(t.mean), int(t.degenerate)))
    for m in METHODS:
        for rep in range(config.repetitions):
            write_matrix(
                out / f"ar_detect_pvalues_{m}_rep{rep}.csv",
                grids[m][rep],
                [str(v) for v in config.populations],
                list(config.sizes),
            )
    write_table(
        out / "ar_detect_long.csv",
        ["method", "repetition", "signal_size", "population", "t", "p_value", "mean_difference", "degenerate"],
        rows,
    )
    _write_manifest(out, "simulate ar-detect", config, threads)
    return out


def run_spheroid(config: SpheroidConfig, threads: int = 1) -> Path:
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = spheroid_experiment(
        config.deltas, config.replicates, config.length, config.seed,
        GridWorld(config.dims), config.noise_sd,
    )
    pct = report.percentages_by_delta()
    write_table(
        out / "spheroid_percentages.csv",
        ["delta", "detector", "centre_pct", "any_pct"],
        [
            (d, name, float(pct[i, k, 0]), float(pct[i, k, 1]))
            for i, d in enumerate(report.deltas)
            for k, name in enumerate(report.detectors)
        ],
    )
    write_table(
        out / "spheroid_counts.csv",
        ["delta", "replicate", "detector", "centre_hits", "any_hits", "samples"],
        [
            (d, r, name, int(report.counts[i, r, k, 0]), int(report.counts[i, r, k, 1]), report.length)
            for i, d in enumerate(report.deltas)
            for r in range(report.replicates)
            for k, name in enumerate(report.detectors)
        ],
    )
    write_table(
        out / "spheroid_overall.csv",
        ["detector", "centre_pct", "any_pct"],
        [(name, c, a) for name, (c, a) in report.overall().items()],
    )
    _write_manifest(out, "simulate spheroid", config, threads)
    return out


def _dispatch(args: argparse.Namespace) -> Path:
    if args.command == "simulate":
        if args.experiment == "ar-detect":
            return run_ar_detect(resolve_config(ArDetectConfig, args), args.threads)
        return run_spheroid(resolve_config(SpheroidConfig, args), args.threads)
    config = resolve_config(AnalysisConfig, args)
    try:
        canonical_tag(config.node_function)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return run_analyze(config, args.command, args.threads)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        from threadpoolctl import threadpool_limits

        with threadpool_limits(limits=args.threads):
            out = _dispatch(args)
    except ConfigError as exc:
        print(f"graphvariate: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, CsvFormatError) as exc:
        print(f"graphvariate: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"graphvariate: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
