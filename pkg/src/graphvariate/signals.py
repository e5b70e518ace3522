"""Domain containers: multivariate signals, weighted graphs and network tensors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

GRAPH_KINDS = ("generic", "correlation", "coherence", "pli", "spatial")


class DimensionError(ValueError):
    """Raised when node or sample dimensions of two operands disagree."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MultivariateSignal:
    """``n`` univariate signals (rows) sampled at ``p`` instants (columns).

    Parameters
    ----------
    data : array_like, shape (n, p)
        Signal values; every entry must be finite.
    sample_rate : float
        Samples per unit (Hz for time series, samples per metre for logs).
    node_labels : sequence of str, optional
        One label per row.
    """

    data: np.ndarray
    sample_rate: float = 1.0
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise ValueError(f"signal data must be 2-D, got shape {data.shape}")
        n, p = data.shape
        if n < 2 or p < 2:
            raise ValueError(f"need at least 2 nodes and 2 samples, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("signal contains NaN or Inf")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "data", _readonly(data))
        if self.node_labels is not None:
            labels = tuple(str(s) for s in self.node_labels)
            if len(labels) != n:
                raise ValueError(f"{len(labels)} labels for {n} nodes")
            object.__setattr__(self, "node_labels", labels)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]

    def with_data(self, data: np.ndarray) -> "MultivariateSignal":
        """Same metadata, new values."""
        return MultivariateSignal(data, self.sample_rate, self.node_labels)

    def epoch(self, start: int, stop: int) -> "MultivariateSignal":
        """Samples ``start:stop`` as a new signal."""
        start, stop = check_epoch((start, stop), self.p)
        return self.with_data(self.data[:, start:stop])


def check_epoch(epoch, p: int, min_length: int = 2) -> tuple[int, int]:
    """Normalise an epoch given as ``None``, ``(start, stop)`` or a ``slice``."""
    if epoch is None:
        start, stop = 0, p
    elif isinstance(epoch, slice):
        start, stop, step = epoch.indices(p)
        if step != 1:
            raise ValueError("epochs must be contiguous")
    else:
        start, stop = (int(v) for v in epoch)
    if not (0 <= start < stop <= p):
        raise IndexError(f"epoch ({start}, {stop}) out of bounds for {p} samples")
    if stop - start < min_length:
        raise ValueError(f"epoch length {stop - start} < {min_length}")
    return start, stop


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted adjacency (or connectivity) matrix with zero diagonal.

    ``degenerate_nodes`` lists nodes whose weights could not be estimated
    (e.g. a constant row under Pearson correlation) and were set to zero.
    """

    weights: np.ndarray
    kind: str = "generic"
    degenerate_nodes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("graph needs at least 2 nodes")
        if self.kind not in GRAPH_KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights contain NaN or Inf")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be symmetric")
        if np.any(np.diag(w) != 0):
            raise ValueError("weights must have a zero diagonal")
        if self.kind in ("coherence", "pli") and (w.min() < 0 or w.max() > 1):
            raise ValueError(f"{self.kind} weights must lie in [0, 1]")
        if self.kind == "correlation" and (w.min() < -1 or w.max() > 1):
            raise ValueError("correlation weights must lie in [-1, 1]")
        object.__setattr__(self, "weights", _readonly(w))
        object.__setattr__(self, "degenerate_nodes", tuple(int(i) for i in self.degenerate_nodes))

    @classmethod
    def from_matrix(cls, w, kind: str = "generic") -> "WeightedGraph":
        """Symmetrise ``w`` by averaging with its transpose and zero the diagonal."""
        w = np.asarray(w, dtype=float)
        w = 0.5 * (w + w.T)
        np.fill_diagonal(w, 0.0)
        return cls(w, kind)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def laplacian(self) -> np.ndarray:
        """Combinatorial Laplacian ``D - W``."""
        return np.diag(self.degrees) - self.weights


@dataclass(frozen=True)
class GraphVariateSignal:
    """A multivariate signal bound to a graph over the same node set."""

    signal: MultivariateSignal
    graph: WeightedGraph

    def __post_init__(self):
        if self.graph.n != self.signal.n:
            raise DimensionError(
                f"graph has {self.graph.n} nodes but signal has {self.signal.n}"
            )


@dataclass(frozen=True)
class InstantaneousNetworkTensor:
    """``p`` per-sample ``n x n`` networks, stored slice-major as ``(p, n, n)``."""

    slices: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.slices, dtype=float)
        if s.ndim != 3 or s.shape[1] != s.shape[2]:
            raise ValueError(f"slices must have shape (p, n, n), got {s.shape}")
        if np.any(np.diagonal(s, axis1=1, axis2=2) != 0):
            raise ValueError("every slice must have a zero diagonal")
        object.__setattr__(self, "slices", _readonly(s))

    @property
    def n(self) -> int:
        return self.slices.shape[1]

    @property
    def p(self) -> int:
        return self.slices.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.slices)

    def __getitem__(self, t) -> np.ndarray:
        return self.slices[t]


NODE_FUNCTION_TAGS = (
    "squared_difference",
    "instantaneous_correlation",
    "envelope_squared_difference",
    "envelope_instantaneous_correlation",
    "phase_sign",
    "pair_average",
)

# short names used on the command line
TAG_ALIASES = {
    "sqd": "squared_difference",
    "ico": "instantaneous_correlation",
    "env_sqd": "envelope_squared_difference",
    "env_ico": "envelope_instantaneous_correlation",
    "phs": "phase_sign",
    "phase_sign": "phase_sign",
    "avg": "pair_average",
}


def canonical_tag(tag: str) -> str:
    tag = TAG_ALIASES.get(tag, tag)
    if tag not in NODE_FUNCTION_TAGS:
        raise ValueError(f"unknown node function {tag!r}")
    return tag


@dataclass(frozen=True)
class NodeFunctionKind:
    """A bivariate node function plus the per-node statistics it needs.

    ``means`` are the temporal means used by ``instantaneous_correlation``;
    ``envelope``/``envelope_means`` feed the envelope variants and ``phase``
    feeds ``phase_sign``. ``margin`` is the number of unreliable samples at
    each end of ``envelope``/``phase`` (filter and Hilbert end effects).
    """

    tag: str
    means: np.ndarray | None = None
    envelope: np.ndarray | None = None
    envelope_means: np.ndarray | None = None
    phase: np.ndarray | None = None
    margin: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tag", canonical_tag(self.tag))
        for name in ("means", "envelope", "envelope_means", "phase"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _readonly(v))
        needs = {
            "instantaneous_correlation": ("means",),
            "envelope_squared_difference": ("envelope",),
            "envelope_instantaneous_correlation": ("envelope", "envelope_means"),
            "phase_sign": ("phase",),
        }.get(self.tag, ())
        missing = [k for k in needs if getattr(self, k) is None]
        if missing:
            raise ValueError(f"{self.tag} requires statistics {missing}")

    @property
    def symmetric(self) -> bool:
        return self.tag != "phase_sign"

    def check_dimensions(self, n: int, p: int) -> None:
        for name, shape in (
            ("means", (n,)),
            ("envelope_means", (n,)),
            ("envelope", (n, p)),
            ("phase", (n, p)),
        ):
            v = getattr(self, name)
            if v is not None and v.shape != shape:
                raise DimensionError(f"{name} has shape {v.shape}, expected {shape}")


def as_signal(x, sample_rate: float = 1.0) -> MultivariateSignal:
    if isinstance(x, MultivariateSignal):
        return x
    return MultivariateSignal(np.asarray(x, dtype=float), sample_rate)


def as_graph(w, kind: str = "generic") -> WeightedGraph:
    if isinstance(w, WeightedGraph):
        return w
    return WeightedGraph(np.asarray(w, dtype=float), kind)


def node_subset(nodes: Sequence[int], n: int) -> np.ndarray:
    idx = np.unique(np.asarray(list(nodes), dtype=int))
    if idx.size == 0:
        raise ValueError("module must contain at least one node")
    if idx.min() < 0 or idx.max() >= n:
        raise IndexError(f"module nodes out of range for {n} nodes")
    return idx
