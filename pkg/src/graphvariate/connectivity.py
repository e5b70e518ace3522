"""Connectivity graphs and graph-variate dynamic (GVD) connectivity.

A connectivity graph (correlation, band coherence, phase-lag index) is
estimated over a long epoch and then used to weight an instantaneous node
function of the same signal, giving connectivity at sample resolution.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_CHUNK,
    iter_graph_weighted_slices,
    node_function_row_sums,
    wrapped_phase_sign,
)
from .signals import (
    DimensionError,
    MultivariateSignal,
    NodeFunctionKind,
    WeightedGraph,
    as_graph,
    as_signal,
    canonical_tag,
    check_epoch,
    node_subset,
)
from .spectral import analytic_signal, bandpass, bandpass_margin, welch_spectra

# node function a connectivity estimator pairs with most naturally
_NATURAL_GRAPH = {
    "squared_difference": ("correlation",),
    "instantaneous_correlation": ("correlation",),
    "envelope_squared_difference": ("coherence",),
    "envelope_instantaneous_correlation": ("coherence",),
    "phase_sign": ("pli",),
    "pair_average": (),
}


@dataclass(frozen=True)
class GvdResult:
    """Node GVD connectivity ``theta_i(X, t)``, shape (n, p).

    ``warnings`` records soft incompatibilities between the node function and
    the graph kind; ``unreliable_margin`` is the per-side count of samples
    affected by filtering/Hilbert end effects.
    """

    node_values: np.ndarray
    kind: str
    graph_kind: str
    unreliable_margin: int = 0
    warnings: tuple[str, ...] = ()

    @property
    def reliable(self) -> slice:
        p = self.node_values.shape[1]
        return slice(self.unreliable_margin, p - self.unreliable_margin)


@dataclass(frozen=True)
class WindowScheme:
    """Disjoint long epochs of ``tau`` samples split into disjoint ``t_window`` windows."""

    tau: int
    t_window: int
    start_offset: int = 0

    def __post_init__(self):
        if self.t_window < 2 or self.tau < 2:
            raise ValueError("tau and t_window must both be at least 2")
        if self.t_window > self.tau:
            raise ValueError(f"t_window {self.t_window} exceeds tau {self.tau}")
        if self.start_offset < 0:
            raise ValueError("start_offset must be non-negative")

    @property
    def windows_per_epoch(self) -> int:
        return self.tau // self.t_window

    def epochs(self, p: int) -> list[tuple[int, int]]:
        starts = range(self.start_offset, p - self.tau + 1, self.tau)
        return [(s, s + self.tau) for s in starts]


def correlation_matrix(signal: MultivariateSignal, epoch=None) -> WeightedGraph:
    """Pearson correlation over ``epoch``; pairs involving a constant row get 0."""
    signal = as_signal(signal)
    start, stop = check_epoch(epoch, signal.p, min_length=3)
    x = signal.data[:, start:stop]
    d = x - x.mean(axis=1, keepdims=True)
    ss = np.sqrt((d**2).sum(axis=1))
    flat = ss == 0
    ss[flat] = 1.0
    z = d / ss[:, None]
    c = np.clip(z @ z.T, -1.0, 1.0)
    c[flat, :] = 0.0
    c[:, flat] = 0.0
    c = 0.5 * (c + c.T)
    np.fill_diagonal(c, 0.0)
    return WeightedGraph(c, "correlation", tuple(np.flatnonzero(flat)))


def coherence_matrix(signal: MultivariateSignal, band, epoch=None) -> WeightedGraph:
    """Welch magnitude-squared coherence averaged over the bins inside ``band``."""
    signal = as_signal(signal)
    start, stop = check_epoch(epoch, signal.p)
    low, high = band
    if not (0 <= low < high <= signal.sample_rate / 2):
        raise ValueError(f"band ({low}, {high}) outside [0, Nyquist]")
    spec = welch_spectra(signal.with_data(signal.data[:, start:stop]))
    sel = (spec.frequencies >= low) & (spec.frequencies <= high)
    if not sel.any():
        raise ValueError(
            f"band ({low}, {high}) contains no frequency bins "
            f"(resolution {spec.frequencies[1]:g})"
        )
    msc = spec.coherence()[:, :, sel].mean(axis=2)
    msc = 0.5 * (msc + msc.T)
    np.fill_diagonal(msc, 0.0)
    dead = tuple(np.flatnonzero(spec.auto[:, sel].sum(axis=1) == 0))
    return WeightedGraph(np.clip(msc, 0.0, 1.0), "coherence", dead)


def pli_from_phase(phase: np.ndarray) -> np.ndarray:
    """``|mean_t sgn(phi_i - phi_j)|`` with the difference wrapped to (-pi, pi)."""
    n = phase.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        signs = wrapped_phase_sign(phase[i][None, :], phase[i + 1 :])
        out[i, i + 1 :] = np.abs(signs.mean(axis=1))
    return out + out.T


def pli_matrix(signal: MultivariateSignal, epoch=None, margin: int | None = None) -> WeightedGraph:
    """Phase-lag index over ``epoch``, excluding ``margin`` samples at each end.

    The default margin is the analytic-signal end-effect margin.
    """
    signal = as_signal(signal)
    start, stop = check_epoch(epoch, signal.p)
    dec = analytic_signal(signal.with_data(signal.data[:, start:stop]))
    m = dec.margin if margin is None else int(margin)
    phase = dec.phase[:, m : dec.phase.shape[1] - m]
    if phase.shape[1] < 1:
        raise ValueError("no samples left after removing margins")
    return WeightedGraph(np.clip(pli_from_phase(phase), 0.0, 1.0), "pli")


def prepare_node_function(
    tag: str,
    signal: MultivariateSignal,
    epoch=None,
    band=None,
    margin: int = 0,
) -> NodeFunctionKind:
    """Compute the statistics ``tag`` needs from ``signal``.

    Temporal means (and envelope means) are taken over ``epoch`` excluding
    ``margin`` samples at each end of the whole signal.  Envelope and phase
    kinds band-pass the signal first when ``band`` is given; the returned
    margin then includes the filter half-order and the Hilbert margin.
    """
    tag = canonical_tag(tag)
    signal = as_signal(signal)
    start, stop = check_epoch(epoch, signal.p)
    if tag in ("squared_difference", "pair_average"):
        return NodeFunctionKind(tag, margin=margin)
    if tag == "instantaneous_correlation":
        lo, hi = max(start, margin), min(stop, signal.p - margin)
        means = signal.data[:, lo:hi].mean(axis=1)
        return NodeFunctionKind(tag, means=means, margin=margin)
    source = signal
    total_margin = margin
    if band is not None:
        source = bandpass(signal, *band)
        total_margin = max(total_margin, bandpass_margin(signal.sample_rate, *band))
    dec = analytic_signal(source)
    total_margin = max(total_margin, dec.margin)
    if tag == "phase_sign":
        return NodeFunctionKind(tag, phase=dec.phase, margin=total_margin)
    lo, hi = max(start, total_margin), min(stop, signal.p - total_margin)
    if hi <= lo:
        raise ValueError("epoch lies entirely inside the unreliable margins")
    env_means = dec.envelope[:, lo:hi].mean(axis=1)
    return NodeFunctionKind(tag, envelope=dec.envelope, envelope_means=env_means, margin=total_margin)


def gvd(
    signal: MultivariateSignal,
    graph: WeightedGraph,
    kind: NodeFunctionKind,
    chunk: int = DEFAULT_CHUNK,
) -> GvdResult:
    """Node GVD connectivity ``sum_j c_ij F(x_i(t), x_j(t))`` for every node and sample."""
    signal = as_signal(signal)
    graph = as_graph(graph)
    if graph.n != signal.n:
        raise DimensionError(f"graph has {graph.n} nodes, signal has {signal.n}")
    notes = []
    natural = _NATURAL_GRAPH[kind.tag]
    if natural and graph.kind in ("correlation", "coherence", "pli") and graph.kind not in natural:
        msg = f"node function {kind.tag} paired with a {graph.kind} graph"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    values = node_function_row_sums(graph, signal, kind, chunk)
    return GvdResult(values, kind.tag, graph.kind, kind.margin, tuple(notes))


def gvd_tensor_slices(signal, graph, kind, chunk: int = DEFAULT_CHUNK):
    """Stream the edge-level GVD tensor ``c_ij F(x_i(t), x_j(t))`` in sample blocks."""
    return iter_graph_weighted_slices(graph, signal, kind, chunk)


def modular_connectivity(
    signal: MultivariateSignal,
    graph: WeightedGraph,
    kind: NodeFunctionKind,
    module_nodes,
    epoch=None,
) -> float:
    """Mean over ``epoch`` of the summed node GVD connectivity of ``module_nodes``.

    ``i`` runs over the module and ``j`` over all nodes.
    """
    signal = as_signal(signal)
    idx = node_subset(module_nodes, signal.n)
    start, stop = check_epoch(epoch, signal.p, min_length=1)
    values = gvd(signal, graph, kind).node_values
    return float(values[idx, start:stop].sum(axis=0).mean())


def connectivity_graph(
    graph_kind: str, signal: MultivariateSignal, epoch=None, band=None, margin: int | None = None
) -> WeightedGraph:
    """Dispatch to the correlation, coherence or PLI estimator."""
    if graph_kind == "correlation":
        return correlation_matrix(signal, epoch)
    if graph_kind == "coherence":
        if band is None:
            raise ValueError("coherence graphs need a frequency band")
        return coherence_matrix(signal, band, epoch)
    if graph_kind == "pli":
        if band is not None:
            signal = bandpass(signal, *band)
        return pli_matrix(signal, epoch, margin)
    raise ValueError(f"unknown connectivity graph kind {graph_kind!r}")


def windowed_gvd(
    signal: MultivariateSignal,
    scheme: WindowScheme,
    graph_kind: str,
    function_kind: str,
    band=None,
    module_nodes=None,
) -> np.ndarray:
    """Modular GVD connectivity for each ``(epoch, window)`` pair.

    Each disjoint ``tau`` epoch gets its own connectivity graph and node
    statistics; the node function is then averaged over each disjoint
    ``t_window`` window inside it.  Trailing partial windows are dropped.
    Returns an array of shape (epochs, windows per epoch).
    """
    signal = as_signal(signal)
    epochs = scheme.epochs(signal.p)
    if not epochs:
        raise ValueError(
            f"signal of {signal.p} samples has no full epoch of {scheme.tau} "
            f"after offset {scheme.start_offset}"
        )
    tag = canonical_tag(function_kind)
    idx = np.arange(signal.n) if module_nodes is None else node_subset(module_nodes, signal.n)
    # filtering and the Hilbert transform run once over the whole recording
    source = signal
    if band is not None and graph_kind == "pli":
        source = bandpass(signal, *band)
    full_kind = None
    if tag in ("envelope_squared_difference", "envelope_instantaneous_correlation", "phase_sign"):
        full_kind = prepare_node_function(tag, signal, band=band)
    nw = scheme.windows_per_epoch
    out = np.empty((len(epochs), nw))
    for e, (start, stop) in enumerate(epochs):
        if graph_kind == "pli":
            graph = pli_matrix(source, (start, stop))
        else:
            graph = connectivity_graph(graph_kind, signal, (start, stop), band)
        if full_kind is None:
            kind = prepare_node_function(tag, signal, epoch=(start, stop))
        elif tag == "envelope_instantaneous_correlation":
            means = full_kind.envelope[:, start:stop].mean(axis=1)
            kind = NodeFunctionKind(
                tag, envelope=full_kind.envelope, envelope_means=means, margin=full_kind.margin
            )
        else:
            kind = full_kind
        piece = signal.with_data(signal.data[:, start:stop])
        sub = _restrict_kind(kind, start, stop)
        values = node_function_row_sums(graph, piece, sub)[idx].sum(axis=0)
        out[e] = values[: nw * scheme.t_window].reshape(nw, scheme.t_window).mean(axis=1)
    return out


def _restrict_kind(kind: NodeFunctionKind, start: int, stop: int) -> NodeFunctionKind:
    env = None if kind.envelope is None else kind.envelope[:, start:stop]
    phase = None if kind.phase is None else kind.phase[:, start:stop]
    return NodeFunctionKind(
        kind.tag,
        means=kind.means,
        envelope=env,
        envelope_means=kind.envelope_means,
        phase=phase,
        margin=kind.margin,
    )
