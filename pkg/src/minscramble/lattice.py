"""Randomized Ising lattices and sweeps of the minimum-scrambling cut.

Sites are numbered row-major, ``v = r * cols + c``.  Nearest-neighbour (NN)
couplings are standard normal; next-nearest-neighbour (NNN, one diagonal
apart) couplings are ``x * N(0, 1)``.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .partition import Edge, InteractionGraph, _stoer_wagner_side, canonical_side

MAX_SITES = 400
CSV_FIELDS = ("x", "mean_rate", "std_rate", "mean_S_size", "std_S_size", "n_samples")


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeSpec:
    rows: int
    cols: int
    periodic: bool = False
    nnn: bool = False
    pauli_pair: str = "ZZ"

    def __post_init__(self):
        if int(self.rows) < 1 or int(self.cols) < 1:
            raise LatticeError(f"rows and cols must be positive, got {self.rows}x{self.cols}")
        if self.rows * self.cols > MAX_SITES:
            raise LatticeError(f"{self.rows}x{self.cols} exceeds the {MAX_SITES}-site cap")
        if len(self.pauli_pair) != 2 or not set(self.pauli_pair) <= set("XYZ"):
            raise LatticeError(f"pauli_pair must be two of X, Y, Z, got {self.pauli_pair!r}")

    @property
    def n(self) -> int:
        return self.rows * self.cols


def _site(spec: LatticeSpec, r: int, c: int):
    if spec.periodic:
        return (r % spec.rows) * spec.cols + (c % spec.cols)
    if 0 <= r < spec.rows and 0 <= c < spec.cols:
        return r * spec.cols + c
    return None


def build_lattice(spec: LatticeSpec) -> InteractionGraph:
    """NN edges first, then NNN edges, all with J = 0 placeholders."""
    seen = set()
    edges = []

    def add(u, v, kind):
        if u is None or v is None or u == v:
            return
        key = (min(u, v), max(u, v))
        if key in seen:
            return
        seen.add(key)
        edges.append(Edge(key[0], key[1], 0.0, spec.pauli_pair, kind))

    for r in range(spec.rows):
        for c in range(spec.cols):
            v = _site(spec, r, c)
            add(v, _site(spec, r, c + 1), "nn")
            add(v, _site(spec, r + 1, c), "nn")
    if spec.nnn:
        for r in range(spec.rows):
            for c in range(spec.cols):
                v = _site(spec, r, c)
                add(v, _site(spec, r + 1, c + 1), "nnn")
                add(v, _site(spec, r + 1, c - 1), "nnn")
    return InteractionGraph(spec.n, tuple(edges))


def _draw(g: InteractionGraph, rng, nn_sigma: float, nnn_multiplier: float) -> np.ndarray:
    kinds = np.array([e.kind == "nnn" for e in g.edges], dtype=bool)
    n_nn = int(np.sum(~kinds))
    J = np.empty(len(g.edges))
    J[~kinds] = nn_sigma * rng.standard_normal(n_nn)
    J[kinds] = nnn_multiplier * rng.standard_normal(len(g.edges) - n_nn)
    return J


def sample_couplings(g: InteractionGraph, nn_sigma: float = 1.0, nnn_multiplier: float = 0.0, seed=0) -> InteractionGraph:
    """Fresh couplings; NN normals are drawn before NNN normals so x only rescales the latter."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return g.with_couplings(_draw(g, rng, nn_sigma, nnn_multiplier))


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepConfig:
    lattice: LatticeSpec
    x_grid: tuple = tuple(np.round(np.arange(0, 5.0 + 1e-9, 0.02), 10))
    samples_per_x: int = 500
    base_seed: int = 0

    def __post_init__(self):
        xs = tuple(float(x) for x in self.x_grid)
        object.__setattr__(self, "x_grid", xs)
        if not xs:
            raise LatticeError("x_grid is empty")
        if any(x < 0 for x in xs):
            raise LatticeError("x_grid entries must be nonnegative")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise LatticeError("x_grid must be strictly ascending")
        if int(self.samples_per_x) != self.samples_per_x or self.samples_per_x < 1:
            raise LatticeError(f"samples_per_x must be a positive integer, got {self.samples_per_x!r}")


@dataclass(frozen=True)
class SweepRecord:
    x: float
    mean_rate: float
    std_rate: float
    mean_S_size: float
    std_S_size: float
    n_samples: int

    def sem(self, field_name: str) -> float:
        std = {"mean_rate": self.std_rate, "mean_S_size": self.std_S_size}[field_name]
        return std / math.sqrt(self.n_samples)


@dataclass
class SampleOutcome:
    rates: np.ndarray
    sizes: np.ndarray


def sample_seed(base_seed: int, x_index: int, sample_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed, x_index, sample_index])


def min_cut_sample(g: InteractionGraph, J: np.ndarray) -> tuple[float, int]:
    """(rate, |S|) of the Stoer-Wagner cut for couplings J on the edges of g."""
    n = g.n
    ei = np.array([e.i for e in g.edges])
    ej = np.array([e.j for e in g.edges])
    w = J * J
    W = np.zeros((n, n))
    np.add.at(W, (ei, ej), w)
    np.add.at(W, (ej, ei), w)
    g_J = g.with_couplings(J)
    if not g_J.is_connected():
        # includes the all-zero draw: the canonical side is a single vertex
        comp = min(g_J.components(), key=lambda c: (len(c), c[0]))
        if len(comp) == n:
            comp = [0]
        side = canonical_side(comp, n)
    else:
        side = canonical_side(_stoer_wagner_side(W), n)
    inside = np.zeros(n, dtype=bool)
    inside[list(side)] = True
    cross = inside[ei] != inside[ej]
    weight = math.fsum(w[cross])
    return math.sqrt(weight), len(side)


def _run_chunk(args) -> tuple[np.ndarray, np.ndarray]:
    spec, x, x_index, base_seed, lo, hi = args
    g = build_lattice(spec)
    rates = np.empty(hi - lo)
    sizes = np.empty(hi - lo)
    for k, s in enumerate(range(lo, hi)):
        rng = np.random.default_rng(sample_seed(base_seed, x_index, s))
        rates[k], sizes[k] = min_cut_sample(g, _draw(g, rng, 1.0, x))
    return rates, sizes


def run_point(cfg: SweepConfig, x_index: int) -> SampleOutcome:
    rates, sizes = _run_chunk((cfg.lattice, cfg.x_grid[x_index], x_index, cfg.base_seed, 0, cfg.samples_per_x))
    return SampleOutcome(rates, sizes)


def _aggregate(x: float, rates: np.ndarray, sizes: np.ndarray) -> SweepRecord:
    return SweepRecord(
        x=float(x),
        mean_rate=float(np.mean(rates)),
        std_rate=float(np.std(rates)),
        mean_S_size=float(np.mean(sizes)),
        std_S_size=float(np.std(sizes)),
        n_samples=int(len(rates)),
    )


def run_sweep(cfg: SweepConfig, workers: int = 1, chunk: int = 100) -> list[SweepRecord]:
    """Per-sample seeds make the output independent of ``workers`` and ``chunk``."""
    jobs = []
    for xi, x in enumerate(cfg.x_grid):
        for lo in range(0, cfg.samples_per_x, chunk):
            jobs.append((cfg.lattice, x, xi, cfg.base_seed, lo, min(lo + chunk, cfg.samples_per_x)))
    if workers is None or workers <= 0:
        workers = os.cpu_count() or 1
    if workers == 1:
        results = [_run_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    buffers: dict[int, list] = {}
    for job, res in zip(jobs, results):
        buffers.setdefault(job[2], []).append(res)
    records = []
    for xi, x in enumerate(cfg.x_grid):
        rates = np.concatenate([r for r, _ in buffers[xi]])
        sizes = np.concatenate([s for _, s in buffers[xi]])
        records.append(_aggregate(x, rates, sizes))
    return records


# --------------------------------------------------------------------------
# output


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in records:
            w.writerow([repr(float(r.x)), repr(r.mean_rate), repr(r.std_rate), repr(r.mean_S_size), repr(r.std_S_size), r.n_samples])


def read_csv(path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise LatticeError(f"unexpected CSV header {reader.fieldnames}")
        return [
            SweepRecord(
                float(row["x"]),
                float(row["mean_rate"]),
                float(row["std_rate"]),
                float(row["mean_S_size"]),
                float(row["std_S_size"]),
                int(row["n_samples"]),
            )
            for row in reader
        ]


_STD_OF = {"mean_rate": "std_rate", "mean_S_size": "std_S_size"}
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def render_svg(records, path, y_field: str = "mean_S_size", series=None, width: int = 640, height: int = 400) -> None:
    """Line plot of ``y_field`` against x with a one-standard-error band.

    ``series`` maps labels to record lists; by default ``records`` is the only series.
    """
    if y_field not in _STD_OF:
        raise LatticeError(f"y_field must be one of {sorted(_STD_OF)}")
    series = {"sweep": list(records)} if series is None else {k: list(v) for k, v in series.items()}
    pts = [r for recs in series.values() for r in recs]
    margin = 50
    if pts:
        xs = [r.x for r in pts]
        lo_y = min(getattr(r, y_field) - r.sem(y_field) for r in pts)
        hi_y = max(getattr(r, y_field) + r.sem(y_field) for r in pts)
        x0, x1 = min(xs), max(xs)
    else:
        lo_y, hi_y, x0, x1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    if hi_y == lo_y:
        hi_y = lo_y + 1.0

    def px(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def py(y):
        return height - margin - (y - lo_y) / (hi_y - lo_y) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 12}" text-anchor="middle" font-size="13">x</text>',
        f'<text x="14" y="{height / 2}" font-size="13" transform="rotate(-90 14 {height / 2})" text-anchor="middle">{escape(y_field)}</text>',
        f'<text x="{margin}" y="{height - margin + 16}" font-size="11" text-anchor="middle">{x0:g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 16}" font-size="11" text-anchor="middle">{x1:g}</text>',
        f'<text x="{margin - 4}" y="{height - margin}" font-size="11" text-anchor="end">{lo_y:.3g}</text>',
        f'<text x="{margin - 4}" y="{margin + 4}" font-size="11" text-anchor="end">{hi_y:.3g}</text>',
    ]
    for k, (label, recs) in enumerate(series.items()):
        color = _COLORS[k % len(_COLORS)]
        if recs:
            upper = [(px(r.x), py(getattr(r, y_field) + r.sem(y_field))) for r in recs]
            lower = [(px(r.x), py(getattr(r, y_field) - r.sem(y_field))) for r in reversed(recs)]
            band = " ".join(f"{a:.2f},{b:.2f}" for a, b in upper + lower)
            parts.append(f'<polygon class="band" points="{band}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        line = " ".join(f"{px(r.x):.2f},{py(getattr(r, y_field)):.2f}" for r in recs)
        parts.append(f'<polyline class="series" data-label="{escape(label)}" points="{line}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{width - margin}" y="{margin + 14 * k}" font-size="11" fill="{color}" text-anchor="end">{escape(label)}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
