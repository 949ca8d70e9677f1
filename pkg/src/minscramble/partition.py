"""Interaction graphs and minimum-scrambling spatial bipartitions.

For two-body Ising couplings J_ij sigma^a_i sigma^b_j the scrambling rate of
the bipartition S | S-bar is sqrt(sum of J_ij^2 over boundary edges), so the
best bipartition is a weighted minimum cut with weights J_ij^2.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .pauli import PauliString, pauli_hamiltonian, to_matrix

BRUTE_FORCE_MAX = 20
BRUTE_FORCE_MAX_CONSTRAINED = 24
DEGENERACY_TOL = 1e-12
ISING_LABELS = set("XYZ")


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    J: float
    paulis: str = "ZZ"
    kind: str = "nn"

    @property
    def weight(self) -> float:
        return self.J * self.J

    def is_ising(self) -> bool:
        return len(self.paulis) == 2 and set(self.paulis) <= ISING_LABELS


@dataclass(frozen=True)
class InteractionGraph:
    n: int
    edges: tuple = ()

    def __post_init__(self):
        norm = []
        for e in self.edges:
            if e.i == e.j:
                raise GraphError(f"self-loop at vertex {e.i}")
            if not (0 <= e.i < self.n and 0 <= e.j < self.n):
                raise GraphError(f"edge ({e.i}, {e.j}) outside 0..{self.n - 1}")
            if e.i > e.j:
                e = replace(e, i=e.j, j=e.i, paulis=e.paulis[::-1] if e.is_ising() else e.paulis)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "InteractionGraph":
        out = []
        for e in edges:
            if isinstance(e, Edge):
                out.append(e)
            else:
                i, j, J, *rest = e
                out.append(Edge(int(i), int(j), float(J), *rest))
        return cls(n, tuple(out))

    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.edges])

    def adjacency(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for e in self.edges:
            W[e.i, e.j] += e.weight
            W[e.j, e.i] += e.weight
        return W

    def with_couplings(self, J) -> "InteractionGraph":
        return InteractionGraph(self.n, tuple(replace(e, J=float(c)) for e, c in zip(self.edges, J)))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        nbrs = [[] for _ in range(self.n)]
        for e in self.edges:
            nbrs[e.i].append(e.j)
            nbrs[e.j].append(e.i)
        while stack:
            v = stack.pop()
            for u in nbrs[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.i)] = find(e.j)
        comps: dict[int, list[int]] = {}
        for v in range(self.n):
            comps.setdefault(find(v), []).append(v)
        return sorted(comps.values(), key=lambda c: c[0])

    def hamiltonian(self) -> np.ndarray:
        """Dense sum_e J_e sigma^a_i sigma^b_j (Ising edges only)."""
        terms = []
        for e in self.edges:
            if not e.is_ising():
                raise GraphError(f"edge ({e.i}, {e.j}) with paulis {e.paulis!r} is not an Ising term")
            x = [0] * self.n
            z = [0] * self.n
            for q, lab in ((e.i, e.paulis[0]), (e.j, e.paulis[1])):
                x[q] = int(lab in "XY")
                z[q] = int(lab in "ZY")
            terms.append((e.J, PauliString(tuple(x), tuple(z), 0)))
        if not terms:
            return np.zeros((2**self.n, 2**self.n), dtype=complex)
        return to_matrix(pauli_hamiltonian(terms), self.n)


def _mask(S) -> int:
    m = 0
    for v in S:
        m |= 1 << v
    return m


def _members(mask: int, n: int) -> tuple:
    return tuple(v for v in range(n) if mask >> v & 1)


@dataclass(frozen=True)
class CutResult:
    S: tuple
    boundary: tuple
    weight: float
    rate: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rate", math.sqrt(self.weight))

    @property
    def mask(self) -> int:
        return _mask(self.S)

    def as_dict(self) -> dict:
        return {
            "S": list(self.S),
            "boundary": [[e.i, e.j] for e in self.boundary],
            "weight": self.weight,
            "rate": self.rate,
        }


def canonical_side(S, n: int) -> tuple:
    """Lower-cardinality side of the bipartition; ties go to the lower bitmask."""
    S = tuple(sorted(set(S)))
    Sbar = tuple(v for v in range(n) if v not in S)
    if len(S) != len(Sbar):
        return S if len(S) < len(Sbar) else Sbar
    return S if _mask(S) < _mask(Sbar) else Sbar


def _check_subset(g: InteractionGraph, S) -> set:
    S = set(S)
    if not S or len(S) >= g.n or not S <= set(range(g.n)):
        raise GraphError(f"S must be a nonempty proper subset of 0..{g.n - 1}, got {sorted(S)}")
    return S


def boundary(g: InteractionGraph, S) -> list[Edge]:
    S = _check_subset(g, S)
    return [e for e in g.edges if (e.i in S) != (e.j in S)]


def cut_weight(edges) -> float:
    """Correctly rounded sum of J^2 so equal cuts compare equal bit-for-bit."""
    return math.fsum(e.weight for e in edges)


def make_cut(g: InteractionGraph, S) -> CutResult:
    side = canonical_side(S, g.n)
    b = boundary(g, side)
    return CutResult(side, tuple(b), cut_weight(b))


def ising_rate(g: InteractionGraph, S) -> CutResult:
    for e in g.edges:
        if not e.is_ising():
            raise GraphError("ising_rate needs Ising edges; use the dense rate for general terms")
    return make_cut(g, S)


def stoer_wagner(g: InteractionGraph) -> CutResult:
    """Global minimum cut with weights J^2 (maximum-adjacency search, lowest index wins ties)."""
    n = g.n
    if n < 2:
        raise GraphError("min cut needs at least two vertices")
    if not g.is_connected():
        comps = g.components()
        return make_cut(g, min(comps, key=lambda c: (len(c), c[0])))
    return make_cut(g, _stoer_wagner_side(g.adjacency()))


def _stoer_wagner_side(W: np.ndarray) -> list[int]:
    """One side of a global minimum cut of a connected weighted adjacency matrix."""
    W = np.array(W, dtype=float)
    n = W.shape[0]
    groups = [[v] for v in range(n)]
    active = list(range(n))
    best_w, best_S = math.inf, None
    while len(active) > 1:
        idx = np.array(active)
        in_A = np.zeros(n, dtype=bool)
        conn = np.zeros(n)
        order = []
        for _ in range(len(active)):
            cand = conn[idx].copy()
            cand[in_A[idx]] = -np.inf
            v = int(idx[int(np.argmax(cand))])  # argmax returns the first (lowest) maximum
            in_A[v] = True
            order.append(v)
            conn += W[v]
        s, t = order[-2], order[-1]
        cut_of_phase = float(np.sum(W[t, idx[idx != t]]))
        if cut_of_phase < best_w:
            best_w, best_S = cut_of_phase, list(groups[t])
        # merge t into s
        W[s] += W[t]
        W[:, s] += W[:, t]
        W[s, s] = 0.0
        W[t] = 0.0
        W[:, t] = 0.0
        groups[s].extend(groups[t])
        active.remove(t)
    return best_S


def brute_force_mincut(g: InteractionGraph, size_constraint: int | None = None) -> list[CutResult]:
    """All minimum cuts by enumeration, ordered by bitmask of the reported side."""
    n = g.n
    if n < 2:
        raise GraphError("min cut needs at least two vertices")
    if size_constraint is None and n > BRUTE_FORCE_MAX:
        raise GraphError(f"unconstrained enumeration limited to n <= {BRUTE_FORCE_MAX}")
    if size_constraint is not None:
        if n > BRUTE_FORCE_MAX_CONSTRAINED:
            raise GraphError(f"constrained enumeration limited to n <= {BRUTE_FORCE_MAX_CONSTRAINED}")
        if not 0 < size_constraint < n:
            raise GraphError(f"size constraint must be in 1..{n - 1}")

    ei = np.array([e.i for e in g.edges], dtype=np.int64)
    ej = np.array([e.j for e in g.edges], dtype=np.int64)
    w = g.weights()

    if size_constraint is None:
        # vertex n-1 always on the complement side
        masks = np.arange(1, 2 ** (n - 1), dtype=np.int64)
    else:
        masks = np.array([_mask(c) for c in itertools.combinations(range(n), size_constraint)], dtype=np.int64)

    weights = np.empty(len(masks))
    chunk = 1 << 16
    for lo in range(0, len(masks), chunk):
        m = masks[lo : lo + chunk, None]
        cross = ((m >> ei) & 1) != ((m >> ej) & 1)
        weights[lo : lo + chunk] = cross @ w if len(w) else 0.0
    approx_min = float(np.min(weights))
    near = masks[weights <= approx_min + 1e-9 * max(1.0, abs(approx_min))]
    cuts = {}
    for m in near:
        members = _members(int(m), n)
        if size_constraint is None:
            c = make_cut(g, members)
        else:
            b = boundary(g, members)
            c = CutResult(members, tuple(b), cut_weight(b))
            if 2 * size_constraint == n:
                c = make_cut(g, members)
        cuts.setdefault(c.mask, c)
    exact_min = min(c.weight for c in cuts.values())
    keep = [c for c in cuts.values() if c.weight <= exact_min + DEGENERACY_TOL]
    return sorted(keep, key=lambda c: c.mask)
