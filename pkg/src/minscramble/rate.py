"""Gaussian scrambling rate of a Hamiltonian relative to an algebra.

The rate is the HS distance of H/sqrt(d) from the operator space A + A',
evaluated as ||(1 - P_A)(1 - P_A') H/sqrt(d)||_2.  Time is measured in units
of 1/eta_H with eta_H = ||H||_2 / sqrt(d).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .algebra import (
    MatrixAlgebra,
    bipartite_algebra,
    conditional_expectation,
    generate_algebra,
    masa,
    orthonormal_span,
    pinching_projector,
    rotate_algebra,
)
from .operators import SX, SY, SZ, BipartiteShape, as_operator, is_hermitian, partial_trace, swap_operator
from .otoc import OTOCEvaluator

DEGENERACY_GAP = 1e-8
TIE_TOL = 1e-9


class RateError(ValueError):
    pass


@dataclass(frozen=True)
class RateReport:
    rate: float
    inter_sector: float
    intra_sector: float
    eta: float
    bound_A: float
    bound_Aprime: float

    def as_dict(self) -> dict:
        return {k: float(getattr(self, k)) for k in self.__dataclass_fields__}


def _hermitian(H) -> np.ndarray:
    H = as_operator(H)
    if not is_hermitian(H, 1e-10):
        raise RateError("Hamiltonian is not hermitian")
    return (H + H.conj().T) / 2


def normalized(H) -> np.ndarray:
    """H / sqrt(d) with the identity component removed."""
    H = _hermitian(H)
    d = H.shape[0]
    H0 = H - np.trace(H) / d * np.eye(d)
    return H0 / np.sqrt(d)


def eta(H) -> float:
    H = as_operator(H)
    return float(np.linalg.norm(H) / np.sqrt(H.shape[0]))


def gaussian_rate(H, A: MatrixAlgebra) -> RateReport:
    H = _hermitian(H)
    if H.shape[0] != A.dim:
        raise RateError(f"Hamiltonian dim {H.shape[0]} does not match algebra dim {A.dim}")
    Ht = normalized(H)
    PA = conditional_expectation(A)
    PC = conditional_expectation(A.commutant())
    outside_C = Ht - PC.apply(Ht)
    outside = outside_C - PA.apply(outside_C)  # (1 - P_A)(1 - P_A') Ht
    pinch = pinching_projector(A).apply(outside)
    inter = float(np.linalg.norm(Ht - pinching_projector(A).apply(Ht)))
    intra = float(np.linalg.norm(pinch))
    return RateReport(
        rate=float(np.linalg.norm(outside)),
        inter_sector=inter,
        intra_sector=intra,
        eta=eta(H),
        bound_A=float(np.linalg.norm(Ht - PA.apply(Ht))),
        bound_Aprime=float(np.linalg.norm(outside_C)),
    )


def rate_distance_to_sum_space(H, A: MatrixAlgebra) -> float:
    """||(1 - P_W) Ht|| with W = A + A' orthonormalized directly (no product formula)."""
    Ht = normalized(H)
    W = orthonormal_span(np.concatenate([A.basis, A.commutant().basis]))
    E = W.reshape(len(W), -1)
    x = Ht.reshape(-1)
    return float(np.linalg.norm(x - E.T @ (E.conj() @ x)))


def rate_bipartite(H, shape) -> float:
    """Norm of the A-B interaction part of H/sqrt(d)."""
    H = _hermitian(H)
    dA, dB = shape
    d = dA * dB
    if H.shape[0] != d:
        raise RateError(f"Hamiltonian dim {H.shape[0]} does not match shape {dA}x{dB}")
    Ht = H / np.sqrt(d)
    shape = BipartiteShape(dA, dB)
    local_B = np.kron(np.eye(dA) / dA, partial_trace(Ht, shape, "A"))
    local_A = np.kron(partial_trace(Ht, shape, "B"), np.eye(dB) / dB)
    inter = Ht + np.trace(Ht) * np.eye(d) / d - local_A - local_B
    return float(np.linalg.norm(inter))


def subsystem_shape(n_qubits: int, S) -> tuple[np.ndarray, BipartiteShape]:
    """Permutation putting qubits in S first, and the resulting bipartite shape."""
    from .operators import swap_factors

    S = sorted(set(S))
    rest = [q for q in range(n_qubits) if q not in S]
    order = S + rest
    perm = [order.index(q) for q in range(n_qubits)]
    P = swap_factors([2] * n_qubits, perm)
    return P, BipartiteShape(2 ** len(S), 2 ** len(rest))


def rate_subsystem(H, n_qubits: int, S) -> float:
    """rate_bipartite for the spatial bipartition S | complement of an n-qubit system."""
    P, shape = subsystem_shape(n_qubits, S)
    return rate_bipartite(P @ _hermitian(H) @ P.conj().T, shape)


def subsystem_algebra(n_qubits: int, S) -> MatrixAlgebra:
    """L(H_S) (x) 1 for the qubits in S, in the original qubit order."""
    P, shape = subsystem_shape(n_qubits, S)
    return rotate_algebra(bipartite_algebra(shape.dA, shape.dB, "A"), P.conj().T)


def rate_abelian(H, A: MatrixAlgebra) -> float:
    """sqrt(sum_J ||Pi_J Ht (1 - Pi_J)||^2); valid when A or A' is abelian."""
    H = _hermitian(H)
    blocks = A.blocks()
    if not (all(n == 1 for _, n, _ in blocks) or all(dj == 1 for _, _, dj in blocks)):
        raise RateError("rate_abelian needs A or A' abelian")
    Ht = H / np.sqrt(H.shape[0])
    total = 0.0
    for P, _, _ in blocks:
        total += np.linalg.norm(P @ Ht - P @ Ht @ P) ** 2
    return float(np.sqrt(total))


def rate_stabilizer(H, group) -> float:
    """||(1 - twirl) Ht|| for the stabilizer group algebra."""
    from .pauli import twirl

    H = _hermitian(H)
    if H.shape[0] != 2**group.n:
        raise RateError("Hamiltonian dimension does not match the stabilizer group")
    Ht = H / np.sqrt(H.shape[0])
    return float(np.linalg.norm(Ht - twirl(group, Ht)))


def masa_distance(V1, V2) -> float:
    """Distance between the diagonal algebras of two orthonormal bases (columns)."""
    V1, V2 = as_operator(V1), as_operator(V2)
    d = V1.shape[0]
    X = np.abs(V1.conj().T @ V2) ** 2
    return float(np.sqrt(max(0.0, 2 * d * (1 - np.sum(X**2) / d))))


def masa_rate_bound(H, basis_unitary) -> tuple[float, float]:
    """(rate, eta_H * D(A_B, A_{B_H})) for the diagonal algebra of ``basis_unitary``."""
    H = _hermitian(H)
    V = as_operator(basis_unitary)
    w, E = np.linalg.eigh(H)
    if np.min(np.diff(w), initial=np.inf) <= DEGENERACY_GAP:
        raise RateError("Hamiltonian spectrum is degenerate; eigenbasis not unique")
    d = H.shape[0]
    Hb = V.conj().T @ H @ V / np.sqrt(d)
    off = Hb - np.diag(np.diag(Hb))
    return float(np.linalg.norm(off)), eta(H) * masa_distance(V, E)


def evolution(H, t: float) -> np.ndarray:
    w, V = np.linalg.eigh(_hermitian(H))
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def default_t_grid(H) -> np.ndarray:
    e = float(np.linalg.norm(normalized(H)))  # eta of the traceless part
    e = e if e > 0 else 1.0
    return np.logspace(-3, -2, 8) / e


def short_time_coefficient(A: MatrixAlgebra, H, t_grid=None, evaluator: OTOCEvaluator | None = None) -> float:
    """Least-squares c in G(t) ~ c t^2 over ``t_grid`` with U_t = exp(-iHt)."""
    H = _hermitian(H)
    t = default_t_grid(H) if t_grid is None else np.asarray(t_grid, dtype=float)
    ev = OTOCEvaluator(A) if evaluator is None else evaluator
    w, V = np.linalg.eigh(H)
    G = np.array([ev.raw((V * np.exp(-1j * w * s)) @ V.conj().T) for s in t])
    return float(np.sum(G * t**2) / np.sum(t**4))


# --------------------------------------------------------------------------
# families of algebras


FAMILY_KINDS = ("circular_bipartite", "circular_masa", "circular_symmetric", "explicit_list", "theta_grid")


@dataclass
class FamilySpec:
    kind: str
    thetas: np.ndarray | None = None
    base: MatrixAlgebra | None = None
    generator: np.ndarray | None = None
    members: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise RateError(f"unknown family kind {self.kind!r}")
        if self.kind == "explicit_list":
            if not self.labels:
                self.labels = [str(i) for i in range(len(self.members))]
            return
        if self.thetas is None:
            self.thetas = np.linspace(0, 2 * np.pi, 32, endpoint=False)
        self.thetas = np.asarray(self.thetas, dtype=float)
        if np.any(np.diff(self.thetas) <= 0):
            raise RateError("theta grid must be strictly increasing")
        if self.kind != "theta_grid":
            self.base, self.generator = _circular_preset(self.kind)
        if self.base is None or self.generator is None:
            raise RateError("theta_grid family needs a base algebra and a rotation generator")
        self.generator = as_operator(self.generator)
        if not is_hermitian(self.generator):
            raise RateError("rotation generator must be hermitian")

    def rotation(self, theta: float) -> np.ndarray:
        return scipy.linalg.expm(0.5j * theta * self.generator)

    def __iter__(self):
        if self.kind == "explicit_list":
            yield from zip(self.labels, self.members)
            return
        base = self.base
        base.commutant()
        base.blocks()
        for th in self.thetas:
            yield float(th), rotate_algebra(base, self.rotation(th))

    def __len__(self) -> int:
        return len(self.members) if self.kind == "explicit_list" else len(self.thetas)


def symmetric_algebra() -> MatrixAlgebra:
    """Two-qubit swap-symmetric operators, the commutant of C{1, S}."""
    return generate_algebra([swap_operator(2)], 4).commutant()


def _circular_preset(kind: str):
    if kind == "circular_bipartite":
        return bipartite_algebra(2, 2, "A"), np.kron(SX, SX)
    if kind == "circular_masa":
        return masa(2), SY
    if kind == "circular_symmetric":
        return symmetric_algebra(), np.kron(SY, np.eye(2))
    raise RateError(kind)


def circular_hamiltonian(kind: str) -> np.ndarray:
    """The Hamiltonian paired with each circular toy family."""
    I = np.eye(2)
    return {
        "circular_bipartite": np.kron(SZ, I),
        "circular_masa": SZ,
        "circular_symmetric": np.kron(SZ, I) + np.kron(I, SZ),
    }[kind]


def cheapest_rate(H, A: MatrixAlgebra) -> float:
    blocks = A.blocks()
    if all(n == 1 for _, n, _ in blocks) or all(dj == 1 for _, _, dj in blocks):
        return rate_abelian(H, A)
    return gaussian_rate(H, A).rate


@dataclass(frozen=True)
class MinimizationResult:
    minimizers: list  # [(index, label)]
    minimum: float
    labels: list
    rates: np.ndarray

    def maximizers(self, tol: float = TIE_TOL) -> list:
        top = float(np.max(self.rates))
        return [(i, self.labels[i]) for i in np.flatnonzero(self.rates >= top - tol)]


def minimize_rate(H, family: FamilySpec, tol: float = TIE_TOL) -> MinimizationResult:
    labels, rates = [], []
    for label, A in family:
        labels.append(label)
        rates.append(cheapest_rate(H, A))
    if not rates:
        raise RateError("empty family")
    rates = np.array(rates)
    lo = float(np.min(rates))
    mins = [(int(i), labels[i]) for i in np.flatnonzero(rates <= lo + tol)]
    return MinimizationResult(mins, lo, labels, rates)
