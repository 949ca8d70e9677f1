"""Algebraic OTOC G_A(U).

Convention: G_A(U) = (1/2d) E_{X in A, Y in A'} ||[X, U^dag Y U]||_2^2, with X, Y
Haar-random unitaries of A and A'.  In Omega form,

    G_A(U) = 1 - (1/d) Tr[ S  Omega_A  (U^dag (x) U^dag) Omega_A' (U (x) U) ].

All closed forms below are written in the same convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import MatrixAlgebra, SuperProjector, block_isometry, conditional_expectation
from .operators import as_operator, haar_unitary, is_unitary, swap_operator

CLAMP_TOL = 1e-9
KRAUS_TOL = 1e-10
PSD_TOL = 1e-9
MAX_EXACT_DIM = 32


class OTOCError(ValueError):
    pass


@dataclass(frozen=True)
class OmegaOperator:
    matrix: np.ndarray  # d^2 x d^2
    source: str = ""

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))


def _check_unitary(U, d: int | None = None) -> np.ndarray:
    U = as_operator(U)
    if d is not None and U.shape[0] != d:
        raise OTOCError(f"unitary has dim {U.shape[0]}, expected {d}")
    if not is_unitary(U, 1e-8):
        raise OTOCError("U is not unitary")
    return U


def clamp_unit(g: float, tol: float = CLAMP_TOL) -> float:
    if g < -tol or g > 1 + tol:
        raise OTOCError(f"OTOC value {g!r} outside [0, 1] beyond rounding tolerance")
    return float(min(1.0, max(0.0, g)))


def choi_matrix(P: SuperProjector) -> np.ndarray:
    """J = sum_ij |i><j| (x) P(|i><j|)."""
    d = P.dim
    J = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            J[i * d : (i + 1) * d, j * d : (j + 1) * d] = P.apply(E)
    return J


def kraus_from_projection(P: SuperProjector, d: int | None = None) -> list[np.ndarray]:
    """Kraus operators of a CP map from the eigen-decomposition of its Choi matrix."""
    d = P.dim if d is None else d
    J = choi_matrix(P)
    J = (J + J.conj().T) / 2
    w, V = np.linalg.eigh(J)
    if w[0] < -PSD_TOL:
        raise OTOCError(f"Choi matrix has eigenvalue {w[0]:.3e}; map is not completely positive")
    # J[(i,k),(j,l)] = sum K[k,i] conj(K[l,j])  ->  K = unvec(v)^T
    return [np.sqrt(lam) * V[:, k].reshape(d, d).T for k, lam in enumerate(w) if lam > KRAUS_TOL]


def omega_from_kraus(kraus) -> np.ndarray:
    return sum(np.kron(K, K.conj().T) for K in kraus)


def omega(A: MatrixAlgebra) -> OmegaOperator:
    """Omega_A = E_{X in A}[X (x) X^dag], built from a Kraus decomposition of P_{A'}."""
    if A.dim > MAX_EXACT_DIM:
        raise OTOCError(f"dense Omega limited to d <= {MAX_EXACT_DIM}")
    kraus = kraus_from_projection(conditional_expectation(A.commutant()))
    return OmegaOperator(omega_from_kraus(kraus), source=A.name)


def _trace_with_swap(M: np.ndarray, d: int) -> complex:
    """Tr[S M] for M on C^d (x) C^d."""
    T = M.reshape(d, d, d, d)
    return complex(np.einsum("jiij->", T))


def otoc_from_omegas(OA: np.ndarray, OC: np.ndarray, U: np.ndarray) -> float:
    """Raw (unclamped) 1 - (1/d) Tr[S OA (U^dag)^{(x)2} OC U^{(x)2}]."""
    d = U.shape[0]
    UU = np.kron(U, U)
    rotated = UU.conj().T @ OC @ UU
    return 1.0 - _trace_with_swap(OA @ rotated, d).real / d


def a_otoc_exact(A: MatrixAlgebra, U) -> float:
    U = _check_unitary(U, A.dim)
    OA = omega(A).matrix
    OC = omega(A.commutant()).matrix
    return clamp_unit(otoc_from_omegas(OA, OC, U))


class OTOCEvaluator:
    """Caches the two Omega operators of an algebra for repeated evaluation."""

    def __init__(self, A: MatrixAlgebra):
        self.algebra = A
        self.OA = omega(A).matrix
        self.OC = omega(A.commutant()).matrix

    def __call__(self, U) -> float:
        U = _check_unitary(U, self.algebra.dim)
        return clamp_unit(otoc_from_omegas(self.OA, self.OC, U))

    def raw(self, U) -> float:
        return otoc_from_omegas(self.OA, self.OC, as_operator(U))


# --------------------------------------------------------------------------
# closed forms


def a_otoc_bipartite(U, shape) -> float:
    """1 - (1/d^2) <S_AA', U^{(x)2} S_AA' U^{dag (x)2}> for A = L(H_A) (x) 1."""
    dA, dB = shape
    d = dA * dB
    U = _check_unitary(U, d)
    # swap of the A factors on (A B)(A' B'), built by permuting indices
    S_AB = swap_operator(dA)
    S = np.kron(S_AB, np.eye(dB * dB)).reshape(dA, dA, dB, dB, dA, dA, dB, dB)
    S = S.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(d * d, d * d)
    UU = np.kron(U, U)
    val = np.vdot(S, UU @ S @ UU.conj().T).real
    return clamp_unit(1.0 - val / d**2)


def cgp(U, basis_unitary=None) -> float:
    """1 - (1/d) sum_ij |<i|V^dag U V|j>|^4 (coherence-generating power)."""
    U = _check_unitary(U)
    d = U.shape[0]
    V = np.eye(d) if basis_unitary is None else _check_unitary(basis_unitary, d)
    M = V.conj().T @ U @ V
    return clamp_unit(1.0 - float(np.sum(np.abs(M) ** 4)) / d)


def a_otoc_stabilizer(U, group) -> float:
    """1 - 2^-(3n-k) sum_{g,h} |<g, U^dag h U>|^2 for the group algebra C[G_S]."""
    n, k = group.n, group.k
    U = _check_unitary(U, 2**n)
    G = group.matrices()
    conj = np.einsum("ji,hjk,kl->hil", U.conj(), G, U)
    overlaps = np.einsum("gij,hij->gh", G.conj(), conj)
    return clamp_unit(1.0 - float(np.sum(np.abs(overlaps) ** 2)) / 2.0 ** (3 * n - k))


@dataclass(frozen=True)
class EntropicTerms:
    value: float
    form: str  # "abelian_commutant", "abelian_algebra" or "general"
    weights: np.ndarray  # q_J
    probabilities: np.ndarray | None  # rows p_J (abelian forms)
    sector_terms: np.ndarray  # contribution of each J (abelian) or each (J, K) pair (general)


def _sector_probabilities(projs, U, sizes):
    # p_J[K] = <Pi_J, U^dag Pi_K U> / size_J
    rot = [U.conj().T @ P @ U for P in projs]
    return np.array([[np.vdot(PJ, R).real / sJ for R in rot] for PJ, sJ in zip(projs, sizes)])


def a_otoc_entropic(A: MatrixAlgebra, U, seed: int = 0) -> EntropicTerms:
    """A-OTOC from sector probability vectors (abelian cases) or the U_JK purity sum."""
    U = _check_unitary(U, A.dim)
    d = A.dim
    blocks = A.blocks()
    projs = [P for P, _, _ in blocks]
    ns = np.array([n for _, n, _ in blocks])
    ds = np.array([dj for _, _, dj in blocks])
    if np.all(ns == 1):
        q = ds / d
        p = _sector_probabilities(projs, U, ds)
        terms = q * (1.0 - np.sum(p**2, axis=1))
        return EntropicTerms(clamp_unit(float(np.sum(terms))), "abelian_commutant", q, p, terms)
    if np.all(ds == 1):
        # G_A(U) = G_A'(U^dag) with the roles of n_J and d_J exchanged
        q = ns / d
        Ud = U.conj().T
        p = _sector_probabilities(projs, Ud, ns)
        terms = q * (1.0 - np.sum(p**2, axis=1))
        return EntropicTerms(clamp_unit(float(np.sum(terms))), "abelian_algebra", q, p, terms)

    iso = block_isometry(A, seed)
    M = iso.to_block_basis(U.conj().T)
    nb = len(iso.layout)
    terms = np.zeros((nb, nb))
    for J, (nJ, dJ, oJ) in enumerate(iso.layout):
        for K, (nK, dK, oK) in enumerate(iso.layout):
            blk = M[oJ : oJ + nJ * dJ, oK : oK + nK * dK].reshape(nJ, dJ, nK, dK)
            val = np.einsum("AiBj,aIbJ,aibj,AIBJ->", blk, blk, blk.conj(), blk.conj())
            terms[J, K] = val.real / (nK * dJ)
    g = 1.0 - float(np.sum(terms)) / d
    q = ns * ds / d
    return EntropicTerms(clamp_unit(g), "general", q, None, terms / d)


# --------------------------------------------------------------------------
# Monte Carlo oracle


def _haar(n: int, rng) -> np.ndarray:
    if n == 1:
        z = complex(*rng.standard_normal(2))
        return np.array([[z / abs(z)]])
    return haar_unitary(n, rng)


def _block_haar(layout, rng, commutant_side: bool) -> np.ndarray:
    """Haar unitary of (+)_J 1 (x) U(d_J) (algebra) or (+)_J U(n_J) (x) 1 (commutant), in block form."""
    D = sum(n * dj for n, dj, _ in layout)
    X = np.zeros((D, D), dtype=complex)
    for n, dj, off in layout:
        if commutant_side:
            u, eye = _haar(n, rng), np.eye(dj)
            blk = u[:, None, :, None] * eye[None, :, None, :]
        else:
            u, eye = _haar(dj, rng), np.eye(n)
            blk = eye[:, None, :, None] * u[None, :, None, :]
        X[off : off + n * dj, off : off + n * dj] = blk.reshape(n * dj, n * dj)
    return X


def sample_algebra_unitary(iso, rng, commutant_side: bool = False) -> np.ndarray:
    return iso.from_block_basis(_block_haar(iso.layout, rng, commutant_side))


def a_otoc_haar_mc(A: MatrixAlgebra, U, n_samples: int, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of G_A(U) and its standard error.

    Sample i draws from ``default_rng([seed, i])`` so results do not depend on
    evaluation order.
    """
    U = _check_unitary(U, A.dim)
    d = A.dim
    iso = block_isometry(A, seed)
    # ||[X, U^dag Y U]|| is unitarily invariant, so work in the block basis
    V = iso.to_block_basis(U)
    Vd = V.conj().T
    vals = np.empty(n_samples)
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        X = _block_haar(iso.layout, rng, commutant_side=False)
        Y = _block_haar(iso.layout, rng, commutant_side=True)
        Z = Vd @ Y @ V
        C = X @ Z - Z @ X
        vals[i] = np.vdot(C, C).real / (2 * d)
    mean = float(np.sum(vals) / n_samples)
    se = float(np.std(vals, ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else float("inf")
    return mean, se
