"""Finite-dimensional hermitian-closed unital matrix algebras.

A :class:`MatrixAlgebra` is stored as an HS-orthonormal basis of *hermitian*
matrices; its complex span is the algebra.  Commutant, center and the block
(Wedderburn) structure are computed lazily and cached.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .operators import as_operator, is_unitary, vec

RANK_TOL = 1e-9
NULL_TOL = 1e-9
EIG_GAP = 1e-6
MAX_RETRIES = 8


class AlgebraError(ValueError):
    """Raised when a numerically computed algebraic structure is inconsistent."""


# --------------------------------------------------------------------------
# span helpers


def orthonormal_span(mats, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (shape (m, d, d)) of the complex span of ``mats``."""
    mats = np.asarray(mats, dtype=complex)
    if mats.size == 0:
        return mats
    d = mats.shape[-1]
    M = mats.reshape(len(mats), d * d)
    _, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, d, d), dtype=complex)
    r = int(np.sum(s > tol * s[0]))
    return Vh[:r].reshape(r, d, d)


def hermitian_basis(mats, tol: float = RANK_TOL) -> np.ndarray:
    """HS-orthonormal hermitian basis for a hermitian-closed complex span."""
    mats = np.asarray(mats, dtype=complex)
    d = mats.shape[-1]
    if len(mats) == 0:
        return np.zeros((0, d, d), dtype=complex)
    adj = mats.conj().transpose(0, 2, 1)
    herm = np.concatenate([(mats + adj) / 2, (mats - adj) / 2j])
    # hermitian matrices as real vectors; Re Tr(A^dag B) is the real inner product
    R = np.concatenate([herm.real.reshape(len(herm), -1), herm.imag.reshape(len(herm), -1)], axis=1)
    _, s, Vh = np.linalg.svd(R, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, d, d), dtype=complex)
    r = int(np.sum(s > tol * s[0]))
    V = Vh[:r]
    H = (V[:, : d * d] + 1j * V[:, d * d :]).reshape(r, d, d)
    return (H + H.conj().transpose(0, 2, 1)) / 2


def span_residual(basis: np.ndarray, X) -> float:
    """HS norm of the component of X orthogonal to span(basis)."""
    x = vec(X)
    E = basis.reshape(len(basis), -1)
    return float(np.linalg.norm(x - E.T @ (E.conj() @ x)))


def _projector_apply(basis: np.ndarray, X: np.ndarray) -> np.ndarray:
    d = X.shape[0]
    E = basis.reshape(len(basis), -1)
    return (E.T @ (E.conj() @ vec(X))).reshape(d, d)


# --------------------------------------------------------------------------
# super-projectors


@dataclass
class SuperProjector:
    """A linear map on operator space, applied through ``apply``.

    ``kind`` is one of ``onto_algebra``, ``sum_space`` or ``pinching``.
    """

    kind: str
    dim: int
    _apply: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def apply(self, X) -> np.ndarray:
        X = as_operator(X)
        if X.shape[0] != self.dim:
            raise ValueError(f"operator dim {X.shape[0]} != projector dim {self.dim}")
        return self._apply(X)

    __call__ = apply

    @property
    def matrix(self) -> np.ndarray:
        """Dense d^2 x d^2 matrix in the row-major vec convention."""
        d = self.dim
        cols = []
        for k in range(d * d):
            E = np.zeros(d * d, dtype=complex)
            E[k] = 1.0
            cols.append(vec(self.apply(E.reshape(d, d))))
        return np.array(cols).T

    def rank(self) -> float:
        return float(np.real(np.trace(self.matrix)))


# --------------------------------------------------------------------------
# the algebra type


@dataclass(frozen=True)
class BlockIsometry:
    """Unitary W with W a W^dag = (+)_J 1_{n_J} (x) m_J for every a in the algebra."""

    W: np.ndarray
    layout: tuple  # ((n_J, d_J, offset), ...)

    def to_block_basis(self, X) -> np.ndarray:
        return self.W @ X @ self.W.conj().T

    def from_block_basis(self, X) -> np.ndarray:
        return self.W.conj().T @ X @ self.W


class MatrixAlgebra:
    """Unital hermitian-closed subalgebra of L(C^d) given by a hermitian orthonormal basis."""

    def __init__(self, basis, generators=None, name: str = ""):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise ValueError("basis must have shape (m, d, d)")
        self.basis = basis
        self.dim = basis.shape[1]
        self.generators = basis if generators is None else np.asarray(generators, dtype=complex)
        self.name = name
        self._lock = threading.RLock()
        self._commutant: MatrixAlgebra | None = None
        self._center: MatrixAlgebra | None = None
        self._blocks: list | None = None

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"MatrixAlgebra{label}(d={self.dim}, dim={len(self)})"

    def contains(self, X, tol: float = 1e-8) -> bool:
        X = as_operator(X)
        return span_residual(self.basis, X) <= tol * max(1.0, np.linalg.norm(X))

    def project(self, X) -> np.ndarray:
        return _projector_apply(self.basis, as_operator(X))

    def closure_residual(self) -> float:
        """Largest HS norm of (1 - P)(b_i b_j) over basis pairs."""
        B = self.basis
        prods = np.einsum("aij,bjk->abik", B, B).reshape(-1, self.dim, self.dim)
        E = B.reshape(len(B), -1)
        P = prods.reshape(len(prods), -1)
        res = P - (P @ E.conj().T) @ E
        return float(np.max(np.linalg.norm(res, axis=1)))

    def generic_element(self, seed=0) -> np.ndarray:
        r = np.random.default_rng(seed).standard_normal(len(self.basis))
        return np.einsum("a,aij->ij", r, self.basis)

    # lazily computed structure ------------------------------------------------

    def commutant(self) -> "MatrixAlgebra":
        with self._lock:
            if self._commutant is None:
                self._commutant = _compute_commutant(self)
                self._commutant._commutant = self
            return self._commutant

    def center(self) -> "MatrixAlgebra":
        with self._lock:
            if self._center is None:
                self._center = _compute_center(self)
            return self._center

    def blocks(self) -> list:
        with self._lock:
            if self._blocks is None:
                self._blocks = _compute_blocks(self)
                comm = self._commutant
                if comm is not None and comm._blocks is None:
                    comm._blocks = [(P, d, n) for P, n, d in self._blocks]
            return self._blocks


# --------------------------------------------------------------------------
# construction


def generate_algebra(generators: Sequence, d: int | None = None, name: str = "") -> MatrixAlgebra:
    """Smallest unital hermitian-closed algebra containing ``generators``."""
    gens = [as_operator(g) for g in generators]
    if d is None:
        if not gens:
            raise ValueError("need d when no generators are given")
        d = gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d):
            raise ValueError(f"generator of shape {g.shape} does not match d={d}")
    herm = hermitian_basis(np.array(gens)) if gens else np.zeros((0, d, d), dtype=complex)
    seed_set = np.concatenate([np.eye(d, dtype=complex)[None], herm]) if len(herm) else np.eye(d, dtype=complex)[None]
    Q = orthonormal_span(seed_set)
    # span of all words: close under left multiplication by the (hermitian) generators
    for _ in range(d * d + 1):
        if len(herm) == 0:
            break
        prods = np.einsum("gij,ajk->gaik", herm, Q).reshape(-1, d, d)
        Qn = orthonormal_span(np.concatenate([Q, prods]))
        if len(Qn) == len(Q):
            break
        Q = Qn
    return MatrixAlgebra(hermitian_basis(Q), generators=herm if len(herm) else None, name=name)


def algebra_from_basis(mats, name: str = "") -> MatrixAlgebra:
    """Wrap a spanning set that is already known to be a unital *-algebra."""
    return MatrixAlgebra(hermitian_basis(orthonormal_span(mats)), name=name)


def full_algebra(d: int) -> MatrixAlgebra:
    E = np.zeros((d * d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E[i * d + j, i, j] = 1.0
    return MatrixAlgebra(hermitian_basis(E), name="full")


def scalars(d: int) -> MatrixAlgebra:
    return MatrixAlgebra(np.eye(d, dtype=complex)[None] / np.sqrt(d), name="scalars")


def masa(d: int, basis_unitary=None) -> MatrixAlgebra:
    """Diagonal algebra in the orthonormal basis given by the columns of ``basis_unitary``."""
    V = np.eye(d, dtype=complex) if basis_unitary is None else as_operator(basis_unitary)
    if V.shape[0] != d or not is_unitary(V, 1e-8):
        raise ValueError("basis_unitary must be a d x d unitary")
    P = np.einsum("ik,jk->kij", V, V.conj())
    return MatrixAlgebra(P, name="masa")


def bipartite_algebra(dA: int, dB: int, side: str = "A") -> MatrixAlgebra:
    """L(H_A) (x) 1_B  (side "A") or  1_A (x) L(H_B)  (side "B")."""
    if side == "A":
        local = full_algebra(dA).basis
        mats = np.array([np.kron(b, np.eye(dB)) / np.sqrt(dB) for b in local])
    elif side == "B":
        local = full_algebra(dB).basis
        mats = np.array([np.kron(np.eye(dA), b) / np.sqrt(dA) for b in local])
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return MatrixAlgebra(mats, name=f"bipartite-{side}")


def collective_spin_algebra(n_qubits: int) -> MatrixAlgebra:
    """Algebra generated by the collective spin operators sum_j sigma^alpha_j."""
    from .operators import SX, SY, SZ

    d = 2**n_qubits
    gens = []
    for s in (SX, SY, SZ):
        total = np.zeros((d, d), dtype=complex)
        for j in range(n_qubits):
            ops = [np.eye(2)] * n_qubits
            ops[j] = s
            term = ops[0]
            for o in ops[1:]:
                term = np.kron(term, o)
            total += term
        gens.append(total)
    return generate_algebra(gens, d, name=f"collective-spin-{n_qubits}")


# --------------------------------------------------------------------------
# commutant, center, blocks


def _commutant_gram(mats: np.ndarray) -> np.ndarray:
    """Sum over hermitian b of C_b^2 with C_b = b (x) 1 - 1 (x) b^T (row-major vec)."""
    d = mats.shape[-1]
    sq = np.einsum("bij,bjk->ik", mats, mats)
    cross = np.einsum("bij,blk->ikjl", mats, mats).reshape(d * d, d * d)
    eye = np.eye(d)
    return np.kron(sq, eye) + np.kron(eye, sq.T) - 2 * cross


def commutant_of(mats, d: int) -> np.ndarray:
    """Hermitian orthonormal basis of {X : [X, m] = 0 for all m in mats}."""
    mats = np.asarray(mats, dtype=complex)
    if len(mats) == 0:
        return full_algebra(d).basis
    herm = hermitian_basis(mats)
    M = _commutant_gram(herm)
    M = (M + M.conj().T) / 2
    w, V = np.linalg.eigh(M)
    null = w <= NULL_TOL * max(w[-1], 1.0)
    X = V[:, null].T.reshape(-1, d, d)
    return hermitian_basis(X)


def _compute_commutant(A: MatrixAlgebra) -> MatrixAlgebra:
    basis = commutant_of(A.generators, A.dim)
    return MatrixAlgebra(basis, name=f"{A.name}'" if A.name else "")


def _compute_center(A: MatrixAlgebra) -> MatrixAlgebra:
    gens = A.generators
    B = A.basis
    # coefficients c with sum_a c_a [e_a, g] = 0 for all generators g
    comms = np.einsum("aij,gjk->gaik", B, gens) - np.einsum("gij,ajk->gaik", gens, B)
    K = comms.transpose(0, 2, 3, 1).reshape(-1, len(B))
    _, s, Vh = np.linalg.svd(K, full_matrices=True)
    smax = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > NULL_TOL * max(smax, 1.0)))
    C = Vh[rank:].conj()
    mats = np.einsum("ka,aij->kij", C, B)
    return MatrixAlgebra(hermitian_basis(mats), name=f"Z({A.name})" if A.name else "")


def _cluster(w: np.ndarray, gap: float) -> list[np.ndarray]:
    groups, start = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > gap:
            groups.append(np.arange(start, k))
            start = k
    return groups


def _compute_blocks(A: MatrixAlgebra, seed: int = 0) -> list:
    Z = A.center()
    dimA = len(A)
    dimC = len(A.commutant())
    last_err = None
    for attempt in range(MAX_RETRIES):
        z = Z.generic_element(seed + attempt)
        w, V = np.linalg.eigh(z)
        groups = _cluster(w, EIG_GAP * max(1.0, w[-1] - w[0]))
        if len(groups) != len(Z):
            last_err = f"found {len(groups)} eigenvalue clusters, center has dimension {len(Z)}"
            continue
        blocks = []
        ok = True
        for g in groups:
            Pi = V[:, g] @ V[:, g].conj().T
            r = len(orthonormal_span(np.einsum("ij,ajk,kl->ail", Pi, A.basis, Pi)))
            dJ = int(round(np.sqrt(r)))
            size = len(g)
            if dJ * dJ != r or size % dJ:
                ok = False
                last_err = f"non-integral block: rank {size}, dim(PAP)={r}"
                break
            blocks.append((Pi, size // dJ, dJ))
        if not ok:
            continue
        if sum(dJ * dJ for _, _, dJ in blocks) != dimA or sum(n * n for _, n, _ in blocks) != dimC:
            last_err = "block dimensions inconsistent with dim A / dim A'"
            continue
        blocks.sort(key=lambda b: int(np.argmax(np.real(np.diag(b[0])) > 1e-8)))
        return blocks
    raise AlgebraError(f"block extraction failed: {last_err}")


def block_spectrum(A: MatrixAlgebra) -> list:
    """List of (Pi_J, n_J, d_J) for the central decomposition of ``A``."""
    return A.blocks()


def commutant(A: MatrixAlgebra) -> MatrixAlgebra:
    return A.commutant()


def center(A: MatrixAlgebra) -> MatrixAlgebra:
    return A.center()


def is_factor(A: MatrixAlgebra) -> bool:
    return len(A.center()) == 1


def is_collinear(A: MatrixAlgebra) -> bool:
    return A.dim**2 == len(A) * len(A.commutant())


# --------------------------------------------------------------------------
# projectors and geometry


def conditional_expectation(A: MatrixAlgebra) -> SuperProjector:
    basis = A.basis
    return SuperProjector("onto_algebra", A.dim, lambda X: _projector_apply(basis, X))


def sum_space_projector(A: MatrixAlgebra) -> SuperProjector:
    """Orthogonal projector onto A + A' as P_A + P_A' - P_A P_A'."""
    PA = conditional_expectation(A)
    PC = conditional_expectation(A.commutant())

    def apply(X):
        Y = PC.apply(X)
        return PA.apply(X) + Y - PA.apply(Y)

    return SuperProjector("sum_space", A.dim, apply)


def pinching_projector(A: MatrixAlgebra) -> SuperProjector:
    """Projector onto A v A': X -> sum_J Pi_J X Pi_J."""
    projs = [P for P, _, _ in A.blocks()]

    def apply(X):
        return sum(P @ X @ P for P in projs)

    return SuperProjector("pinching", A.dim, apply)


def algebra_distance(A: MatrixAlgebra, B: MatrixAlgebra) -> float:
    """HS distance between the conditional expectations onto A and B."""
    if A.dim != B.dim:
        raise ValueError("algebras live on different spaces")
    EA = A.basis.reshape(len(A), -1)
    EB = B.basis.reshape(len(B), -1)
    # dim A + dim B - 2 sum |<e,f>|^2, evaluated as two residual norms to avoid cancellation
    RA = EA - (EA @ EB.conj().T) @ EB
    RB = EB - (EB @ EA.conj().T) @ EA
    return float(np.sqrt(np.sum(np.abs(RA) ** 2) + np.sum(np.abs(RB) ** 2)))


def same_algebra(A: MatrixAlgebra, B: MatrixAlgebra, tol: float = 1e-8) -> bool:
    return algebra_distance(A, B) < tol


def rotate_algebra(A: MatrixAlgebra, U) -> MatrixAlgebra:
    """The image algebra U A U^dagger."""
    U = as_operator(U)
    if U.shape[0] != A.dim or not is_unitary(U, 1e-8):
        raise ValueError("rotate_algebra needs a unitary of matching dimension")
    Ud = U.conj().T
    rot = lambda mats: np.einsum("ij,ajk,kl->ail", U, mats, Ud)
    out = MatrixAlgebra(rot(A.basis), generators=rot(A.generators), name=A.name)
    if A._commutant is not None:
        C = A._commutant
        out._commutant = MatrixAlgebra(rot(C.basis), generators=rot(C.generators), name=C.name)
        out._commutant._commutant = out
    if A._center is not None:
        Z = A._center
        out._center = MatrixAlgebra(rot(Z.basis), generators=rot(Z.generators), name=Z.name)
    if A._blocks is not None:
        out._blocks = [(U @ P @ Ud, n, dJ) for P, n, dJ in A._blocks]
    return out


# --------------------------------------------------------------------------
# block-diagonalizing isometry


def _polar(C: np.ndarray) -> tuple[np.ndarray, float]:
    u, s, vh = np.linalg.svd(C)
    return u @ vh, float(s[-1] / max(s[0], 1e-300))


def block_isometry(A: MatrixAlgebra, seed: int = 0) -> BlockIsometry:
    """Unitary W putting every element of ``A`` into the form (+)_J 1_{n_J} (x) m_J."""
    rows = []
    layout = []
    offset = 0
    for J, (Pi, n, dJ) in enumerate(A.blocks()):
        w, V = np.linalg.eigh(Pi)
        Q = V[:, w > 0.5]  # orthonormal basis of range(Pi_J)
        sub = np.einsum("ij,ajk,kl->ail", Q.conj().T, A.basis, Q)  # restricted algebra
        for attempt in range(MAX_RETRIES):
            rng = np.random.default_rng([seed, J, attempt])
            a = np.einsum("a,aij->ij", rng.standard_normal(len(sub)), sub)
            a2 = np.einsum("a,aij->ij", rng.standard_normal(len(sub)), sub)
            ev, F = np.linalg.eigh(a)
            groups = _cluster(ev, EIG_GAP * max(1.0, ev[-1] - ev[0]))
            if len(groups) != dJ or any(len(g) != n for g in groups):
                continue
            F1 = F[:, groups[0]]
            cols = [F1]
            good = True
            for g in groups[1:]:
                Fl = F[:, g]
                P, cond = _polar(Fl.conj().T @ a2 @ F1)
                if cond < 1e-6:
                    good = False
                    break
                cols.append(Fl @ P)
            if not good:
                continue
            # basis vector |q, l> at position q*dJ + l
            B = np.stack(cols, axis=2)  # (n*dJ, n, dJ): columns indexed by (q, l)
            B = B.reshape(Q.shape[1], n * dJ)
            rows.append((Q @ B).conj().T)
            break
        else:
            raise AlgebraError(f"could not find a nondegenerate generic element for block {J}")
        layout.append((n, dJ, offset))
        offset += n * dJ
    W = np.concatenate(rows, axis=0)
    return BlockIsometry(W, tuple(layout))


def block_structure_residual(A: MatrixAlgebra, iso: BlockIsometry) -> float:
    """Max deviation of W a W^dag from the (+)_J 1_{n_J} (x) m_J form over basis elements."""
    worst = 0.0
    for b in A.basis:
        M = iso.to_block_basis(b)
        target = np.zeros_like(M)
        for n, dJ, off in iso.layout:
            blk = M[off : off + n * dJ, off : off + n * dJ].reshape(n, dJ, n, dJ)
            m = np.einsum("qiqj->ij", blk) / n
            target[off : off + n * dJ, off : off + n * dJ] = np.kron(np.eye(n), m)
        worst = max(worst, float(np.linalg.norm(M - target)))
    return worst
