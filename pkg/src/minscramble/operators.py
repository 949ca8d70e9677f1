"""Dense operator-space utilities.

Operators are plain complex numpy arrays of shape (d, d).  Vectorization is
row-major throughout: vec(|i><j|) sits at index i*d + j, so that
vec(A X B) = kron(A, B.T) @ vec(X).
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np


class BipartiteShape(NamedTuple):
    dA: int
    dB: int

    @property
    def d(self) -> int:
        return self.dA * self.dB


def as_operator(X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {X.shape}")
    return X


def _same_dim(X: np.ndarray, Y: np.ndarray) -> None:
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {Y.shape}")


def hs_inner(X, Y) -> complex:
    """Hilbert-Schmidt product Tr(X^dagger Y)."""
    X, Y = as_operator(X), as_operator(Y)
    _same_dim(X, Y)
    return complex(np.vdot(X, Y))


def hs_norm(X) -> float:
    X = as_operator(X)
    return float(np.linalg.norm(X))


def kron(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def vec(X) -> np.ndarray:
    return np.asarray(X).reshape(-1)


def unvec(v, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d)


def partial_trace(X, shape: BipartiteShape, side: str) -> np.ndarray:
    """Trace out subsystem ``side`` ("A" or "B") of an operator on C^dA (x) C^dB."""
    X = as_operator(X)
    dA, dB = shape
    if X.shape[0] != dA * dB:
        raise ValueError(f"operator of dim {X.shape[0]} does not match shape {dA}x{dB}")
    T = X.reshape(dA, dB, dA, dB)
    if side == "A":
        return np.einsum("ijik->jk", T)
    if side == "B":
        return np.einsum("ijkj->ik", T)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def swap_operator(d: int) -> np.ndarray:
    """Swap on C^d (x) C^d."""
    if d < 1:
        raise ValueError("d must be positive")
    S = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    S[(j * d + i).ravel(), (i * d + j).ravel()] = 1.0
    return S


def swap_factors(dims, perm) -> np.ndarray:
    """Permutation unitary sending tensor factor k to position perm[k]."""
    dims = list(dims)
    D = int(np.prod(dims))
    inv = np.argsort(perm)
    idx = np.arange(D).reshape(dims)
    # column for input basis state, row for output basis state
    out_idx = np.transpose(idx, inv).reshape(-1)
    P = np.zeros((D, D), dtype=complex)
    P[np.arange(D), out_idx] = 1.0
    return P


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-distributed U(d) element via QR of a Ginibre matrix with phase fixing."""
    rng = _rng(seed)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    diag = np.diag(R)
    return Q * (diag / np.abs(diag))


def random_hermitian(d: int, seed=None) -> np.ndarray:
    """GUE-style random hermitian matrix."""
    rng = _rng(seed)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    return (Z + Z.conj().T) / 2


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_operator(U)
    return bool(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) <= tol * max(1.0, np.sqrt(U.shape[0])))


def is_hermitian(H, tol: float = 1e-10) -> bool:
    H = as_operator(H)
    return bool(np.linalg.norm(H - H.conj().T) <= tol * max(1.0, np.linalg.norm(H)))


# single-qubit Paulis, handy everywhere
I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
