"""Pauli strings in symplectic form, stabilizer groups and Pauli-sum Hamiltonians.

A Pauli string is ``i**k * P_1 (x) ... (x) P_n`` where each ``P_j`` is one of
I, X, Y, Z encoded by bits (x_j, z_j): I=(0,0), X=(1,0), Z=(0,1), Y=(1,1),
with Y = i X Z.  The phase exponent ``k`` lives in Z_4 and is tracked exactly.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .operators import I2, SX, SY, SZ

_PHASE_TEXT = {0: "", 1: "i", 2: "-", 3: "-i"}
_TEXT_PHASE = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}
_WORD = re.compile(r"^\s*([+-]?i?)([IXYZ]+)\s*$")
MAX_QUBITS_DENSE = 12
MAX_GROUP_SIZE = 4096


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    x: tuple
    z: tuple
    k: int = 0  # phase i**k

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def phase(self) -> complex:
        return 1j**self.k

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise PauliError("Pauli strings act on different numbers of qubits")
        x1, z1, x2, z2 = map(np.asarray, (self.x, self.z, other.x, other.z))
        x3, z3 = x1 ^ x2, z1 ^ z2
        # (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}, and each word carries i^{x.z}
        k = self.k + other.k + int(np.sum(x1 * z1) + np.sum(x2 * z2) - np.sum(x3 * z3) + 2 * np.sum(z1 * x2))
        return PauliString(tuple(int(v) for v in x3), tuple(int(v) for v in z3), k % 4)

    def __neg__(self) -> "PauliString":
        return PauliString(self.x, self.z, (self.k + 2) % 4)

    def is_identity_word(self) -> bool:
        return not any(self.x) and not any(self.z)

    def is_hermitian(self) -> bool:
        return self.k % 2 == 0

    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def matrix(self) -> np.ndarray:
        single = {(0, 0): I2, (1, 0): SX, (0, 1): SZ, (1, 1): SY}
        out = np.ones((1, 1), dtype=complex)
        for a, b in zip(self.x, self.z):
            out = np.kron(out, single[(a, b)])
        return self.phase * out

    def __str__(self) -> str:
        return format_pauli(self)


def parse_pauli(text: str) -> PauliString:
    m = _WORD.match(text)
    if not m:
        raise PauliError(f"malformed Pauli string {text!r}")
    sign, word = m.groups()
    x = tuple(int(c in "XY") for c in word)
    z = tuple(int(c in "ZY") for c in word)
    return PauliString(x, z, _TEXT_PHASE[sign])


def format_pauli(p: PauliString) -> str:
    letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
    return _PHASE_TEXT[p.k % 4] + "".join(letters[(a, b)] for a, b in zip(p.x, p.z))


def identity(n: int) -> PauliString:
    return PauliString((0,) * n, (0,) * n, 0)


def commutes(p: PauliString, q: PauliString) -> bool:
    if p.n != q.n:
        raise PauliError("Pauli strings act on different numbers of qubits")
    s = sum(a * d + b * c for a, b, c, d in zip(p.x, p.z, q.x, q.z))
    return s % 2 == 0


def _gf2_rank(rows: list[list[int]]) -> int:
    rows = [int("".join(map(str, r)), 2) for r in rows if any(r)]
    rank = 0
    while rows:
        pivot = max(rows)
        if pivot == 0:
            break
        rows.remove(pivot)
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
        rank += 1
    return rank


@dataclass(frozen=True)
class StabilizerGroup:
    n: int
    k: int
    generators: tuple
    elements: tuple

    def __len__(self) -> int:
        return len(self.elements)

    def matrices(self) -> np.ndarray:
        return np.array([g.matrix() for g in self.elements])


def build_group(generators, n: int | None = None) -> StabilizerGroup:
    """Enumerate the abelian Pauli group generated by ``generators``."""
    gens = [parse_pauli(g) if isinstance(g, str) else g for g in generators]
    if n is None:
        if not gens:
            raise PauliError("need n for an empty generator list")
        n = gens[0].n
    for g in gens:
        if g.n != n:
            raise PauliError("generators act on different numbers of qubits")
        if not g.is_hermitian():
            raise PauliError(f"generator {g} does not square to +1")
    for a, b in itertools.combinations(gens, 2):
        if not commutes(a, b):
            raise PauliError(f"generators {a} and {b} anticommute")
    if _gf2_rank([list(g.x) + list(g.z) for g in gens]) != len(gens):
        raise PauliError("generators are not independent")
    if 2 ** len(gens) > MAX_GROUP_SIZE:
        raise PauliError(f"group of size 2^{len(gens)} exceeds the enumeration cap")
    elements = []
    for bits in itertools.product((0, 1), repeat=len(gens)):
        p = identity(n)
        for b, g in zip(bits, gens):
            if b:
                p = p * g
        if p.is_identity_word() and p.k != 0:
            raise PauliError("-1 lies in the generated group")
        elements.append(p)
    return StabilizerGroup(n, n - len(gens), tuple(gens), tuple(elements))


def twirl(group: StabilizerGroup, X) -> np.ndarray:
    """|G|^-1 sum_g g X g^dagger."""
    X = np.asarray(X, dtype=complex)
    if X.shape != (2**group.n, 2**group.n):
        raise PauliError("operator dimension does not match the group")
    G = group.matrices()
    return np.einsum("gij,jk,glk->il", G, X, G.conj()) / len(G)


def group_algebra(group: StabilizerGroup):
    """The group algebra C[G_S] as a MatrixAlgebra (normalized Pauli elements are orthonormal)."""
    from .algebra import MatrixAlgebra

    G = group.matrices() / np.sqrt(2**group.n)
    return MatrixAlgebra(G, name="stabilizer")


# --------------------------------------------------------------------------
# Hamiltonians


@dataclass(frozen=True)
class PauliHamiltonian:
    terms: tuple  # ((coefficient, PauliString), ...)

    @property
    def n(self) -> int:
        if not self.terms:
            return 0
        return self.terms[0][1].n

    def to_matrix(self, n: int | None = None) -> np.ndarray:
        return to_matrix(self, n)


def pauli_hamiltonian(terms) -> PauliHamiltonian:
    out = []
    n = None
    for c, p in terms:
        p = parse_pauli(p) if isinstance(p, str) else p
        if not p.is_hermitian():
            raise PauliError(f"term {p} is not hermitian")
        if n is not None and p.n != n:
            raise PauliError("terms act on different numbers of qubits")
        n = p.n
        out.append((float(c), p))
    return PauliHamiltonian(tuple(out))


def parse_hamiltonian(text: str) -> PauliHamiltonian:
    """Lines of ``coeff WORD``; ``#`` starts a comment."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PauliError(f"line {lineno}: expected 'coeff WORD', got {raw!r}")
        try:
            c = float(parts[0])
        except ValueError:
            raise PauliError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
        try:
            terms.append((c, parse_pauli(parts[1])))
        except PauliError as e:
            raise PauliError(f"line {lineno}: {e}") from None
    return pauli_hamiltonian(terms)


def format_hamiltonian(h: PauliHamiltonian) -> str:
    return "".join(f"{c!r} {format_pauli(p)}\n" for c, p in h.terms)


def to_matrix(h: PauliHamiltonian, n: int | None = None) -> np.ndarray:
    n = h.n if n is None else n
    if n > MAX_QUBITS_DENSE:
        raise PauliError(f"{n} qubits exceeds the dense cap of {MAX_QUBITS_DENSE}")
    out = np.zeros((2**n, 2**n), dtype=complex)
    for c, p in h.terms:
        out += c * p.matrix()
    return out
