import numpy as np
import pytest

from minscramble.algebra import (
    algebra_distance,
    bipartite_algebra,
    block_isometry,
    block_structure_residual,
    center,
    collective_spin_algebra,
    commutant,
    conditional_expectation,
    full_algebra,
    generate_algebra,
    is_collinear,
    is_factor,
    masa,
    pinching_projector,
    rotate_algebra,
    same_algebra,
    scalars,
    sum_space_projector,
)
from minscramble.operators import SX, SZ, haar_unitary, random_hermitian, swap_operator


def _closed(A):
    return A.closure_residual() < 1e-10


@pytest.mark.parametrize(
    "A, dimA, dimC, blocks",
    [
        (full_algebra(3), 9, 1, [(1, 3)]),
        (scalars(3), 1, 9, [(3, 1)]),
        (masa(3), 3, 3, [(1, 1)] * 3),
        (bipartite_algebra(2, 3, "A"), 4, 9, [(3, 2)]),
        (bipartite_algebra(2, 3, "B"), 9, 4, [(2, 3)]),
    ],
    ids=["full", "scalars", "masa", "bipA", "bipB"],
)
def test_known_structures(A, dimA, dimC, blocks):
    assert len(A) == dimA
    assert len(A.commutant()) == dimC
    assert sorted((n, d) for _, n, d in A.blocks()) == sorted(blocks)
    assert _closed(A)


@pytest.mark.parametrize(
    "N, blocks",
    [(2, [(1, 3), (1, 1)]), (3, [(1, 4), (2, 2)]), (4, [(1, 5), (3, 3), (2, 1)])],
)
def test_collective_spin_blocks(N, blocks):
    # spin-J irreps of dimension 2J+1 with Schur-Weyl multiplicities
    A = collective_spin_algebra(N)
    got = [(n, d) for _, n, d in A.blocks()]
    assert sorted(got) == sorted(blocks)
    assert len(A) == sum(d * d for _, d in blocks)
    assert len(A.commutant()) == sum(n * n for n, _ in blocks)
    assert len(A.center()) == len(blocks)


def test_commutant_elements_commute(spin3):
    for a in spin3.basis:
        for c in spin3.commutant().basis:
            assert np.linalg.norm(a @ c - c @ a) < 1e-10


def test_double_commutant_is_algebra(rng):
    H = random_hermitian(4, rng)
    A = generate_algebra([H @ H.conj().T @ np.diag([1, 1, 0, 0]) @ H], 4)
    AA = commutant(commutant(A))
    assert same_algebra(A, AA)


def test_swap_generated_algebra():
    A = generate_algebra([swap_operator(2)], 4)
    assert len(A) == 2
    assert len(A.commutant()) == 10  # symmetric (3x3) plus antisymmetric (1x1) blocks
    assert not is_factor(A)


def test_center_is_intersection(spin3):
    Z = center(spin3)
    for z in Z.basis:
        assert spin3.contains(z) and spin3.commutant().contains(z)


def test_factor_and_collinear():
    assert is_factor(bipartite_algebra(2, 2))
    assert is_collinear(bipartite_algebra(2, 2))
    assert is_collinear(masa(4))
    assert not is_collinear(collective_spin_algebra(3))  # 20 * 5 != 64


def test_conditional_expectation_is_projection(spin3, rng):
    P = conditional_expectation(spin3)
    X = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    PX = P(X)
    assert np.allclose(P(PX), PX)
    assert spin3.contains(PX)
    assert abs(np.vdot(X - PX, PX)) < 1e-10
    assert np.isclose(P.rank(), len(spin3))


def test_sum_space_rank_matches_inclusion_exclusion(spin3):
    # dim(A + A') = dim A + dim A' - dim Z
    P = sum_space_projector(spin3)
    assert np.isclose(P.rank(), 20 + 5 - 2)


def test_pinching_keeps_block_diagonal(spin3, rng):
    X = rng.standard_normal((8, 8))
    Y = pinching_projector(spin3)(X)
    for P, _, _ in spin3.blocks():
        assert np.allclose(P @ Y @ (np.eye(8) - P), 0)


def test_block_isometry_residual(spin3):
    iso = block_isometry(spin3)
    assert block_structure_residual(spin3, iso) < 1e-10
    assert np.allclose(iso.W @ iso.W.conj().T, np.eye(8))


def test_masa_isometry_is_permutation_free():
    iso = block_isometry(masa(3))
    assert np.allclose(np.abs(iso.W), np.eye(3))


def test_distance_between_qubit_masas():
    # Z-basis vs X-basis diagonal algebras: mutually unbiased, distance sqrt(2)
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.isclose(algebra_distance(masa(2), masa(2, H)), np.sqrt(2))
    assert algebra_distance(masa(2), masa(2)) < 1e-12


def test_rotate_algebra_conjugates(qubit_pair):
    U = np.kron(SX, SZ)
    B = rotate_algebra(qubit_pair, U)
    assert same_algebra(B, qubit_pair)  # local unitary keeps L(H_A) (x) 1
    V = swap_operator(2)
    assert same_algebra(rotate_algebra(qubit_pair, V), bipartite_algebra(2, 2, "B"))


def test_rotation_preserves_blocks(spin3):
    U = haar_unitary(8, 5)
    B = rotate_algebra(spin3, U)
    assert sorted((n, d) for _, n, d in B.blocks()) == [(1, 4), (2, 2)]
    assert block_structure_residual(B, block_isometry(B)) < 1e-10
