import numpy as np
import pytest

from minscramble.algebra import algebra_distance, bipartite_algebra, masa, rotate_algebra
from minscramble.operators import SX, SZ, haar_unitary, kron, random_hermitian
from minscramble.pauli import build_group, group_algebra, parse_hamiltonian
from minscramble.rate import (
    FamilySpec,
    RateError,
    circular_hamiltonian,
    eta,
    gaussian_rate,
    masa_distance,
    masa_rate_bound,
    minimize_rate,
    normalized,
    rate_abelian,
    rate_bipartite,
    rate_distance_to_sum_space,
    rate_stabilizer,
    rate_subsystem,
    short_time_coefficient,
    subsystem_algebra,
    symmetric_algebra,
)

THETAS = np.arange(32) * np.pi / 16


@pytest.mark.parametrize(
    "kind, closed",
    [
        ("circular_bipartite", lambda t: np.abs(np.sin(t))),
        ("circular_masa", lambda t: np.abs(np.sin(t))),
        ("circular_symmetric", lambda t: np.sqrt(2) * np.abs(np.sin(t / 2))),
    ],
)
def test_circular_families(kind, closed):
    res = minimize_rate(circular_hamiltonian(kind), FamilySpec(kind, thetas=THETAS))
    assert np.allclose(res.rates, closed(THETAS), atol=1e-12)


def test_circular_minimizers():
    res = minimize_rate(circular_hamiltonian("circular_masa"), FamilySpec("circular_masa", thetas=THETAS))
    assert [lab for _, lab in res.minimizers] == [0.0, pytest.approx(np.pi)]
    assert [lab for _, lab in res.maximizers()] == [pytest.approx(np.pi / 2), pytest.approx(3 * np.pi / 2)]


def test_symmetric_algebra_dims():
    S = symmetric_algebra()
    assert len(S) == 10 and len(S.commutant()) == 2


@pytest.mark.parametrize("seed", range(4))
def test_general_rate_matches_direct_projection(spin3, seed):
    H = random_hermitian(8, seed)
    assert gaussian_rate(H, spin3).rate == pytest.approx(rate_distance_to_sum_space(H, spin3), abs=1e-12)


def test_rate_splits_into_sectors(spin3):
    r = gaussian_rate(random_hermitian(8, 3), spin3)
    assert r.rate**2 == pytest.approx(r.inter_sector**2 + r.intra_sector**2, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_bounds(spin3, seed):
    H = random_hermitian(8, seed) + 3 * np.eye(8)
    r = gaussian_rate(H, spin3)
    assert r.rate <= min(r.bound_A, r.bound_Aprime) + 1e-12
    assert min(r.bound_A, r.bound_Aprime) <= r.eta + 1e-12


def test_identity_shift_does_not_change_rate(spin3):
    H = random_hermitian(8, 1)
    assert gaussian_rate(H, spin3).rate == pytest.approx(gaussian_rate(H + 5 * np.eye(8), spin3).rate, abs=1e-12)
    assert eta(2 * np.eye(4)) == pytest.approx(2.0)
    assert abs(np.trace(normalized(H))) < 1e-12


def test_bipartite_closed_form(rng):
    A = bipartite_algebra(2, 3)
    for s in range(3):
        H = random_hermitian(6, s)
        assert rate_bipartite(H, (2, 3)) == pytest.approx(gaussian_rate(H, A).rate, abs=1e-12)


def test_ising_pair_rate():
    H = 0.7 * kron(SZ, SZ) + 0.3 * kron(SX, np.eye(2))
    assert rate_bipartite(H, (2, 2)) == pytest.approx(0.7)


def test_subsystem_algebra_matches_permuted_closed_form():
    H = random_hermitian(8, 2)
    for S in ([0], [1], [2], [0, 2]):
        assert gaussian_rate(H, subsystem_algebra(3, S)).rate == pytest.approx(rate_subsystem(H, 3, S), abs=1e-12)


def test_abelian_form(masa4):
    H = random_hermitian(4, 6)
    assert rate_abelian(H, masa4) == pytest.approx(gaussian_rate(H, masa4).rate, abs=1e-12)
    with pytest.raises(RateError):
        rate_abelian(random_hermitian(6, 0), bipartite_algebra(2, 3))


@pytest.mark.parametrize("word, expected", [("1.0 XII", 1.0), ("1.0 XXX", 0.0), ("1.0 ZZI", 0.0), ("1.0 IXI", 1.0)])
def test_repetition_code_rates(word, expected):
    G = build_group(["ZZI", "IZZ"])
    H = parse_hamiltonian(word).to_matrix()
    assert rate_stabilizer(H, G) == pytest.approx(expected, abs=1e-12)
    assert gaussian_rate(H, group_algebra(G)).rate == pytest.approx(expected, abs=1e-12)


def test_zero_rate_flat_otoc(spin3):
    # H built in A + A' has zero rate and a vanishing t^2 coefficient
    a = spin3.generic_element(1)
    c = spin3.commutant().generic_element(2)
    H = a + c
    assert gaussian_rate(H, spin3).rate < 1e-10
    assert abs(short_time_coefficient(spin3, H)) < 1e-6


def test_short_time_coefficient(spin3):
    H = random_hermitian(8, 12)
    tau2 = gaussian_rate(H, spin3).rate ** 2
    assert short_time_coefficient(spin3, H) == pytest.approx(2 * tau2, rel=1e-3)


def test_masa_distance_matches_algebra_distance():
    V1, V2 = haar_unitary(3, 1), haar_unitary(3, 2)
    assert masa_distance(V1, V2) == pytest.approx(algebra_distance(masa(3, V1), masa(3, V2)), abs=1e-10)


def test_masa_bound():
    H = random_hermitian(4, 5)
    r, bound = masa_rate_bound(H, haar_unitary(4, 6))
    assert r <= bound + 1e-12
    with pytest.raises(RateError, match="degenerate"):
        masa_rate_bound(np.diag([1.0, 1.0, 2.0]), np.eye(3))


def test_family_validation():
    with pytest.raises(RateError, match="increasing"):
        FamilySpec("circular_masa", thetas=[0.0, 0.0])
    with pytest.raises(RateError, match="unknown"):
        FamilySpec("spiral")
    with pytest.raises(RateError, match="hermitian"):
        FamilySpec("theta_grid", base=masa(2), generator=np.array([[0, 1], [0, 0]]))


def test_explicit_list_family():
    fam = FamilySpec("explicit_list", members=[masa(2), rotate_algebra(masa(2), haar_unitary(2, 3))], labels=["z", "r"])
    res = minimize_rate(SZ, fam)
    assert res.minimizers == [(0, "z")]
    assert res.minimum == pytest.approx(0, abs=1e-12)


def test_rate_errors():
    with pytest.raises(RateError, match="hermitian"):
        gaussian_rate(np.array([[0, 1], [0, 0]]), masa(2))
    with pytest.raises(RateError, match="dim"):
        gaussian_rate(np.eye(3), masa(2))
