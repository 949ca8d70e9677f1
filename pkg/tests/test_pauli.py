import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minscramble.pauli import (
    PauliError,
    PauliString,
    build_group,
    commutes,
    format_pauli,
    group_algebra,
    parse_hamiltonian,
    parse_pauli,
    twirl,
)

paulis = st.integers(1, 4).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.integers(0, 3),
    )
)


def _pair(draw_n):
    return st.tuples(
        st.lists(st.integers(0, 1), min_size=draw_n, max_size=draw_n),
        st.lists(st.integers(0, 1), min_size=draw_n, max_size=draw_n),
        st.integers(0, 3),
    )


pairs = st.integers(1, 4).flatmap(lambda n: st.tuples(_pair(n), _pair(n)))


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_product_matches_matrices(pq):
    p, q = (PauliString(tuple(x), tuple(z), k) for x, z, k in pq)
    assert np.allclose((p * q).matrix(), p.matrix() @ q.matrix())


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_commutation_matches_matrices(pq):
    p, q = (PauliString(tuple(x), tuple(z), k) for x, z, k in pq)
    A, B = p.matrix(), q.matrix()
    assert commutes(p, q) == np.allclose(A @ B, B @ A)


@settings(max_examples=100, deadline=None)
@given(paulis)
def test_format_parse_roundtrip(t):
    p = PauliString(tuple(t[0]), tuple(t[1]), t[2])
    assert parse_pauli(format_pauli(p)) == p


@pytest.mark.parametrize("text, k", [("XZ", 0), ("-YY", 2), ("iZ", 1), ("-iX", 3), ("+I", 0)])
def test_parse_phases(text, k):
    assert parse_pauli(text).k == k


def test_y_letter_is_hermitian():
    y = parse_pauli("Y")
    assert y.is_hermitian()
    assert np.allclose(y.matrix(), [[0, -1j], [1j, 0]])


@pytest.mark.parametrize("bad", ["", "XQ", "2X", "X Z"])
def test_parse_rejects(bad):
    with pytest.raises(PauliError):
        parse_pauli(bad)


def test_repetition_group():
    G = build_group(["ZZI", "IZZ"])
    assert [format_pauli(g) for g in G.elements] == ["III", "IZZ", "ZZI", "ZIZ"]
    assert G.k == 1


@pytest.mark.parametrize(
    "gens, msg",
    [(["XI", "ZI"], "anticommute"), (["ZZ", "ZZ"], "independent"), (["iZ"], "square"), (["ZZ", "-ZZ"], "independent")],
)
def test_group_validation(gens, msg):
    with pytest.raises(PauliError, match=msg):
        build_group(gens)


def test_set_that_would_contain_minus_one_is_rejected():
    # XX * ZZ = -YY, so adding YY would put -1 in the group
    with pytest.raises(PauliError, match="independent"):
        build_group(["XX", "ZZ", "YY"])


def test_twirl_is_projection_onto_commutant(rng):
    G = build_group(["ZZI", "IZZ"])
    X = rng.standard_normal((8, 8))
    T = twirl(G, X)
    assert np.allclose(twirl(G, T), T)
    for g in G.matrices():
        assert np.allclose(g @ T, T @ g)


def test_group_algebra_dims():
    A = group_algebra(build_group(["ZZI", "IZZ"]))
    assert len(A) == 4
    assert sorted((n, d) for _, n, d in A.blocks()) == [(2, 1)] * 4


def test_parse_hamiltonian_reports_line():
    text = "# header\n1.0 ZZ\n0.5 XQ\n"
    with pytest.raises(PauliError, match="line 3"):
        parse_hamiltonian(text)
    h = parse_hamiltonian("1.0 ZZ  # coupling\n-0.5 XI\n")
    Z, X = np.diag([1, -1]), np.array([[0, 1], [1, 0]])
    assert np.allclose(h.to_matrix(), np.kron(Z, Z) - 0.5 * np.kron(X, np.eye(2)))
