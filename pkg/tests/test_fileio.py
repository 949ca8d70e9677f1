import json
from pathlib import Path

import numpy as np
import pytest

from minscramble import fileio
from minscramble.algebra import same_algebra, masa
from minscramble.lattice import LatticeSpec, SweepConfig
from minscramble.operators import SZ

FIX = Path(__file__).parent / "fixtures"


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=1))
    return p


def test_matrix_roundtrip(rng):
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(fileio.matrix_from_json(json.loads(json.dumps(fileio.matrix_to_json(M)))), M)


def test_matrix_mixed_entries():
    assert np.array_equal(fileio.matrix_from_json([[1, [0, 2]], [[0, -2], 3.5]]), [[1, 2j], [-2j, 3.5]])
    assert np.array_equal(fileio.matrix_from_json("Z"), SZ)


@pytest.mark.parametrize("bad", [[], [[1, 2]], [[1, "a"], [0, 1]], [[1, [1, 2, 3]], [0, 1]]])
def test_matrix_rejects(bad):
    with pytest.raises(fileio.ConfigError):
        fileio.matrix_from_json(bad)


def test_golden_sweep_config():
    cfg = fileio.load_sweep_config(FIX / "sweep.json")
    assert cfg == SweepConfig(LatticeSpec(4, 4, True, True, "ZZ"), (0.0, 0.1, 0.2, 0.3, 0.4, 0.5), 500, 2024)


def test_missing_key_is_named(tmp_path):
    p = write(tmp_path, "g.json", {"n": 3})
    with pytest.raises(fileio.ConfigError, match='"edges"'):
        fileio.load_graph(p)


def test_error_has_line_number(tmp_path):
    text = '{\n  "lattice": {"rows": 4, "cols": 4},\n  "x_grid": [0, 1],\n  "samples_per_x": -5\n}\n'
    p = write(tmp_path, "s.json", text)
    with pytest.raises(fileio.ConfigError) as e:
        fileio.load_sweep_config(p)
    assert e.value.line == 4
    assert "samples_per_x" in str(e.value)


def test_json_syntax_error_line(tmp_path):
    p = write(tmp_path, "bad.json", '{\n "n": 3,\n "edges": [,]\n}')
    with pytest.raises(fileio.ConfigError) as e:
        fileio.load_graph(p)
    assert e.value.line == 3


@pytest.mark.parametrize(
    "obj, key",
    [
        ({"lattice": {"rows": 2, "cols": 2}, "x_grid": [1, 0]}, "ascending"),
        ({"lattice": {"rows": 2, "cols": 2}, "x_grid": [0], "extra": 1}, "extra"),
        ({"lattice": {"rows": 2, "cols": 2, "periodic": "yes"}, "x_grid": [0]}, "periodic"),
        ({"lattice": {"rows": 2}, "x_grid": [0]}, "cols"),
    ],
)
def test_sweep_config_rejects(tmp_path, obj, key):
    with pytest.raises(fileio.ConfigError, match=key):
        fileio.load_sweep_config(write(tmp_path, "s.json", obj))


def test_graph_loading(tmp_path):
    obj = {"n": 3, "edges": [{"i": 0, "j": 1, "J": 0.5}, {"i": 2, "j": 1, "J": -1, "paulis": "XZ"}]}
    g = fileio.load_graph(write(tmp_path, "g.json", obj))
    assert [(e.i, e.j, e.J, e.paulis) for e in g.edges] == [(0, 1, 0.5, "ZZ"), (1, 2, -1.0, "ZX")]
    assert fileio.graph_from_json(fileio.graph_to_json(g)) == g


def test_algebra_specs(tmp_path):
    assert len(fileio.algebra_from_json({"kind": "bipartite", "dA": 2, "dB": 3})) == 4
    assert len(fileio.algebra_from_json({"kind": "collective_spin", "N": 2})) == 10
    assert len(fileio.algebra_from_json({"kind": "stabilizer", "generators": ["ZZ"]})) == 2
    assert len(fileio.algebra_from_json({"kind": "generators", "generators": ["Z"]})) == 2
    assert len(fileio.algebra_from_json({"kind": "full", "dim": 3})) == 9
    rot = fileio.algebra_from_json({"kind": "masa", "dim": 2, "rotation": {"generator": "Y", "theta": np.pi / 2}})
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert same_algebra(rot, masa(2, H))
    with pytest.raises(fileio.ConfigError, match="unknown algebra kind"):
        fileio.algebra_from_json({"kind": "jordan"})
    with pytest.raises(fileio.ConfigError, match="anticommute"):
        fileio.algebra_from_json({"kind": "stabilizer", "generators": ["X", "Z"]})


def test_hamiltonian_formats(tmp_path):
    pauli_json = fileio.load_hamiltonian(write(tmp_path, "h.json", {"pauli": [[2.0, "ZI"], [1.0, "XX"]]}))
    text = fileio.load_hamiltonian(write(tmp_path, "h.txt", "2.0 ZI\n1.0 XX\n"))
    assert np.array_equal(pauli_json, text)
    assert np.array_equal(fileio.load_hamiltonian(FIX / "sz.json"), SZ)
    with pytest.raises(fileio.ConfigError) as e:
        fileio.load_hamiltonian(write(tmp_path, "b.txt", "1.0 ZZ\n\nfoo XX\n"))
    assert e.value.line == 3
    with pytest.raises(fileio.ConfigError, match="hermitian"):
        fileio.hamiltonian_from_json({"matrix": [[0, 1], [0, 0]]})


def test_unitary_from_hamiltonian():
    U = fileio.unitary_from_json({"hamiltonian": {"matrix": "Z"}, "t": np.pi / 2})
    assert np.allclose(U, np.diag([-1j, 1j]))


def test_family_specs():
    fam = fileio.family_from_json({"kind": "circular_masa", "thetas": {"start": 0, "stop": 3.0, "num": 4}})
    assert np.allclose(fam.thetas, [0, 1, 2, 3])
    fam = fileio.family_from_json({"kind": "explicit_list", "members": [{"kind": "masa", "dim": 2}], "labels": ["z"]})
    assert fam.labels == ["z"]
    with pytest.raises(fileio.ConfigError, match="increasing"):
        fileio.family_from_json({"kind": "circular_masa", "thetas": [1, 0]})


def test_unreadable_file(tmp_path):
    with pytest.raises(fileio.ConfigError, match="cannot read"):
        fileio.load_graph(tmp_path / "nope.json")
