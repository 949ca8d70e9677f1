"""JSON and text input formats used by the command line.

Matrices are nested lists whose entries are either real numbers or
``[re, im]`` pairs.  Validation errors name the offending key and, where the
key occurs in the file, the line it sits on.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .algebra import (
    MatrixAlgebra,
    bipartite_algebra,
    collective_spin_algebra,
    full_algebra,
    generate_algebra,
    masa,
    rotate_algebra,
)
from .lattice import LatticeSpec, SweepConfig
from .operators import SX, SY, SZ, is_hermitian
from .partition import Edge, InteractionGraph
from .pauli import PauliError, build_group, group_algebra, parse_hamiltonian, pauli_hamiltonian, to_matrix
from .rate import FAMILY_KINDS, FamilySpec

NAMED_OPERATORS = {"X": SX, "Y": SY, "Z": SZ}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


@dataclass
class Document:
    """Parsed JSON together with its source text, for error locations."""

    data: object
    text: str = ""
    path: str | None = None

    def line_of(self, key: str) -> int | None:
        m = re.search(r'"' + re.escape(key) + r'"\s*:', self.text)
        return self.text.count("\n", 0, m.start()) + 1 if m else None

    def error(self, message: str, key: str | None = None) -> ConfigError:
        return ConfigError(message, self.line_of(key) if key else None, self.path)


def load_document(path) -> Document:
    path = str(path)
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read file: {e.strerror}", path=path) from None
    return parse_document(text, path)


def parse_document(text: str, path: str | None = None) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg} (column {e.colno})", e.lineno, path) from None
    return Document(data, text, path)


def _require(doc: Document, obj: dict, key: str, where: str = "top level"):
    if not isinstance(obj, dict):
        raise doc.error(f"expected a JSON object at {where}")
    if key not in obj:
        raise doc.error(f'missing required key "{key}" at {where}')
    return obj[key]


def _int(doc: Document, value, key: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise doc.error(f'"{key}" must be an integer, got {value!r}', key)
    if minimum is not None and value < minimum:
        raise doc.error(f'"{key}" must be >= {minimum}, got {value}', key)
    return value


def _number(doc: Document, value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise doc.error(f'"{key}" must be a number, got {value!r}', key)
    return float(value)


# --------------------------------------------------------------------------
# matrices


def matrix_from_json(obj, doc: Document | None = None, key: str = "matrix") -> np.ndarray:
    doc = doc or Document(obj)
    if isinstance(obj, str) and obj in NAMED_OPERATORS:
        return NAMED_OPERATORS[obj].copy()
    if not isinstance(obj, list) or not obj or not all(isinstance(row, list) for row in obj):
        raise doc.error(f'"{key}" must be a nonempty list of rows', key)
    n = len(obj)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(obj):
        if len(row) != n:
            raise doc.error(f'"{key}" row {i} has length {len(row)}, expected {n} (matrices must be square)', key)
        for j, v in enumerate(row):
            if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v):
                out[i, j] = complex(v[0], v[1])
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                out[i, j] = v
            else:
                raise doc.error(f'"{key}" entry ({i}, {j}) must be a number or [re, im], got {v!r}', key)
    return out


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


# --------------------------------------------------------------------------
# algebras

ALGEBRA_KINDS = ("generators", "bipartite", "masa", "stabilizer", "collective_spin", "full")


def algebra_from_json(obj, doc: Document | None = None) -> MatrixAlgebra:
    doc = doc or Document(obj)
    kind = _require(doc, obj, "kind", "algebra spec")
    if kind not in ALGEBRA_KINDS:
        raise doc.error(f'unknown algebra kind {kind!r}; expected one of {", ".join(ALGEBRA_KINDS)}', "kind")
    if kind == "generators":
        gens = _require(doc, obj, "generators", "algebra spec")
        if not isinstance(gens, list) or not gens:
            raise doc.error('"generators" must be a nonempty list of matrices', "generators")
        mats = [matrix_from_json(g, doc, "generators") for g in gens]
        if len({m.shape for m in mats}) != 1:
            raise doc.error("generators have different dimensions", "generators")
        A = generate_algebra(mats, mats[0].shape[0], name="generated")
    elif kind == "bipartite":
        dA = _int(doc, _require(doc, obj, "dA", "algebra spec"), "dA", 1)
        dB = _int(doc, _require(doc, obj, "dB", "algebra spec"), "dB", 1)
        side = obj.get("side", "A")
        if side not in ("A", "B"):
            raise doc.error(f'"side" must be "A" or "B", got {side!r}', "side")
        A = bipartite_algebra(dA, dB, side)
    elif kind == "masa":
        d = _int(doc, _require(doc, obj, "dim", "algebra spec"), "dim", 1)
        V = matrix_from_json(obj["basis"], doc, "basis") if "basis" in obj else None
        if V is not None and V.shape[0] != d:
            raise doc.error(f'"basis" has dimension {V.shape[0]}, expected {d}', "basis")
        A = masa(d, V)
    elif kind == "stabilizer":
        gens = _require(doc, obj, "generators", "algebra spec")
        if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
            raise doc.error('"generators" must be a list of Pauli words such as "ZZI"', "generators")
        try:
            A = group_algebra(build_group(gens, obj.get("n")))
        except PauliError as e:
            raise doc.error(str(e), "generators") from None
    elif kind == "collective_spin":
        A = collective_spin_algebra(_int(doc, _require(doc, obj, "N", "algebra spec"), "N", 1))
    else:
        A = full_algebra(_int(doc, _require(doc, obj, "dim", "algebra spec"), "dim", 1))
    if "rotation" in obj:
        U = rotation_from_json(obj["rotation"], doc)
        if U.shape[0] != A.dim:
            raise doc.error(f'"rotation" has dimension {U.shape[0]}, expected {A.dim}', "rotation")
        A = rotate_algebra(A, U)
    return A


def rotation_from_json(obj, doc: Document) -> np.ndarray:
    """Either a unitary matrix or {"generator": K, "theta": t} meaning exp(i t K / 2)."""
    if isinstance(obj, dict):
        K = matrix_from_json(_require(doc, obj, "generator", "rotation"), doc, "generator")
        if not is_hermitian(K):
            raise doc.error('rotation "generator" must be hermitian', "generator")
        theta = _number(doc, _require(doc, obj, "theta", "rotation"), "theta")
        return scipy.linalg.expm(0.5j * theta * K)
    return matrix_from_json(obj, doc, "rotation")


def load_algebra(path) -> MatrixAlgebra:
    doc = load_document(path)
    return algebra_from_json(doc.data, doc)


# --------------------------------------------------------------------------
# Hamiltonians and unitaries


def hamiltonian_from_json(obj, doc: Document | None = None) -> np.ndarray:
    doc = doc or Document(obj)
    if isinstance(obj, list):
        H = matrix_from_json(obj, doc, "hamiltonian")
    elif isinstance(obj, dict) and "matrix" in obj:
        H = matrix_from_json(obj["matrix"], doc, "matrix")
    elif isinstance(obj, dict) and "pauli" in obj:
        terms = obj["pauli"]
        if not isinstance(terms, list):
            raise doc.error('"pauli" must be a list of [coefficient, "WORD"] pairs', "pauli")
        try:
            H = to_matrix(pauli_hamiltonian([(c, w) for c, w in terms]))
        except (PauliError, ValueError, TypeError) as e:
            raise doc.error(f'bad "pauli" term list: {e}', "pauli") from None
    else:
        raise doc.error('Hamiltonian must be a matrix, {"matrix": ...} or {"pauli": [...]}')
    if not is_hermitian(H):
        raise doc.error("Hamiltonian is not hermitian", "matrix")
    return H


def load_hamiltonian(path) -> np.ndarray:
    """JSON (see ``hamiltonian_from_json``) or a text file of ``coeff WORD`` lines."""
    path = str(path)
    if not path.endswith(".json"):
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read file: {e.strerror}", path=path) from None
        try:
            return to_matrix(parse_hamiltonian(text))
        except PauliError as e:
            m = re.match(r"line (\d+): (.*)", str(e))
            if m:
                raise ConfigError(m.group(2), int(m.group(1)), path) from None
            raise ConfigError(str(e), path=path) from None
    doc = load_document(path)
    return hamiltonian_from_json(doc.data, doc)


def unitary_from_json(obj, doc: Document | None = None) -> np.ndarray:
    doc = doc or Document(obj)
    if isinstance(obj, dict) and "hamiltonian" in obj:
        H = hamiltonian_from_json(obj["hamiltonian"], doc)
        t = _number(doc, _require(doc, obj, "t", "unitary spec"), "t")
        w, V = np.linalg.eigh(H)
        return (V * np.exp(-1j * w * t)) @ V.conj().T
    if isinstance(obj, dict):
        return matrix_from_json(_require(doc, obj, "matrix", "unitary spec"), doc, "matrix")
    return matrix_from_json(obj, doc, "unitary")


def load_unitary(path) -> np.ndarray:
    doc = load_document(path)
    return unitary_from_json(doc.data, doc)


# --------------------------------------------------------------------------
# graphs, families, sweeps


def graph_from_json(obj, doc: Document | None = None) -> InteractionGraph:
    doc = doc or Document(obj)
    n = _int(doc, _require(doc, obj, "n", "graph"), "n", 1)
    edges = _require(doc, obj, "edges", "graph")
    if not isinstance(edges, list):
        raise doc.error('"edges" must be a list', "edges")
    out = []
    for k, e in enumerate(edges):
        where = f"edges[{k}]"
        i = _int(doc, _require(doc, e, "i", where), "i", 0)
        j = _int(doc, _require(doc, e, "j", where), "j", 0)
        J = _number(doc, _require(doc, e, "J", where), "J")
        paulis = e.get("paulis", "ZZ")
        if not isinstance(paulis, str):
            raise doc.error(f'{where}: "paulis" must be a string', "paulis")
        out.append(Edge(i, j, J, paulis, e.get("kind", "nn")))
    try:
        return InteractionGraph(n, tuple(out))
    except ValueError as e:
        raise doc.error(str(e), "edges") from None


def load_graph(path) -> InteractionGraph:
    doc = load_document(path)
    return graph_from_json(doc.data, doc)


def graph_to_json(g: InteractionGraph) -> dict:
    return {"n": g.n, "edges": [{"i": e.i, "j": e.j, "J": e.J, "paulis": e.paulis} for e in g.edges]}


def _grid(doc: Document, obj, key: str, step_name: str = "step") -> list:
    """A list of numbers or {"start", "stop", "step"} (inclusive of stop) or {"start", "stop", "num"}."""
    if isinstance(obj, list):
        return [_number(doc, v, key) for v in obj]
    if isinstance(obj, dict):
        start = _number(doc, _require(doc, obj, "start", key), "start")
        stop = _number(doc, _require(doc, obj, "stop", key), "stop")
        if "num" in obj:
            num = _int(doc, obj["num"], "num", 1)
            endpoint = bool(obj.get("endpoint", True))
            return [float(v) for v in np.linspace(start, stop, num, endpoint=endpoint)]
        step = _number(doc, _require(doc, obj, step_name, key), step_name)
        if step <= 0:
            raise doc.error(f'"{step_name}" must be positive', step_name)
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [float(np.round(start + k * step, 12)) for k in range(count)]
    raise doc.error(f'"{key}" must be a list or a range object', key)


def family_from_json(obj, doc: Document | None = None) -> FamilySpec:
    doc = doc or Document(obj)
    kind = _require(doc, obj, "kind", "family")
    if kind not in FAMILY_KINDS:
        raise doc.error(f'unknown family kind {kind!r}; expected one of {", ".join(FAMILY_KINDS)}', "kind")
    if kind == "explicit_list":
        members = _require(doc, obj, "members", "family")
        if not isinstance(members, list) or not members:
            raise doc.error('"members" must be a nonempty list of algebra specs', "members")
        algebras = [algebra_from_json(m, doc) for m in members]
        labels = obj.get("labels") or [str(i) for i in range(len(algebras))]
        if len(labels) != len(algebras):
            raise doc.error('"labels" and "members" differ in length', "labels")
        return FamilySpec(kind, members=algebras, labels=[str(s) for s in labels])
    thetas = _grid(doc, obj["thetas"], "thetas") if "thetas" in obj else None
    base = generator = None
    if kind == "theta_grid":
        base = algebra_from_json(_require(doc, obj, "base", "family"), doc)
        generator = matrix_from_json(_require(doc, obj, "generator", "family"), doc, "generator")
    try:
        return FamilySpec(kind, thetas=thetas, base=base, generator=generator)
    except ValueError as e:
        raise doc.error(str(e), "thetas") from None


def load_family(path) -> FamilySpec:
    doc = load_document(path)
    return family_from_json(doc.data, doc)


def sweep_config_from_json(obj, doc: Document | None = None) -> SweepConfig:
    doc = doc or Document(obj)
    lat = _require(doc, obj, "lattice", "sweep config")
    rows = _int(doc, _require(doc, lat, "rows", "lattice"), "rows", 1)
    cols = _int(doc, _require(doc, lat, "cols", "lattice"), "cols", 1)
    flags = {}
    for key in ("periodic", "nnn"):
        v = lat.get(key, False)
        if not isinstance(v, bool):
            raise doc.error(f'"{key}" must be true or false', key)
        flags[key] = v
    pauli_pair = lat.get("pauli_pair", "ZZ")
    x_grid = _grid(doc, _require(doc, obj, "x_grid", "sweep config"), "x_grid")
    samples = _int(doc, obj.get("samples_per_x", 500), "samples_per_x", 1)
    seed = _int(doc, obj.get("base_seed", 0), "base_seed")
    known = {"lattice", "x_grid", "samples_per_x", "base_seed"}
    extra = sorted(set(obj) - known)
    if extra:
        raise doc.error(f'unknown key "{extra[0]}" in sweep config', extra[0])
    try:
        spec = LatticeSpec(rows, cols, flags["periodic"], flags["nnn"], pauli_pair)
    except ValueError as e:
        raise doc.error(str(e), "lattice") from None
    try:
        return SweepConfig(spec, tuple(x_grid), samples, seed)
    except ValueError as e:
        raise doc.error(str(e), "x_grid") from None


def load_sweep_config(path) -> SweepConfig:
    doc = load_document(path)
    return sweep_config_from_json(doc.data, doc)
