"""Rates of the three circular toy families against their closed forms."""
import time

import numpy as np

from minscramble.rate import FamilySpec, circular_hamiltonian, minimize_rate

CLOSED_FORMS = {
    "circular_bipartite": lambda t: np.abs(np.sin(t)),
    "circular_masa": lambda t: np.abs(np.sin(t)),
    "circular_symmetric": lambda t: np.sqrt(2) * np.abs(np.sin(t / 2)),
}


def main():
    thetas = np.arange(33) * np.pi / 16
    thetas = thetas[thetas < 2 * np.pi + 1e-12]
    for kind, f in CLOSED_FORMS.items():
        t0 = time.perf_counter()
        res = minimize_rate(circular_hamiltonian(kind), FamilySpec(kind, thetas=thetas))
        dt = time.perf_counter() - t0
        err = float(np.max(np.abs(res.rates - f(thetas))))
        mins = [round(lab, 4) for _, lab in res.minimizers]
        maxs = [round(lab, 4) for _, lab in res.maximizers()]
        print(f"{kind:20s} max err {err:.1e}  minimizers {mins}  maximizers {maxs}  ({dt * 1e3:.0f} ms)")


if __name__ == "__main__":
    main()
