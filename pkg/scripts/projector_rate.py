"""Dense rate of the 3-qubit boundary projector Hamiltonian, S = {middle qubit}.

Prints the rate for both normalizations of the operator and compares it with
the quadratic expression J12^2 + J23^2 + J12 J23 / 4 read as rate or as rate^2.
"""
import argparse

import numpy as np

from minscramble.rate import gaussian_rate, short_time_coefficient, subsystem_algebra


def projector_hamiltonian(J12: float, J23: float) -> np.ndarray:
    phi = np.zeros(4)
    phi[[0, 3]] = 1 / np.sqrt(2)
    P = np.outer(phi, phi)
    I = np.eye(2)
    return J12 * np.kron(P, I) + J23 * np.kron(I, P)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--J12", type=float, default=0.8)
    ap.add_argument("--J23", type=float, default=1.3)
    a = ap.parse_args()
    A = subsystem_algebra(3, [1])
    quad = a.J12**2 + a.J23**2 + a.J12 * a.J23 / 4
    print(f"J12={a.J12} J23={a.J23}  reference expression q = {quad:.6f}")
    for label, H in (("operator is H", projector_hamiltonian(a.J12, a.J23)),
                     ("operator is H/sqrt(d)", np.sqrt(8) * projector_hamiltonian(a.J12, a.J23))):
        r = gaussian_rate(H, A).rate
        c = short_time_coefficient(A, H)
        print(f"{label:24s} rate={r:.6f}  rate^2={r * r:.6f}  (rate-q)={r - quad:+.4f}  (rate^2-q)={r * r - quad:+.4f}"
              f"  fit/(2 rate^2)={c / (2 * r * r):.6f}")
    print(f"closed form: rate^2 = 3/16 (J12^2 + J23^2) = {3 / 16 * (a.J12**2 + a.J23**2):.6f}"
          f" or 3/2 (J12^2 + J23^2) = {1.5 * (a.J12**2 + a.J23**2):.6f}; no J12 J23 term")


if __name__ == "__main__":
    main()
