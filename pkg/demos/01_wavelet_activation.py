"""The B-spline wavelet activation and its ReLU anatomy.

The activation psi is a fixed linear combination of seven shifted ReLUs,
supported on (0, 3). This script evaluates it, checks the two structural
identities that make wavelet networks "still ReLU networks":

* expanding one wavelet neuron yields seven ReLU neurons that sum back to
  the neuron exactly;
* 24 * psi(x/4) equals relu(x) on [-1, 1], so nothing representable by a
  ReLU net on the box is lost.

It also shows where the variation-norm factor 16 comes from: the absolute
slope coefficients of the seven atoms.
"""

import numpy as np

from bwinr import (
    WAVELET_COEFFS,
    WAVELET_SHIFTS,
    expand_to_relus,
    psi,
    psi_prime,
)


def main():
    print("psi on a few points:")
    for x in (-1.0, 0.5, 1.0, 1.5, 2.5, 3.5):
        print(f"  psi({x:4.1f}) = {psi(x):+.6f}   psi'({x:4.1f}) = {psi_prime(x):+.6f}")

    print("\nseven ReLU atoms (slope coefficient, shift):")
    for coeff, shift in zip(WAVELET_COEFFS, WAVELET_SHIFTS):
        print(f"  {coeff:+.6f} * relu(x - {shift})")
    print(f"  sum of coefficients:          {WAVELET_COEFFS.sum():+.1e} (tails cancel)")
    print(f"  sum of |coefficients|:        {np.abs(WAVELET_COEFFS).sum():.1f} (variation-norm factor)")

    rng = np.random.default_rng(0)
    w, b, v, c = rng.standard_normal(2), 0.3, rng.standard_normal(1), 2.0
    atoms = expand_to_relus(w, b, v, c)
    X = rng.uniform(-1, 1, (2000, 2))
    neuron = v[0] * psi(c * (X @ w - b))
    total = sum(a.output[0] * np.maximum(X @ a.weight - a.bias, 0.0) for a in atoms)
    print(f"\nwavelet neuron vs sum of its 7 ReLU atoms: "
          f"max |difference| = {np.abs(total - neuron).max():.2e}")

    x = np.linspace(-1, 1, 10001)
    err = np.abs(24.0 * psi(x / 4.0) - np.maximum(x, 0.0)).max()
    print(f"24*psi(x/4) vs relu(x) on [-1,1]:          max |difference| = {err:.2e}")


if __name__ == "__main__":
    main()
