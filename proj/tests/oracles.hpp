// oracles.hpp — independent reference implementations used to cross-check the
// library. Deliberately different algorithms: cyclic Jacobi instead of the
// library eigensolver, Taylor series instead of spectral exponentials, closed
// forms instead of matrix products.

#pragma once

#include <complex>
#include <vector>

#include "dressim/linalg.hpp"

namespace oracles {

using dressim::Complex;
using dressim::Index;
using dressim::Matrix;

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(Matrix a);

// exp(A) by scaling-and-squaring Taylor summation.
Matrix series_expm(const Matrix& a);

// <m| exp(alpha b† - conj(alpha) b) |n> in closed form (generalized Laguerre).
Complex displacement_element(int m, int n, Complex alpha);

// Direct O(n²) discrete Fourier sum: X_k = sum_m x_m exp(sign·2πi k m / n).
std::vector<Complex> naive_dft(const std::vector<Complex>& x, int sign);

// Annihilator for each fermion mode, built by explicit occupation-state
// enumeration (mode 0 in the most significant bit, sign from the occupied
// modes preceding it).
std::vector<Matrix> occupation_annihilators(int n_modes);

} // namespace oracles
