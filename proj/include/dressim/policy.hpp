// policy.hpp — Central numerical tolerance policy

#pragma once

namespace dressim {

// Every tolerance used by the library lives here so that a single config
// block can tighten or relax the whole stack at once.
struct NumericalPolicy {
    double hermiticity_tol = 1e-12;        // ||M - M†||max <= tol * ||M||max
    double unitarity_tol = 1e-10;          // ||U†U - I||max
    double eigh_residual_tol = 1e-9;       // ||H v - E v||2 <= tol * (1 + ||H||2)
    double spectral_invariance_tol = 1e-9; // sorted-eigenvalue match under conjugation
    double density_hermiticity_tol = 1e-10;
    double trace_tol = 1e-10;              // |Tr rho - 1|
    double positivity_tol = 1e-9;          // min eigenvalue of rho >= -tol
    double weight_sum_tol = 1e-12;         // ensemble probabilities sum to 1
    double coefficient_norm_tol = 1e-10;   // QPE coefficient vectors
    double histogram_norm_tol = 1e-9;      // QPE outcome distributions
    double degeneracy_tol = 1e-9;          // grouping of equal energies
    long max_hilbert_dim = 4096;
};

inline const NumericalPolicy& default_policy() {
    static const NumericalPolicy policy{};
    return policy;
}

} // namespace dressim
