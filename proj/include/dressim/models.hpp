// models.hpp — Hamiltonian families on explicit finite bases: transverse-field
// spin models, coupled oscillators in truncated Fock space, the spin-boson
// model, and the BCS pairing model on Jordan-Wigner qubits.
//
// Basis ordering everywhere: qubit/site 0 is the most significant tensor
// factor; Fock occupations run 0..n_max-1 per site.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dressim/linalg.hpp"

namespace dressim {

// --------------------------- model specs -------------------------------------

struct IsingCost {
    struct Coupling {
        int i;
        int j;
        double value;  // J_ij
    };
    std::vector<double> fields;          // h_i, length n_qubits
    std::vector<Coupling> couplings;     // i < j, no duplicates
};

struct GroverCost {
    long index_state;  // in [0, 2^n)
};

// H = B sum_i sigma^x_i + cost(sigma^z); cost is either the Ising form or the
// search projector complement I - |B><B|.
struct SpinModelSpec {
    int n_qubits;
    double transverse_field;  // B
    std::variant<IsingCost, GroverCost> cost;
};

// H = sum_i p_i^2/(2 m_i) + (k_i/2) x_i^2 + sum_ij (k_ij/2)(x_i - x_j)^2 with
// per-site ladder truncation; minima sit at the origin (constant offsets
// dropped).
struct OscillatorSpec {
    struct Coupling {
        int i;
        int j;
        double value;  // k_ij >= 0
    };
    std::vector<double> mass;       // m_i > 0
    std::vector<double> stiffness;  // k_i > 0 (second derivative of the on-site potential)
    std::vector<Coupling> couplings;
    int n_max;                      // Fock levels per site, occupations 0..n_max-1

    int n_sites() const { return static_cast<int>(mass.size()); }
};

// H = B sigma^x + sigma^z sum_a lambda_a (b_a + b†_a) + sum_a omega_a n_a on
// the (spin ⊗ Fock...) product basis, spin most significant.
struct SpinBosonSpec {
    struct Mode {
        double frequency;  // omega_a > 0
        double coupling;   // lambda_a
    };
    double transverse_field;  // B
    std::vector<Mode> modes;
    int n_max;

    int n_modes() const { return static_cast<int>(modes.size()); }
};

// H = sum_{k,s} eps_k n_{ks} + sum_{k,k'} V_{k,k'} eta0†(k') eta0(k) on 2L
// Jordan-Wigner fermion modes (all up modes first by k, then all down modes).
// The pair annihilator is eta_q(k) = c_{k,up} c_{q-k,down} with mode
// arithmetic on a periodic 1-D ring of L momenta.
struct BcsSpec {
    int n_momenta;                              // L
    std::vector<double> energies;               // eps_k, length L
    std::variant<double, RealMatrix> interaction;  // constant G or full symmetric V

    double interaction_element(int k, int kprime) const;
    int n_fermion_modes() const { return 2 * n_momenta; }
};

using ModelSpec = std::variant<SpinModelSpec, OscillatorSpec, SpinBosonSpec, BcsSpec>;

// Checked dimension of the model's basis; throws CapacityError beyond
// pol.max_hilbert_dim.
Index hilbert_dim(const ModelSpec& spec, const NumericalPolicy& pol = default_policy());
std::string family_name(const ModelSpec& spec);

// --------------------------- builders ----------------------------------------

HermitianOperator build_spin_hamiltonian(const SpinModelSpec& spec,
                                         const NumericalPolicy& pol = default_policy());
HermitianOperator build_oscillator_hamiltonian(const OscillatorSpec& spec,
                                               const NumericalPolicy& pol = default_policy());
HermitianOperator build_spinboson_hamiltonian(const SpinBosonSpec& spec,
                                              const NumericalPolicy& pol = default_policy());
HermitianOperator build_bcs_hamiltonian(const BcsSpec& spec,
                                        const NumericalPolicy& pol = default_policy());
HermitianOperator build_hamiltonian(const ModelSpec& spec,
                                    const NumericalPolicy& pol = default_policy());

// --------------------------- operator helpers --------------------------------

// Embed a local operator on one site of a uniform product space; site 0 is the
// most significant factor.
Matrix embed_site_operator(const Matrix& local, int site, int n_sites, Index local_dim,
                           const NumericalPolicy& pol = default_policy());

// Boson annihilator b on n_levels Fock states: b|n> = sqrt(n)|n-1>.
Matrix boson_lowering(Index n_levels);

// Full-space position/momentum of one oscillator site, scaled with the
// site-local harmonic frequency sqrt(k_i/m_i).
Matrix oscillator_position(const OscillatorSpec& spec, int site,
                           const NumericalPolicy& pol = default_policy());
Matrix oscillator_momentum(const OscillatorSpec& spec, int site,
                           const NumericalPolicy& pol = default_policy());

// Potential Hessian K: K_jj = k_j + sum_l k_jl, K_jl = -k_jl.
RealMatrix oscillator_stiffness_matrix(const OscillatorSpec& spec);

// Full-space spin-boson operators (spin factor ⊗ modes).
Matrix spinboson_spin_operator(const SpinBosonSpec& spec, const Matrix& pauli,
                               const NumericalPolicy& pol = default_policy());
Matrix spinboson_mode_lowering(const SpinBosonSpec& spec, int mode,
                               const NumericalPolicy& pol = default_policy());

// --------------------------- fermions ----------------------------------------

enum class FermionKind { create, annihilate, number };

// Jordan-Wigner realization of n_modes fermionic modes on n_modes qubits.
// Canonical anticommutation relations are verified on construction whenever
// n_modes <= 6 (the BCS L <= 3 regime).
class FermionAlgebra {
public:
    explicit FermionAlgebra(int n_modes, const NumericalPolicy& pol = default_policy());

    int n_modes() const { return n_modes_; }
    Index dim() const { return dim_; }
    const Matrix& op(int mode, FermionKind kind) const;

private:
    int n_modes_;
    Index dim_;
    std::vector<Matrix> create_;
    std::vector<Matrix> annihilate_;
    std::vector<Matrix> number_;
};

Matrix fermion_operator(const FermionAlgebra& alg, int mode, FermionKind kind);

// Momentum -k on the periodic mode ring: (L - k) mod L.
int bcs_negate_mode(int k, int n_momenta);
// Jordan-Wigner site of (k, spin): up modes 0..L-1, down modes L..2L-1.
int bcs_jw_index(const BcsSpec& spec, int k, bool spin_down);
// eta_q(k) = c_{k,up} c_{q-k,down}.
Matrix bcs_pair_annihilator(const BcsSpec& spec, const FermionAlgebra& alg, int k, int q = 0);

} // namespace dressim
