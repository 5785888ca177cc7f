// qpe.hpp — generalized quantum phase estimation over a channel ensemble:
// per-channel outcome distributions on an n-qubit phase register, aggregated
// by channel weight. Phase convention E_u t = -π j_u / 2^{n-1}, i.e.
// φ_u = frac(-E_u t / 2π) and j ≈ 2^n φ.

#pragma once

#include <variant>
#include <vector>

#include "dressim/dressing.hpp"
#include "dressim/linalg.hpp"
#include "dressim/models.hpp"

namespace dressim {

enum class QpeMode { kernel, circuit };

// The paper-facing reading keeps one physical initial state and re-expands it
// in each dressed eigenbasis; the alternative dresses the state itself.
enum class QpeInitialConvention { fixed_state, dressed_state };

// Coefficients over the noiseless eigenstates (ascending eigenvalue order).
struct EigenCoefficients {
    Vector c;
};

struct BasisStateInitial {
    long index = 0;
};

using QpeInitial = std::variant<EigenCoefficients, BasisStateInitial>;

struct QpeConfig {
    int n_register = 6;
    double t_evolution = 0.0;  // <= 0 selects qpe_default_time
    QpeInitial initial;
    ChannelEnsemble ensemble;
    QpeMode mode = QpeMode::kernel;
    QpeInitialConvention convention = QpeInitialConvention::fixed_state;
    DressingMode dressing = DressingMode::exact;
};

struct QpeResult {
    int n_register = 0;
    double t_used = 0.0;
    RealVector histogram;                   // over j in [0, 2^n)
    std::vector<RealVector> per_channel;

    struct Estimate {
        long j;
        double energy;  // -π j / (2^{n-1} t), wrapped into (-π/t, π/t]
        double probability;
    };
    std::vector<Estimate> estimates;
};

// C^a_u = Σ_v <u|V_a†|v> C_v over the noiseless eigenvectors |u>,|v>.
Vector channel_coefficients(const Vector& c, const UnitaryOperator& v_a,
                            const Spectrum& spectrum,
                            const NumericalPolicy& pol = default_policy());

// P(j) = Σ_u w_u |K_n(φ_u, j)|² with the exact n-qubit register kernel
// |K|² = sin²(2^n πδ) / (4^n sin²(πδ)), δ = φ_u - j/2^n wrapped to [-1/2, 1/2];
// weights at energies equal within pol.degeneracy_tol are pooled first.
RealVector qpe_kernel_distribution(const RealVector& energies, const RealVector& weights,
                                   double t, int n_register,
                                   const NumericalPolicy& pol = default_policy());

// Statevector route: Hadamards, controlled powers of propagator(h, t), exact
// inverse register Fourier transform, marginal over j. Capacity 2^n·dim ≤ 2^20.
RealVector qpe_circuit_distribution(const HermitianOperator& h, const Vector& initial_state,
                                    double t, int n_register,
                                    const NumericalPolicy& pol = default_policy());

// 0.9 π / ‖H‖₂: the full spectrum fits one aliasing window with margin.
double qpe_default_time(const HermitianOperator& h, const NumericalPolicy& pol = default_policy());

double qpe_energy_estimate(long j, int n_register, double t);

QpeResult run_generalized_qpe(const QpeConfig& cfg, const ModelSpec& model, int threads = 1,
                              const NumericalPolicy& pol = default_policy());

} // namespace dressim
