// dressing.hpp — classical dressing noise: per-family unitaries V_a, exact
// dressed Hamiltonians V_a H V_a†, their weak-noise first-order forms, and
// weighted channel ensembles with deterministic sampling.

#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "dressim/linalg.hpp"
#include "dressim/models.hpp"

namespace dressim {

// --------------------------- noise channels ----------------------------------

// Per-qubit z rotations: V = Π_i exp(-i a_i σ^z_i).
struct SpinZChannel {
    std::vector<double> angles;  // a_i
};

// Momentum shifts exp(-i a_j m_j x_j) followed by position shifts
// exp(-i (aprime_j/k_j) p_j), one pair per site.
struct OscillatorShiftChannel {
    std::vector<double> momentum_shifts;  // a_j
    std::vector<double> position_shifts;  // aprime_j
};

// Spin z rotation plus one coherent displacement per mode:
// V = exp(-i a0 σ^z) Π_α exp(a*_α b_α - a_α b†_α).
struct SpinBosonChannel {
    double spin_angle = 0.0;            // a0
    std::vector<Complex> displacements;  // a_α
};

// Down-spin mode rotation exp(angle · Σ_k g_k (c†_{q-k,↓} c_{q'-k,↓} - h.c.))
// with momentum arithmetic modulo L.
struct BcsPairChannel {
    int q = 1;
    int qprime = 0;
    std::vector<double> g;
    double angle = 1.5707963267948966;  // π/2
};

// V = exp(-i strength · P) for an arbitrary Hermitian generator P.
struct GenericChannel {
    Matrix generator;  // P, Hermitian, full Hilbert-space dimension
    double strength = 0.0;  // ε
};

using NoiseChannel =
    std::variant<SpinZChannel, OscillatorShiftChannel, SpinBosonChannel, BcsPairChannel,
                 GenericChannel>;

// Throws unless the channel variant and parameter shapes fit the model.
// Generic channels fit any model of matching dimension.
void validate_channel(const NoiseChannel& channel, const ModelSpec& model,
                      const NumericalPolicy& pol = default_policy());

// Multiplies every noise parameter that enters the dressing generator by s
// (spin angles, shift strengths, displacements and spin angle, the BCS angle,
// the generic strength).
NoiseChannel scale_channel(const NoiseChannel& channel, double s);

// --------------------------- ensembles ---------------------------------------

struct ChannelEnsemble {
    struct Entry {
        double weight;  // p_a
        NoiseChannel channel;
    };
    std::vector<Entry> entries;
};

// Weights nonnegative, summing to 1 within pol.weight_sum_tol; channels
// validated against the model.
void validate_ensemble(const ChannelEnsemble& ensemble, const ModelSpec& model,
                       const NumericalPolicy& pol = default_policy());

enum class NoiseDistribution { gaussian, uniform };

// i.i.d. sampler over the bound model's scalar noise parameters. BCS channels
// keep q/qprime/angle fixed and draw g_k; generic channels keep the supplied
// generator and draw the strength.
struct SamplerDescriptor {
    NoiseDistribution distribution = NoiseDistribution::gaussian;
    double width = 0.0;  // gaussian sigma, or uniform half-width
    int count = 1;
    bool generic = false;
    Matrix generic_generator;  // required when generic
    int bcs_q = 1;
    int bcs_qprime = 0;
    double bcs_angle = 1.5707963267948966;
};

using EnsembleDescriptor = std::variant<ChannelEnsemble, SamplerDescriptor>;

// Explicit lists pass through (after validation, seed unused); samplers draw
// `count` channels with equal weights, entry i seeded by sub_seed(master, i).
ChannelEnsemble sample_ensemble(const EnsembleDescriptor& descriptor, const ModelSpec& model,
                                std::uint64_t master_seed,
                                const NumericalPolicy& pol = default_policy());

// --------------------------- dressing ----------------------------------------

UnitaryOperator build_dressing_unitary(const NoiseChannel& channel, const ModelSpec& model,
                                       const NumericalPolicy& pol = default_policy());

UnitaryOperator build_bcs_dressing(const BcsPairChannel& channel, const BcsSpec& spec,
                                   const NumericalPolicy& pol = default_policy());

// Anti-Hermitian X with V = exp(X) + O(parameter²); the sum of the exponents
// of the channel's product-of-exponentials unitary.
Matrix first_order_generator(const NoiseChannel& channel, const ModelSpec& model,
                             const NumericalPolicy& pol = default_policy());

HermitianOperator dress_exact(const HermitianOperator& h, const UnitaryOperator& v,
                              const NumericalPolicy& pol = default_policy());

// H + sym([X, H]) with X the first-order generator; agrees with dress_exact
// to second order in the channel parameters.
HermitianOperator dress_first_order(const HermitianOperator& h, const NoiseChannel& channel,
                                    const ModelSpec& model,
                                    const NumericalPolicy& pol = default_policy());

enum class DressingMode { exact, first_order };

std::vector<std::pair<double, HermitianOperator>> dressed_hamiltonians(
    const HermitianOperator& h, const ChannelEnsemble& ensemble, const ModelSpec& model,
    DressingMode mode, const NumericalPolicy& pol = default_policy());

// Constant-g pair channel that relabels down-spin modes k -> k+shift on the
// L = 3 ring (the only L where a constant-g rotation lands exactly on a
// permutation); shift in {1, 2}.
BcsPairChannel mode_shift_channel(const BcsSpec& spec, int shift);

} // namespace dressim
