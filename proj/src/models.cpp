// models.cpp — Hamiltonian family builders and basis helpers.

#include "dressim/models.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "dressim/errors.hpp"

namespace dressim {

namespace {

using namespace std::complex_literals;

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

Index checked_power(Index base, int exponent, const NumericalPolicy& pol,
                    const std::string& label) {
    Index dim = 1;
    for (int i = 0; i < exponent; ++i) {
        if (dim > pol.max_hilbert_dim / base) {
            std::ostringstream os;
            os << label << " dimension " << base << "^" << exponent << " exceeds the cap of "
               << pol.max_hilbert_dim;
            throw CapacityError(os.str());
        }
        dim *= base;
    }
    if (dim > pol.max_hilbert_dim) {
        std::ostringstream os;
        os << label << " dimension " << dim << " exceeds the cap of " << pol.max_hilbert_dim;
        throw CapacityError(os.str());
    }
    return dim;
}

// Tensor chain over n_sites uniform factors with the given site-local
// insertions; unlisted sites carry the identity. Site 0 is most significant.
Matrix embed_factors(const std::vector<std::pair<int, const Matrix*>>& factors, int n_sites,
                     Index local_dim, const NumericalPolicy& pol) {
    Matrix result = Matrix::Identity(1, 1);
    const Matrix eye = identity(local_dim);
    for (int s = 0; s < n_sites; ++s) {
        const Matrix* block = &eye;
        for (const auto& [site, mat] : factors) {
            if (site == s) {
                block = mat;
                break;
            }
        }
        result = kron(result, *block, pol);
    }
    return result;
}

} // namespace

// --------------------------- spec queries ------------------------------------

double BcsSpec::interaction_element(int k, int kprime) const {
    if (k < 0 || k >= n_momenta || kprime < 0 || kprime >= n_momenta)
        throw ContractViolation("BCS interaction index out of range");
    if (std::holds_alternative<double>(interaction)) return std::get<double>(interaction);
    return std::get<RealMatrix>(interaction)(k, kprime);
}

Index hilbert_dim(const ModelSpec& spec, const NumericalPolicy& pol) {
    return std::visit(
        [&pol](const auto& s) -> Index {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SpinModelSpec>) {
                require(s.n_qubits >= 1, "spin model needs at least one qubit");
                return checked_power(2, s.n_qubits, pol, "spin");
            } else if constexpr (std::is_same_v<T, OscillatorSpec>) {
                require(s.n_sites() >= 1, "oscillator model needs at least one site");
                require(s.n_max >= 2, "oscillator truncation needs at least two levels");
                return checked_power(s.n_max, s.n_sites(), pol, "oscillator");
            } else if constexpr (std::is_same_v<T, SpinBosonSpec>) {
                require(s.n_modes() >= 1, "spin-boson model needs at least one mode");
                require(s.n_max >= 2, "spin-boson truncation needs at least two levels");
                return checked_power(2, 1, pol, "spin-boson") *
                       checked_power(s.n_max, s.n_modes(), pol, "spin-boson");
            } else {
                require(s.n_momenta >= 1, "BCS model needs at least one momentum");
                return checked_power(2, 2 * s.n_momenta, pol, "BCS");
            }
        },
        spec);
}

std::string family_name(const ModelSpec& spec) {
    if (std::holds_alternative<SpinModelSpec>(spec)) return "spin";
    if (std::holds_alternative<OscillatorSpec>(spec)) return "oscillator";
    if (std::holds_alternative<SpinBosonSpec>(spec)) return "spin_boson";
    return "bcs";
}

// --------------------------- embeddings --------------------------------------

Matrix embed_site_operator(const Matrix& local, int site, int n_sites, Index local_dim,
                           const NumericalPolicy& pol) {
    require(local.rows() == local_dim && local.cols() == local_dim,
            "embedded operator does not match the site dimension");
    require(site >= 0 && site < n_sites, "embedding site out of range");
    return embed_factors({{site, &local}}, n_sites, local_dim, pol);
}

Matrix boson_lowering(Index n_levels) {
    require(n_levels >= 2, "boson ladder needs at least two levels");
    Matrix b = Matrix::Zero(n_levels, n_levels);
    for (Index n = 1; n < n_levels; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return b;
}

// --------------------------- spin family -------------------------------------

HermitianOperator build_spin_hamiltonian(const SpinModelSpec& spec, const NumericalPolicy& pol) {
    const int n = spec.n_qubits;
    const Index dim = hilbert_dim(ModelSpec{spec}, pol);
    require(spec.transverse_field == spec.transverse_field, "transverse field must be finite");

    Matrix h = Matrix::Zero(dim, dim);
    const Matrix sx = pauli_x();
    const Matrix sz = pauli_z();
    for (int i = 0; i < n; ++i)
        h += spec.transverse_field * embed_site_operator(sx, i, n, 2, pol);

    if (std::holds_alternative<IsingCost>(spec.cost)) {
        const auto& cost = std::get<IsingCost>(spec.cost);
        require(static_cast<int>(cost.fields.size()) == n,
                "Ising field list does not match the qubit count");
        for (int i = 0; i < n; ++i)
            h += cost.fields[i] * embed_site_operator(sz, i, n, 2, pol);
        for (const auto& c : cost.couplings) {
            require(c.i >= 0 && c.i < c.j && c.j < n, "Ising coupling indices must obey 0 <= i < j < n");
            h += c.value * embed_factors({{c.i, &sz}, {c.j, &sz}}, n, 2, pol);
        }
    } else {
        const auto& cost = std::get<GroverCost>(spec.cost);
        require(cost.index_state >= 0 && cost.index_state < dim,
                "search target index out of range");
        h += identity(dim);
        h(cost.index_state, cost.index_state) -= 1.0;
    }
    return HermitianOperator::from(std::move(h), pol);
}

// --------------------------- oscillator family -------------------------------

namespace {

// Site-local ladder frequency sqrt(k_i/m_i) sets the x/p scale.
double site_frequency(const OscillatorSpec& spec, int site) {
    require(site >= 0 && site < spec.n_sites(), "oscillator site out of range");
    const double m = spec.mass[site];
    const double k = spec.stiffness[site];
    require(m > 0.0, "oscillator mass must be positive");
    require(k > 0.0, "oscillator on-site stiffness must be positive");
    return std::sqrt(k / m);
}

Matrix local_position(const OscillatorSpec& spec, int site) {
    const double m = spec.mass[site];
    const double w = site_frequency(spec, site);
    const Matrix b = boson_lowering(spec.n_max);
    return (b + Matrix(b.adjoint())) / std::sqrt(2.0 * m * w);
}

Matrix local_momentum(const OscillatorSpec& spec, int site) {
    const double m = spec.mass[site];
    const double w = site_frequency(spec, site);
    const Matrix b = boson_lowering(spec.n_max);
    return 1.0i * std::sqrt(m * w / 2.0) * (Matrix(b.adjoint()) - b);
}

void check_oscillator(const OscillatorSpec& spec) {
    require(spec.mass.size() == spec.stiffness.size(),
            "oscillator mass and stiffness lists must have equal length");
    for (const auto& c : spec.couplings) {
        require(c.i >= 0 && c.i < c.j && c.j < spec.n_sites(),
                "oscillator coupling indices must obey 0 <= i < j < n");
        require(c.value >= 0.0, "oscillator coupling stiffness must be nonnegative");
    }
}

} // namespace

Matrix oscillator_position(const OscillatorSpec& spec, int site, const NumericalPolicy& pol) {
    check_oscillator(spec);
    const Matrix x = local_position(spec, site);
    return embed_site_operator(x, site, spec.n_sites(), spec.n_max, pol);
}

Matrix oscillator_momentum(const OscillatorSpec& spec, int site, const NumericalPolicy& pol) {
    check_oscillator(spec);
    const Matrix p = local_momentum(spec, site);
    return embed_site_operator(p, site, spec.n_sites(), spec.n_max, pol);
}

RealMatrix oscillator_stiffness_matrix(const OscillatorSpec& spec) {
    check_oscillator(spec);
    const int n = spec.n_sites();
    RealMatrix k = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) k(i, i) = spec.stiffness[i];
    for (const auto& c : spec.couplings) {
        k(c.i, c.i) += c.value;
        k(c.j, c.j) += c.value;
        k(c.i, c.j) -= c.value;
        k(c.j, c.i) -= c.value;
    }
    return k;
}

HermitianOperator build_oscillator_hamiltonian(const OscillatorSpec& spec,
                                               const NumericalPolicy& pol) {
    check_oscillator(spec);
    const int n = spec.n_sites();
    const Index dim = hilbert_dim(ModelSpec{spec}, pol);

    // (k_ij/2)(x_i - x_j)^2 folds into per-site x^2 weights plus a cross term,
    // so every summand is a one- or two-site tensor factor.
    std::vector<double> xsq_weight(n);
    for (int i = 0; i < n; ++i) xsq_weight[i] = 0.5 * spec.stiffness[i];
    for (const auto& c : spec.couplings) {
        xsq_weight[c.i] += 0.5 * c.value;
        xsq_weight[c.j] += 0.5 * c.value;
    }

    Matrix h = Matrix::Zero(dim, dim);
    std::vector<Matrix> xloc(n);
    for (int i = 0; i < n; ++i) {
        xloc[i] = local_position(spec, i);
        const Matrix ploc = local_momentum(spec, i);
        const Matrix hloc = Matrix(ploc * ploc) / (2.0 * spec.mass[i]) +
                            xsq_weight[i] * Matrix(xloc[i] * xloc[i]);
        h += embed_site_operator(hloc, i, n, spec.n_max, pol);
    }
    for (const auto& c : spec.couplings)
        h -= c.value * embed_factors({{c.i, &xloc[c.i]}, {c.j, &xloc[c.j]}}, n, spec.n_max, pol);
    return HermitianOperator::from(std::move(h), pol);
}

// --------------------------- spin-boson family -------------------------------

namespace {

void check_spinboson(const SpinBosonSpec& spec) {
    for (const auto& mode : spec.modes)
        require(mode.frequency > 0.0, "spin-boson mode frequency must be positive");
}

} // namespace

Matrix spinboson_spin_operator(const SpinBosonSpec& spec, const Matrix& pauli,
                               const NumericalPolicy& pol) {
    check_spinboson(spec);
    const Index mode_dim = checked_power(spec.n_max, spec.n_modes(), pol, "spin-boson");
    require(pauli.rows() == 2 && pauli.cols() == 2, "spin factor must be 2x2");
    return kron(pauli, identity(mode_dim), pol);
}

Matrix spinboson_mode_lowering(const SpinBosonSpec& spec, int mode, const NumericalPolicy& pol) {
    check_spinboson(spec);
    require(mode >= 0 && mode < spec.n_modes(), "spin-boson mode index out of range");
    const Matrix b = boson_lowering(spec.n_max);
    return kron(identity(2),
                embed_site_operator(b, mode, spec.n_modes(), spec.n_max, pol), pol);
}

HermitianOperator build_spinboson_hamiltonian(const SpinBosonSpec& spec,
                                              const NumericalPolicy& pol) {
    check_spinboson(spec);
    const Index dim = hilbert_dim(ModelSpec{spec}, pol);
    Matrix h = Matrix::Zero(dim, dim);
    h += spec.transverse_field * spinboson_spin_operator(spec, pauli_x(), pol);
    const Matrix sz_full = spinboson_spin_operator(spec, pauli_z(), pol);
    for (int a = 0; a < spec.n_modes(); ++a) {
        const Matrix b = spinboson_mode_lowering(spec, a, pol);
        const Matrix bdag = adjoint(b);
        h += spec.modes[a].coupling * Matrix(sz_full * (b + bdag));
        h += spec.modes[a].frequency * Matrix(bdag * b);
    }
    return HermitianOperator::from(std::move(h), pol);
}

// --------------------------- fermions ----------------------------------------

FermionAlgebra::FermionAlgebra(int n_modes, const NumericalPolicy& pol) : n_modes_(n_modes) {
    require(n_modes >= 1, "fermion algebra needs at least one mode");
    dim_ = checked_power(2, n_modes, pol, "fermion");

    // Jordan-Wigner: c_i = Z^(i) ⊗ c ⊗ I^(n-i-1) with c|1> = |0> in the
    // (|0>, |1>) site basis and mode 0 most significant.
    Matrix c_loc = Matrix::Zero(2, 2);
    c_loc(0, 1) = 1.0;
    const Matrix z_loc = pauli_z();

    create_.resize(n_modes);
    annihilate_.resize(n_modes);
    number_.resize(n_modes);
    for (int i = 0; i < n_modes; ++i) {
        std::vector<std::pair<int, const Matrix*>> factors;
        for (int j = 0; j < i; ++j) factors.emplace_back(j, &z_loc);
        factors.emplace_back(i, &c_loc);
        annihilate_[i] = embed_factors(factors, n_modes, 2, pol);
        create_[i] = adjoint(annihilate_[i]);
        number_[i] = create_[i] * annihilate_[i];
    }

    if (n_modes <= 6) {
        // Anticommutators are cheap at these sizes; catching a bad string here
        // protects every downstream BCS construction.
        const Matrix eye = identity(dim_);
        for (int i = 0; i < n_modes; ++i) {
            for (int j = 0; j < n_modes; ++j) {
                const Matrix acr = annihilate_[i] * create_[j] + create_[j] * annihilate_[i];
                const Matrix aa = annihilate_[i] * annihilate_[j] + annihilate_[j] * annihilate_[i];
                const Matrix expected = (i == j) ? eye : Matrix(Matrix::Zero(dim_, dim_));
                if (max_abs(Matrix(acr - expected)) > pol.hermiticity_tol ||
                    max_abs(aa) > pol.hermiticity_tol)
                    throw ContractViolation("fermion operators violate the anticommutation relations");
            }
        }
    }
}

const Matrix& FermionAlgebra::op(int mode, FermionKind kind) const {
    if (mode < 0 || mode >= n_modes_) throw ContractViolation("fermion mode index out of range");
    switch (kind) {
        case FermionKind::create: return create_[mode];
        case FermionKind::annihilate: return annihilate_[mode];
        case FermionKind::number: return number_[mode];
    }
    throw ContractViolation("unknown fermion operator kind");
}

Matrix fermion_operator(const FermionAlgebra& alg, int mode, FermionKind kind) {
    return alg.op(mode, kind);
}

// --------------------------- BCS family --------------------------------------

int bcs_negate_mode(int k, int n_momenta) {
    require(n_momenta >= 1 && k >= 0 && k < n_momenta, "momentum index out of range");
    return (n_momenta - k) % n_momenta;
}

int bcs_jw_index(const BcsSpec& spec, int k, bool spin_down) {
    require(k >= 0 && k < spec.n_momenta, "momentum index out of range");
    return spin_down ? spec.n_momenta + k : k;
}

Matrix bcs_pair_annihilator(const BcsSpec& spec, const FermionAlgebra& alg, int k, int q) {
    require(alg.n_modes() == spec.n_fermion_modes(),
            "fermion algebra does not match the BCS mode count");
    require(q >= 0 && q < spec.n_momenta, "pair momentum out of range");
    const int partner = ((q - k) % spec.n_momenta + spec.n_momenta) % spec.n_momenta;
    const Matrix& up = alg.op(bcs_jw_index(spec, k, false), FermionKind::annihilate);
    const Matrix& down = alg.op(bcs_jw_index(spec, partner, true), FermionKind::annihilate);
    return up * down;
}

namespace {

void check_bcs(const BcsSpec& spec) {
    require(static_cast<int>(spec.energies.size()) == spec.n_momenta,
            "BCS energy list does not match the momentum count");
    if (std::holds_alternative<RealMatrix>(spec.interaction)) {
        const auto& v = std::get<RealMatrix>(spec.interaction);
        require(v.rows() == spec.n_momenta && v.cols() == spec.n_momenta,
                "BCS interaction matrix does not match the momentum count");
        require((v - v.transpose()).cwiseAbs().maxCoeff() == 0.0,
                "BCS interaction matrix must be symmetric");
    }
}

} // namespace

HermitianOperator build_bcs_hamiltonian(const BcsSpec& spec, const NumericalPolicy& pol) {
    check_bcs(spec);
    const Index dim = hilbert_dim(ModelSpec{spec}, pol);
    const FermionAlgebra alg(spec.n_fermion_modes(), pol);

    Matrix h = Matrix::Zero(dim, dim);
    for (int k = 0; k < spec.n_momenta; ++k) {
        h += spec.energies[k] * alg.op(bcs_jw_index(spec, k, false), FermionKind::number);
        h += spec.energies[k] * alg.op(bcs_jw_index(spec, k, true), FermionKind::number);
    }
    std::vector<Matrix> eta(spec.n_momenta);
    for (int k = 0; k < spec.n_momenta; ++k) eta[k] = bcs_pair_annihilator(spec, alg, k, 0);
    for (int k = 0; k < spec.n_momenta; ++k)
        for (int kp = 0; kp < spec.n_momenta; ++kp)
            h += spec.interaction_element(k, kp) * Matrix(adjoint(eta[kp]) * eta[k]);
    return HermitianOperator::from(std::move(h), pol);
}

HermitianOperator build_hamiltonian(const ModelSpec& spec, const NumericalPolicy& pol) {
    return std::visit(
        [&pol](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SpinModelSpec>) return build_spin_hamiltonian(s, pol);
            else if constexpr (std::is_same_v<T, OscillatorSpec>)
                return build_oscillator_hamiltonian(s, pol);
            else if constexpr (std::is_same_v<T, SpinBosonSpec>)
                return build_spinboson_hamiltonian(s, pol);
            else return build_bcs_hamiltonian(s, pol);
        },
        spec);
}

} // namespace dressim
