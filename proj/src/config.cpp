// config.cpp — JSON config parsing with keyed errors.

#include "dressim/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "dressim/errors.hpp"
#include "dressim/version.hpp"

namespace dressim {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& key, const std::string& message) {
    throw ConfigError(key, message);
}

const json& member(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(join(path, key), "missing required field");
    return *it;
}

const json* optional_member(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) fail(join(path, key), "unknown field");
    }
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
}

long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> as_double_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Complex as_complex(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return Complex(as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]"));
    fail(path, "expected a number or an [re, im] pair");
}

Vector as_complex_vector(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    Vector out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out(static_cast<Index>(i)) = as_complex(j[i], path + "[" + std::to_string(i) + "]");
    return out;
}

Matrix as_complex_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    Matrix out;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        const Vector row = as_complex_vector(j[r], row_path);
        if (r == 0) {
            out.resize(rows, row.size());
        } else if (row.size() != out.cols()) {
            fail(row_path, "rows must have equal length");
        }
        out.row(static_cast<Index>(r)) = row.transpose();
    }
    return out;
}

// ---------------------------- models -----------------------------------------

ModelSpec parse_model(const json& j, const std::string& path) {
    const std::string family = as_string(member(j, path, "family"), join(path, "family"));
    if (family == "spin") {
        check_keys(j, path, {"family", "n_qubits", "transverse_field", "cost"});
        SpinModelSpec spec;
        spec.n_qubits = static_cast<int>(as_integer(member(j, path, "n_qubits"),
                                                    join(path, "n_qubits")));
        if (spec.n_qubits < 1) fail(join(path, "n_qubits"), "must be at least 1");
        spec.transverse_field =
            as_double(member(j, path, "transverse_field"), join(path, "transverse_field"));
        const json& cost = member(j, path, "cost");
        const std::string cost_path = join(path, "cost");
        const std::string type = as_string(member(cost, cost_path, "type"),
                                           join(cost_path, "type"));
        if (type == "ising") {
            check_keys(cost, cost_path, {"type", "fields", "couplings"});
            IsingCost ising;
            ising.fields = as_double_list(member(cost, cost_path, "fields"),
                                          join(cost_path, "fields"));
            if (static_cast<int>(ising.fields.size()) != spec.n_qubits)
                fail(join(cost_path, "fields"), "needs one entry per qubit");
            if (const json* c = optional_member(cost, cost_path, "couplings")) {
                const std::string cpath = join(cost_path, "couplings");
                if (!c->is_array()) fail(cpath, "expected an array of [i, j, value] triples");
                for (std::size_t k = 0; k < c->size(); ++k) {
                    const std::string tpath = cpath + "[" + std::to_string(k) + "]";
                    const json& triple = (*c)[k];
                    if (!triple.is_array() || triple.size() != 3)
                        fail(tpath, "expected an [i, j, value] triple");
                    IsingCost::Coupling cc;
                    cc.i = static_cast<int>(as_integer(triple[0], tpath + "[0]"));
                    cc.j = static_cast<int>(as_integer(triple[1], tpath + "[1]"));
                    cc.value = as_double(triple[2], tpath + "[2]");
                    if (!(cc.i >= 0 && cc.i < cc.j && cc.j < spec.n_qubits))
                        fail(tpath, "indices must obey 0 <= i < j < n_qubits");
                    ising.couplings.push_back(cc);
                }
            }
            spec.cost = std::move(ising);
        } else if (type == "search") {
            check_keys(cost, cost_path, {"type", "target_index"});
            GroverCost grover;
            grover.index_state = as_integer(member(cost, cost_path, "target_index"),
                                            join(cost_path, "target_index"));
            if (grover.index_state < 0 || grover.index_state >= (1L << spec.n_qubits))
                fail(join(cost_path, "target_index"), "out of range for the qubit count");
            spec.cost = grover;
        } else {
            fail(join(cost_path, "type"), "expected \"ising\" or \"search\"");
        }
        return spec;
    }
    if (family == "oscillator") {
        check_keys(j, path, {"family", "mass", "stiffness", "couplings", "n_max"});
        OscillatorSpec spec;
        spec.mass = as_double_list(member(j, path, "mass"), join(path, "mass"));
        spec.stiffness = as_double_list(member(j, path, "stiffness"), join(path, "stiffness"));
        if (spec.mass.empty()) fail(join(path, "mass"), "needs at least one site");
        if (spec.mass.size() != spec.stiffness.size())
            fail(join(path, "stiffness"), "must match the mass list length");
        for (std::size_t i = 0; i < spec.mass.size(); ++i) {
            if (spec.mass[i] <= 0.0)
                fail(join(path, "mass") + "[" + std::to_string(i) + "]", "must be positive");
            if (spec.stiffness[i] <= 0.0)
                fail(join(path, "stiffness") + "[" + std::to_string(i) + "]", "must be positive");
        }
        spec.n_max = static_cast<int>(as_integer(member(j, path, "n_max"), join(path, "n_max")));
        if (spec.n_max < 2) fail(join(path, "n_max"), "must be at least 2");
        if (const json* c = optional_member(j, path, "couplings")) {
            const std::string cpath = join(path, "couplings");
            if (!c->is_array()) fail(cpath, "expected an array of [i, j, value] triples");
            for (std::size_t k = 0; k < c->size(); ++k) {
                const std::string tpath = cpath + "[" + std::to_string(k) + "]";
                const json& triple = (*c)[k];
                if (!triple.is_array() || triple.size() != 3)
                    fail(tpath, "expected an [i, j, value] triple");
                OscillatorSpec::Coupling cc;
                cc.i = static_cast<int>(as_integer(triple[0], tpath + "[0]"));
                cc.j = static_cast<int>(as_integer(triple[1], tpath + "[1]"));
                cc.value = as_double(triple[2], tpath + "[2]");
                if (!(cc.i >= 0 && cc.i < cc.j && cc.j < spec.n_sites()))
                    fail(tpath, "indices must obey 0 <= i < j < n_sites");
                if (cc.value < 0.0) fail(tpath + "[2]", "must be nonnegative");
                spec.couplings.push_back(cc);
            }
        }
        return spec;
    }
    if (family == "spin_boson") {
        check_keys(j, path, {"family", "transverse_field", "modes", "n_max"});
        SpinBosonSpec spec;
        spec.transverse_field =
            as_double(member(j, path, "transverse_field"), join(path, "transverse_field"));
        const json& modes = member(j, path, "modes");
        const std::string mpath = join(path, "modes");
        if (!modes.is_array() || modes.empty()) fail(mpath, "needs at least one mode");
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const std::string one = mpath + "[" + std::to_string(i) + "]";
            check_keys(modes[i], one, {"frequency", "coupling"});
            SpinBosonSpec::Mode mode;
            mode.frequency = as_double(member(modes[i], one, "frequency"),
                                       join(one, "frequency"));
            if (mode.frequency <= 0.0) fail(join(one, "frequency"), "must be positive");
            mode.coupling = as_double(member(modes[i], one, "coupling"), join(one, "coupling"));
            spec.modes.push_back(mode);
        }
        spec.n_max = static_cast<int>(as_integer(member(j, path, "n_max"), join(path, "n_max")));
        if (spec.n_max < 2) fail(join(path, "n_max"), "must be at least 2");
        return spec;
    }
    if (family == "bcs") {
        check_keys(j, path, {"family", "n_momenta", "energies", "interaction"});
        BcsSpec spec;
        spec.n_momenta =
            static_cast<int>(as_integer(member(j, path, "n_momenta"), join(path, "n_momenta")));
        if (spec.n_momenta < 1) fail(join(path, "n_momenta"), "must be at least 1");
        spec.energies = as_double_list(member(j, path, "energies"), join(path, "energies"));
        if (static_cast<int>(spec.energies.size()) != spec.n_momenta)
            fail(join(path, "energies"), "needs one entry per momentum");
        const json& inter = member(j, path, "interaction");
        const std::string ipath = join(path, "interaction");
        if (inter.is_number()) {
            spec.interaction = as_double(inter, ipath);
        } else {
            const Matrix m = as_complex_matrix(inter, ipath);
            if (m.rows() != spec.n_momenta || m.cols() != spec.n_momenta)
                fail(ipath, "matrix must be n_momenta x n_momenta");
            RealMatrix v(m.rows(), m.cols());
            for (Index r = 0; r < m.rows(); ++r)
                for (Index c = 0; c < m.cols(); ++c) {
                    if (m(r, c).imag() != 0.0) fail(ipath, "matrix must be real");
                    v(r, c) = m(r, c).real();
                }
            if ((v - v.transpose()).cwiseAbs().maxCoeff() != 0.0)
                fail(ipath, "matrix must be symmetric");
            spec.interaction = std::move(v);
        }
        return spec;
    }
    fail(join(path, "family"),
         "expected \"spin\", \"oscillator\", \"spin_boson\", or \"bcs\"");
}

// ---------------------------- channels ----------------------------------------

NoiseChannel parse_channel(const json& j, const std::string& path) {
    const std::string type = as_string(member(j, path, "type"), join(path, "type"));
    if (type == "spin_z") {
        check_keys(j, path, {"type", "weight", "angles"});
        SpinZChannel c;
        c.angles = as_double_list(member(j, path, "angles"), join(path, "angles"));
        return c;
    }
    if (type == "oscillator_shift") {
        check_keys(j, path, {"type", "weight", "momentum_shifts", "position_shifts"});
        OscillatorShiftChannel c;
        c.momentum_shifts = as_double_list(member(j, path, "momentum_shifts"),
                                           join(path, "momentum_shifts"));
        c.position_shifts = as_double_list(member(j, path, "position_shifts"),
                                           join(path, "position_shifts"));
        return c;
    }
    if (type == "spin_boson") {
        check_keys(j, path, {"type", "weight", "spin_angle", "displacements"});
        SpinBosonChannel c;
        c.spin_angle = as_double(member(j, path, "spin_angle"), join(path, "spin_angle"));
        const Vector d = as_complex_vector(member(j, path, "displacements"),
                                           join(path, "displacements"));
        c.displacements.assign(d.begin(), d.end());
        return c;
    }
    if (type == "bcs_pair") {
        check_keys(j, path, {"type", "weight", "q", "qprime", "g", "angle"});
        BcsPairChannel c;
        c.q = static_cast<int>(as_integer(member(j, path, "q"), join(path, "q")));
        if (const json* v = optional_member(j, path, "qprime"))
            c.qprime = static_cast<int>(as_integer(*v, join(path, "qprime")));
        c.g = as_double_list(member(j, path, "g"), join(path, "g"));
        if (const json* v = optional_member(j, path, "angle"))
            c.angle = as_double(*v, join(path, "angle"));
        return c;
    }
    if (type == "generic") {
        check_keys(j, path, {"type", "weight", "strength", "generator"});
        GenericChannel c;
        c.strength = as_double(member(j, path, "strength"), join(path, "strength"));
        c.generator = as_complex_matrix(member(j, path, "generator"), join(path, "generator"));
        return c;
    }
    fail(join(path, "type"),
         "expected \"spin_z\", \"oscillator_shift\", \"spin_boson\", \"bcs_pair\", or \"generic\"");
}

EnsembleDescriptor parse_ensemble(const json& j, const std::string& path, const ModelSpec& model,
                                  const NumericalPolicy& pol) {
    check_keys(j, path, {"channels", "sampler"});
    const json* channels = optional_member(j, path, "channels");
    const json* sampler = optional_member(j, path, "sampler");
    if (channels && sampler) fail(path, "give either channels or sampler, not both");
    if (channels) {
        const std::string cpath = join(path, "channels");
        if (!channels->is_array()) fail(cpath, "expected an array");
        if (channels->empty()) {
            ChannelEnsemble noiseless;
            noiseless.entries.push_back({1.0, zero_channel(model, pol)});
            return noiseless;
        }
        ChannelEnsemble ensemble;
        const double equal_share = 1.0 / static_cast<double>(channels->size());
        for (std::size_t i = 0; i < channels->size(); ++i) {
            const std::string one = cpath + "[" + std::to_string(i) + "]";
            ChannelEnsemble::Entry entry;
            // Omitted weights mean an equal split; mixing explicit and omitted
            // weights is caught by the sum check downstream.
            entry.weight = equal_share;
            if (const json* w = optional_member((*channels)[i], one, "weight"))
                entry.weight = as_double(*w, join(one, "weight"));
            entry.channel = parse_channel((*channels)[i], one);
            ensemble.entries.push_back(std::move(entry));
        }
        return ensemble;
    }
    if (!sampler) fail(path, "needs a channels list or a sampler");
    const std::string spath = join(path, "sampler");
    check_keys(*sampler, spath,
               {"distribution", "width", "count", "generic", "generator", "bcs_q", "bcs_qprime",
                "bcs_angle"});
    SamplerDescriptor d;
    if (const json* v = optional_member(*sampler, spath, "distribution")) {
        const std::string name = as_string(*v, join(spath, "distribution"));
        if (name == "gaussian") d.distribution = NoiseDistribution::gaussian;
        else if (name == "uniform") d.distribution = NoiseDistribution::uniform;
        else fail(join(spath, "distribution"), "expected \"gaussian\" or \"uniform\"");
    }
    d.width = as_double(member(*sampler, spath, "width"), join(spath, "width"));
    if (d.width < 0.0) fail(join(spath, "width"), "must be nonnegative");
    d.count = static_cast<int>(as_integer(member(*sampler, spath, "count"),
                                          join(spath, "count")));
    if (d.count < 1) fail(join(spath, "count"), "must be at least 1");
    if (const json* v = optional_member(*sampler, spath, "generic"))
        d.generic = as_bool(*v, join(spath, "generic"));
    if (const json* v = optional_member(*sampler, spath, "generator"))
        d.generic_generator = as_complex_matrix(*v, join(spath, "generator"));
    if (d.generic && d.generic_generator.size() == 0)
        fail(join(spath, "generator"), "required when generic sampling is enabled");
    if (const json* v = optional_member(*sampler, spath, "bcs_q"))
        d.bcs_q = static_cast<int>(as_integer(*v, join(spath, "bcs_q")));
    if (const json* v = optional_member(*sampler, spath, "bcs_qprime"))
        d.bcs_qprime = static_cast<int>(as_integer(*v, join(spath, "bcs_qprime")));
    if (const json* v = optional_member(*sampler, spath, "bcs_angle"))
        d.bcs_angle = as_double(*v, join(spath, "bcs_angle"));
    return d;
}

// ---------------------------- task blocks -------------------------------------

TimeGrid parse_grid(const json& j, const std::string& path) {
    check_keys(j, path, {"t_start", "dt", "n_samples"});
    TimeGrid grid;
    if (const json* v = optional_member(j, path, "t_start"))
        grid.t_start = as_double(*v, join(path, "t_start"));
    grid.dt = as_double(member(j, path, "dt"), join(path, "dt"));
    if (grid.dt <= 0.0) fail(join(path, "dt"), "must be positive");
    grid.n_samples = as_integer(member(j, path, "n_samples"), join(path, "n_samples"));
    if (grid.n_samples < 1) fail(join(path, "n_samples"), "must be at least 1");
    return grid;
}

InitialStateSpec parse_initial_state(const json& j, const std::string& path) {
    const std::string type = as_string(member(j, path, "type"), join(path, "type"));
    if (type == "uniform_superposition") {
        check_keys(j, path, {"type"});
        return UniformSuperposition{};
    }
    if (type == "basis") {
        check_keys(j, path, {"type", "index"});
        BasisState s;
        s.index = as_integer(member(j, path, "index"), join(path, "index"));
        return s;
    }
    if (type == "vector") {
        check_keys(j, path, {"type", "values"});
        StateVector s;
        s.values = as_complex_vector(member(j, path, "values"), join(path, "values"));
        return s;
    }
    fail(join(path, "type"), "expected \"uniform_superposition\", \"basis\", or \"vector\"");
}

ObservableSpec parse_observable(const json& j, const std::string& path) {
    const std::string type = as_string(member(j, path, "type"), join(path, "type"));
    if (type == "ladder") {
        check_keys(j, path, {"type", "qubit"});
        LadderObservable o;
        if (const json* v = optional_member(j, path, "qubit"))
            o.qubit = static_cast<int>(as_integer(*v, join(path, "qubit")));
        return o;
    }
    if (type == "matrix") {
        check_keys(j, path, {"type", "values"});
        return as_complex_matrix(member(j, path, "values"), join(path, "values"));
    }
    fail(join(path, "type"), "expected \"ladder\" or \"matrix\"");
}

FidTaskConfig parse_fid(const json& j, const std::string& path) {
    check_keys(j, path,
               {"v0", "observable", "grid", "window", "initial_state", "peak_threshold",
                "match_tol", "amplitude_floor"});
    FidTaskConfig cfg;
    if (const json* v = optional_member(j, path, "v0"))
        cfg.fid.v0 = as_double(*v, join(path, "v0"));
    if (const json* v = optional_member(j, path, "observable"))
        cfg.fid.observable = parse_observable(*v, join(path, "observable"));
    else
        cfg.fid.observable = LadderObservable{0};
    cfg.fid.grid = parse_grid(member(j, path, "grid"), join(path, "grid"));
    if (cfg.fid.grid.n_samples < 8)
        fail(join(path, "grid.n_samples"), "spectrum needs at least 8 samples");
    if (const json* v = optional_member(j, path, "window")) {
        const std::string name = as_string(*v, join(path, "window"));
        if (name == "none") cfg.fid.window = Window::none;
        else if (name == "hann") cfg.fid.window = Window::hann;
        else fail(join(path, "window"), "expected \"none\" or \"hann\"");
    }
    if (const json* v = optional_member(j, path, "initial_state"))
        cfg.initial = parse_initial_state(*v, join(path, "initial_state"));
    else
        cfg.initial = UniformSuperposition{};
    if (const json* v = optional_member(j, path, "peak_threshold")) {
        cfg.peak_threshold = as_double(*v, join(path, "peak_threshold"));
        if (cfg.peak_threshold <= 0.0 || cfg.peak_threshold >= 1.0)
            fail(join(path, "peak_threshold"), "must lie strictly between 0 and 1");
    }
    if (const json* v = optional_member(j, path, "match_tol"))
        cfg.match_tol = as_double(*v, join(path, "match_tol"));
    if (const json* v = optional_member(j, path, "amplitude_floor")) {
        cfg.amplitude_floor = as_double(*v, join(path, "amplitude_floor"));
        if (cfg.amplitude_floor <= 0.0 || cfg.amplitude_floor >= 1.0)
            fail(join(path, "amplitude_floor"), "must lie strictly between 0 and 1");
    }
    return cfg;
}

QpeInitial parse_qpe_initial(const json& j, const std::string& path, Index dim) {
    const std::string type = as_string(member(j, path, "type"), join(path, "type"));
    if (type == "uniform") {
        check_keys(j, path, {"type"});
        EigenCoefficients c;
        c.c = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
        return c;
    }
    if (type == "eigen_coefficients") {
        check_keys(j, path, {"type", "values"});
        EigenCoefficients c;
        c.c = as_complex_vector(member(j, path, "values"), join(path, "values"));
        if (c.c.size() != dim) fail(join(path, "values"), "needs one entry per eigenstate");
        return c;
    }
    if (type == "basis") {
        check_keys(j, path, {"type", "index"});
        BasisStateInitial s;
        s.index = as_integer(member(j, path, "index"), join(path, "index"));
        if (s.index < 0 || s.index >= dim) fail(join(path, "index"), "out of range");
        return s;
    }
    fail(join(path, "type"), "expected \"uniform\", \"eigen_coefficients\", or \"basis\"");
}

QpeTaskConfig parse_qpe(const json& j, const std::string& path, Index dim) {
    check_keys(j, path, {"n_register", "t_evolution", "initial", "mode", "convention"});
    QpeTaskConfig cfg;
    if (const json* v = optional_member(j, path, "n_register")) {
        cfg.n_register = static_cast<int>(as_integer(*v, join(path, "n_register")));
        if (cfg.n_register < 1 || cfg.n_register > 20)
            fail(join(path, "n_register"), "must lie in [1, 20]");
    }
    if (const json* v = optional_member(j, path, "t_evolution"))
        cfg.t_evolution = as_double(*v, join(path, "t_evolution"));
    if (const json* v = optional_member(j, path, "initial"))
        cfg.initial = parse_qpe_initial(*v, join(path, "initial"), dim);
    else {
        EigenCoefficients c;
        c.c = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
        cfg.initial = c;
    }
    if (const json* v = optional_member(j, path, "mode")) {
        const std::string name = as_string(*v, join(path, "mode"));
        if (name == "kernel") cfg.mode = QpeMode::kernel;
        else if (name == "circuit") cfg.mode = QpeMode::circuit;
        else fail(join(path, "mode"), "expected \"kernel\" or \"circuit\"");
    }
    if (cfg.mode == QpeMode::circuit && cfg.n_register > 12)
        fail(join(path, "n_register"), "circuit mode is capped at 12 register qubits");
    if (const json* v = optional_member(j, path, "convention")) {
        const std::string name = as_string(*v, join(path, "convention"));
        if (name == "fixed_state") cfg.convention = QpeInitialConvention::fixed_state;
        else if (name == "dressed_state") cfg.convention = QpeInitialConvention::dressed_state;
        else fail(join(path, "convention"), "expected \"fixed_state\" or \"dressed_state\"");
    }
    return cfg;
}

void parse_policy(const json& j, const std::string& path, NumericalPolicy& pol) {
    check_keys(j, path,
               {"hermiticity_tol", "unitarity_tol", "eigh_residual_tol",
                "spectral_invariance_tol", "density_hermiticity_tol", "trace_tol",
                "positivity_tol", "weight_sum_tol", "coefficient_norm_tol",
                "histogram_norm_tol", "degeneracy_tol", "max_hilbert_dim"});
    auto set = [&](const char* key, double& field) {
        if (const json* v = optional_member(j, path, key)) {
            field = as_double(*v, join(path, key));
            if (field <= 0.0) fail(join(path, key), "must be positive");
        }
    };
    set("hermiticity_tol", pol.hermiticity_tol);
    set("unitarity_tol", pol.unitarity_tol);
    set("eigh_residual_tol", pol.eigh_residual_tol);
    set("spectral_invariance_tol", pol.spectral_invariance_tol);
    set("density_hermiticity_tol", pol.density_hermiticity_tol);
    set("trace_tol", pol.trace_tol);
    set("positivity_tol", pol.positivity_tol);
    set("weight_sum_tol", pol.weight_sum_tol);
    set("coefficient_norm_tol", pol.coefficient_norm_tol);
    set("histogram_norm_tol", pol.histogram_norm_tol);
    set("degeneracy_tol", pol.degeneracy_tol);
    if (const json* v = optional_member(j, path, "max_hilbert_dim")) {
        const long dim = as_integer(*v, join(path, "max_hilbert_dim"));
        if (dim < 1) fail(join(path, "max_hilbert_dim"), "must be at least 1");
        pol.max_hilbert_dim = dim;
    }
}

} // namespace

// ---------------------------- entry points ------------------------------------

DensityMatrix initial_density(const InitialStateSpec& spec, Index dim,
                              const NumericalPolicy& pol) {
    if (std::holds_alternative<UniformSuperposition>(spec)) {
        Vector psi = Vector::Constant(dim, Complex(1.0, 0.0));
        return DensityMatrix::pure(psi, pol);
    }
    if (std::holds_alternative<BasisState>(spec)) {
        const long idx = std::get<BasisState>(spec).index;
        if (idx < 0 || idx >= dim)
            throw ConfigError("initial_state.index", "out of range for the model dimension");
        Vector psi = Vector::Zero(dim);
        psi(idx) = Complex(1.0, 0.0);
        return DensityMatrix::pure(psi, pol);
    }
    const Vector& v = std::get<StateVector>(spec).values;
    if (v.size() != dim)
        throw ConfigError("initial_state.values", "length does not match the model dimension");
    return DensityMatrix::pure(v, pol);
}

NoiseChannel zero_channel(const ModelSpec& model, const NumericalPolicy& pol) {
    if (std::holds_alternative<SpinModelSpec>(model)) {
        SpinZChannel c;
        c.angles.assign(std::get<SpinModelSpec>(model).n_qubits, 0.0);
        return c;
    }
    if (std::holds_alternative<OscillatorSpec>(model)) {
        OscillatorShiftChannel c;
        const int n = std::get<OscillatorSpec>(model).n_sites();
        c.momentum_shifts.assign(n, 0.0);
        c.position_shifts.assign(n, 0.0);
        return c;
    }
    if (std::holds_alternative<SpinBosonSpec>(model)) {
        SpinBosonChannel c;
        c.displacements.assign(std::get<SpinBosonSpec>(model).n_modes(), Complex(0.0, 0.0));
        return c;
    }
    const auto& bcs = std::get<BcsSpec>(model);
    if (bcs.n_momenta >= 2) {
        BcsPairChannel c;
        c.g.assign(bcs.n_momenta, 0.0);
        return c;
    }
    GenericChannel c;
    c.generator = Matrix::Zero(hilbert_dim(model, pol), hilbert_dim(model, pol));
    c.strength = 0.0;
    return c;
}

ExperimentConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
    check_keys(j, "",
               {"task", "model", "ensemble", "dressing_mode", "master_seed", "output_dir",
                "policy", "fid", "qpe"});

    ExperimentConfig cfg;
    if (const json* v = optional_member(j, "", "policy")) parse_policy(*v, "policy", cfg.policy);
    cfg.model = parse_model(member(j, "", "model"), "model");

    Index dim = 0;
    try {
        dim = hilbert_dim(cfg.model, cfg.policy);
    } catch (const ContractViolation& e) {
        throw ConfigError("model", e.what());
    }

    if (const json* v = optional_member(j, "", "task")) {
        const std::string name = as_string(*v, "task");
        if (name == "spectrum") cfg.task = Task::spectrum;
        else if (name == "fid") cfg.task = Task::fid;
        else if (name == "qpe") cfg.task = Task::qpe;
        else if (name == "validate") cfg.task = Task::validate;
        else fail("task", "expected \"spectrum\", \"fid\", \"qpe\", or \"validate\"");
    }
    if (const json* v = optional_member(j, "", "ensemble")) {
        cfg.ensemble = parse_ensemble(*v, "ensemble", cfg.model, cfg.policy);
    } else {
        ChannelEnsemble noiseless;
        noiseless.entries.push_back({1.0, zero_channel(cfg.model, cfg.policy)});
        cfg.ensemble = noiseless;
    }
    if (const json* v = optional_member(j, "", "dressing_mode")) {
        const std::string name = as_string(*v, "dressing_mode");
        if (name == "exact") cfg.dressing = DressingMode::exact;
        else if (name == "first_order") cfg.dressing = DressingMode::first_order;
        else fail("dressing_mode", "expected \"exact\" or \"first_order\"");
    }
    if (const json* v = optional_member(j, "", "master_seed")) {
        if (!v->is_number_integer() || v->get<long long>() < 0)
            fail("master_seed", "expected a nonnegative integer");
        cfg.master_seed = v->get<std::uint64_t>();
    }
    if (const json* v = optional_member(j, "", "output_dir"))
        cfg.output_dir = as_string(*v, "output_dir");
    if (const json* v = optional_member(j, "", "fid")) cfg.fid = parse_fid(*v, "fid");
    if (const json* v = optional_member(j, "", "qpe")) cfg.qpe = parse_qpe(*v, "qpe", dim);

    if (cfg.task == Task::fid && !cfg.fid)
        fail("fid", "required for the fid task");
    if (cfg.task == Task::qpe && !cfg.qpe)
        fail("qpe", "required for the qpe task");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string config_hash(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
    }
    const std::string canonical = j.dump();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

const char* task_name(Task task) {
    switch (task) {
        case Task::spectrum: return "spectrum";
        case Task::fid: return "fid";
        case Task::qpe: return "qpe";
        case Task::validate: return "validate";
    }
    return "unknown";
}

std::string manifest_to_json(const RunManifest& manifest) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = manifest.seed;
    j["version"] = manifest.version;
    j["task"] = manifest.task;
    json timings = json::object();
    for (const auto& [phase, seconds] : manifest.timings_seconds) timings[phase] = seconds;
    j["timings_seconds"] = timings;
    json pol;
    pol["hermiticity_tol"] = manifest.policy.hermiticity_tol;
    pol["unitarity_tol"] = manifest.policy.unitarity_tol;
    pol["eigh_residual_tol"] = manifest.policy.eigh_residual_tol;
    pol["spectral_invariance_tol"] = manifest.policy.spectral_invariance_tol;
    pol["density_hermiticity_tol"] = manifest.policy.density_hermiticity_tol;
    pol["trace_tol"] = manifest.policy.trace_tol;
    pol["positivity_tol"] = manifest.policy.positivity_tol;
    pol["weight_sum_tol"] = manifest.policy.weight_sum_tol;
    pol["coefficient_norm_tol"] = manifest.policy.coefficient_norm_tol;
    pol["histogram_norm_tol"] = manifest.policy.histogram_norm_tol;
    pol["degeneracy_tol"] = manifest.policy.degeneracy_tol;
    pol["max_hilbert_dim"] = manifest.policy.max_hilbert_dim;
    j["policy"] = pol;
    return j.dump(2) + "\n";
}

} // namespace dressim
