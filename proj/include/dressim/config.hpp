// config.hpp — experiment configuration: JSON ingestion with keyed error
// reporting, plus the run manifest written next to every output set.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dressim/dressing.hpp"
#include "dressim/evolution.hpp"
#include "dressim/fid.hpp"
#include "dressim/models.hpp"
#include "dressim/qpe.hpp"

namespace dressim {

enum class Task { spectrum, fid, qpe, validate };

// ---------------------------- initial states ---------------------------------

struct UniformSuperposition {};

struct BasisState {
    long index = 0;
};

struct StateVector {
    Vector values;
};

using InitialStateSpec = std::variant<UniformSuperposition, BasisState, StateVector>;

DensityMatrix initial_density(const InitialStateSpec& spec, Index dim,
                              const NumericalPolicy& pol = default_policy());

// ---------------------------- task blocks ------------------------------------

struct FidTaskConfig {
    FidConfig fid;
    InitialStateSpec initial;
    double peak_threshold = 0.05;
    double match_tol = 0.0;       // <= 0 selects one DFT bin
    double amplitude_floor = 0.05;
};

struct QpeTaskConfig {
    int n_register = 6;
    double t_evolution = 0.0;  // <= 0 selects the default time
    QpeInitial initial;
    QpeMode mode = QpeMode::kernel;
    QpeInitialConvention convention = QpeInitialConvention::fixed_state;
};

struct ExperimentConfig {
    std::optional<Task> task;
    ModelSpec model;
    EnsembleDescriptor ensemble;
    DressingMode dressing = DressingMode::exact;
    std::uint64_t master_seed = 0;
    std::string output_dir = "out";
    NumericalPolicy policy;
    std::optional<FidTaskConfig> fid;
    std::optional<QpeTaskConfig> qpe;
};

// All-zero-parameter channel of the model's native variant (V = identity).
NoiseChannel zero_channel(const ModelSpec& model, const NumericalPolicy& pol = default_policy());

ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical-serialization FNV-1a hash; identical for semantically identical
// configs regardless of file formatting.
std::string config_hash(const std::string& json_text);

// ---------------------------- manifest ---------------------------------------

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::string task;
    std::vector<std::pair<std::string, double>> timings_seconds;
    NumericalPolicy policy;
};

std::string manifest_to_json(const RunManifest& manifest);

const char* task_name(Task task);

} // namespace dressim
