#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psfa {

/// Additive fault injected into a test stream from a 1-based onset sample.
struct FaultSpec {
    enum class Kind { AdditiveRandom, Step, Drift };
    int variable_index = 0;
    int onset = 0;  // 1-based sample index of the first faulty sample
    double amplitude = 0.0;
    Kind kind = Kind::AdditiveRandom;
};

std::string to_string(FaultSpec::Kind kind);
FaultSpec::Kind fault_kind_from_string(const std::string& name);

/// One operating mode of the synthetic multimode process: a latent AR(1)
/// chain emitted around fixed setpoints with diagonal observation noise.
struct ModeSpec {
    std::string name;
    Eigen::VectorXd setpoints;       // m
    Eigen::MatrixXd true_emission;   // m x p
    Eigen::VectorXd true_lambda;     // p, in [0,1)
    Eigen::VectorXd true_obs_noise;  // m, positive variances
    int n_train = 0;
    int n_test = 0;
    std::optional<FaultSpec> fault;
};

struct ScenarioSpec {
    int version = 1;
    std::string name;
    std::vector<std::string> variables;
    std::vector<ModeSpec> modes;
};

struct ModeData {
    Eigen::MatrixXd train;  // m x n_train
    Eigen::MatrixXd test;   // m x n_test, normal operation (no fault)
};

void validate_mode_spec(const ModeSpec& spec);
void validate_scenario(const ScenarioSpec& scenario);

/// Simulates one mode: a stationary-start latent chain for the training
/// segment and an independent one for the test segment. Deterministic in the
/// seed.
ModeData generate_mode(const ModeSpec& spec, std::uint64_t seed);

/// Returns a copy of the test stream with the fault applied from its onset
/// onward. additive-random adds amplitude-scaled half-normal draws, step a
/// constant offset, drift a ramp amplitude*(t-onset)/n_test.
Eigen::MatrixXd inject_fault(const Eigen::MatrixXd& test, const FaultSpec& fault, std::uint64_t seed);

/// Stable per-mode seed derivation so CLI output and the evaluation harness
/// agree on the generated data.
std::uint64_t mode_seed(std::uint64_t scenario_seed, int mode_index);
std::uint64_t fault_seed(std::uint64_t scenario_seed, int mode_index);

ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioSpec& scenario);

}  // namespace psfa
