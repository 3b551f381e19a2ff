#include "psfa/simulator.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "json_util.hpp"
#include "psfa/errors.hpp"

namespace psfa {

namespace {

using nlohmann::json;
using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::vector_from_json;
using detail::vector_to_json;

// splitmix64, used to decorrelate per-mode seeds from one scenario seed.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::MatrixXd simulate_segment(const ModeSpec& spec, int n, std::mt19937_64& engine) {
    const auto m = spec.setpoints.size();
    const auto p = spec.true_lambda.size();
    std::normal_distribution<double> unit;

    const Eigen::ArrayXd lambda = spec.true_lambda.array();
    const Eigen::ArrayXd state_noise_std = (1.0 - lambda.square()).sqrt();
    const Eigen::ArrayXd obs_noise_std = spec.true_obs_noise.array().sqrt();

    Eigen::MatrixXd data(m, n);
    Eigen::VectorXd latent(p);
    for (Eigen::Index i = 0; i < p; ++i) latent(i) = unit(engine);  // stationary N(0, I) start
    for (int t = 0; t < n; ++t) {
        if (t > 0)
            for (Eigen::Index i = 0; i < p; ++i)
                latent(i) = lambda(i) * latent(i) + state_noise_std(i) * unit(engine);
        Eigen::VectorXd x = spec.setpoints + spec.true_emission * latent;
        for (Eigen::Index i = 0; i < m; ++i) x(i) += obs_noise_std(i) * unit(engine);
        data.col(t) = x;
    }
    return data;
}

}  // namespace

std::string to_string(FaultSpec::Kind kind) {
    switch (kind) {
        case FaultSpec::Kind::AdditiveRandom: return "additive-random";
        case FaultSpec::Kind::Step: return "step";
        case FaultSpec::Kind::Drift: return "drift";
    }
    return "additive-random";
}

FaultSpec::Kind fault_kind_from_string(const std::string& name) {
    if (name == "additive-random") return FaultSpec::Kind::AdditiveRandom;
    if (name == "step") return FaultSpec::Kind::Step;
    if (name == "drift") return FaultSpec::Kind::Drift;
    throw ValidationError("unknown fault kind '" + name + "'");
}

void validate_mode_spec(const ModeSpec& spec) {
    const auto m = spec.setpoints.size();
    const auto p = spec.true_lambda.size();
    if (m < 1 || p < 1) throw ValidationError("mode '" + spec.name + "' has empty dimensions");
    if (spec.true_emission.rows() != m || spec.true_emission.cols() != p)
        throw ValidationError("mode '" + spec.name + "': emission must be m x p");
    if (spec.true_obs_noise.size() != m)
        throw ValidationError("mode '" + spec.name + "': obs_noise length must equal m");
    if ((spec.true_obs_noise.array() <= 0.0).any())
        throw ValidationError("mode '" + spec.name + "': obs_noise must be positive");
    for (Eigen::Index i = 0; i < p; ++i)
        if (!(spec.true_lambda(i) >= 0.0 && spec.true_lambda(i) < 1.0))
            throw ValidationError("mode '" + spec.name + "': lambda must lie in [0,1)");
    if (spec.n_train < 2 || spec.n_test < 2)
        throw ValidationError("mode '" + spec.name + "': sample counts must be at least 2");
    if (spec.fault) {
        const FaultSpec& fault = *spec.fault;
        if (fault.variable_index < 0 || fault.variable_index >= m)
            throw ValidationError("mode '" + spec.name + "': fault variable out of range");
        if (fault.onset < 2 || fault.onset >= spec.n_test)
            throw ValidationError("mode '" + spec.name + "': fault onset must lie in [2, n_test)");
        if (fault.amplitude < 0.0)
            throw ValidationError("mode '" + spec.name + "': fault amplitude must be nonnegative");
    }
}

void validate_scenario(const ScenarioSpec& scenario) {
    if (scenario.modes.empty()) throw ValidationError("scenario has no modes");
    const auto m = scenario.modes.front().setpoints.size();
    for (const ModeSpec& mode : scenario.modes) {
        validate_mode_spec(mode);
        if (mode.setpoints.size() != m)
            throw ValidationError("all modes must share the observed dimension");
    }
    if (!scenario.variables.empty() && static_cast<Eigen::Index>(scenario.variables.size()) != m)
        throw ValidationError("variable name count must equal the observed dimension");
}

ModeData generate_mode(const ModeSpec& spec, std::uint64_t seed) {
    validate_mode_spec(spec);
    std::mt19937_64 engine(seed);
    ModeData data;
    data.train = simulate_segment(spec, spec.n_train, engine);
    data.test = simulate_segment(spec, spec.n_test, engine);
    return data;
}

Eigen::MatrixXd inject_fault(const Eigen::MatrixXd& test, const FaultSpec& fault, std::uint64_t seed) {
    const auto n = test.cols();
    if (fault.variable_index < 0 || fault.variable_index >= test.rows())
        throw ValidationError("fault variable out of range");
    if (fault.onset < 1 || fault.onset >= n) throw ValidationError("fault onset out of range");

    Eigen::MatrixXd faulty = test;
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> unit;
    for (Eigen::Index t = fault.onset - 1; t < n; ++t) {  // onset is 1-based
        double offset = 0.0;
        switch (fault.kind) {
            case FaultSpec::Kind::AdditiveRandom:
                offset = fault.amplitude * std::abs(unit(engine));
                break;
            case FaultSpec::Kind::Step:
                offset = fault.amplitude;
                break;
            case FaultSpec::Kind::Drift:
                offset = fault.amplitude * static_cast<double>(t + 1 - fault.onset) /
                         static_cast<double>(n);
                break;
        }
        faulty(fault.variable_index, t) += offset;
    }
    return faulty;
}

std::uint64_t mode_seed(std::uint64_t scenario_seed, int mode_index) {
    return mix(scenario_seed + 2ULL * static_cast<std::uint64_t>(mode_index));
}

std::uint64_t fault_seed(std::uint64_t scenario_seed, int mode_index) {
    return mix(scenario_seed + 2ULL * static_cast<std::uint64_t>(mode_index) + 1ULL);
}

ScenarioSpec parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& error) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + error.what());
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer())
        throw ValidationError("scenario must carry an integer 'version' field");
    ScenarioSpec scenario;
    scenario.version = doc["version"].get<int>();
    if (scenario.version != 1)
        throw ValidationError("unsupported scenario version " + std::to_string(scenario.version));
    scenario.name = doc.value("name", std::string{});
    if (doc.contains("variables"))
        for (const auto& name : doc["variables"]) scenario.variables.push_back(name.get<std::string>());
    if (!doc.contains("modes") || !doc["modes"].is_array())
        throw ValidationError("scenario must carry a 'modes' array");

    for (const auto& entry : doc["modes"]) {
        ModeSpec mode;
        mode.name = entry.value("name", "mode" + std::to_string(scenario.modes.size() + 1));
        mode.setpoints = vector_from_json(entry.at("setpoints"), "setpoints");
        mode.true_emission = matrix_from_json(entry.at("emission"), "emission");
        mode.true_lambda = vector_from_json(entry.at("lambda"), "lambda");
        mode.true_obs_noise = vector_from_json(entry.at("obs_noise"), "obs_noise");
        mode.n_train = entry.at("n_train").get<int>();
        mode.n_test = entry.at("n_test").get<int>();
        if (entry.contains("fault") && !entry["fault"].is_null()) {
            FaultSpec fault;
            fault.variable_index = entry["fault"].at("variable").get<int>();
            fault.onset = entry["fault"].at("onset").get<int>();
            fault.amplitude = entry["fault"].at("amplitude").get<double>();
            fault.kind = fault_kind_from_string(entry["fault"].at("kind").get<std::string>());
            mode.fault = fault;
        }
        scenario.modes.push_back(std::move(mode));
    }
    validate_scenario(scenario);
    return scenario;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioSpec& scenario) {
    json doc;
    doc["version"] = scenario.version;
    if (!scenario.name.empty()) doc["name"] = scenario.name;
    if (!scenario.variables.empty()) doc["variables"] = scenario.variables;
    doc["modes"] = json::array();
    for (const ModeSpec& mode : scenario.modes) {
        json entry;
        entry["name"] = mode.name;
        entry["setpoints"] = vector_to_json(mode.setpoints);
        entry["emission"] = matrix_to_json(mode.true_emission);
        entry["lambda"] = vector_to_json(mode.true_lambda);
        entry["obs_noise"] = vector_to_json(mode.true_obs_noise);
        entry["n_train"] = mode.n_train;
        entry["n_test"] = mode.n_test;
        if (mode.fault) {
            entry["fault"] = {{"variable", mode.fault->variable_index},
                              {"onset", mode.fault->onset},
                              {"amplitude", mode.fault->amplitude},
                              {"kind", to_string(mode.fault->kind)}};
        }
        doc["modes"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

}  // namespace psfa
