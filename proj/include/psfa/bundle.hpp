#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "psfa/ewc.hpp"
#include "psfa/learning.hpp"
#include "psfa/model.hpp"
#include "psfa/monitoring.hpp"

namespace psfa {

/// Every user-tunable knob of the pipeline, loaded from a JSON config file.
struct RunConfig {
    int p = 2;
    double alpha = 0.01;
    EmConfig em;
    EwcConfig ewc;
    std::uint64_t seed = 0;
    int fim_samples = 0;  // 0: plug in smoothed means; >0: posterior-draw average
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

/// Persistent trained state: the continual parameters, the latest mode's
/// standardizer and monitor, the accumulated importance, and provenance.
struct ModelBundle {
    static constexpr const char* kFormatVersion = "psfa-bundle/1";

    std::string version = kFormatVersion;
    ModelParameters params;
    ModeStandardizer standardizer;
    ImportanceState importance;
    MonitoringModel monitor;
    std::vector<std::string> modes_absorbed;
    RunConfig config;
};

std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const std::string& json_text);
void save_bundle(const std::string& path, const ModelBundle& bundle);
ModelBundle load_bundle(const std::string& path);

/// Fits the first mode from scratch (fresh importance), absorbs its Fisher
/// information, and calibrates the monitor on the training data.
ModelBundle train_mode_bundle(const Eigen::MatrixXd& data_raw,
                              const RunConfig& cfg,
                              const std::string& mode_id);

/// Continual update: fits the new mode penalized by the bundle's importance
/// state, absorbs the new Fisher information, and recalibrates the monitor.
ModelBundle update_mode_bundle(const ModelBundle& base,
                               const Eigen::MatrixXd& data_raw,
                               const RunConfig& cfg,
                               const std::string& mode_id);

}  // namespace psfa
