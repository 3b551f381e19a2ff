#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "psfa/model.hpp"

namespace psfa {

enum class ConditionLabel { Normal, StaticDeviation, DynamicFault };

std::string to_string(ConditionLabel label);

struct Thresholds {
    double t2 = 0.0;
    double spe = 0.0;
    double s2 = 0.0;
};

/// One monitored sample: the three statistics, their threshold flags, and the
/// fused condition. has_statistics is false on the very first sample of a
/// stream, where the latent difference is undefined.
struct Decision {
    ConditionLabel label = ConditionLabel::Normal;
    double t2 = 0.0;
    double spe = 0.0;
    double s2 = 0.0;
    bool over_t2 = false;
    bool over_spe = false;
    bool over_s2 = false;
    bool has_statistics = false;
};

/// Everything needed to score a stream online: model parameters, the mode
/// standardizer, the steady-state filter gain, the steady prediction-error
/// covariance, the latent-difference covariance diagonal 2(I - Lambda), and
/// the calibrated control limits.
struct MonitoringModel {
    ModelParameters params;
    ModeStandardizer standardizer;
    Eigen::MatrixXd steady_gain;    // p x m
    Eigen::MatrixXd pred_err_cov;   // m x m, Phi
    Eigen::VectorXd dyn_cov_diag;   // p, diagonal of Xi = 2(I - Lambda)
    Thresholds thresholds;
    double alpha = 0.01;
    std::string build_note;
};

struct MonitorState {
    Eigen::VectorXd prev_latent;
    bool initialized = false;
};

/// Gaussian-kernel density quantile with Silverman's bandwidth: inverts the
/// smoothed CDF at level 1 - alpha on a 4096-point grid over
/// [min - 3h, max + 3h] with linear interpolation.
double kde_threshold(const std::vector<double>& values, double alpha);

/// Pure decision rule: a high latent-difference statistic signals a dynamics
/// fault; otherwise high T2 or SPE signals a static deviation.
ConditionLabel classify(double t2, double spe, double s2, const Thresholds& thresholds);

/// Calibrates a monitor on normal-operation data (raw units, >= 500 samples):
/// computes the steady gain, the steady prediction-error covariance, the
/// latent-difference covariance, and the KDE control limits at level 1-alpha.
MonitoringModel build_monitor(const ModelParameters& params,
                              const ModeStandardizer& standardizer,
                              const Eigen::MatrixXd& calibration_raw,
                              double alpha);

/// Processes one raw sample, advancing the per-stream state. The first call
/// seeds the latent at zero and reports Normal without statistics.
Decision monitor_step(const MonitoringModel& model, MonitorState& state, const Eigen::VectorXd& x_raw);

/// Runs a whole stream (columns are samples) through a fresh state.
std::vector<Decision> monitor_stream(const MonitoringModel& model, const Eigen::MatrixXd& stream_raw);

}  // namespace psfa
