#include "psfa/monitoring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psfa/errors.hpp"
#include "psfa/inference.hpp"

namespace psfa {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double interpolated_quantile(const std::vector<double>& sorted, double level) {
    const double position = level * static_cast<double>(sorted.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const auto upper = std::min(lower + 1, sorted.size() - 1);
    const double weight = position - static_cast<double>(lower);
    return (1.0 - weight) * sorted[lower] + weight * sorted[upper];
}

// Statistic recursion shared by calibration and online monitoring.
struct StatisticStep {
    double t2;
    double spe;
    double s2;
    Eigen::VectorXd latent;
};

StatisticStep advance(const ModelParameters& params,
                      const Eigen::MatrixXd& gain,
                      const Eigen::LLT<Eigen::MatrixXd>& phi_llt,
                      const Eigen::VectorXd& dyn_cov_diag,
                      const Eigen::VectorXd& prev_latent,
                      const Eigen::VectorXd& x_std) {
    const Eigen::VectorXd propagated =
        params.transition_diag.asDiagonal() * prev_latent;
    const Eigen::VectorXd prediction_error = x_std - params.emission * propagated;
    StatisticStep step;
    step.latent = propagated + gain * prediction_error;
    step.t2 = step.latent.squaredNorm();
    step.spe = prediction_error.dot(phi_llt.solve(prediction_error));
    const Eigen::VectorXd difference = step.latent - prev_latent;
    step.s2 = (difference.array().square() / dyn_cov_diag.array()).sum();
    return step;
}

}  // namespace

std::string to_string(ConditionLabel label) {
    switch (label) {
        case ConditionLabel::Normal: return "normal";
        case ConditionLabel::StaticDeviation: return "static-deviation";
        case ConditionLabel::DynamicFault: return "dynamic-fault";
    }
    return "normal";
}

double kde_threshold(const std::vector<double>& values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    if (values.size() < 2) throw ValidationError("kde_threshold needs at least two values");
    const auto n = values.size();

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());

    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    double variance = 0.0;
    for (double v : sorted) variance += (v - mean) * (v - mean);
    variance /= static_cast<double>(n - 1);
    const double stddev = std::sqrt(variance);
    const double iqr = interpolated_quantile(sorted, 0.75) - interpolated_quantile(sorted, 0.25);

    double spread = stddev;
    if (iqr > 0.0) spread = std::min(stddev, iqr / 1.34);
    if (spread <= 0.0) return sorted.back();  // degenerate calibration set

    const double bandwidth = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    const double lo = sorted.front() - 3.0 * bandwidth;
    const double hi = sorted.back() + 3.0 * bandwidth;
    constexpr int kGridPoints = 4096;
    const double step = (hi - lo) / static_cast<double>(kGridPoints - 1);

    auto cdf_at = [&](int index) {
        const double g = lo + step * static_cast<double>(index);
        double acc = 0.0;
        for (double v : sorted) acc += normal_cdf((g - v) / bandwidth);
        return acc / static_cast<double>(n);
    };

    // The smoothed CDF is monotone on the grid; bisect for the crossing.
    const double target = 1.0 - alpha;
    int lo_idx = 0, hi_idx = kGridPoints - 1;
    double cdf_lo = cdf_at(lo_idx);
    if (cdf_lo >= target) return lo;
    double cdf_hi = cdf_at(hi_idx);
    if (cdf_hi < target) return hi;
    while (hi_idx - lo_idx > 1) {
        const int mid = (lo_idx + hi_idx) / 2;
        const double cdf_mid = cdf_at(mid);
        if (cdf_mid >= target) {
            hi_idx = mid;
            cdf_hi = cdf_mid;
        } else {
            lo_idx = mid;
            cdf_lo = cdf_mid;
        }
    }
    const double g_lo = lo + step * lo_idx;
    const double g_hi = lo + step * hi_idx;
    if (cdf_hi == cdf_lo) return g_hi;
    return g_lo + (target - cdf_lo) / (cdf_hi - cdf_lo) * (g_hi - g_lo);
}

ConditionLabel classify(double t2, double spe, double s2, const Thresholds& thresholds) {
    if (s2 > thresholds.s2) return ConditionLabel::DynamicFault;
    if (t2 > thresholds.t2 || spe > thresholds.spe) return ConditionLabel::StaticDeviation;
    return ConditionLabel::Normal;
}

MonitoringModel build_monitor(const ModelParameters& params,
                              const ModeStandardizer& standardizer,
                              const Eigen::MatrixXd& calibration_raw,
                              double alpha) {
    if (auto violation = validate(params)) throw ValidationError(*violation);
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    if (calibration_raw.cols() < 500)
        throw ValidationError("build_monitor needs at least 500 calibration samples");
    if (calibration_raw.rows() != params.obs_dim())
        throw ValidationError("calibration data rows must equal emission rows");

    MonitoringModel model;
    model.params = params;
    model.standardizer = standardizer;
    model.alpha = alpha;

    const SteadyState steady = compute_steady_state(params);
    model.steady_gain = steady.gain;

    const Eigen::MatrixXd& V = params.emission;
    const Eigen::MatrixXd propagated_cov = params.transition_diag.asDiagonal() *
                                           steady.pred_cov *
                                           params.transition_diag.asDiagonal();
    Eigen::MatrixXd phi = V * propagated_cov * V.transpose() +
                          V * params.state_noise_diag().asDiagonal() * V.transpose();
    phi.diagonal() += params.obs_noise_diag;
    phi = 0.5 * (phi + phi.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> phi_llt(phi);
    if (phi_llt.info() != Eigen::Success) {
        phi.diagonal().array() += 1e-10;
        phi_llt.compute(phi);
        if (phi_llt.info() != Eigen::Success)
            throw NumericalError("prediction-error covariance is not positive-definite");
        model.build_note = "pred_err_cov regularized by 1e-10*I";
    }
    model.pred_err_cov = phi;
    model.dyn_cov_diag = 2.0 * (1.0 - params.transition_diag.array());

    // Run the statistic pipeline over the calibration stream; the first
    // sample only seeds the latent state.
    const Eigen::MatrixXd calibration = standardizer.standardize(calibration_raw);
    const auto N = calibration.cols();
    std::vector<double> t2_values, spe_values, s2_values;
    t2_values.reserve(N - 1);
    spe_values.reserve(N - 1);
    s2_values.reserve(N - 1);
    Eigen::VectorXd latent = Eigen::VectorXd::Zero(params.latent_dim());
    for (Eigen::Index t = 0; t < N; ++t) {
        const StatisticStep step = advance(params, model.steady_gain, phi_llt,
                                           model.dyn_cov_diag, latent, calibration.col(t));
        if (t > 0) {
            t2_values.push_back(step.t2);
            spe_values.push_back(step.spe);
            s2_values.push_back(step.s2);
        }
        latent = step.latent;
    }
    model.thresholds.t2 = kde_threshold(t2_values, alpha);
    model.thresholds.spe = kde_threshold(spe_values, alpha);
    model.thresholds.s2 = kde_threshold(s2_values, alpha);
    return model;
}

Decision monitor_step(const MonitoringModel& model, MonitorState& state, const Eigen::VectorXd& x_raw) {
    if (!x_raw.allFinite()) throw ValidationError("monitor input contains non-finite values");
    if (x_raw.size() != model.params.obs_dim())
        throw ValidationError("monitor input length must equal emission rows");

    const Eigen::VectorXd x_std = model.standardizer.standardize(x_raw);
    const Eigen::LLT<Eigen::MatrixXd> phi_llt(model.pred_err_cov);

    if (!state.initialized) {
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.params.latent_dim());
        const StatisticStep step = advance(model.params, model.steady_gain, phi_llt,
                                           model.dyn_cov_diag, zero, x_std);
        state.prev_latent = step.latent;
        state.initialized = true;
        Decision decision;
        decision.label = ConditionLabel::Normal;
        decision.has_statistics = false;
        return decision;
    }

    const StatisticStep step = advance(model.params, model.steady_gain, phi_llt,
                                       model.dyn_cov_diag, state.prev_latent, x_std);
    state.prev_latent = step.latent;

    Decision decision;
    decision.t2 = step.t2;
    decision.spe = step.spe;
    decision.s2 = step.s2;
    decision.over_t2 = step.t2 > model.thresholds.t2;
    decision.over_spe = step.spe > model.thresholds.spe;
    decision.over_s2 = step.s2 > model.thresholds.s2;
    decision.label = classify(step.t2, step.spe, step.s2, model.thresholds);
    decision.has_statistics = true;
    return decision;
}

std::vector<Decision> monitor_stream(const MonitoringModel& model, const Eigen::MatrixXd& stream_raw) {
    MonitorState state;
    std::vector<Decision> decisions;
    decisions.reserve(stream_raw.cols());
    for (Eigen::Index t = 0; t < stream_raw.cols(); ++t)
        decisions.push_back(monitor_step(model, state, stream_raw.col(t)));
    return decisions;
}

}  // namespace psfa
