#include "psfa/inference.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "psfa/errors.hpp"

namespace psfa {

namespace {

void symmetrize(Eigen::MatrixXd& a) { a = 0.5 * (a + a.transpose()).eval(); }

// Factorizes an innovation covariance; throws if it is not positive-definite.
Eigen::LLT<Eigen::MatrixXd> innovation_llt(const Eigen::MatrixXd& s) {
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success)
        throw NumericalError("singular innovation covariance in forward filter");
    return llt;
}

double gaussian_exponent_logdet(const Eigen::LLT<Eigen::MatrixXd>& llt,
                                const Eigen::VectorXd& innovation) {
    const double logdet = 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    return logdet + innovation.dot(llt.solve(innovation));
}

}  // namespace

FilterTrace forward_filter(const ModelParameters& params, const Eigen::MatrixXd& data) {
    if (auto violation = validate(params)) throw ValidationError(*violation);
    const auto m = params.obs_dim();
    const auto p = params.latent_dim();
    const auto T = data.cols();
    if (data.rows() != m) throw ValidationError("data row count must equal emission rows");
    if (T < 1) throw ValidationError("forward_filter needs at least one sample");

    const Eigen::MatrixXd& V = params.emission;
    const Eigen::VectorXd lambda = params.transition_diag;
    const Eigen::MatrixXd eye_p = Eigen::MatrixXd::Identity(p, p);
    const double norm_const = static_cast<double>(m) * std::log(2.0 * std::numbers::pi);

    FilterTrace trace;
    trace.filtered_mean.resize(T);
    trace.filtered_cov.resize(T);
    trace.predicted_cov.resize(T);
    trace.gain.resize(T);

    for (Eigen::Index t = 0; t < T; ++t) {
        Eigen::MatrixXd pred;
        Eigen::VectorXd pred_mean;
        if (t == 0) {
            pred = params.initial_cov;
            pred_mean = Eigen::VectorXd::Zero(p);
        } else {
            pred = lambda.asDiagonal() * (trace.filtered_cov[t - 1] - eye_p) *
                       lambda.asDiagonal() +
                   eye_p;
            pred_mean = lambda.asDiagonal() * trace.filtered_mean[t - 1];
        }
        symmetrize(pred);

        Eigen::MatrixXd innovation_cov = V * pred * V.transpose();
        innovation_cov.diagonal() += params.obs_noise_diag;
        symmetrize(innovation_cov);
        const auto llt = innovation_llt(innovation_cov);

        // K = P V^T S^{-1}, computed as the solve of S K^T = V P.
        Eigen::MatrixXd gain = llt.solve(V * pred).transpose();
        const Eigen::VectorXd innovation = data.col(t) - V * pred_mean;

        trace.predicted_cov[t] = pred;
        trace.gain[t] = gain;
        trace.filtered_mean[t] = pred_mean + gain * innovation;
        Eigen::MatrixXd filtered = (eye_p - gain * V) * pred;
        symmetrize(filtered);
        trace.filtered_cov[t] = filtered;

        trace.log_likelihood += -0.5 * (norm_const + gaussian_exponent_logdet(llt, innovation));
    }
    return trace;
}

SmoothedMoments backward_smooth(const ModelParameters& params, const FilterTrace& trace) {
    const auto T = trace.length();
    if (T < 1) throw ValidationError("backward_smooth needs a nonempty trace");

    const Eigen::VectorXd lambda = params.transition_diag;

    std::vector<Eigen::VectorXd> smoothed_mean(T);
    std::vector<Eigen::MatrixXd> smoothed_cov(T);
    SmoothedMoments moments;
    moments.mean.resize(T);
    moments.second.resize(T);
    moments.cross.resize(T > 1 ? T - 1 : 0);

    smoothed_mean[T - 1] = trace.filtered_mean[T - 1];
    smoothed_cov[T - 1] = trace.filtered_cov[T - 1];

    for (int t = T - 1; t >= 1; --t) {
        // J_{t-1} = U_{t-1} L^T P_t^{-1}; P here is predicted_cov[t].
        const Eigen::LLT<Eigen::MatrixXd> pred_llt(trace.predicted_cov[t]);
        if (pred_llt.info() != Eigen::Success)
            throw NumericalError("singular predicted covariance in backward smoother");
        const Eigen::MatrixXd smoother_gain =
            pred_llt.solve(lambda.asDiagonal() * trace.filtered_cov[t - 1]).transpose();

        smoothed_mean[t - 1] =
            trace.filtered_mean[t - 1] +
            smoother_gain * (smoothed_mean[t] - lambda.asDiagonal() * trace.filtered_mean[t - 1]);
        Eigen::MatrixXd cov =
            trace.filtered_cov[t - 1] +
            smoother_gain * (smoothed_cov[t] - trace.predicted_cov[t]) * smoother_gain.transpose();
        symmetrize(cov);
        smoothed_cov[t - 1] = cov;

        moments.cross[t - 1] = smoothed_cov[t] * smoother_gain.transpose() +
                               smoothed_mean[t] * smoothed_mean[t - 1].transpose();
    }

    for (int t = 0; t < T; ++t) {
        moments.mean[t] = smoothed_mean[t];
        Eigen::MatrixXd second = smoothed_cov[t] + smoothed_mean[t] * smoothed_mean[t].transpose();
        symmetrize(second);
        moments.second[t] = second;
    }
    return moments;
}

SteadyState compute_steady_state(const ModelParameters& params) {
    if (auto violation = validate(params)) throw ValidationError(*violation);
    const auto p = params.latent_dim();
    constexpr int kMaxIterations = 10000;
    constexpr double kTolerance = 1e-10;

    const Eigen::MatrixXd& V = params.emission;
    const Eigen::VectorXd lambda = params.transition_diag;
    const Eigen::MatrixXd eye_p = Eigen::MatrixXd::Identity(p, p);

    auto gain_for = [&](const Eigen::MatrixXd& pred) {
        Eigen::MatrixXd innovation_cov = V * pred * V.transpose();
        innovation_cov.diagonal() += params.obs_noise_diag;
        return Eigen::MatrixXd(innovation_llt(innovation_cov).solve(V * pred).transpose());
    };

    SteadyState steady;
    Eigen::MatrixXd pred = params.initial_cov;
    Eigen::MatrixXd gain = gain_for(pred);
    for (int it = 1; it <= kMaxIterations; ++it) {
        Eigen::MatrixXd filtered = (eye_p - gain * V) * pred;
        symmetrize(filtered);
        pred = lambda.asDiagonal() * (filtered - eye_p) * lambda.asDiagonal() + eye_p;
        symmetrize(pred);
        Eigen::MatrixXd next_gain = gain_for(pred);
        steady.last_delta = (next_gain - gain).cwiseAbs().maxCoeff();
        gain = next_gain;
        steady.iterations = it;
        if (steady.last_delta < kTolerance) {
            steady.gain = gain;
            steady.pred_cov = pred;
            return steady;
        }
    }
    throw NumericalError("steady gain did not converge after " + std::to_string(kMaxIterations) +
                         " iterations (last delta " + std::to_string(steady.last_delta) + ")");
}

Eigen::MatrixXd steady_gain(const ModelParameters& params) {
    return compute_steady_state(params).gain;
}

Eigen::MatrixXd sample_posterior_path(const ModelParameters& params,
                                      const FilterTrace& trace,
                                      std::uint64_t seed) {
    const auto p = params.latent_dim();
    const auto T = trace.length();
    const Eigen::VectorXd lambda = params.transition_diag;

    std::mt19937_64 engine(seed);
    std::normal_distribution<double> unit;
    auto draw = [&](const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov + 1e-14 * Eigen::MatrixXd::Identity(p, p));
        Eigen::VectorXd z(p);
        for (int i = 0; i < p; ++i) z(i) = unit(engine);
        return Eigen::VectorXd(mean + Eigen::MatrixXd(llt.matrixL()) * z);
    };

    Eigen::MatrixXd path(p, T);
    path.col(T - 1) = draw(trace.filtered_mean[T - 1], trace.filtered_cov[T - 1]);
    for (int t = T - 1; t >= 1; --t) {
        const Eigen::LLT<Eigen::MatrixXd> pred_llt(trace.predicted_cov[t]);
        const Eigen::MatrixXd smoother_gain =
            pred_llt.solve(lambda.asDiagonal() * trace.filtered_cov[t - 1]).transpose();
        const Eigen::VectorXd mean =
            trace.filtered_mean[t - 1] +
            smoother_gain * (path.col(t) - lambda.asDiagonal() * trace.filtered_mean[t - 1]);
        Eigen::MatrixXd cov = trace.filtered_cov[t - 1] -
                              smoother_gain * trace.predicted_cov[t] * smoother_gain.transpose();
        symmetrize(cov);
        path.col(t - 1) = draw(mean, cov);
    }
    return path;
}

}  // namespace psfa
