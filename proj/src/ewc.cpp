#include "psfa/ewc.hpp"

#include <cmath>

#include "psfa/errors.hpp"

namespace psfa {

ImportanceState ImportanceState::fresh(int m, int p) {
    ImportanceState state;
    state.omega_v = Eigen::MatrixXd::Zero(m, m);
    state.omega_lambda = Eigen::VectorXd::Zero(p);
    state.anchor_v = Eigen::MatrixXd::Zero(m, p);
    state.anchor_lambda = Eigen::VectorXd::Zero(p);
    state.mode_count = 0;
    return state;
}

Eigen::MatrixXd emission_gradient(const ModelParameters& params,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y) {
    const Eigen::VectorXd residual = x - params.emission * y;
    return (residual.array() / params.obs_noise_diag.array()).matrix() * y.transpose();
}

double lambda_gradient(double y_t, double y_prev, double lambda) {
    const double one_minus = 1.0 - lambda * lambda;
    const double numerator = -lambda * lambda * lambda + y_t * y_prev * lambda * lambda +
                             (1.0 - y_t * y_t - y_prev * y_prev) * lambda + y_t * y_prev;
    return numerator / (one_minus * one_minus);
}

namespace {

Eigen::MatrixXd fim_emission_from_path(const ModelParameters& params,
                                       const Eigen::MatrixXd& data,
                                       const Eigen::MatrixXd& path) {
    const auto m = params.obs_dim();
    const auto T = data.cols();
    Eigen::MatrixXd fim = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index t = 0; t < T; ++t) {
        const Eigen::VectorXd y = path.col(t);
        const Eigen::VectorXd score =
            ((data.col(t) - params.emission * y).array() / params.obs_noise_diag.array()).matrix();
        fim.noalias() += y.squaredNorm() * (score * score.transpose());
    }
    fim /= static_cast<double>(T);
    return 0.5 * (fim + fim.transpose()).eval();
}

Eigen::VectorXd fim_lambda_from_path(const ModelParameters& params, const Eigen::MatrixXd& path) {
    const auto p = params.latent_dim();
    const auto T = path.cols();
    Eigen::VectorXd fim = Eigen::VectorXd::Zero(p);
    for (Eigen::Index t = 1; t < T; ++t)
        for (Eigen::Index i = 0; i < p; ++i) {
            const double g = lambda_gradient(path(i, t), path(i, t - 1), params.transition_diag(i));
            fim(i) += g * g;
        }
    return fim / static_cast<double>(T);
}

}  // namespace

Eigen::MatrixXd fim_emission(const ModelParameters& params,
                             const Eigen::MatrixXd& data,
                             const SmoothedMoments& moments) {
    if (moments.length() != data.cols())
        throw ValidationError("moments and data must cover the same samples");
    Eigen::MatrixXd path(params.latent_dim(), moments.length());
    for (int t = 0; t < moments.length(); ++t) path.col(t) = moments.mean[t];
    return fim_emission_from_path(params, data, path);
}

Eigen::VectorXd fim_lambda(const ModelParameters& params, const SmoothedMoments& moments) {
    if (moments.length() < 2) throw ValidationError("fim_lambda needs at least two samples");
    Eigen::MatrixXd path(params.latent_dim(), moments.length());
    for (int t = 0; t < moments.length(); ++t) path.col(t) = moments.mean[t];
    return fim_lambda_from_path(params, path);
}

Eigen::MatrixXd fim_emission_sampled(const ModelParameters& params,
                                     const Eigen::MatrixXd& data,
                                     const FilterTrace& trace,
                                     int n_samples,
                                     std::uint64_t seed) {
    if (n_samples < 1) throw ValidationError("n_samples must be positive");
    Eigen::MatrixXd fim = Eigen::MatrixXd::Zero(params.obs_dim(), params.obs_dim());
    for (int s = 0; s < n_samples; ++s) {
        const Eigen::MatrixXd path = sample_posterior_path(params, trace, seed + static_cast<std::uint64_t>(s));
        fim += fim_emission_from_path(params, data, path);
    }
    return fim / static_cast<double>(n_samples);
}

Eigen::VectorXd fim_lambda_sampled(const ModelParameters& params,
                                   const FilterTrace& trace,
                                   int n_samples,
                                   std::uint64_t seed) {
    if (n_samples < 1) throw ValidationError("n_samples must be positive");
    Eigen::VectorXd fim = Eigen::VectorXd::Zero(params.latent_dim());
    for (int s = 0; s < n_samples; ++s) {
        const Eigen::MatrixXd path = sample_posterior_path(params, trace, seed + static_cast<std::uint64_t>(s));
        fim += fim_lambda_from_path(params, path);
    }
    return fim / static_cast<double>(n_samples);
}

ImportanceState absorb_mode(const ImportanceState& state,
                            const ModelParameters& params,
                            const Eigen::MatrixXd& fim_v,
                            const Eigen::VectorXd& fim_l,
                            const EwcConfig& cfg) {
    const auto m = params.obs_dim();
    const auto p = params.latent_dim();
    if (fim_v.rows() != m || fim_v.cols() != m) throw ValidationError("fim_v must be m x m");
    if (fim_l.size() != p) throw ValidationError("fim_l must have length p");
    if ((fim_l.array() < 0.0).any()) throw ValidationError("fim_l entries must be nonnegative");

    ImportanceState next = state;
    if (next.omega_v.size() == 0) next = ImportanceState::fresh(m, p);
    if (next.omega_v.rows() != m || next.omega_lambda.size() != p)
        throw ValidationError("importance state dimensions do not match parameters");

    if (next.mode_count == 0) {
        next.omega_v = cfg.eta_v * fim_v + cfg.lambda_prior * Eigen::MatrixXd::Identity(m, m);
        next.omega_lambda =
            cfg.eta_lambda * fim_l + Eigen::VectorXd::Constant(p, cfg.lambda_prior);
    } else {
        next.omega_v += cfg.eta_v * fim_v;
        next.omega_lambda += cfg.eta_lambda * fim_l;
    }
    next.omega_v = 0.5 * (next.omega_v + next.omega_v.transpose()).eval();
    next.anchor_v = params.emission;
    next.anchor_lambda = params.transition_diag;
    next.mode_count += 1;
    return next;
}

}  // namespace psfa
