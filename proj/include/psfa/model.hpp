#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace psfa {

/// Parameters of the linear-Gaussian slow-feature state-space model
///
///   x_t = V y_t + e_t,        e_t ~ N(0, diag(obs_noise_diag))
///   y_t = L y_{t-1} + w_t,    w_t ~ N(0, I - L^2),  L = diag(transition_diag)
///   y_1 ~ N(0, initial_cov)
///
/// The I - L^2 state-noise constraint pins the stationary latent covariance
/// at the identity, which is what makes the latent dimensions "slow features"
/// ordered by their transition coefficients.
struct ModelParameters {
    Eigen::MatrixXd emission;         // m x p
    Eigen::VectorXd transition_diag;  // p, entries in [0, 1)
    Eigen::VectorXd obs_noise_diag;   // m, strictly positive variances
    Eigen::MatrixXd initial_cov;      // p x p, symmetric positive-definite

    int obs_dim() const { return static_cast<int>(emission.rows()); }
    int latent_dim() const { return static_cast<int>(emission.cols()); }

    /// Diagonal of the state-noise covariance I - L^2.
    Eigen::VectorXd state_noise_diag() const {
        return (1.0 - transition_diag.array().square()).matrix();
    }
};

/// Per-variable z-scoring transform for one operating mode.
struct ModeStandardizer {
    Eigen::VectorXd mean;    // m
    Eigen::VectorXd stddev;  // m, strictly positive

    Eigen::MatrixXd standardize(const Eigen::MatrixXd& raw) const;
    Eigen::MatrixXd destandardize(const Eigen::MatrixXd& standardized) const;
    Eigen::VectorXd standardize(const Eigen::VectorXd& raw) const;
};

/// Estimates the z-scoring transform from raw data (columns are samples).
/// Uses the unbiased standard deviation; degenerate variables are floored.
ModeStandardizer fit_standardizer(const Eigen::MatrixXd& raw);

/// Returns the first violated model invariant, or nullopt when all hold.
std::optional<std::string> validate(const ModelParameters& params);

/// Moment-matched starting point: emission from the leading principal
/// loadings of the sample covariance, transition coefficients at 0.5,
/// observation noise from the rank-p reconstruction residual (floored at
/// 1e-4), initial covariance at identity. Requires T >= 2p.
ModelParameters initialize(const Eigen::MatrixXd& data, int p);

/// Smallest latent dimension explaining at least 90% of the cumulative
/// variance of the sample covariance spectrum.
int suggest_latent_dim(const Eigen::MatrixXd& data, double target = 0.90);

/// Joint log-density log P(X, Y | theta) of observed data (m x T) and a
/// latent path (p x T), including all normalizing constants.
double complete_log_likelihood(const ModelParameters& params,
                               const Eigen::MatrixXd& data,
                               const Eigen::MatrixXd& latents);

}  // namespace psfa
