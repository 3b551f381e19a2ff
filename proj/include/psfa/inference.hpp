#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "psfa/model.hpp"

namespace psfa {

/// Forward Kalman pass over one sequence. Index t is 0-based throughout:
///   predicted_cov[t] = Cov(y_t | x_0..x_{t-1})   (prior covariance at t; [0] is the initial cov)
///   gain[t], filtered_mean[t], filtered_cov[t]   refer to the update at sample t
/// log_likelihood carries the prediction-error decomposition of log P(X | theta),
/// accumulated while the innovation covariances are factorized anyway.
struct FilterTrace {
    std::vector<Eigen::VectorXd> filtered_mean;
    std::vector<Eigen::MatrixXd> filtered_cov;
    std::vector<Eigen::MatrixXd> predicted_cov;
    std::vector<Eigen::MatrixXd> gain;
    double log_likelihood = 0.0;

    int length() const { return static_cast<int>(filtered_mean.size()); }
};

/// Posterior moments from the RTS backward pass:
///   mean[t]   = E[y_t | X]
///   second[t] = E[y_t y_t^T | X]
///   cross[t]  = E[y_{t+1} y_t^T | X],  t = 0..T-2
struct SmoothedMoments {
    std::vector<Eigen::VectorXd> mean;
    std::vector<Eigen::MatrixXd> second;
    std::vector<Eigen::MatrixXd> cross;

    int length() const { return static_cast<int>(mean.size()); }
};

/// Steady-state limit of the filter recursion: the fixed-point gain together
/// with the predicted covariance it was derived from.
struct SteadyState {
    Eigen::MatrixXd gain;      // p x m
    Eigen::MatrixXd pred_cov;  // p x p
    int iterations = 0;
    double last_delta = 0.0;
};

FilterTrace forward_filter(const ModelParameters& params, const Eigen::MatrixXd& data);

SmoothedMoments backward_smooth(const ModelParameters& params, const FilterTrace& trace);

/// Iterates the gain/covariance recursion from the initial covariance until
/// the gain moves by less than 1e-10 (sup norm), max 10000 iterations.
SteadyState compute_steady_state(const ModelParameters& params);

Eigen::MatrixXd steady_gain(const ModelParameters& params);

/// Draws one latent path from P(Y | X) by backward sampling along the filter
/// trace. Used by the sampled Fisher-information variants.
Eigen::MatrixXd sample_posterior_path(const ModelParameters& params,
                                      const FilterTrace& trace,
                                      std::uint64_t seed);

}  // namespace psfa
