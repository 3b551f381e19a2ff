#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "psfa/inference.hpp"
#include "psfa/model.hpp"

namespace psfa {

/// Accumulated parameter-importance weights and the anchor parameters of the
/// most recently learned mode. A fresh state (mode_count == 0) carries zero
/// weights and contributes no penalty.
struct ImportanceState {
    Eigen::MatrixXd omega_v;        // m x m, symmetric PSD
    Eigen::VectorXd omega_lambda;   // p, nonnegative
    Eigen::MatrixXd anchor_v;       // m x p
    Eigen::VectorXd anchor_lambda;  // p
    int mode_count = 0;

    static ImportanceState fresh(int m, int p);

    /// True when the quadratic penalty is identically zero.
    bool penalty_free() const {
        return mode_count == 0 || (omega_v.cwiseAbs().maxCoeff() == 0.0 &&
                                   omega_lambda.cwiseAbs().maxCoeff() == 0.0);
    }
};

/// Mode-specific weighting of the Fisher information when it is folded into
/// the importance state, plus the Gaussian prior precision applied to the
/// first absorbed mode only.
struct EwcConfig {
    double eta_v = 1.0;
    double eta_lambda = 1.0;
    double lambda_prior = 1e-3;
};

/// Per-sample score of the observation factor with respect to the emission
/// matrix: d log P(x | y) / dV = Sigma_x^{-1} (x - V y) y^T.
Eigen::MatrixXd emission_gradient(const ModelParameters& params,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y);

/// Per-transition score of the latent factor with respect to one transition
/// coefficient: d log P(y_t | y_{t-1}) / d lambda.
double lambda_gradient(double y_t, double y_prev, double lambda);

/// Empirical Fisher information for the emission matrix, collapsed to m x m
/// as the average of ||y_t||^2-weighted score outer products. Latents are
/// replaced by their smoothed means.
Eigen::MatrixXd fim_emission(const ModelParameters& params,
                             const Eigen::MatrixXd& data,
                             const SmoothedMoments& moments);

/// Empirical Fisher information for each transition coefficient (diagonal),
/// averaging squared transition scores over the sequence.
Eigen::VectorXd fim_lambda(const ModelParameters& params, const SmoothedMoments& moments);

/// Monte Carlo alternatives that average the Fisher information over latent
/// paths drawn from the posterior instead of plugging in smoothed means.
Eigen::MatrixXd fim_emission_sampled(const ModelParameters& params,
                                     const Eigen::MatrixXd& data,
                                     const FilterTrace& trace,
                                     int n_samples,
                                     std::uint64_t seed);
Eigen::VectorXd fim_lambda_sampled(const ModelParameters& params,
                                   const FilterTrace& trace,
                                   int n_samples,
                                   std::uint64_t seed);

/// Folds a learned mode into the importance state: first absorption applies
/// the Gaussian prior precision, later ones add weighted Fisher terms.
/// Anchors always move to the just-learned parameters.
ImportanceState absorb_mode(const ImportanceState& state,
                            const ModelParameters& params,
                            const Eigen::MatrixXd& fim_v,
                            const Eigen::VectorXd& fim_l,
                            const EwcConfig& cfg);

}  // namespace psfa
