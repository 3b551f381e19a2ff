#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "psfa/ewc.hpp"
#include "psfa/inference.hpp"
#include "psfa/model.hpp"

namespace psfa {

/// Hyperparameters of one mode fit. gamma1/gamma2 weight the quadratic
/// penalties that anchor the emission matrix and transition coefficients.
struct EmConfig {
    int max_iters = 200;
    double rel_tol = 1e-6;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

struct FitReport {
    std::vector<double> objectives;  // penalized objective, one entry per E-step
    int iterations = 0;
    bool converged = false;
    std::string warning;
};

struct FitResult {
    ModelParameters params;
    ModeStandardizer standardizer;
    SmoothedMoments moments;  // posterior moments at the returned parameters
    FitReport report;
};

/// Expected complete log-likelihood under the given posterior moments minus
/// the two anchored quadratic penalties.
double penalized_objective(const ModelParameters& params,
                           const Eigen::MatrixXd& data,
                           const SmoothedMoments& moments,
                           const ImportanceState& importance,
                           const EmConfig& cfg);

/// Solves the anchored emission stationarity equation
///   sum_t x_t E[y_t]^T + gamma1 Sigma_x Omega^V V* = V sum_t E[y_t y_t^T] + gamma1 Sigma_x Omega^V V
/// by dense Kronecker vectorization, with one step of iterative refinement.
/// Throws when the linear system is singular or the residual stays large.
Eigen::MatrixXd solve_emission(const SmoothedMoments& moments,
                               const Eigen::MatrixXd& data,
                               const Eigen::VectorXd& sigma_x,
                               const ImportanceState& importance,
                               double gamma1);

/// Per-variable noise variance given the freshly updated emission matrix,
/// floored at 1e-8.
Eigen::VectorXd update_obs_noise(const SmoothedMoments& moments,
                                 const Eigen::MatrixXd& data,
                                 const Eigen::MatrixXd& v_new);

/// Initial-state covariance update E[y_1 y_1^T | X], symmetrized and
/// eigenvalue-floored at 1e-8.
Eigen::MatrixXd update_initial_cov(const SmoothedMoments& moments);

/// Per-coordinate transition update: assembles the quintic stationarity
/// polynomial, takes its real roots in [0, 1-1e-6] via companion-matrix
/// eigenvalues, and returns the candidate (roots plus interval endpoints)
/// maximizing the per-coordinate objective. Ties break toward smaller values.
Eigen::VectorXd update_lambda(const SmoothedMoments& moments,
                              const ImportanceState& importance,
                              double gamma2,
                              const Eigen::VectorXd& lambda_anchor);

/// Per-coordinate transition objective used for candidate selection;
/// exposed for the oracle tests.
double lambda_coordinate_objective(double lambda,
                                   double sum_cross,
                                   double sum_sq_curr,
                                   double sum_sq_prev,
                                   int T,
                                   double penalty_weight,
                                   double lambda_anchor);

/// Full EM fit of one mode: standardize, initialize, then alternate the
/// posterior pass with the four block updates until the penalized objective
/// stabilizes. The importance state supplies anchors and weights; a fresh
/// state yields the plain unpenalized fit.
FitResult fit_mode(const Eigen::MatrixXd& data_raw,
                   const ImportanceState& importance,
                   const EmConfig& cfg,
                   int p);

}  // namespace psfa
