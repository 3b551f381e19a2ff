#include "psfa/learning.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "psfa/errors.hpp"

namespace psfa {

namespace {

constexpr double kNoiseFloor = 1e-8;
constexpr double kCovEigenFloor = 1e-8;
constexpr double kLambdaUpper = 1.0 - 1e-6;

bool penalty_active(const ImportanceState& importance, double gamma) {
    return gamma > 0.0 && importance.mode_count > 0 && !importance.penalty_free();
}

void check_importance_dims(const ImportanceState& importance, Eigen::Index m, Eigen::Index p) {
    if (importance.omega_v.rows() != m || importance.omega_v.cols() != m ||
        importance.omega_lambda.size() != p || importance.anchor_v.rows() != m ||
        importance.anchor_v.cols() != p || importance.anchor_lambda.size() != p)
        throw ValidationError("importance state dimensions do not match the model");
}

double penalty_value(const ModelParameters& params,
                     const ImportanceState& importance,
                     const EmConfig& cfg) {
    double penalty = 0.0;
    if (penalty_active(importance, cfg.gamma1) || penalty_active(importance, cfg.gamma2))
        check_importance_dims(importance, params.obs_dim(), params.latent_dim());
    if (penalty_active(importance, cfg.gamma1)) {
        const Eigen::MatrixXd diff = params.emission - importance.anchor_v;
        penalty += cfg.gamma1 * (diff.transpose() * importance.omega_v * diff).trace();
    }
    if (penalty_active(importance, cfg.gamma2)) {
        const Eigen::ArrayXd diff =
            params.transition_diag.array() - importance.anchor_lambda.array();
        penalty += cfg.gamma2 * (importance.omega_lambda.array() * diff.square()).sum();
    }
    return penalty;
}

struct LambdaSums {
    double cross = 0.0;     // sum_t E[y_t y_{t-1}]
    double sq_curr = 0.0;   // sum_{t>=2} E[y_t^2]
    double sq_prev = 0.0;   // sum_{t>=2} E[y_{t-1}^2]
};

LambdaSums lambda_sums(const SmoothedMoments& moments, int coordinate) {
    LambdaSums sums;
    const int T = moments.length();
    for (int t = 1; t < T; ++t) {
        sums.cross += moments.cross[t - 1](coordinate, coordinate);
        sums.sq_curr += moments.second[t](coordinate, coordinate);
        sums.sq_prev += moments.second[t - 1](coordinate, coordinate);
    }
    return sums;
}

// Real roots of an up-to-quintic polynomial (ascending coefficients) via the
// eigenvalues of its companion matrix. Near-zero leading coefficients are
// trimmed before the matrix is formed.
std::vector<double> polynomial_real_roots(const std::array<double, 6>& coeffs) {
    double max_abs = 0.0;
    for (double c : coeffs) max_abs = std::max(max_abs, std::abs(c));
    if (max_abs == 0.0) return {};

    int degree = 5;
    while (degree > 0 && std::abs(coeffs[degree]) <= 1e-14 * max_abs) --degree;
    if (degree == 0) return {};

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<double> roots;
    for (int i = 0; i < degree; ++i) {
        const auto root = solver.eigenvalues()(i);
        if (std::abs(root.imag()) <= 1e-8 * std::max(1.0, std::abs(root.real())))
            roots.push_back(root.real());
    }
    return roots;
}

}  // namespace

double lambda_coordinate_objective(double lambda,
                                   double sum_cross,
                                   double sum_sq_curr,
                                   double sum_sq_prev,
                                   int T,
                                   double penalty_weight,
                                   double lambda_anchor) {
    const double one_minus = 1.0 - lambda * lambda;
    const double quad = sum_sq_curr - 2.0 * lambda * sum_cross + lambda * lambda * sum_sq_prev;
    double value = -0.5 * (static_cast<double>(T - 1) * std::log(one_minus) + quad / one_minus);
    if (penalty_weight > 0.0) {
        const double diff = lambda - lambda_anchor;
        value -= penalty_weight * diff * diff;
    }
    return value;
}

double penalized_objective(const ModelParameters& params,
                           const Eigen::MatrixXd& data,
                           const SmoothedMoments& moments,
                           const ImportanceState& importance,
                           const EmConfig& cfg) {
    const auto m = params.obs_dim();
    const auto p = params.latent_dim();
    const auto T = data.cols();
    if (moments.length() != T) throw ValidationError("moments and data must cover the same samples");
    if (data.rows() != m) throw ValidationError("data rows must equal emission rows");

    const Eigen::ArrayXd noise = params.obs_noise_diag.array();
    const Eigen::ArrayXd lambda = params.transition_diag.array();
    const Eigen::ArrayXd state_noise = 1.0 - lambda.square();

    double acc = static_cast<double>(m + p) * static_cast<double>(T) * std::log(2.0 * std::numbers::pi);
    acc += static_cast<double>(T - 1) * state_noise.log().sum();
    acc += static_cast<double>(T) * noise.log().sum();

    const Eigen::LLT<Eigen::MatrixXd> init_llt(params.initial_cov);
    if (init_llt.info() != Eigen::Success) throw NumericalError("initial_cov not positive-definite");
    acc += 2.0 * Eigen::MatrixXd(init_llt.matrixL()).diagonal().array().log().sum();
    acc += init_llt.solve(moments.second[0]).trace();

    const Eigen::MatrixXd& V = params.emission;
    const Eigen::MatrixXd weighted_gram =
        V.transpose() * (V.array().colwise() / noise).matrix();
    for (Eigen::Index t = 0; t < T; ++t) {
        const Eigen::VectorXd x = data.col(t);
        acc += (x.array().square() / noise).sum();
        acc -= 2.0 * (x.array() / noise * (V * moments.mean[t]).array()).sum();
        acc += (weighted_gram * moments.second[t]).trace();
    }

    for (Eigen::Index i = 0; i < p; ++i) {
        const auto sums = lambda_sums(moments, static_cast<int>(i));
        acc += (sums.sq_curr - 2.0 * lambda(i) * sums.cross + lambda(i) * lambda(i) * sums.sq_prev) /
               state_noise(i);
    }

    return -0.5 * acc - penalty_value(params, importance, cfg);
}

Eigen::MatrixXd solve_emission(const SmoothedMoments& moments,
                               const Eigen::MatrixXd& data,
                               const Eigen::VectorXd& sigma_x,
                               const ImportanceState& importance,
                               double gamma1) {
    const auto m = data.rows();
    const auto T = data.cols();
    if (moments.length() != T) throw ValidationError("moments and data must cover the same samples");
    if (sigma_x.size() != m) throw ValidationError("sigma_x length must equal data rows");
    const auto p = moments.mean[0].size();

    Eigen::MatrixXd sum_yy = Eigen::MatrixXd::Zero(p, p);
    Eigen::MatrixXd sum_xy = Eigen::MatrixXd::Zero(m, p);
    for (Eigen::Index t = 0; t < T; ++t) {
        sum_yy += moments.second[t];
        sum_xy.noalias() += data.col(t) * moments.mean[t].transpose();
    }

    const bool ridge = penalty_active(importance, gamma1);
    if (ridge) check_importance_dims(importance, m, p);
    Eigen::MatrixXd solution(m, p);
    Eigen::MatrixXd rhs;
    double residual_norm = 0.0;
    double rhs_norm = 0.0;

    if (!ridge) {
        rhs = sum_xy;
        rhs_norm = rhs.norm();
        if (rhs_norm == 0.0) return Eigen::MatrixXd::Zero(m, p);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sum_yy);
        solution = lu.solve(rhs.transpose()).transpose();
        Eigen::MatrixXd residual = rhs - solution * sum_yy;
        solution += lu.solve(residual.transpose()).transpose();
        residual_norm = (rhs - solution * sum_yy).norm();
    } else {
        const Eigen::MatrixXd ridge_matrix =
            gamma1 * (sigma_x.asDiagonal() * importance.omega_v);
        rhs = sum_xy + ridge_matrix * importance.anchor_v;
        rhs_norm = rhs.norm();
        if (rhs_norm == 0.0) return Eigen::MatrixXd::Zero(m, p);

        const auto n = m * p;
        Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index k = 0; k < p; ++k)
                system.block(j * m, k * m, m, m).diagonal().array() += sum_yy(k, j);
            system.block(j * m, j * m, m, m) += ridge_matrix;
        }
        const Eigen::Map<const Eigen::VectorXd> rhs_vec(rhs.data(), n);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
        Eigen::VectorXd solution_vec = lu.solve(rhs_vec);
        solution_vec += lu.solve(rhs_vec - system * solution_vec);
        solution = Eigen::Map<Eigen::MatrixXd>(solution_vec.data(), m, p);
        residual_norm = (rhs_vec - system * solution_vec).norm();
    }

    if (!solution.allFinite() || residual_norm > 1e-10 * rhs_norm)
        throw NumericalError("singular linear system in solve_emission (relative residual " +
                             std::to_string(residual_norm / rhs_norm) + ")");
    return solution;
}

Eigen::VectorXd update_obs_noise(const SmoothedMoments& moments,
                                 const Eigen::MatrixXd& data,
                                 const Eigen::MatrixXd& v_new) {
    const auto m = data.rows();
    const auto T = data.cols();
    if (moments.length() != T) throw ValidationError("moments and data must cover the same samples");
    if (v_new.rows() != m) throw ValidationError("v_new rows must equal data rows");

    Eigen::VectorXd noise = Eigen::VectorXd::Zero(m);
    for (Eigen::Index t = 0; t < T; ++t) {
        const Eigen::VectorXd projected = v_new * moments.mean[t];
        noise += data.col(t).cwiseProduct(data.col(t) - 2.0 * projected);
        noise += ((v_new * moments.second[t]).cwiseProduct(v_new)).rowwise().sum();
    }
    return (noise / static_cast<double>(T)).cwiseMax(kNoiseFloor);
}

Eigen::MatrixXd update_initial_cov(const SmoothedMoments& moments) {
    if (moments.length() < 1) throw ValidationError("moments must be nonempty");
    Eigen::MatrixXd cov = 0.5 * (moments.second[0] + moments.second[0].transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.eigenvalues().minCoeff() < kCovEigenFloor) {
        const Eigen::VectorXd floored = es.eigenvalues().cwiseMax(kCovEigenFloor);
        cov = es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().transpose();
        cov = 0.5 * (cov + cov.transpose()).eval();
    }
    return cov;
}

Eigen::VectorXd update_lambda(const SmoothedMoments& moments,
                              const ImportanceState& importance,
                              double gamma2,
                              const Eigen::VectorXd& lambda_anchor) {
    const int T = moments.length();
    if (T < 2) throw ValidationError("update_lambda needs at least two samples");
    const auto p = moments.mean[0].size();
    const bool penalized = penalty_active(importance, gamma2);
    if (penalized && (importance.omega_lambda.size() != p || lambda_anchor.size() != p))
        throw ValidationError("importance state dimensions do not match the moments");

    Eigen::VectorXd lambda(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const auto sums = lambda_sums(moments, static_cast<int>(i));
        const double w = penalized ? gamma2 * importance.omega_lambda(i) : 0.0;
        const double anchor = penalized ? lambda_anchor(i) : 0.0;

        // Stationarity polynomial of the per-coordinate objective; constant
        // term carries the sign that makes the unpenalized case reduce to the
        // classical cubic condition.
        const std::array<double, 6> coeffs = {
            -2.0 * w * anchor - sums.cross,
            2.0 * w + sums.sq_prev + sums.sq_curr - static_cast<double>(T - 1),
            4.0 * w * anchor - sums.cross,
            static_cast<double>(T - 1) - 4.0 * w,
            -2.0 * w * anchor,
            2.0 * w,
        };

        std::vector<double> candidates = polynomial_real_roots(coeffs);
        std::erase_if(candidates, [](double r) { return r < -1e-9 || r > kLambdaUpper + 1e-9; });
        for (double& r : candidates) r = std::clamp(r, 0.0, kLambdaUpper);
        candidates.push_back(0.0);
        candidates.push_back(kLambdaUpper);
        std::sort(candidates.begin(), candidates.end());

        double best = candidates.front();
        double best_value = -std::numeric_limits<double>::infinity();
        for (double candidate : candidates) {
            const double value = lambda_coordinate_objective(
                candidate, sums.cross, sums.sq_curr, sums.sq_prev, T, w, anchor);
            if (value > best_value) {
                best_value = value;
                best = candidate;
            }
        }
        lambda(i) = best;
    }
    return lambda;
}

FitResult fit_mode(const Eigen::MatrixXd& data_raw,
                   const ImportanceState& importance,
                   const EmConfig& cfg,
                   int p) {
    const auto m = data_raw.rows();
    const auto T = data_raw.cols();
    if (!data_raw.allFinite()) throw ValidationError("training data contains non-finite entries");
    if (p < 1) throw ValidationError("latent dimension must be positive");
    if (T < 2 * p) throw ValidationError("fit_mode requires T >= 2p samples");
    if (cfg.max_iters < 1 || cfg.rel_tol <= 0.0 || cfg.gamma1 < 0.0 || cfg.gamma2 < 0.0)
        throw ValidationError("invalid EM configuration");
    if (importance.mode_count > 0 &&
        (importance.omega_v.rows() != m || importance.omega_lambda.size() != p ||
         importance.anchor_v.rows() != m || importance.anchor_v.cols() != p))
        throw ValidationError("importance state dimensions do not match data/p");

    FitResult result;
    result.standardizer = fit_standardizer(data_raw);
    const Eigen::MatrixXd data = result.standardizer.standardize(data_raw);
    ModelParameters params = initialize(data, p);

    const Eigen::VectorXd anchor_lambda =
        importance.mode_count > 0 ? importance.anchor_lambda : Eigen::VectorXd::Zero(p);

    FitReport report;
    double previous = -std::numeric_limits<double>::infinity();
    SmoothedMoments moments;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        const FilterTrace trace = forward_filter(params, data);
        const double objective = trace.log_likelihood - penalty_value(params, importance, cfg);
        if (!std::isfinite(objective))
            throw NumericalError("non-finite penalized objective at EM iteration " +
                                 std::to_string(iter));
        report.objectives.push_back(objective);
        report.iterations = iter;
        moments = backward_smooth(params, trace);

        if (iter > 1) {
            const double rel = std::abs(objective - previous) / std::max(1.0, std::abs(previous));
            if (rel < cfg.rel_tol) {
                report.converged = true;
                break;
            }
        }
        previous = objective;
        if (iter == cfg.max_iters) break;

        // Block updates in the order V -> Sigma_x -> Sigma_1 -> Lambda. The
        // emission solve keeps the previous iteration's noise and doubles the
        // penalty weight so it maximizes gamma1 * ||V - V*||^2 exactly.
        params.emission =
            solve_emission(moments, data, params.obs_noise_diag, importance, 2.0 * cfg.gamma1);
        params.obs_noise_diag = update_obs_noise(moments, data, params.emission);
        params.initial_cov = update_initial_cov(moments);
        params.transition_diag = update_lambda(moments, importance, cfg.gamma2, anchor_lambda);
    }

    if (!report.converged)
        report.warning = "EM did not converge within " + std::to_string(cfg.max_iters) +
                         " iterations; returning last iterate";

    result.params = std::move(params);
    result.moments = std::move(moments);
    result.report = std::move(report);
    return result;
}

}  // namespace psfa
