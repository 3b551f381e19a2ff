#include "psfa/model.hpp"

#include <cmath>
#include <numbers>

#include "psfa/errors.hpp"

namespace psfa {

namespace {

constexpr double kInitNoiseFloor = 1e-4;
constexpr double kStddevFloor = 1e-12;

// Sample covariance with the unbiased 1/(T-1) normalization.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data) {
    const auto T = data.cols();
    Eigen::VectorXd mean = data.rowwise().mean();
    Eigen::MatrixXd centered = data.colwise() - mean;
    return centered * centered.transpose() / static_cast<double>(T - 1);
}

}  // namespace

Eigen::MatrixXd ModeStandardizer::standardize(const Eigen::MatrixXd& raw) const {
    return (raw.colwise() - mean).array().colwise() / stddev.array();
}

Eigen::MatrixXd ModeStandardizer::destandardize(const Eigen::MatrixXd& standardized) const {
    return ((standardized.array().colwise() * stddev.array()).matrix().colwise() + mean);
}

Eigen::VectorXd ModeStandardizer::standardize(const Eigen::VectorXd& raw) const {
    return ((raw - mean).array() / stddev.array()).matrix();
}

ModeStandardizer fit_standardizer(const Eigen::MatrixXd& raw) {
    if (raw.cols() < 2) throw ValidationError("standardizer needs at least 2 samples");
    ModeStandardizer s;
    s.mean = raw.rowwise().mean();
    Eigen::MatrixXd centered = raw.colwise() - s.mean;
    s.stddev = (centered.array().square().rowwise().sum() / static_cast<double>(raw.cols() - 1))
                   .sqrt()
                   .max(kStddevFloor)
                   .matrix();
    return s;
}

std::optional<std::string> validate(const ModelParameters& params) {
    const auto m = params.emission.rows();
    const auto p = params.emission.cols();
    if (m < 1 || p < 1) return "emission must be a nonempty m x p matrix";
    if (params.transition_diag.size() != p) return "transition_diag length must equal p";
    if (params.obs_noise_diag.size() != m) return "obs_noise_diag length must equal m";
    if (params.initial_cov.rows() != p || params.initial_cov.cols() != p)
        return "initial_cov must be p x p";
    if (!params.emission.allFinite() || !params.transition_diag.allFinite() ||
        !params.obs_noise_diag.allFinite() || !params.initial_cov.allFinite())
        return "parameters must be finite";
    for (Eigen::Index i = 0; i < p; ++i) {
        const double l = params.transition_diag(i);
        if (!(l >= 0.0 && l < 1.0)) return "transition_diag out of [0,1)";
    }
    if ((params.obs_noise_diag.array() <= 0.0).any()) return "obs_noise_diag must be positive";
    if ((params.initial_cov - params.initial_cov.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        return "initial_cov must be symmetric";
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(params.initial_cov);
    if (es.eigenvalues().minCoeff() <= 0.0) return "initial_cov must be positive-definite";
    return std::nullopt;
}

ModelParameters initialize(const Eigen::MatrixXd& data, int p) {
    const auto m = data.rows();
    const auto T = data.cols();
    if (p < 1 || p >= m + 1) throw ValidationError("latent dimension must satisfy 1 <= p <= m");
    if (T < 2 * p) throw ValidationError("initialize requires T >= 2p samples");

    Eigen::MatrixXd cov = sample_covariance(data);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of sample covariance failed");

    ModelParameters params;
    params.emission.resize(m, p);
    // Eigenvalues come back ascending; take the top p loadings e_j * sqrt(d_j)
    // so V V^T reproduces the rank-p spectral reconstruction.
    for (int j = 0; j < p; ++j) {
        const auto idx = m - 1 - j;
        const double value = std::max(es.eigenvalues()(idx), 0.0);
        Eigen::VectorXd direction = es.eigenvectors().col(idx);
        Eigen::Index argmax;
        direction.cwiseAbs().maxCoeff(&argmax);
        if (direction(argmax) < 0.0) direction = -direction;  // deterministic sign
        params.emission.col(j) = direction * std::sqrt(value);
    }
    params.transition_diag = Eigen::VectorXd::Constant(p, 0.5);
    params.obs_noise_diag =
        (cov.diagonal() - params.emission.rowwise().squaredNorm()).cwiseMax(kInitNoiseFloor);
    params.initial_cov = Eigen::MatrixXd::Identity(p, p);
    return params;
}

int suggest_latent_dim(const Eigen::MatrixXd& data, double target) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sample_covariance(data));
    Eigen::VectorXd values = es.eigenvalues().cwiseMax(0.0);
    const double total = values.sum();
    if (total <= 0.0) return 1;
    double cumulative = 0.0;
    for (Eigen::Index j = values.size() - 1; j >= 0; --j) {
        cumulative += values(j);
        if (cumulative >= target * total) return static_cast<int>(values.size() - j);
    }
    return static_cast<int>(values.size());
}

double complete_log_likelihood(const ModelParameters& params,
                               const Eigen::MatrixXd& data,
                               const Eigen::MatrixXd& latents) {
    if (auto violation = validate(params)) throw ValidationError(*violation);
    const auto m = params.obs_dim();
    const auto p = params.latent_dim();
    const auto T = data.cols();
    if (latents.cols() != T) throw ValidationError("data and latents must have equal sample counts");
    if (data.rows() != m || latents.rows() != p)
        throw ValidationError("data/latents dimensions do not match parameters");
    if (T < 1) throw ValidationError("need at least one sample");

    const Eigen::VectorXd state_noise = params.state_noise_diag();
    const Eigen::LLT<Eigen::MatrixXd> init_llt(params.initial_cov);

    double acc = static_cast<double>(m + p) * static_cast<double>(T) * std::log(2.0 * std::numbers::pi);
    acc += static_cast<double>(T - 1) * state_noise.array().log().sum();
    acc += static_cast<double>(T) * params.obs_noise_diag.array().log().sum();
    acc += 2.0 * Eigen::MatrixXd(init_llt.matrixL()).diagonal().array().log().sum();
    acc += latents.col(0).dot(init_llt.solve(latents.col(0)));
    for (Eigen::Index t = 0; t < T; ++t) {
        const Eigen::VectorXd residual = data.col(t) - params.emission * latents.col(t);
        acc += (residual.array().square() / params.obs_noise_diag.array()).sum();
    }
    for (Eigen::Index t = 1; t < T; ++t) {
        const Eigen::VectorXd innovation =
            latents.col(t) - params.transition_diag.asDiagonal() * latents.col(t - 1);
        acc += (innovation.array().square() / state_noise.array()).sum();
    }
    return -0.5 * acc;
}

}  // namespace psfa
