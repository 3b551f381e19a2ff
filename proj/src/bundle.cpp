#include "psfa/bundle.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "json_util.hpp"
#include "psfa/errors.hpp"

namespace psfa {

namespace {

using nlohmann::json;
using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::vector_from_json;
using detail::vector_to_json;

json config_to_json_value(const RunConfig& cfg) {
    return json{{"p", cfg.p},
                {"alpha", cfg.alpha},
                {"gamma1", cfg.em.gamma1},
                {"gamma2", cfg.em.gamma2},
                {"eta_v", cfg.ewc.eta_v},
                {"eta_lambda", cfg.ewc.eta_lambda},
                {"lambda_prior", cfg.ewc.lambda_prior},
                {"max_iters", cfg.em.max_iters},
                {"rel_tol", cfg.em.rel_tol},
                {"seed", cfg.seed},
                {"fim_samples", cfg.fim_samples}};
}

RunConfig config_from_json_value(const json& doc) {
    RunConfig cfg;
    cfg.p = doc.value("p", cfg.p);
    cfg.alpha = doc.value("alpha", cfg.alpha);
    cfg.em.gamma1 = doc.value("gamma1", cfg.em.gamma1);
    cfg.em.gamma2 = doc.value("gamma2", cfg.em.gamma2);
    cfg.ewc.eta_v = doc.value("eta_v", cfg.ewc.eta_v);
    cfg.ewc.eta_lambda = doc.value("eta_lambda", cfg.ewc.eta_lambda);
    cfg.ewc.lambda_prior = doc.value("lambda_prior", cfg.ewc.lambda_prior);
    cfg.em.max_iters = doc.value("max_iters", cfg.em.max_iters);
    cfg.em.rel_tol = doc.value("rel_tol", cfg.em.rel_tol);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.fim_samples = doc.value("fim_samples", cfg.fim_samples);

    if (cfg.p < 0) throw ValidationError("config: p must be nonnegative");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ValidationError("config: alpha must lie in (0,1)");
    if (cfg.em.gamma1 < 0.0 || cfg.em.gamma2 < 0.0)
        throw ValidationError("config: gamma weights must be nonnegative");
    if (cfg.ewc.eta_v < 0.0 || cfg.ewc.eta_lambda < 0.0 || cfg.ewc.lambda_prior < 0.0)
        throw ValidationError("config: eta/lambda_prior must be nonnegative");
    if (cfg.em.max_iters < 1) throw ValidationError("config: max_iters must be positive");
    if (cfg.em.rel_tol <= 0.0) throw ValidationError("config: rel_tol must be positive");
    if (cfg.fim_samples < 0) throw ValidationError("config: fim_samples must be nonnegative");
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& error) {
        throw ValidationError(std::string("config is not valid JSON: ") + error.what());
    }
    return config_from_json_value(doc);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const RunConfig& cfg) { return config_to_json_value(cfg).dump(2) + "\n"; }

std::string bundle_to_json(const ModelBundle& bundle) {
    json doc;
    doc["version"] = bundle.version;
    doc["parameters"] = {{"emission", matrix_to_json(bundle.params.emission)},
                         {"transition_diag", vector_to_json(bundle.params.transition_diag)},
                         {"obs_noise_diag", vector_to_json(bundle.params.obs_noise_diag)},
                         {"initial_cov", matrix_to_json(bundle.params.initial_cov)}};
    doc["standardizer"] = {{"mean", vector_to_json(bundle.standardizer.mean)},
                           {"stddev", vector_to_json(bundle.standardizer.stddev)}};
    doc["importance"] = {{"omega_v", matrix_to_json(bundle.importance.omega_v)},
                         {"omega_lambda", vector_to_json(bundle.importance.omega_lambda)},
                         {"anchor_v", matrix_to_json(bundle.importance.anchor_v)},
                         {"anchor_lambda", vector_to_json(bundle.importance.anchor_lambda)},
                         {"mode_count", bundle.importance.mode_count}};
    doc["monitor"] = {{"steady_gain", matrix_to_json(bundle.monitor.steady_gain)},
                      {"pred_err_cov", matrix_to_json(bundle.monitor.pred_err_cov)},
                      {"dyn_cov_diag", vector_to_json(bundle.monitor.dyn_cov_diag)},
                      {"thresholds",
                       {{"t2", bundle.monitor.thresholds.t2},
                        {"spe", bundle.monitor.thresholds.spe},
                        {"s2", bundle.monitor.thresholds.s2}}},
                      {"alpha", bundle.monitor.alpha},
                      {"build_note", bundle.monitor.build_note}};
    doc["provenance"] = {{"modes", bundle.modes_absorbed},
                         {"config", config_to_json_value(bundle.config)}};
    return doc.dump(2) + "\n";
}

ModelBundle bundle_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& error) {
        throw ValidationError(std::string("model bundle is not valid JSON: ") + error.what());
    }
    if (!doc.contains("version") || !doc["version"].is_string())
        throw ValidationError("model bundle is missing its version field");
    ModelBundle bundle;
    if (doc["version"].get<std::string>() != ModelBundle::kFormatVersion)
        throw ValidationError("unsupported model bundle version '" +
                              doc["version"].get<std::string>() + "' (expected " +
                              ModelBundle::kFormatVersion + ")");

    const json& params = doc.at("parameters");
    bundle.params.emission = matrix_from_json(params.at("emission"), "emission");
    bundle.params.transition_diag = vector_from_json(params.at("transition_diag"), "transition_diag");
    bundle.params.obs_noise_diag = vector_from_json(params.at("obs_noise_diag"), "obs_noise_diag");
    bundle.params.initial_cov = matrix_from_json(params.at("initial_cov"), "initial_cov");
    if (auto violation = validate(bundle.params))
        throw ValidationError("model bundle parameters invalid: " + *violation);

    const json& standardizer = doc.at("standardizer");
    bundle.standardizer.mean = vector_from_json(standardizer.at("mean"), "mean");
    bundle.standardizer.stddev = vector_from_json(standardizer.at("stddev"), "stddev");

    const json& importance = doc.at("importance");
    bundle.importance.omega_v = matrix_from_json(importance.at("omega_v"), "omega_v");
    bundle.importance.omega_lambda = vector_from_json(importance.at("omega_lambda"), "omega_lambda");
    bundle.importance.anchor_v = matrix_from_json(importance.at("anchor_v"), "anchor_v");
    bundle.importance.anchor_lambda =
        vector_from_json(importance.at("anchor_lambda"), "anchor_lambda");
    bundle.importance.mode_count = importance.at("mode_count").get<int>();

    const json& monitor = doc.at("monitor");
    bundle.monitor.params = bundle.params;
    bundle.monitor.standardizer = bundle.standardizer;
    bundle.monitor.steady_gain = matrix_from_json(monitor.at("steady_gain"), "steady_gain");
    bundle.monitor.pred_err_cov = matrix_from_json(monitor.at("pred_err_cov"), "pred_err_cov");
    bundle.monitor.dyn_cov_diag = vector_from_json(monitor.at("dyn_cov_diag"), "dyn_cov_diag");
    bundle.monitor.thresholds.t2 = monitor.at("thresholds").at("t2").get<double>();
    bundle.monitor.thresholds.spe = monitor.at("thresholds").at("spe").get<double>();
    bundle.monitor.thresholds.s2 = monitor.at("thresholds").at("s2").get<double>();
    bundle.monitor.alpha = monitor.at("alpha").get<double>();
    bundle.monitor.build_note = monitor.value("build_note", std::string{});

    const json& provenance = doc.at("provenance");
    for (const auto& mode : provenance.at("modes"))
        bundle.modes_absorbed.push_back(mode.get<std::string>());
    bundle.config = config_from_json_value(provenance.at("config"));
    return bundle;
}

void save_bundle(const std::string& path, const ModelBundle& bundle) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model bundle '" + path + "'");
    out << bundle_to_json(bundle);
    if (!out) throw IoError("failed writing model bundle '" + path + "'");
}

ModelBundle load_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model bundle '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return bundle_from_json(buffer.str());
}

namespace {

ModelBundle finish_bundle(FitResult fit,
                          const ImportanceState& prior_importance,
                          const Eigen::MatrixXd& data_raw,
                          const RunConfig& cfg,
                          std::vector<std::string> modes,
                          const std::string& mode_id) {
    Eigen::MatrixXd fim_v;
    Eigen::VectorXd fim_l;
    const Eigen::MatrixXd data = fit.standardizer.standardize(data_raw);
    if (cfg.fim_samples > 0) {
        const FilterTrace trace = forward_filter(fit.params, data);
        fim_v = fim_emission_sampled(fit.params, data, trace, cfg.fim_samples, cfg.seed);
        fim_l = fim_lambda_sampled(fit.params, trace, cfg.fim_samples, cfg.seed);
    } else {
        fim_v = fim_emission(fit.params, data, fit.moments);
        fim_l = fim_lambda(fit.params, fit.moments);
    }

    ModelBundle bundle;
    bundle.params = fit.params;
    bundle.standardizer = fit.standardizer;
    bundle.importance = absorb_mode(prior_importance, fit.params, fim_v, fim_l, cfg.ewc);
    bundle.monitor = build_monitor(fit.params, fit.standardizer, data_raw, cfg.alpha);
    bundle.modes_absorbed = std::move(modes);
    bundle.modes_absorbed.push_back(mode_id);
    bundle.config = cfg;
    return bundle;
}

}  // namespace

ModelBundle train_mode_bundle(const Eigen::MatrixXd& data_raw,
                              const RunConfig& cfg,
                              const std::string& mode_id) {
    const int p = cfg.p > 0 ? cfg.p : suggest_latent_dim(fit_standardizer(data_raw).standardize(data_raw));
    RunConfig used = cfg;
    used.p = p;
    const ImportanceState fresh =
        ImportanceState::fresh(static_cast<int>(data_raw.rows()), p);
    FitResult fit = fit_mode(data_raw, fresh, used.em, p);
    return finish_bundle(std::move(fit), fresh, data_raw, used, {}, mode_id);
}

ModelBundle update_mode_bundle(const ModelBundle& base,
                               const Eigen::MatrixXd& data_raw,
                               const RunConfig& cfg,
                               const std::string& mode_id) {
    RunConfig used = cfg;
    used.p = base.params.latent_dim();
    FitResult fit = fit_mode(data_raw, base.importance, used.em, used.p);
    return finish_bundle(std::move(fit), base.importance, data_raw, used, base.modes_absorbed,
                         mode_id);
}

}  // namespace psfa
