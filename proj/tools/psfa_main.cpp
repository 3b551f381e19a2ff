#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psfa/bundle.hpp"
#include "psfa/csv.hpp"
#include "psfa/errors.hpp"
#include "psfa/evaluation.hpp"
#include "psfa/monitoring.hpp"
#include "psfa/simulator.hpp"

namespace {

namespace fs = std::filesystem;

bool verbose_logging() {
    const char* level = std::getenv("PSFA_LOG");
    return level != nullptr && std::string(level) == "debug";
}

void log_debug(const std::string& message) {
    if (verbose_logging()) std::cerr << "[psfa] " << message << '\n';
}

std::vector<std::string> variable_names(const psfa::ScenarioSpec& scenario, Eigen::Index m) {
    if (!scenario.variables.empty()) return scenario.variables;
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < m; ++i) names.push_back("v" + std::to_string(i + 1));
    return names;
}

void write_decision_log(const std::string& path, const std::vector<psfa::Decision>& decisions) {
    std::ofstream out(path);
    if (!out) throw psfa::IoError("cannot write '" + path + "'");
    out << "sample,t2,spe,s2,t2_alarm,spe_alarm,s2_alarm,condition\n";
    for (std::size_t t = 0; t < decisions.size(); ++t) {
        const psfa::Decision& d = decisions[t];
        out << (t + 1) << ',';
        if (d.has_statistics)
            out << psfa::format_double(d.t2) << ',' << psfa::format_double(d.spe) << ','
                << psfa::format_double(d.s2);
        else
            out << ",,";
        out << ',' << (d.over_t2 ? 1 : 0) << ',' << (d.over_spe ? 1 : 0) << ','
            << (d.over_s2 ? 1 : 0) << ',' << psfa::to_string(d.label) << '\n';
    }
    if (!out) throw psfa::IoError("failed writing '" + path + "'");
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir, std::uint64_t seed) {
    const psfa::ScenarioSpec scenario = psfa::load_scenario(scenario_path);
    fs::create_directories(out_dir);
    const auto names = variable_names(scenario, scenario.modes.front().setpoints.size());
    for (std::size_t k = 0; k < scenario.modes.size(); ++k) {
        const psfa::ModeSpec& spec = scenario.modes[k];
        const psfa::ModeData data = psfa::generate_mode(spec, psfa::mode_seed(seed, static_cast<int>(k)));
        Eigen::MatrixXd test = data.test;
        if (spec.fault)
            test = psfa::inject_fault(test, *spec.fault, psfa::fault_seed(seed, static_cast<int>(k)));
        const std::string base = (fs::path(out_dir) / spec.name).string();
        psfa::write_csv(base + "_train.csv", names, data.train);
        psfa::write_csv(base + "_test.csv", names, test);
        log_debug("wrote " + base + "_train.csv and _test.csv");
    }
    return 0;
}

int cmd_train(const std::string& data_path,
              int p_override,
              const std::string& config_path,
              const std::string& out_path) {
    psfa::RunConfig cfg = psfa::load_config(config_path);
    if (p_override > 0) cfg.p = p_override;
    const psfa::CsvTable table = psfa::read_csv(data_path);
    const psfa::ModelBundle bundle =
        psfa::train_mode_bundle(table.data, cfg, fs::path(data_path).stem().string());
    psfa::save_bundle(out_path, bundle);
    log_debug("trained first mode from " + data_path);
    return 0;
}

int cmd_update(const std::string& model_path,
               const std::string& data_path,
               const std::string& config_path,
               const std::string& out_path) {
    const psfa::ModelBundle base = psfa::load_bundle(model_path);
    psfa::RunConfig cfg = psfa::load_config(config_path);
    const psfa::CsvTable table = psfa::read_csv(data_path);
    const psfa::ModelBundle bundle =
        psfa::update_mode_bundle(base, table.data, cfg, fs::path(data_path).stem().string());
    psfa::save_bundle(out_path, bundle);
    log_debug("updated model with " + data_path);
    return 0;
}

int cmd_monitor(const std::string& model_path,
                const std::string& stream_path,
                const std::string& out_path) {
    const psfa::ModelBundle bundle = psfa::load_bundle(model_path);
    const psfa::CsvTable table = psfa::read_csv(stream_path);
    if (table.data.rows() != bundle.params.obs_dim())
        throw psfa::ValidationError("stream has " + std::to_string(table.data.rows()) +
                                    " variables, model expects " +
                                    std::to_string(bundle.params.obs_dim()));
    write_decision_log(out_path, psfa::monitor_stream(bundle.monitor, table.data));
    return 0;
}

int cmd_evaluate(const std::string& scenario_path,
                 const std::string& config_path,
                 const std::string& out_dir) {
    const psfa::ScenarioSpec scenario = psfa::load_scenario(scenario_path);
    const psfa::RunConfig cfg = psfa::load_config(config_path);
    fs::create_directories(out_dir);
    const auto results = psfa::run_situation_matrix(scenario, cfg);
    psfa::write_scorecards_csv((fs::path(out_dir) / "scorecards.csv").string(), results);
    const std::string summary = psfa::format_summary(results);
    std::ofstream summary_file(fs::path(out_dir) / "summary.txt");
    if (!summary_file) throw psfa::IoError("cannot write summary");
    summary_file << summary;
    std::cout << summary;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continual-learning process monitoring with probabilistic slow features"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".", data_path, config_path, out_path;
    std::string model_path, stream_path;
    std::uint64_t seed = 0;
    int p_override = 0;

    auto* simulate = app.add_subcommand("simulate", "Generate per-mode train/test CSVs from a scenario");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--out-dir", out_dir, "Output directory")->required();
    simulate->add_option("--seed", seed, "Random seed");

    auto* train = app.add_subcommand("train", "Fit the first mode and write a model bundle");
    train->add_option("--data", data_path, "Training CSV")->required();
    train->add_option("--p", p_override, "Latent dimension (overrides config)");
    train->add_option("--config", config_path, "Config JSON file")->required();
    train->add_option("--out", out_path, "Output model bundle")->required();

    auto* update = app.add_subcommand("update", "Continually update a model bundle with a new mode");
    update->add_option("--model", model_path, "Input model bundle")->required();
    update->add_option("--data", data_path, "Training CSV of the new mode")->required();
    update->add_option("--config", config_path, "Config JSON file")->required();
    update->add_option("--out", out_path, "Output model bundle")->required();

    auto* monitor = app.add_subcommand("monitor", "Score a data stream and write a decision log");
    monitor->add_option("--model", model_path, "Model bundle")->required();
    monitor->add_option("--stream", stream_path, "Stream CSV")->required();
    monitor->add_option("--out", out_path, "Output decision CSV")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Run the sequential-mode situation matrix");
    evaluate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    evaluate->add_option("--config", config_path, "Config JSON file")->required();
    evaluate->add_option("--out-dir", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse diagnostic
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(scenario_path, out_dir, seed);
        if (train->parsed()) return cmd_train(data_path, p_override, config_path, out_path);
        if (update->parsed()) return cmd_update(model_path, data_path, config_path, out_path);
        if (monitor->parsed()) return cmd_monitor(model_path, stream_path, out_path);
        if (evaluate->parsed()) return cmd_evaluate(scenario_path, config_path, out_dir);
    } catch (const psfa::NumericalError& error) {
        std::cerr << "numerical error: " << error.what() << '\n';
        return 3;
    } catch (const psfa::ValidationError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    } catch (const psfa::IoError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
    return 1;
}
