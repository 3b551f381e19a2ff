#include "psfa/evaluation.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "psfa/csv.hpp"
#include "psfa/errors.hpp"

namespace psfa {

ScoreCard score(const std::vector<Decision>& decisions, int onset) {
    const int n = static_cast<int>(decisions.size());
    if (onset < 2 || onset > n)
        throw ValidationError("score: onset must leave nonempty normal and faulty segments");

    int normal_count = 0, faulty_count = 0;
    int far_t2 = 0, far_spe = 0, far_s2 = 0;
    int fdr_t2 = 0, fdr_spe = 0, fdr_s2 = 0;
    for (int t = 1; t <= n; ++t) {
        const Decision& d = decisions[t - 1];
        if (t < onset) {
            ++normal_count;
            far_t2 += d.over_t2;
            far_spe += d.over_spe;
            far_s2 += d.over_s2;
        } else {
            ++faulty_count;
            fdr_t2 += d.over_t2;
            fdr_spe += d.over_spe;
            fdr_s2 += d.over_s2;
        }
    }

    auto percent = [](int flagged, int total) {
        return 100.0 * static_cast<double>(flagged) / static_cast<double>(total);
    };
    ScoreCard card;
    card.far_t2 = percent(far_t2, normal_count);
    card.far_spe = percent(far_spe, normal_count);
    card.far_s2 = percent(far_s2, normal_count);
    card.fdr_t2 = percent(fdr_t2, faulty_count);
    card.fdr_spe = percent(fdr_spe, faulty_count);
    card.fdr_s2 = percent(fdr_s2, faulty_count);
    return card;
}

namespace {

struct PreparedMode {
    std::string name;
    Eigen::MatrixXd train;
    Eigen::MatrixXd faulty_test;
    int onset = 0;
};

SituationResult run_situation(int id,
                              const std::string& method,
                              const std::string& label,
                              const std::string& train_sources,
                              const ModelBundle& bundle,
                              const PreparedMode& mode) {
    SituationResult result;
    result.id = id;
    result.method = method;
    result.model_label = label;
    result.train_sources = train_sources;
    result.test_mode = mode.name;
    result.card = score(monitor_stream(bundle.monitor, mode.faulty_test), mode.onset);
    return result;
}

}  // namespace

std::vector<SituationResult> run_situation_matrix(const ScenarioSpec& scenario,
                                                  const RunConfig& cfg) {
    validate_scenario(scenario);
    if (scenario.modes.size() < 2)
        throw ValidationError("situation matrix needs at least two modes");
    const int n_modes = std::min<int>(3, static_cast<int>(scenario.modes.size()));

    std::vector<PreparedMode> modes(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        const ModeSpec& spec = scenario.modes[k];
        if (!spec.fault)
            throw ValidationError("mode '" + spec.name + "' needs a fault spec for evaluation");
        const ModeData data = generate_mode(spec, mode_seed(cfg.seed, k));
        modes[k].name = spec.name;
        modes[k].train = data.train;
        modes[k].faulty_test = inject_fault(data.test, *spec.fault, fault_seed(cfg.seed, k));
        modes[k].onset = spec.fault->onset;
    }

    // Continually updated chain: A absorbs mode 1, B = A + mode 2, D = B + mode 3.
    std::vector<ModelBundle> chain;
    chain.push_back(train_mode_bundle(modes[0].train, cfg, modes[0].name));
    for (int k = 1; k < n_modes; ++k)
        chain.push_back(update_mode_bundle(chain.back(), modes[k].train, cfg, modes[k].name));

    // Fresh single-mode baselines for modes 2 and 3 (C and E).
    std::vector<ModelBundle> fresh(n_modes);
    for (int k = 1; k < n_modes; ++k)
        fresh[k] = train_mode_bundle(modes[k].train, cfg, modes[k].name);

    std::vector<SituationResult> results;
    results.push_back(run_situation(1, "psfa", "A", modes[0].name, chain[0], modes[0]));
    results.push_back(
        run_situation(2, "psfa-ewc", "B", "A + " + modes[1].name, chain[1], modes[1]));
    results.push_back(run_situation(3, "psfa-ewc", "B", "-", chain[1], modes[0]));
    results.push_back(run_situation(4, "psfa", "C", modes[1].name, fresh[1], modes[1]));
    results.push_back(run_situation(5, "psfa", "C", "-", fresh[1], modes[0]));
    if (n_modes >= 3) {
        results.push_back(
            run_situation(6, "psfa-ewc", "D", "B + " + modes[2].name, chain[2], modes[2]));
        results.push_back(run_situation(7, "psfa-ewc", "D", "-", chain[2], modes[0]));
        results.push_back(run_situation(8, "psfa-ewc", "D", "-", chain[2], modes[1]));
        results.push_back(run_situation(9, "psfa", "E", modes[2].name, fresh[2], modes[2]));
        results.push_back(run_situation(10, "psfa", "E", "-", fresh[2], modes[0]));
        results.push_back(run_situation(11, "psfa", "E", "-", fresh[2], modes[1]));
    }
    return results;
}

void write_scorecards_csv(const std::string& path, const std::vector<SituationResult>& results) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "situation,method,model,training,test_mode,"
           "fdr_t2,far_t2,fdr_spe,far_spe,fdr_s2,far_s2\n";
    for (const SituationResult& r : results) {
        out << r.id << ',' << r.method << ',' << r.model_label << ',' << r.train_sources << ','
            << r.test_mode << ',' << format_double(r.card.fdr_t2) << ','
            << format_double(r.card.far_t2) << ',' << format_double(r.card.fdr_spe) << ','
            << format_double(r.card.far_spe) << ',' << format_double(r.card.fdr_s2) << ','
            << format_double(r.card.far_s2) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_summary(const std::vector<SituationResult>& results) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1);
    out << std::left << std::setw(10) << "situation" << std::setw(10) << "method" << std::setw(7)
        << "model" << std::setw(14) << "training" << std::setw(10) << "test";
    for (const char* column : {"T2 FDR", "T2 FAR", "SPE FDR", "SPE FAR", "S2 FDR", "S2 FAR"})
        out << std::right << std::setw(9) << column;
    out << '\n';
    for (const SituationResult& r : results) {
        out << std::left << std::setw(10) << r.id << std::setw(10) << r.method << std::setw(7)
            << r.model_label << std::setw(14) << r.train_sources << std::setw(10) << r.test_mode;
        out << std::right << std::setw(9) << r.card.fdr_t2 << std::setw(9) << r.card.far_t2
            << std::setw(9) << r.card.fdr_spe << std::setw(9) << r.card.far_spe << std::setw(9)
            << r.card.fdr_s2 << std::setw(9) << r.card.far_s2 << '\n';
    }
    return out.str();
}

}  // namespace psfa
