#pragma once

#include <string>
#include <vector>

#include "psfa/bundle.hpp"
#include "psfa/monitoring.hpp"
#include "psfa/simulator.hpp"

namespace psfa {

/// Per-statistic detection and false-alarm rates, in percent.
struct ScoreCard {
    double fdr_t2 = 0.0;
    double far_t2 = 0.0;
    double fdr_spe = 0.0;
    double far_spe = 0.0;
    double fdr_s2 = 0.0;
    double far_s2 = 0.0;
};

/// Splits a decision log at a 1-based fault onset: FDR is the flagged
/// fraction of samples at or after the onset, FAR the flagged fraction
/// before it, independently per statistic.
ScoreCard score(const std::vector<Decision>& decisions, int onset);

struct SituationResult {
    int id = 0;
    std::string method;         // "psfa" or "psfa-ewc"
    std::string model_label;    // A, B, C, ...
    std::string train_sources;  // e.g. "mode1" or "A + mode2"
    std::string test_mode;
    ScoreCard card;
};

/// Sequential-mode experiment: trains the continually-updated model across
/// the scenario's modes, trains fresh single-mode baselines, and scores every
/// model/test-stream pairing of the situation table (within-mode and
/// backward-transfer tests for the updated chain, cross-mode tests for the
/// baselines). Supports two- and three-mode scenarios.
std::vector<SituationResult> run_situation_matrix(const ScenarioSpec& scenario,
                                                  const RunConfig& cfg);

void write_scorecards_csv(const std::string& path, const std::vector<SituationResult>& results);

std::string format_summary(const std::vector<SituationResult>& results);

}  // namespace psfa
