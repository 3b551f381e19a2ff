#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "psfa/errors.hpp"
#include "psfa/evaluation.hpp"

using psfa::Decision;
using psfa::ScoreCard;

namespace {

Decision flagged(bool t2, bool spe, bool s2) {
    Decision d;
    d.over_t2 = t2;
    d.over_spe = spe;
    d.over_s2 = s2;
    d.has_statistics = true;
    return d;
}

psfa::ScenarioSpec two_mode_scenario(bool identical) {
    psfa::ScenarioSpec scenario;
    scenario.version = 1;
    scenario.name = "synthetic";
    for (int k = 0; k < 2; ++k) {
        psfa::ModeSpec mode;
        mode.name = "mode" + std::to_string(k + 1);
        mode.setpoints = Eigen::VectorXd::Constant(4, 5.0);
        if (!identical && k == 1) mode.setpoints << 8.0, 3.0, 6.0, 4.0;
        mode.true_emission = Eigen::MatrixXd(4, 1);
        mode.true_emission << 0.3, 0.2, -0.25, 0.15;
        mode.true_lambda = Eigen::VectorXd::Constant(1, identical ? 0.8 : (k == 0 ? 0.5 : 0.92));
        mode.true_obs_noise = Eigen::VectorXd::Constant(4, 0.0025);
        mode.n_train = 1000;
        mode.n_test = 5000;
        psfa::FaultSpec fault;
        fault.variable_index = 0;
        fault.onset = 4001;
        fault.amplitude = 0.4;
        fault.kind = psfa::FaultSpec::Kind::AdditiveRandom;
        mode.fault = fault;
        scenario.modes.push_back(std::move(mode));
    }
    return scenario;
}

}  // namespace

TEST_CASE("score handles the all-quiet and all-alarm extremes") {
    std::vector<Decision> quiet(100), loud(100);
    for (auto& d : quiet) d = flagged(false, false, false);
    for (auto& d : loud) d = flagged(true, true, true);

    const ScoreCard quiet_card = psfa::score(quiet, 51);
    CHECK(quiet_card.fdr_t2 == 0.0);
    CHECK(quiet_card.far_t2 == 0.0);
    CHECK(quiet_card.fdr_s2 == 0.0);

    const ScoreCard loud_card = psfa::score(loud, 51);
    CHECK(loud_card.fdr_t2 == 100.0);
    CHECK(loud_card.far_spe == 100.0);
    CHECK(loud_card.fdr_s2 == 100.0);
}

TEST_CASE("score computes the stated ratios") {
    // 500 normal samples with 5 alarms, 500 faulty with 450 alarms.
    std::vector<Decision> decisions(1000);
    for (int t = 0; t < 1000; ++t) {
        const bool alarm = (t < 500) ? (t % 100 == 0) : (t < 950);
        decisions[t] = flagged(alarm, alarm, alarm);
    }
    const ScoreCard card = psfa::score(decisions, 501);
    CHECK(card.far_t2 == doctest::Approx(1.0));
    CHECK(card.fdr_t2 == doctest::Approx(90.0));
    CHECK(card.far_s2 == doctest::Approx(1.0));
    CHECK(card.fdr_spe == doctest::Approx(90.0));
}

TEST_CASE("score is permutation-invariant within each segment") {
    auto rng = oracle::make_rng(81);
    std::vector<Decision> decisions(300);
    for (auto& d : decisions)
        d = flagged(oracle::uniform(rng, 0, 1) < 0.3, oracle::uniform(rng, 0, 1) < 0.5,
                    oracle::uniform(rng, 0, 1) < 0.1);
    const int onset = 180;
    const ScoreCard base = psfa::score(decisions, onset);

    std::shuffle(decisions.begin(), decisions.begin() + onset - 1, rng);
    std::shuffle(decisions.begin() + onset - 1, decisions.end(), rng);
    const ScoreCard shuffled = psfa::score(decisions, onset);
    CHECK(base.fdr_t2 == shuffled.fdr_t2);
    CHECK(base.far_t2 == shuffled.far_t2);
    CHECK(base.fdr_spe == shuffled.fdr_spe);
    CHECK(base.far_spe == shuffled.far_spe);
    CHECK(base.fdr_s2 == shuffled.fdr_s2);
    CHECK(base.far_s2 == shuffled.far_s2);
}

TEST_CASE("score rejects empty segments") {
    std::vector<Decision> decisions(10);
    CHECK_THROWS_AS(psfa::score(decisions, 1), psfa::ValidationError);
    CHECK_THROWS_AS(psfa::score(decisions, 11), psfa::ValidationError);
    CHECK_THROWS_AS(psfa::score({}, 1), psfa::ValidationError);
}

TEST_CASE("identical modes score alike within and across modes") {
    const psfa::ScenarioSpec scenario = two_mode_scenario(/*identical=*/true);
    psfa::RunConfig cfg;
    cfg.p = 1;
    cfg.seed = 17;
    cfg.em.gamma1 = 10.0;
    cfg.em.gamma2 = 10.0;
    const auto results = psfa::run_situation_matrix(scenario, cfg);
    REQUIRE(results.size() == 5);

    // Situation 2 is the updated model on its own mode, situation 3 the same
    // model on the earlier (statistically identical) mode.
    const ScoreCard& own = results[1].card;
    const ScoreCard& other = results[2].card;
    CHECK(std::abs(own.far_t2 - other.far_t2) < 2.0);
    CHECK(std::abs(own.far_spe - other.far_spe) < 2.0);
    CHECK(std::abs(own.far_s2 - other.far_s2) < 2.0);
}

TEST_CASE("zero-weight continual run reproduces the fresh baselines exactly") {
    const psfa::ScenarioSpec scenario = two_mode_scenario(/*identical=*/false);
    psfa::RunConfig cfg;
    cfg.p = 1;
    cfg.seed = 23;
    cfg.em.gamma1 = 0.0;
    cfg.em.gamma2 = 0.0;
    cfg.ewc.eta_v = 0.0;
    cfg.ewc.eta_lambda = 0.0;
    cfg.ewc.lambda_prior = 0.0;
    const auto results = psfa::run_situation_matrix(scenario, cfg);
    REQUIRE(results.size() == 5);

    // With zero importance the updated model B and the fresh model C are the
    // same fit, so situations 2/4 and 3/5 coincide exactly.
    CHECK(results[1].card.fdr_t2 == results[3].card.fdr_t2);
    CHECK(results[1].card.far_t2 == results[3].card.far_t2);
    CHECK(results[1].card.fdr_spe == results[3].card.fdr_spe);
    CHECK(results[1].card.far_spe == results[3].card.far_spe);
    CHECK(results[1].card.fdr_s2 == results[3].card.fdr_s2);
    CHECK(results[1].card.far_s2 == results[3].card.far_s2);
    CHECK(results[2].card.fdr_s2 == results[4].card.fdr_s2);
    CHECK(results[2].card.far_s2 == results[4].card.far_s2);
}

TEST_CASE("continual model forgets less than the fresh baseline on the earlier mode") {
    const psfa::ScenarioSpec scenario =
        psfa::load_scenario(std::string(PSFA_SCENARIO_DIR) + "/two_mode.json");
    psfa::RunConfig cfg;
    cfg.p = 2;
    cfg.seed = 5;
    cfg.em.gamma1 = 1000.0;
    cfg.em.gamma2 = 1000.0;
    const auto results = psfa::run_situation_matrix(scenario, cfg);
    REQUIRE(results.size() == 5);

    const ScoreCard& ewc_on_mode1 = results[2].card;    // situation 3: B on mode 1
    const ScoreCard& fresh_on_mode1 = results[4].card;  // situation 5: C on mode 1
    CHECK(ewc_on_mode1.far_s2 < fresh_on_mode1.far_s2);
    CHECK(ewc_on_mode1.fdr_s2 >= fresh_on_mode1.fdr_s2);
}

TEST_CASE("three-mode scenarios expand to the full situation table") {
    const psfa::ScenarioSpec scenario =
        psfa::load_scenario(std::string(PSFA_SCENARIO_DIR) + "/case1.json");
    psfa::RunConfig cfg;
    cfg.p = 2;
    cfg.seed = 3;
    cfg.em.gamma1 = 50.0;
    cfg.em.gamma2 = 50.0;
    const auto results = psfa::run_situation_matrix(scenario, cfg);
    REQUIRE(results.size() == 11);
    CHECK(results[5].model_label == "D");
    CHECK(results[5].test_mode == "mode3");
    CHECK(results[10].model_label == "E");
    CHECK(results[10].test_mode == "mode2");
    for (const auto& result : results) {
        for (double value : {result.card.fdr_t2, result.card.far_t2, result.card.fdr_spe,
                             result.card.far_spe, result.card.fdr_s2, result.card.far_s2}) {
            CHECK(value >= 0.0);
            CHECK(value <= 100.0);
        }
    }
}

TEST_CASE("scorecards serialize to csv with one row per situation") {
    const psfa::ScenarioSpec scenario = two_mode_scenario(/*identical=*/true);
    psfa::RunConfig cfg;
    cfg.p = 1;
    cfg.seed = 9;
    const auto results = psfa::run_situation_matrix(scenario, cfg);
    const std::string path = "/tmp/psfa_test_scorecards.csv";
    psfa::write_scorecards_csv(path, results);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    int lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 1 + static_cast<int>(results.size()));

    const std::string summary = psfa::format_summary(results);
    CHECK(summary.find("psfa-ewc") != std::string::npos);
    CHECK(summary.find("S2 FAR") != std::string::npos);
}
