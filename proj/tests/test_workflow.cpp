// Copyright 2026 The lieopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "lieopt/errors.hpp"
#include "lieopt/workflow.hpp"
#include "scratch_dir.hpp"

using namespace lieopt;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const fs::path &p) {
    std::istringstream in(read_text(p));
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Trace lines with the wall-clock field removed.
std::vector<json> timeless_trace(const fs::path &p) {
    std::vector<json> out;
    for (const auto &line : lines_of(p)) {
        json j = json::parse(line);
        j.erase("wall_time");
        out.push_back(j);
    }
    return out;
}

PulseSchedule random_schedule(const RunSetup &s, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PulseSchedule p = PulseSchedule::with_drift(s.config.bins, s.config.duration(), s.model.generators.size(),
                                                s.model.generators.drift_indices());
    for (std::size_t k : s.model.generators.control_indices()) {
        for (Eigen::Index l = 0; l < p.amplitudes.rows(); ++l) p.amplitudes(l, static_cast<Eigen::Index>(k)) = u(rng);
    }
    return p;
}

}  // namespace

TEST(PrepareRun, StatePrepVectors) {
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 4, "problem": {"target": "G"}})"));
    EXPECT_EQ(s.basis().size(), 45u);
    EXPECT_DOUBLE_EQ(s.initial.squaredNorm(), 4.0);
    EXPECT_DOUBLE_EQ(s.target.squaredNorm(), 4.0);
    ASSERT_EQ(s.objective.pairs.size(), 1u);
    EXPECT_DOUBLE_EQ(s.objective.pairs[0].weight, 0.25);
    EXPECT_FALSE(s.gate);
    EXPECT_FALSE(s.adiabatic_error);
    EXPECT_TRUE(s.staged());
}

TEST(PrepareRun, AdiabaticTargetCarriesError) {
    const RunSetup s = prepare_run(
        RunConfig::parse(R"({"n": 4, "problem": {"target": "D"}, "adiabatic": {"duration_tau": 100}})"));
    ASSERT_TRUE(s.adiabatic_error);
    ASSERT_TRUE(s.hold_time);
    EXPECT_GE(*s.hold_time, 50 * kTauG);
    EXPECT_LE(*s.hold_time, 100 * kTauG);
    EXPECT_LT(*s.adiabatic_error, 1e-2);
    EXPECT_NEAR(s.target.norm(), 2.0, 1e-9);
}

TEST(PrepareRun, GateSets) {
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 6, "problem": {"type": "gate", "target": "U_C"}})"));
    ASSERT_TRUE(s.gate);
    EXPECT_EQ(s.gate->size(), 5u);
    EXPECT_EQ(s.full_gate->size(), 12u);
    EXPECT_EQ(s.objective.pairs.size(), 5u);
}

TEST(PrepareRun, UsesCache) {
    ScratchDir dir;
    AlgebraCache cache(dir.path());
    const RunConfig c = RunConfig::parse(R"({"n": 4, "problem": {"target": "C"}})");
    EXPECT_FALSE(prepare_run(c, &cache).cache_hit);
    EXPECT_TRUE(prepare_run(c, &cache).cache_hit);
}

TEST(Diagnose, BoundDeviationAtOptimum) {
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 4, "problem": {"target": "C"}})"));
    const PulseSchedule p = random_schedule(s, 3);
    const Diagnostics d = diagnose(s, p);
    ASSERT_TRUE(d.bound);
    ASSERT_TRUE(d.deviation);
    EXPECT_GT(d.value, 0.0);
    EXPECT_GE(*d.bound, 0.0);
    EXPECT_NEAR(*d.deviation, std::abs(1.0 - 2.0 * *d.bound / (4.0 * d.value)), 1e-12);
    EXPECT_EQ(json::parse(d.to_json())["gap"], 2.0);
}

TEST(VerifyRun, ValidityHoldsForArbitraryPulses) {
    for (const char *target : {"G", "C"}) {
        for (std::size_t n : {3, 4, 5}) {
            const RunSetup s = prepare_run(RunConfig::parse(
                "{\"n\": " + std::to_string(n) + ", \"problem\": {\"target\": \"" + target + "\"}}"));
            for (std::uint32_t seed = 0; seed < 3; ++seed) {
                const VerificationReport r = verify_run(s, random_schedule(s, seed));
                EXPECT_TRUE(r.passed()) << target << n << ' ' << r.to_json();
                ASSERT_TRUE(r.dense_infidelity);
                EXPECT_LE(*r.dense_infidelity, *r.diagnostics.bound + kBoundSlack);
                EXPECT_LT(*r.reconstruction_error, kReconstructionTolerance);
            }
        }
    }
}

TEST(VerifyRun, GateReconstructionCoversEveryTrajectory) {
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 4, "problem": {"type": "gate", "target": "U_G"}})"));
    const VerificationReport r = verify_run(s, random_schedule(s, 1));
    ASSERT_TRUE(r.dense_infidelity);
    ASSERT_TRUE(r.reconstruction_error);
    EXPECT_LT(*r.reconstruction_error, kReconstructionTolerance);
    EXPECT_TRUE(r.diagnostics.full_value);
}

TEST(RunOptimization, WritesArtifactsWithDeclaredShape) {
    ScratchDir dir;
    const RunSetup s = prepare_run(RunConfig::parse(
        R"({"n": 5, "problem": {"target": "G"}, "schedule": {"duration_tau": 1.25, "bins": 40}})"));
    const RunPaths paths{dir.path()};
    const RunOutcome o = run_optimization(s, paths);
    EXPECT_TRUE(o.result.reached_threshold);
    PulseMetadata meta;
    const PulseSchedule p = load_matching_pulse(s, paths.pulse(), &meta);
    EXPECT_EQ(p.bins(), 40u);
    EXPECT_DOUBLE_EQ(p.duration(), 1.25 * kTauG);
    EXPECT_EQ(meta.config_hash, s.config.hash());
    EXPECT_TRUE(fs::exists(paths.plot()));
    EXPECT_EQ(lines_of(paths.trace()).size(), o.result.evaluations);
    const json diag = json::parse(read_text(paths.diagnostics()));
    EXPECT_EQ(diag["config_hash"], s.config.hash());
    EXPECT_LT(diag["J"].get<double>(), 1e-4);
    EXPECT_EQ(RunConfig::parse(read_text(paths.resolved_config())).hash(), s.config.hash());
}

TEST(RunOptimization, SameSeedReproducesTrace) {
    ScratchDir dir;
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 5, "problem": {"target": "G"}, "seed": 4})"));
    run_optimization(s, RunPaths{dir.path() / "a"});
    run_optimization(s, RunPaths{dir.path() / "b"});
    EXPECT_EQ(timeless_trace(dir.path() / "a" / "trace.jsonl"), timeless_trace(dir.path() / "b" / "trace.jsonl"));
    EXPECT_EQ(read_text(dir.path() / "a" / "pulse.csv"), read_text(dir.path() / "b" / "pulse.csv"));
}

TEST(RunOptimization, ResumesFromLatestCheckpoint) {
    ScratchDir dir;
    const RunSetup s = prepare_run(RunConfig::parse(
        R"({"n": 5, "problem": {"target": "C"},
            "optimizer": {"max_evals": 30, "restarts": 1, "threshold": 1e-14, "checkpoint_every": 10}})"));
    const RunPaths paths{dir.path()};
    const RunOutcome first = run_optimization(s, paths);
    ASSERT_TRUE(fs::exists(paths.latest_checkpoint()));
    const std::size_t lines = lines_of(paths.trace()).size();
    fs::remove(paths.pulse());
    const fs::path latest = paths.checkpoints() / read_text(paths.latest_checkpoint());
    PulseMetadata meta;
    load_matching_pulse(s, latest, &meta);

    const RunOutcome again = run_optimization(s, paths, true);
    EXPECT_TRUE(again.resumed);
    EXPECT_EQ(to_string(again.result.stages.front().stage), meta.stage);
    EXPECT_LE(again.result.value, meta.value);
    EXPECT_EQ(lines_of(paths.trace()).size(), lines + again.result.evaluations);
    EXPECT_LE(again.result.value, first.result.value * (1 + 1e-12));
}

TEST(RunOptimization, RefusesMismatchedConfigs) {
    ScratchDir dir;
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 5, "problem": {"target": "G"}})"));
    const RunPaths paths{dir.path()};
    run_optimization(s, paths);
    const RunSetup other = prepare_run(RunConfig::parse(R"({"n": 5, "problem": {"target": "G"}, "seed": 2})"));
    EXPECT_THROW(load_matching_pulse(other, paths.pulse()), IntegrityError);
    EXPECT_THROW(run_optimization(other, paths, true), ConfigError);
}

TEST(PrepareRun, TargetOutsideTheAlgebraIsRejected) {
    EXPECT_THROW(prepare_run(RunConfig::parse(R"({"model": "comb", "n": 4, "problem": {"target": "G"}})")),
                 MembershipError);
}

TEST(RunOptimization, SmoothingPassIsRecorded) {
    ScratchDir dir;
    const RunSetup s = prepare_run(RunConfig::parse(R"({"n": 5, "problem": {"target": "G"}, "smoothing_window": 3})"));
    const RunOutcome o = run_optimization(s, RunPaths{dir.path()});
    ASSERT_TRUE(o.smoothing);
    EXPECT_LT(o.result.value, 1e-4);
    EXPECT_TRUE(json::parse(read_text(dir.path() / "diagnostics.json")).contains("smoothing"));
}
