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

#include "lieopt/config.hpp"

#include <json.hpp>
#include <set>

#include "lieopt/errors.hpp"
#include "lieopt/hash.hpp"
#include "lieopt/io.hpp"

namespace lieopt {

using nlohmann::json;

std::string to_string(ProblemType type) { return type == ProblemType::gate ? "gate" : "state-prep"; }

std::pair<double, std::size_t> default_schedule(ProblemType type, TargetId target, std::size_t n) {
    const double nd = static_cast<double>(n);
    if (type == ProblemType::state_prep) return {target == TargetId::d ? nd / 2 : nd / 4, 10 * n};
    if (target == TargetId::ghz) return {nd, 20 * n};
    return {1.0, 10 * n};
}

namespace {

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json &obj, const char *key, T &out, const std::string &where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(std::string("invalid value for '") + key + "' in " + where);
    }
}

}  // namespace

RunConfig RunConfig::parse(const std::string &json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc, {"model", "n", "seed", "output_dir", "problem", "schedule", "optimizer", "adiabatic", "propagation",
                     "staged", "smoothing_window", "max_dim"},
               "config");
    RunConfig c;
    std::string model = "chain";
    read(doc, "model", model, "config");
    c.model = parse_model_id(model);
    if (!doc.contains("n")) throw ConfigError("config needs 'n'");
    read(doc, "n", c.n, "config");
    read(doc, "seed", c.seed, "config");
    read(doc, "output_dir", c.output_dir, "config");
    read(doc, "staged", c.staged, "config");
    read(doc, "smoothing_window", c.smoothing_window, "config");
    read(doc, "max_dim", c.max_dim, "config");

    if (!doc.contains("problem")) throw ConfigError("config needs 'problem'");
    const json &prob = doc["problem"];
    check_keys(prob, {"type", "target", "theta", "mode"}, "problem");
    std::string type = "state-prep", target;
    read(prob, "type", type, "problem");
    if (type == "state-prep" || type == "state_prep") {
        c.problem = ProblemType::state_prep;
    } else if (type == "gate") {
        c.problem = ProblemType::gate;
    } else {
        throw ConfigError("unknown problem type '" + type + "'");
    }
    if (!prob.contains("target")) throw ConfigError("problem needs 'target'");
    read(prob, "target", target, "problem");
    c.target = parse_target_id(target);
    read(prob, "theta", c.theta, "problem");
    if (prob.contains("mode")) {
        std::string mode;
        read(prob, "mode", mode, "problem");
        c.gate_mode = parse_gate_mode(mode);
    }
    if (c.problem == ProblemType::state_prep && (prob.contains("theta") || prob.contains("mode"))) {
        throw ConfigError("'theta' and 'mode' apply to gate problems only");
    }

    auto [duration, bins] = default_schedule(c.problem, c.target, c.n);
    c.duration_tau = duration;
    c.bins = bins;
    if (doc.contains("schedule")) {
        const json &s = doc["schedule"];
        check_keys(s, {"duration_tau", "bins"}, "schedule");
        read(s, "duration_tau", c.duration_tau, "schedule");
        read(s, "bins", c.bins, "schedule");
    }
    if (!(c.duration_tau > 0.0) || c.bins == 0) throw ConfigError("schedule needs a positive duration and bins >= 1");

    c.optimizer.seed = c.seed;
    if (doc.contains("optimizer")) {
        const json &o = doc["optimizer"];
        check_keys(o, {"max_evals", "restarts", "perturbation", "initial_noise", "threshold", "optimize_duration",
                       "duration_step", "memory", "grad_tol", "amplitude_bound", "gradient", "checkpoint_every",
                       "plateau_tolerance"},
                   "optimizer");
        auto &oc = c.optimizer;
        read(o, "max_evals", oc.max_evals, "optimizer");
        read(o, "restarts", oc.restarts, "optimizer");
        read(o, "perturbation", oc.perturbation, "optimizer");
        read(o, "initial_noise", oc.initial_noise, "optimizer");
        read(o, "threshold", oc.threshold, "optimizer");
        read(o, "optimize_duration", oc.optimize_duration, "optimizer");
        read(o, "duration_step", oc.duration_step, "optimizer");
        read(o, "memory", oc.memory, "optimizer");
        read(o, "grad_tol", oc.grad_tol, "optimizer");
        read(o, "checkpoint_every", oc.checkpoint_every, "optimizer");
        read(o, "plateau_tolerance", oc.plateau_tolerance, "optimizer");
        if (o.contains("amplitude_bound") && !o["amplitude_bound"].is_null()) {
            double b = 0.0;
            read(o, "amplitude_bound", b, "optimizer");
            oc.amplitude_bound = b;
        }
        if (o.contains("gradient")) {
            std::string g;
            read(o, "gradient", g, "optimizer");
            oc.gradient = parse_gradient_method(g);
        }
    }
    c.optimizer.validate();

    if (doc.contains("adiabatic")) {
        const json &a = doc["adiabatic"];
        check_keys(a, {"duration_tau", "steps"}, "adiabatic");
        read(a, "duration_tau", c.adiabatic.duration_tau, "adiabatic");
        read(a, "steps", c.adiabatic.steps, "adiabatic");
    }
    c.adiabatic.resolved_steps();

    if (doc.contains("propagation")) {
        const json &p = doc["propagation"];
        check_keys(p, {"dense_threshold", "krylov_tol", "max_krylov", "substeps"}, "propagation");
        read(p, "dense_threshold", c.propagation.dense_threshold, "propagation");
        read(p, "krylov_tol", c.propagation.expv.tol, "propagation");
        read(p, "max_krylov", c.propagation.expv.max_krylov, "propagation");
        read(p, "substeps", c.propagation.substeps, "propagation");
    }
    if (!(c.propagation.expv.tol > 0.0) || c.propagation.expv.max_krylov < 2 || c.propagation.substeps < 1) {
        throw ConfigError("invalid propagation settings");
    }
    // Validates n against the model.
    make_model(c.model, c.n);
    return c;
}

RunConfig RunConfig::load(const std::string &path) { return parse(read_text(path)); }

std::string RunConfig::to_json() const {
    const auto &o = optimizer;
    json problem_json = {{"type", to_string(problem)}, {"target", to_string(target)}};
    if (problem == ProblemType::gate) {
        problem_json["theta"] = theta;
        problem_json["mode"] = to_string(gate_mode);
    }
    json doc = {
        {"model", to_string(model)},
        {"n", n},
        {"seed", seed},
        {"output_dir", output_dir},
        {"staged", staged},
        {"smoothing_window", smoothing_window},
        {"max_dim", max_dim},
        {"problem", problem_json},
        {"schedule", {{"duration_tau", duration_tau}, {"bins", bins}}},
        {"optimizer",
         {{"max_evals", o.max_evals},
          {"restarts", o.restarts},
          {"perturbation", o.perturbation},
          {"initial_noise", o.initial_noise},
          {"threshold", o.threshold},
          {"optimize_duration", o.optimize_duration},
          {"duration_step", o.duration_step},
          {"memory", o.memory},
          {"grad_tol", o.grad_tol},
          {"amplitude_bound", o.amplitude_bound ? json(*o.amplitude_bound) : json(nullptr)},
          {"gradient", to_string(o.gradient)},
          {"checkpoint_every", o.checkpoint_every},
          {"plateau_tolerance", o.plateau_tolerance}}},
        {"adiabatic", {{"duration_tau", adiabatic.duration_tau}, {"steps", adiabatic.resolved_steps()}}},
        {"propagation",
         {{"dense_threshold", propagation.dense_threshold},
          {"krylov_tol", propagation.expv.tol},
          {"max_krylov", propagation.expv.max_krylov},
          {"substeps", propagation.substeps}}},
    };
    return doc.dump(2) + "\n";
}

std::string RunConfig::hash() const {
    json doc = json::parse(to_json());
    doc.erase("output_dir");
    return sha256_hex(doc.dump());
}

}  // namespace lieopt
