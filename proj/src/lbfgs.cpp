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

#include "lieopt/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <random>

#include "lieopt/errors.hpp"

namespace lieopt {

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::threshold: return "threshold";
        case StopReason::max_evals: return "max_evals";
        case StopReason::gradient: return "gradient";
        case StopReason::stalled: return "stalled";
    }
    return "unknown";
}

namespace {

struct Stop {};

class Driver {
   public:
    Driver(const ObjectiveFunction &f, const LbfgsOptions &o, const EvaluationCallback &cb)
        : f_(f), o_(o), cb_(cb), rng_(o.seed) {}

    LbfgsResult run(const Eigen::VectorXd &x0) {
        try {
            loop(x0);
        } catch (const Stop &) {
        }
        return result_;
    }

   private:
    Eigen::VectorXd project(Eigen::VectorXd x) const {
        if (o_.lower) x = x.cwiseMax(*o_.lower);
        if (o_.upper) x = x.cwiseMin(*o_.upper);
        return x;
    }

    // Gradient with components that push against an active bound removed.
    Eigen::VectorXd free_gradient(const Eigen::VectorXd &x, const Eigen::VectorXd &g) const {
        Eigen::VectorXd out = g;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (o_.lower && x[i] <= (*o_.lower)[i] && g[i] > 0) out[i] = 0.0;
            if (o_.upper && x[i] >= (*o_.upper)[i] && g[i] < 0) out[i] = 0.0;
        }
        return out;
    }

    double eval(const Eigen::VectorXd &x, Eigen::VectorXd &g) {
        if (result_.evaluations >= o_.max_evals) {
            result_.reason = StopReason::max_evals;
            throw Stop{};
        }
        g.resize(x.size());
        const double v = f_(x, g);
        ++result_.evaluations;
        if (!std::isfinite(v)) throw IntegratorError("objective returned a non-finite value", 0);
        if (v < result_.value) {
            result_.value = v;
            result_.x = x;
        }
        if (cb_) cb_(result_.evaluations, v, g.norm(), result_.value);
        if (v < o_.threshold) {
            result_.reason = StopReason::threshold;
            throw Stop{};
        }
        return v;
    }

    Eigen::VectorXd direction(const Eigen::VectorXd &g) const {
        Eigen::VectorXd q = g;
        std::vector<double> alpha(s_.size());
        for (std::size_t i = s_.size(); i-- > 0;) {
            alpha[i] = s_[i].dot(q) / sy_[i];
            q -= alpha[i] * y_[i];
        }
        if (!s_.empty()) q *= sy_.back() / y_.back().squaredNorm();
        for (std::size_t i = 0; i < s_.size(); ++i) {
            const double beta = y_[i].dot(q) / sy_[i];
            q += (alpha[i] - beta) * s_[i];
        }
        return -q;
    }

    void loop(const Eigen::VectorXd &x0) {
        Eigen::VectorXd x = project(x0), g;
        double f = eval(x, g);
        std::size_t failures = 0;
        std::size_t stalled = 0;
        while (true) {
            Eigen::VectorXd pg = free_gradient(x, g);
            if (pg.norm() < o_.grad_tol) {
                result_.reason = StopReason::gradient;
                return;
            }
            Eigen::VectorXd d = direction(pg);
            for (Eigen::Index i = 0; i < d.size(); ++i) {
                if (pg[i] == 0.0 && g[i] != 0.0) d[i] = 0.0;
            }
            if (!(d.dot(pg) < 0.0)) {
                clear_memory();
                d = -pg;
            }
            double step = s_.empty() ? std::min(1.0, 1.0 / d.lpNorm<Eigen::Infinity>()) : 1.0;

            Eigen::VectorXd xn, gn;
            double fn = 0.0;
            if (!line_search(x, f, g, d, step, xn, fn, gn)) {
                ++result_.restarts;
                if (++failures > o_.max_failures) {
                    result_.reason = StopReason::stalled;
                    return;
                }
                clear_memory();
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                x = result_.x;
                for (auto &v : x) v += o_.perturbation * u(rng_);
                x = project(x);
                f = eval(x, g);
                continue;
            }
            failures = 0;
            ++result_.iterations;
            stalled = (f - fn <= o_.ftol * std::max(1.0, std::abs(f))) ? stalled + 1 : 0;
            if (stalled >= o_.stall_iterations) {
                result_.reason = StopReason::stalled;
                return;
            }
            Eigen::VectorXd s = xn - x, y = gn - g;
            const double sy = s.dot(y);
            if (sy > 1e-12 * s.norm() * y.norm()) {
                s_.push_back(s);
                y_.push_back(y);
                sy_.push_back(sy);
                if (s_.size() > o_.memory) {
                    s_.pop_front();
                    y_.pop_front();
                    sy_.pop_front();
                }
            }
            x = std::move(xn);
            g = std::move(gn);
            f = fn;
        }
    }

    // Bisection/expansion search for the weak Wolfe conditions.
    bool line_search(const Eigen::VectorXd &x, double f, const Eigen::VectorXd &g, const Eigen::VectorXd &d,
                     double step, Eigen::VectorXd &xn, double &fn, Eigen::VectorXd &gn) {
        constexpr double c1 = 1e-4, c2 = 0.9;
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_x, best_g;
        double best_f = f;
        for (std::size_t trial = 0; trial < o_.max_line_search; ++trial) {
            Eigen::VectorXd xt = project(x + step * d), gt;
            const Eigen::VectorXd moved = xt - x;
            const double slope = g.dot(moved);
            if (moved.squaredNorm() == 0.0 || !(slope < 0.0)) return false;
            const double ft = eval(xt, gt);
            if (ft < best_f) {
                best_f = ft;
                best_x = xt;
                best_g = gt;
            }
            if (ft > f + c1 * slope) {
                hi = step;
            } else if (gt.dot(moved) < c2 * slope) {
                lo = step;
            } else {
                xn = std::move(xt);
                gn = std::move(gt);
                fn = ft;
                return true;
            }
            step = std::isinf(hi) ? 2.0 * step : 0.5 * (lo + hi);
        }
        if (best_f < f) {
            xn = std::move(best_x);
            gn = std::move(best_g);
            fn = best_f;
            return true;
        }
        return false;
    }

    void clear_memory() {
        s_.clear();
        y_.clear();
        sy_.clear();
    }

    const ObjectiveFunction &f_;
    const LbfgsOptions &o_;
    const EvaluationCallback &cb_;
    std::mt19937_64 rng_;
    std::deque<Eigen::VectorXd> s_, y_;
    std::deque<double> sy_;
    LbfgsResult result_;
};

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFunction &f, const Eigen::VectorXd &x0, const LbfgsOptions &options,
                           const EvaluationCallback &on_eval) {
    if (options.memory == 0 || options.max_evals == 0) throw ConfigError("L-BFGS memory and max_evals must be positive");
    if ((options.lower && options.lower->size() != x0.size()) || (options.upper && options.upper->size() != x0.size())) {
        throw DimensionError("L-BFGS bounds do not match the parameter count");
    }
    Driver driver(f, options, on_eval);
    LbfgsResult r = driver.run(x0);
    if (r.x.size() == 0) r.x = x0;
    return r;
}

}  // namespace lieopt
