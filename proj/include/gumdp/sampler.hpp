#pragma once

#include "gumdp/chain.hpp"
#include "gumdp/errors.hpp"
#include "gumdp/model.hpp"
#include "gumdp/random.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace gumdp {

inline constexpr std::size_t kDefaultAbsorptionCap = 1'000'000;
/// Tail mass gamma^H below which a truncated rollout stands in for an infinite one.
inline constexpr double kInfiniteHorizonTail = 1e-8;

struct Trajectory {
    std::vector<int> states;
    std::vector<int> actions;

    std::size_t size() const { return states.size(); }
};

/// Smallest H >= 1 with gamma^H < tail.
inline int effective_horizon(double gamma, double tail = kInfiniteHorizonTail) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
    if (gamma == 0.0) return 1;
    int h = std::max(1, static_cast<int>(std::ceil(std::log(tail) / std::log(gamma))));
    while (h > 1 && std::pow(gamma, h - 1) < tail) --h;
    while (std::pow(gamma, h) >= tail) ++h;
    return h;
}

/// Inverse-CDF tables for p0, pi and p.
class TransitionSampler {
public:
    TransitionSampler(const Gumdp& g, const StationaryPolicy& pi)
        : ns_(g.n_states()),
          na_(g.n_actions()),
          p0_cdf_(static_cast<std::size_t>(ns_)),
          policy_cdf_(static_cast<std::size_t>(ns_) * na_),
          kernel_cdf_(static_cast<std::size_t>(ns_) * na_ * ns_) {
        check_policy_shape(g, pi);
        build_cdf(std::span<const double>(g.initial().data(), ns_), std::span<double>(p0_cdf_));
        for (int s = 0; s < ns_; ++s) {
            std::vector<double> row(na_);
            for (int a = 0; a < na_; ++a) row[a] = pi(s, a);
            build_cdf(row, std::span<double>(policy_cdf_).subspan(static_cast<std::size_t>(s) * na_, na_));
            for (int a = 0; a < na_; ++a)
                build_cdf(g.row(s, a), std::span<double>(kernel_cdf_).subspan(
                                           (static_cast<std::size_t>(s) * na_ + a) * ns_, ns_));
        }
    }

    int initial(RandomStream& rs) const {
        return static_cast<int>(sample_from_cdf(p0_cdf_, rs.uniform()));
    }
    int action(int s, RandomStream& rs) const {
        return static_cast<int>(sample_from_cdf(
            std::span<const double>(policy_cdf_).subspan(static_cast<std::size_t>(s) * na_, na_), rs.uniform()));
    }
    int next(int s, int a, RandomStream& rs) const {
        return static_cast<int>(sample_from_cdf(
            std::span<const double>(kernel_cdf_).subspan((static_cast<std::size_t>(s) * na_ + a) * ns_, ns_),
            rs.uniform()));
    }

private:
    int ns_;
    int na_;
    std::vector<double> p0_cdf_;
    std::vector<double> policy_cdf_;
    std::vector<double> kernel_cdf_;
};

/// Rolls out H steps: S0 ~ p0, A_t ~ pi(.|S_t), S_{t+1} ~ p(.|S_t, A_t).
inline Trajectory sample_trajectory(const TransitionSampler& sampler, int H, RandomStream& rs) {
    if (H < 1) throw ValidationError("H must be a positive integer");
    Trajectory tr;
    tr.states.reserve(static_cast<std::size_t>(H));
    tr.actions.reserve(static_cast<std::size_t>(H));
    int s = sampler.initial(rs);
    for (int t = 0; t < H; ++t) {
        const int a = sampler.action(s, rs);
        tr.states.push_back(s);
        tr.actions.push_back(a);
        if (t + 1 < H) s = sampler.next(s, a, rs);
    }
    return tr;
}

inline Trajectory sample_trajectory(const Gumdp& g, const StationaryPolicy& pi, int H, RandomStream& rs) {
    return sample_trajectory(TransitionSampler(g, pi), H, rs);
}

inline Eigen::Index occupancy_index(const Gumdp& g, int s, int a) {
    return g.state_only() ? s : static_cast<Eigen::Index>(s) * g.n_actions() + a;
}

/// Truncated empirical discounted occupancy of K trajectories, each cut at H
/// and renormalized by (1 - gamma) / (1 - gamma^H).
inline Occupancy empirical_discounted_occupancy(const Gumdp& g, std::span<const Trajectory> ts,
                                                double gamma, int H) {
    if (ts.empty()) throw ValidationError("need at least one trajectory");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
    if (H < 1) throw ValidationError("H must be a positive integer");
    const double scale = (1.0 - gamma) / (1.0 - std::pow(gamma, H)) / static_cast<double>(ts.size());
    Vector d = Vector::Zero(g.occupancy_dim());
    for (const auto& tr : ts) {
        if (tr.size() < static_cast<std::size_t>(H))
            throw ValidationError("trajectory of length " + std::to_string(tr.size()) +
                                  " is shorter than H = " + std::to_string(H));
        double w = scale;
        for (int t = 0; t < H; ++t, w *= gamma) d[occupancy_index(g, tr.states[t], tr.actions[t])] += w;
    }
    return Occupancy(std::move(d), g.occupancy_kind());
}

/// Draws means of K atoms from a limit occupancy law.
class LimitLawSampler {
public:
    explicit LimitLawSampler(LimitOccupancyLaw law) : law_(std::move(law)), cdf_(law_.atoms.size()) {
        if (law_.atoms.empty()) throw ValidationError("limit law has no atoms");
        std::vector<double> probs;
        for (const auto& atom : law_.atoms) probs.push_back(atom.probability);
        build_cdf(probs, std::span<double>(cdf_));
    }

    const LimitOccupancyLaw& law() const { return law_; }

    std::size_t draw_class(RandomStream& rs) const { return sample_from_cdf(cdf_, rs.uniform()); }

    Vector draw(int K, RandomStream& rs) const {
        std::vector<int> counts(law_.atoms.size(), 0);
        for (int k = 0; k < K; ++k) ++counts[draw_class(rs)];
        Vector d = Vector::Zero(law_.atoms.front().occupancy.size());
        for (std::size_t l = 0; l < counts.size(); ++l)
            if (counts[l] > 0) d += (static_cast<double>(counts[l]) / K) * law_.atoms[l].occupancy.values();
        return d;
    }

private:
    LimitOccupancyLaw law_;
    std::vector<double> cdf_;
};

/// Exact draw of the average-setting estimator over K infinite trajectories:
/// each trajectory's limit occupancy is an independent atom of the limit law.
inline Occupancy sample_limit_average_occupancy(const Gumdp& g, const StationaryPolicy& pi, int K,
                                                RandomStream& rs) {
    if (K < 1) throw ValidationError("K must be a positive integer");
    LimitLawSampler sampler(limit_occupancy_law(g, pi));
    return Occupancy(sampler.draw(K, rs), g.occupancy_kind());
}

struct AbsorptionOutcome {
    int recurrent_class;
    std::size_t steps;
};

/// Runs the chain from S0 ~ p0 until it enters a recurrent class of `dec`.
inline AbsorptionOutcome simulate_until_absorption(const TransitionSampler& sampler,
                                                   const ChainDecomposition& dec, RandomStream& rs,
                                                   std::size_t max_steps = kDefaultAbsorptionCap) {
    if (max_steps < 1) throw ValidationError("max_steps must be positive");
    int s = sampler.initial(rs);
    std::size_t steps = 0;
    while (dec.class_of[s] < 0) {
        if (steps == max_steps)
            throw NumericalError("no absorption within " + std::to_string(max_steps) + " steps");
        const int a = sampler.action(s, rs);
        s = sampler.next(s, a, rs);
        ++steps;
    }
    return {dec.class_of[s], steps};
}

inline AbsorptionOutcome simulate_until_absorption(const Gumdp& g, const StationaryPolicy& pi,
                                                   RandomStream& rs,
                                                   std::size_t max_steps = kDefaultAbsorptionCap) {
    const auto dec = decompose(induced_state_chain(g, pi), g.initial());
    return simulate_until_absorption(TransitionSampler(g, pi), dec, rs, max_steps);
}

/// One draw of the empirical occupancy per Algorithm-1 iteration, keyed so that
/// iteration n always sees the same random streams whatever order runs them.
class EmpiricalOccupancySampler {
public:
    EmpiricalOccupancySampler(const Gumdp& g, const StationaryPolicy& pi, const EvalSettings& s)
        : state_only_(g.state_only()), n_actions_(g.n_actions()), dim_(g.occupancy_dim()), settings_(s) {
        s.validate();
        if (s.setting == Setting::discounted) {
            if (!s.H) throw ValidationError("discounted estimation requires a finite H");
            rollout_.emplace<TransitionSampler>(g, pi);
            const double gamma = *s.gamma;
            const double scale = (1.0 - gamma) / (1.0 - std::pow(gamma, *s.H)) / s.K;
            weights_.resize(static_cast<std::size_t>(*s.H));
            double w = scale;
            for (auto& x : weights_) {
                x = w;
                w *= gamma;
            }
        } else {
            rollout_.emplace<LimitLawSampler>(limit_occupancy_law(g, pi));
        }
    }

    Vector draw(std::uint64_t iteration) const {
        if (const auto* law = std::get_if<LimitLawSampler>(&rollout_)) {
            RandomStream rs(derive_seed({settings_.seed, settings_.experiment, iteration}));
            return law->draw(settings_.K, rs);
        }
        const auto& ts = std::get<TransitionSampler>(rollout_);
        Vector d = Vector::Zero(dim_);
        const int H = static_cast<int>(weights_.size());
        for (int k = 0; k < settings_.K; ++k) {
            RandomStream rs(derive_seed({settings_.seed, settings_.experiment, iteration,
                                         static_cast<std::uint64_t>(k)}));
            int s = ts.initial(rs);
            for (int t = 0; t < H; ++t) {
                const int a = ts.action(s, rs);
                d[state_only_ ? s : static_cast<Eigen::Index>(s) * n_actions_ + a] += weights_[static_cast<std::size_t>(t)];
                if (t + 1 < H) s = ts.next(s, a, rs);
            }
        }
        return d;
    }

private:
    bool state_only_;
    int n_actions_;
    Eigen::Index dim_;
    EvalSettings settings_;
    std::variant<std::monostate, TransitionSampler, LimitLawSampler> rollout_;
    std::vector<double> weights_;
};

struct MonteCarloEstimate {
    double value = 0.0;
    /// Standard error of the mean over iterations.
    double std_error = 0.0;
    std::size_t iterations = 0;
};

/// Algorithm-1 estimate of f_{K,H}(pi): the running mean of f(d_K) over N
/// independent iterations, each from K fresh trajectories.
inline MonteCarloEstimate estimate_finite_trials(const Gumdp& g, const StationaryPolicy& pi,
                                                 const EvalSettings& s) {
    EmpiricalOccupancySampler sampler(g, pi, s);
    const Objective& f = g.objective();
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t n = 1; n <= s.N; ++n) {
        const double x = f.evaluate(sampler.draw(n));
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    MonteCarloEstimate out;
    out.value = mean;
    out.iterations = s.N;
    out.std_error = s.N > 1 ? std::sqrt(m2 / static_cast<double>(s.N - 1) / static_cast<double>(s.N)) : 0.0;
    return out;
}

inline double estimate_finite_trials_objective(const Gumdp& g, const StationaryPolicy& pi,
                                               const EvalSettings& s) {
    return estimate_finite_trials(g, pi, s).value;
}

}  // namespace gumdp
