#pragma once

#include "gumdp/chain.hpp"
#include "gumdp/errors.hpp"
#include "gumdp/linalg.hpp"
#include "gumdp/model.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace gumdp {

inline constexpr double kMultinomialSupportCap = 1e6;

namespace detail {

/// Renormalizes a solved occupancy once; refuses if the solve drifted off the simplex.
inline Vector renormalized(Vector v, const char* what) {
    const double sum = v.sum();
    if (std::abs(sum - 1.0) > kOccupancyTolerance)
        throw NumericalError(std::string(what) + ": occupancy sums to " + std::to_string(sum));
    v = v.cwiseMax(0.0);
    return v / v.sum();
}

inline Occupancy lift_state_distribution(const Gumdp& g, const StationaryPolicy& pi,
                                         const Vector& nu) {
    return class_occupancy(g, pi, nu);
}

}  // namespace detail

/// Discounted state distribution (1 - gamma) p0^T (I - gamma P^pi)^{-1}.
inline Vector discounted_state_distribution(const Gumdp& g, const StationaryPolicy& pi,
                                            double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
    const Matrix p = induced_state_chain(g, pi);
    const auto n = p.rows();
    const Matrix sys = Matrix::Identity(n, n) - gamma * p.transpose();
    Vector nu = DenseSolver(sys, "discounted occupancy").solve((1.0 - gamma) * g.initial());
    return detail::renormalized(std::move(nu), "discounted occupancy");
}

/// Expected discounted occupancy d_{gamma,pi}, over states or state-action pairs
/// depending on the model.
inline Occupancy discounted_occupancy(const Gumdp& g, const StationaryPolicy& pi, double gamma) {
    return detail::lift_state_distribution(g, pi, discounted_state_distribution(g, pi, gamma));
}

/// Expected average occupancy: sum_l alpha_l mu_l(s) pi(a|s), i.e. the mean of
/// the limit law. Stationary distributions are Cesaro limits, so periodic
/// classes are handled too.
inline Occupancy average_occupancy(const Gumdp& g, const LimitOccupancyLaw& law) {
    Vector d = Vector::Zero(g.occupancy_dim());
    for (const auto& atom : law.atoms)
        if (atom.probability > 0.0) d += atom.probability * atom.occupancy.values();
    return Occupancy(std::move(d), g.occupancy_kind());
}

inline Occupancy average_occupancy(const Gumdp& g, const StationaryPolicy& pi) {
    return average_occupancy(g, limit_occupancy_law(g, pi));
}

inline Occupancy expected_occupancy(const Gumdp& g, const StationaryPolicy& pi,
                                    const EvalSettings& s) {
    if (s.setting == Setting::discounted) {
        if (!s.gamma) throw ValidationError("discounted setting requires gamma");
        return discounted_occupancy(g, pi, *s.gamma);
    }
    return average_occupancy(g, pi);
}

/// Infinite-trials objective f(d_pi).
inline double infinite_trials_value(const Gumdp& g, const StationaryPolicy& pi,
                                    const EvalSettings& s) {
    return evaluate_objective(g.objective(), expected_occupancy(g, pi, s));
}

/// C(K + L - 1, L - 1) as a double (saturates to inf instead of overflowing).
inline double multinomial_support_size(int K, std::size_t L) {
    if (L <= 1) return 1.0;
    const double n = K + static_cast<double>(L) - 1.0;
    const double k = static_cast<double>(L) - 1.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

/// E[f(mean of K iid atoms of the law)], enumerating class-count vectors.
/// Multinomial weights are computed in log space.
inline double expected_objective_over_law(const Objective& f, const LimitOccupancyLaw& law, int K,
                                          double support_cap = kMultinomialSupportCap) {
    if (K < 1) throw ValidationError("K must be a positive integer");
    const std::size_t L = law.atoms.size();
    if (L == 0) throw ValidationError("limit law has no atoms");
    if (multinomial_support_size(K, L) > support_cap)
        throw NumericalError("multinomial support C(K+L-1, L-1) exceeds the cap of " +
                             std::to_string(static_cast<long long>(support_cap)));

    std::vector<double> log_alpha(L);
    for (std::size_t l = 0; l < L; ++l) log_alpha[l] = std::log(law.atoms[l].probability);
    const double log_k_factorial = std::lgamma(K + 1.0);
    const Eigen::Index dim = law.atoms.front().occupancy.size();

    std::vector<int> counts(L, 0);
    double total = 0.0;
    Vector d(dim);
    // Depth-first enumeration of compositions of K into L non-negative parts.
    auto visit = [&](auto&& self, std::size_t l, int remaining) -> void {
        if (l + 1 == L) {
            counts[l] = remaining;
            double log_w = log_k_factorial;
            for (std::size_t j = 0; j < L; ++j) {
                if (counts[j] == 0) continue;
                if (law.atoms[j].probability <= 0.0) return;
                log_w += counts[j] * log_alpha[j] - std::lgamma(counts[j] + 1.0);
            }
            d.setZero();
            for (std::size_t j = 0; j < L; ++j)
                if (counts[j] > 0)
                    d += (static_cast<double>(counts[j]) / K) * law.atoms[j].occupancy.values();
            total += std::exp(log_w) * f.evaluate(d);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[l] = c;
            self(self, l + 1, remaining - c);
        }
    };
    visit(visit, 0, K);
    return total;
}

/// Exact finite-trials objective f_K(pi) in the average setting.
inline double finite_trials_value_exact_average(const Gumdp& g, const StationaryPolicy& pi, int K,
                                                double support_cap = kMultinomialSupportCap) {
    return expected_objective_over_law(g.objective(), limit_occupancy_law(g, pi), K, support_cap);
}

}  // namespace gumdp
