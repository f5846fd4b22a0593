#pragma once

#include "gumdp/errors.hpp"
#include "gumdp/exact.hpp"
#include "gumdp/model.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace gumdp {

/// Floor applied to the imitation reference occupancy before renormalizing.
inline constexpr double kReferenceFloor = 1e-6;

/// Reference policy beta of the imitation model mf2: move right w.p. 0.7 in both states.
inline Matrix mf2_reference_policy() {
    Matrix beta(2, 2);
    beta << 0.3, 0.7,
            0.3, 0.7;
    return beta;
}

namespace detail {

/// Deterministic kernel from a successor table next[s][a].
inline std::vector<double> deterministic_kernel(const std::vector<std::vector<int>>& next) {
    const auto ns = static_cast<int>(next.size());
    const auto na = static_cast<int>(next.front().size());
    std::vector<double> kernel(static_cast<std::size_t>(ns) * na * ns, 0.0);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) kernel[(static_cast<std::size_t>(s) * na + a) * ns + next[s][a]] = 1.0;
    return kernel;
}

inline Vector point_mass(int n, int at) {
    Vector v = Vector::Zero(n);
    v[at] = 1.0;
    return v;
}

}  // namespace detail

/// The three illustrative GUMDPs. All have deterministic transitions and
/// action 0 = left/a0, action 1 = right/a1.
///
///   mf1  three states in a row, s1 - s0 - s2, start s0. Moving into a wall
///        keeps the agent in place. Entropy objective. Preset "figure":
///        pi(.|s0) = (0.5, 0.5), right at s1, left at s2.
///   mf2  two states, start in the left one. left always leads to the left
///        state, right to the right state. KL objective against the average
///        occupancy of mf2_reference_policy(), floored at 1e-6.
///        Preset "figure" = uniform.
///   mf3  start s0; a0 -> s1, a1 -> s2; s1 and s2 absorbing. Quadratic
///        objective with A = I. Preset "figure" = uniform.
inline Gumdp builtin_gumdp(std::string_view name, bool state_only) {
    if (name == "mf1") {
        // states: 0 = s0 (centre), 1 = s1 (left end), 2 = s2 (right end)
        auto kernel = detail::deterministic_kernel({{1, 2}, {1, 0}, {0, 2}});
        Gumdp g(3, 2, std::move(kernel), detail::point_mass(3, 0), Objective::entropy(), state_only);
        Matrix figure(3, 2);
        figure << 0.5, 0.5,
                  0.0, 1.0,
                  1.0, 0.0;
        return g.with_name("mf1").with_preset("figure", figure);
    }
    if (name == "mf2") {
        auto kernel = detail::deterministic_kernel({{0, 1}, {0, 1}});
        const Vector p0 = detail::point_mass(2, 0);
        // Placeholder objective to obtain the chain structure, then the real one.
        Gumdp shape(2, 2, kernel, p0, Objective::entropy(), state_only);
        Vector reference = average_occupancy(shape, StationaryPolicy(mf2_reference_policy())).values();
        reference = reference.cwiseMax(kReferenceFloor);
        reference /= reference.sum();
        Gumdp g(2, 2, std::move(kernel), p0, Objective::kl(std::move(reference)), state_only);
        return g.with_name("mf2").with_preset("figure", Matrix::Constant(2, 2, 0.5));
    }
    if (name == "mf3") {
        auto kernel = detail::deterministic_kernel({{1, 2}, {1, 1}, {2, 2}});
        const Eigen::Index dim = state_only ? 3 : 6;
        Gumdp g(3, 2, std::move(kernel), detail::point_mass(3, 0),
                Objective::quadratic(Matrix::Identity(dim, dim)), state_only);
        return g.with_name("mf3").with_preset("figure", Matrix::Constant(3, 2, 0.5));
    }
    throw ValidationError("unknown builtin GUMDP '" + std::string(name) + "' (expected mf1, mf2 or mf3)");
}

inline bool is_builtin_name(std::string_view name) {
    return name == "mf1" || name == "mf2" || name == "mf3";
}

}  // namespace gumdp
