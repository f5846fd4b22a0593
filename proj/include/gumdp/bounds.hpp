#pragma once

#include "gumdp/chain.hpp"
#include "gumdp/errors.hpp"
#include "gumdp/linalg.hpp"
#include "gumdp/model.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace gumdp {

// ---------------------------------------------------------------------------
// Variance of discounted indicator returns
// ---------------------------------------------------------------------------

struct StateActionTarget {
    int state;
    int action;
};
struct StateTarget {
    int state;
};
/// Indicator reward on one (s, a) pair, or on one state regardless of action.
using ReturnTarget = std::variant<StateActionTarget, StateTarget>;

struct ReturnMoments {
    double mean;
    double variance;
};

/// First two moments of J = sum_t gamma^t r(X_t) for a chain with rewards r.
/// Reuses the factorizations of (I - gamma P) and (I - gamma^2 P) across rewards.
class DiscountedReturnSolver {
public:
    DiscountedReturnSolver(ExtendedChain chain, double gamma)
        : chain_(std::move(chain)),
          gamma_(gamma),
          first_(make(chain_.transition, gamma, "discounted return mean")),
          second_(make(chain_.transition, gamma * gamma, "discounted return second moment")) {}

    /// v = (I - gamma P)^{-1} r,  m = (I - gamma^2 P)^{-1} (r^2 + 2 gamma r .* (P v)).
    ReturnMoments moments(const Vector& reward) const {
        const Vector v = first_.solve(reward);
        const Vector rhs = reward.cwiseProduct(reward) +
                           2.0 * gamma_ * reward.cwiseProduct(chain_.transition * v);
        const Vector m = second_.solve(rhs);
        const double mean = chain_.initial.dot(v);
        const double variance = chain_.initial.dot(m) - mean * mean;
        return {mean, std::max(variance, 0.0)};
    }

    const ExtendedChain& chain() const { return chain_; }

private:
    static DenseSolver make(const Matrix& p, double g, const char* what) {
        if (!(g >= 0.0 && g < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
        return DenseSolver(Matrix::Identity(p.rows(), p.cols()) - g * p, what);
    }

    ExtendedChain chain_;
    double gamma_;
    DenseSolver first_;
    DenseSolver second_;
};

inline Vector indicator_reward(const Gumdp& g, const ReturnTarget& target) {
    const int na = g.n_actions();
    Vector r = Vector::Zero(static_cast<Eigen::Index>(g.n_states()) * na);
    if (const auto* sa = std::get_if<StateActionTarget>(&target)) {
        if (sa->state < 0 || sa->state >= g.n_states() || sa->action < 0 || sa->action >= na)
            throw ValidationError("return target out of range");
        r[static_cast<Eigen::Index>(sa->state) * na + sa->action] = 1.0;
    } else {
        const int s = std::get<StateTarget>(target).state;
        if (s < 0 || s >= g.n_states()) throw ValidationError("return target out of range");
        r.segment(static_cast<Eigen::Index>(s) * na, na).setOnes();
    }
    return r;
}

/// Var[sum_t gamma^t 1(target at t)] under the policy's trajectory law.
/// Multiply by (1 - gamma)^2 for the variance of the single-trajectory occupancy.
inline double discounted_return_variance(const Gumdp& g, const StationaryPolicy& pi, double gamma,
                                         const ReturnTarget& target) {
    DiscountedReturnSolver solver(extended_chain(g, pi), gamma);
    return solver.moments(indicator_reward(g, target)).variance;
}

// ---------------------------------------------------------------------------
// Bound reports
// ---------------------------------------------------------------------------

enum class BoundKind { theorem2, theorem3, theorem6 };

inline std::string_view to_string(BoundKind k) {
    switch (k) {
        case BoundKind::theorem2: return "theo2";
        case BoundKind::theorem3: return "theo3";
        case BoundKind::theorem6: return "theo6";
    }
    return "?";
}

struct BoundParameters {
    std::optional<int> K;
    std::optional<int> H;
    std::optional<double> gamma;
    std::optional<double> delta;
    std::optional<double> c;
    std::optional<double> lipschitz;
    std::optional<int> n_classes;
};

struct BoundTerm {
    std::string label;
    double value;
};

struct BoundReport {
    BoundKind kind = BoundKind::theorem2;
    double value = 0.0;
    BoundParameters parameters;
    std::vector<BoundTerm> per_term;
};

namespace detail {

inline void check_curvature(double c) {
    if (!(c > 0.0)) throw ValidationError("strong-convexity constant c must be positive");
}

inline std::string state_label(int s) { return "s" + std::to_string(s); }
inline std::string pair_label(int s, int a) { return "(s" + std::to_string(s) + ",a" + std::to_string(a) + ")"; }

}  // namespace detail

/// Discounted lower bound on f_K - f_inf for c-strongly convex f:
/// (c / 2K) sum Var[d_T(x)] over occupancy coordinates x. For state-only models the
/// coordinates are states, matching the state-indexed occupancy.
inline BoundReport theorem2_lower_bound(const Gumdp& g, const StationaryPolicy& pi, double gamma, int K,
                                        double c) {
    detail::check_curvature(c);
    if (K < 1) throw ValidationError("K must be a positive integer");
    DiscountedReturnSolver solver(extended_chain(g, pi), gamma);
    BoundReport report;
    report.kind = BoundKind::theorem2;
    report.parameters.K = K;
    report.parameters.gamma = gamma;
    report.parameters.c = c;
    const double scale = (1.0 - gamma) * (1.0 - gamma);
    double sum = 0.0;
    for (int s = 0; s < g.n_states(); ++s) {
        if (g.state_only()) {
            const double var = scale * solver.moments(indicator_reward(g, StateTarget{s})).variance;
            report.per_term.push_back({detail::state_label(s), var});
            sum += var;
            continue;
        }
        for (int a = 0; a < g.n_actions(); ++a) {
            const double var = scale * solver.moments(indicator_reward(g, StateActionTarget{s, a})).variance;
            report.per_term.push_back({detail::pair_label(s, a), var});
            sum += var;
        }
    }
    report.value = c / (2.0 * K) * sum;
    return report;
}

/// Concentration bound: with probability >= 1 - delta,
/// |f_inf - f(d_{K,H})| <= L (sqrt(2 |S||A| log(2H/delta) / K) + 2 gamma^H).
inline BoundReport theorem3_upper_bound(double lipschitz, int n_states, int n_actions, int K, int H,
                                        double gamma, double delta) {
    if (!(lipschitz > 0.0)) throw ValidationError("Lipschitz constant L must be positive");
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
    if (K < 1 || H < 1) throw ValidationError("K and H must be positive integers");
    if (n_states < 1 || n_actions < 1) throw ValidationError("|S| and |A| must be positive");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
    BoundReport report;
    report.kind = BoundKind::theorem3;
    report.parameters = {K, H, gamma, delta, std::nullopt, lipschitz, std::nullopt};
    const double dim = static_cast<double>(n_states) * n_actions;
    const double sampling = std::sqrt(2.0 * dim * std::log(2.0 * H / delta) / K);
    const double truncation = 2.0 * std::pow(gamma, H);
    report.per_term = {{"sampling", lipschitz * sampling}, {"truncation", lipschitz * truncation}};
    report.value = lipschitz * (sampling + truncation);
    return report;
}

/// Average-setting lower bound:
/// (c / 2K) sum_l alpha_l (1 - alpha_l) sum_{s in R_l, a} pi(a|s)^2 mu_l(s)^2.
/// State-only models drop the pi(a|s)^2 factor.
inline BoundReport theorem6_lower_bound(const Gumdp& g, const StationaryPolicy& pi,
                                        const ChainDecomposition& dec, int K, double c) {
    detail::check_curvature(c);
    if (K < 1) throw ValidationError("K must be a positive integer");
    BoundReport report;
    report.kind = BoundKind::theorem6;
    report.parameters.K = K;
    report.parameters.c = c;
    report.parameters.n_classes = static_cast<int>(dec.n_classes());
    double sum = 0.0;
    for (std::size_t l = 0; l < dec.n_classes(); ++l) {
        const double alpha = dec.absorption[static_cast<Eigen::Index>(l)];
        double mass = 0.0;
        for (int s : dec.recurrent_classes[l]) {
            const double mu2 = dec.stationary[l][s] * dec.stationary[l][s];
            if (g.state_only()) {
                mass += mu2;
            } else {
                for (int a = 0; a < g.n_actions(); ++a) mass += pi(s, a) * pi(s, a) * mu2;
            }
        }
        const double term = alpha * (1.0 - alpha) * mass;
        report.per_term.push_back({"class " + std::to_string(l), c / (2.0 * K) * term});
        sum += term;
    }
    report.value = c / (2.0 * K) * sum;
    return report;
}

inline BoundReport theorem6_lower_bound(const Gumdp& g, const StationaryPolicy& pi, int K, double c) {
    return theorem6_lower_bound(g, pi, decompose(induced_state_chain(g, pi), g.initial()), K, c);
}

inline std::string format_bound_report(const BoundReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << "bound: " << to_string(r.kind) << "\nvalue: " << r.value << "\nparameters:";
    const auto& p = r.parameters;
    if (p.K) os << " K=" << *p.K;
    if (p.H) os << " H=" << *p.H;
    if (p.gamma) os << " gamma=" << *p.gamma;
    if (p.delta) os << " delta=" << *p.delta;
    if (p.c) os << " c=" << *p.c;
    if (p.lipschitz) os << " L=" << *p.lipschitz;
    if (p.n_classes) os << " classes=" << *p.n_classes;
    os << "\nterms:\n";
    for (const auto& t : r.per_term) os << "  " << t.label << ": " << t.value << '\n';
    return os.str();
}

/// kind,value,K,H,gamma,delta,c,L (empty cells for unused parameters).
inline std::string bound_report_csv_header() { return "kind,value,K,H,gamma,delta,c,L"; }

inline std::string bound_report_csv_row(const BoundReport& r) {
    std::ostringstream os;
    os.precision(17);
    auto opt = [&](const auto& v) {
        os << ',';
        if (v) os << *v;
    };
    os << to_string(r.kind) << ',' << r.value;
    opt(r.parameters.K);
    opt(r.parameters.H);
    opt(r.parameters.gamma);
    opt(r.parameters.delta);
    opt(r.parameters.c);
    opt(r.parameters.lipschitz);
    return os.str();
}

}  // namespace gumdp
