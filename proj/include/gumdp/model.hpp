#pragma once

#include "gumdp/errors.hpp"
#include "gumdp/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gumdp {

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kOccupancyTolerance = 1e-9;
inline constexpr double kPositiveDefiniteTolerance = 1e-10;

// ---------------------------------------------------------------------------
// Occupancy
// ---------------------------------------------------------------------------

enum class OccupancyKind { state, state_action };

inline std::string_view to_string(OccupancyKind k) {
    return k == OccupancyKind::state ? "state" : "state-action";
}

/// Probability vector over states, or over state-action pairs indexed s * |A| + a.
class Occupancy {
public:
    Occupancy(Vector values, OccupancyKind kind) : values_(std::move(values)), kind_(kind) {
        if (values_.size() == 0) throw ValidationError("occupancy: empty vector");
        if ((values_.array() < 0.0).any())
            throw ValidationError("occupancy: negative entry");
        double sum = values_.sum();
        if (std::abs(sum - 1.0) > kOccupancyTolerance)
            throw ValidationError("occupancy: entries sum to " + std::to_string(sum));
    }

    const Vector& values() const { return values_; }
    OccupancyKind kind() const { return kind_; }
    Eigen::Index size() const { return values_.size(); }
    double operator[](Eigen::Index i) const { return values_[i]; }

private:
    Vector values_;
    OccupancyKind kind_;
};

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

enum class ObjectiveKind { linear, entropy, kl, quadratic };

inline std::string_view to_string(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::linear: return "linear";
        case ObjectiveKind::entropy: return "entropy";
        case ObjectiveKind::kl: return "kl";
        case ObjectiveKind::quadratic: return "quadratic";
    }
    return "?";
}

inline ObjectiveKind parse_objective_kind(std::string_view s) {
    if (s == "linear") return ObjectiveKind::linear;
    if (s == "entropy") return ObjectiveKind::entropy;
    if (s == "kl") return ObjectiveKind::kl;
    if (s == "quadratic") return ObjectiveKind::quadratic;
    throw ValidationError("objective.kind: unknown kind '" + std::string(s) + "'");
}

/// Convex objective f over occupancies. Entropy and KL use 0 * log 0 = 0.
class Objective {
public:
    static Objective linear(Vector b) {
        Objective o(ObjectiveKind::linear);
        if (b.size() == 0) throw ValidationError("objective.b: empty");
        o.vec_ = std::move(b);
        return o;
    }

    static Objective entropy() { return Objective(ObjectiveKind::entropy); }

    static Objective kl(Vector reference) {
        Objective o(ObjectiveKind::kl);
        if (reference.size() == 0) throw ValidationError("objective.d_beta: empty");
        for (Eigen::Index i = 0; i < reference.size(); ++i)
            if (!(reference[i] > 0.0))
                throw ValidationError("objective.d_beta[" + std::to_string(i) +
                                      "]: reference occupancy must be strictly positive");
        o.vec_ = std::move(reference);
        return o;
    }

    static Objective quadratic(const Matrix& a) {
        Objective o(ObjectiveKind::quadratic);
        if (a.rows() == 0 || a.rows() != a.cols())
            throw ValidationError("objective.A: matrix must be square and non-empty");
        o.mat_ = 0.5 * (a + a.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> eig(o.mat_, Eigen::EigenvaluesOnly);
        o.min_eigenvalue_ = eig.eigenvalues().minCoeff();
        o.max_abs_eigenvalue_ = eig.eigenvalues().cwiseAbs().maxCoeff();
        if (!(o.min_eigenvalue_ > kPositiveDefiniteTolerance))
            throw ValidationError("objective.A: matrix is not positive definite (min eigenvalue " +
                                  std::to_string(o.min_eigenvalue_) + ")");
        return o;
    }

    ObjectiveKind kind() const { return kind_; }
    bool is_linear() const { return kind_ == ObjectiveKind::linear; }

    /// b for linear objectives.
    const Vector& weights() const { return vec_; }
    /// d_beta for KL objectives.
    const Vector& reference() const { return vec_; }
    /// Symmetrized A for quadratic objectives.
    const Matrix& matrix() const { return mat_; }
    double min_eigenvalue() const { return min_eigenvalue_; }
    double spectral_norm() const { return max_abs_eigenvalue_; }

    /// Required occupancy dimension, or none for entropy.
    std::optional<Eigen::Index> dimension() const {
        switch (kind_) {
            case ObjectiveKind::linear:
            case ObjectiveKind::kl: return vec_.size();
            case ObjectiveKind::quadratic: return mat_.rows();
            case ObjectiveKind::entropy: return std::nullopt;
        }
        return std::nullopt;
    }

    /// f(d) on a raw vector. Hot path of the samplers, so no simplex check here.
    double evaluate(const Vector& d) const {
        if (auto dim = dimension(); dim && *dim != d.size())
            throw ValidationError("objective: dimension mismatch (objective " +
                                  std::to_string(*dim) + ", occupancy " +
                                  std::to_string(d.size()) + ")");
        switch (kind_) {
            case ObjectiveKind::linear: return d.dot(vec_);
            case ObjectiveKind::entropy: {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < d.size(); ++i)
                    if (d[i] > 0.0) acc += d[i] * std::log(d[i]);
                return acc;
            }
            case ObjectiveKind::kl: {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < d.size(); ++i)
                    if (d[i] > 0.0) acc += d[i] * std::log(d[i] / vec_[i]);
                return acc;
            }
            case ObjectiveKind::quadratic: return d.dot(mat_ * d);
        }
        return 0.0;
    }

private:
    explicit Objective(ObjectiveKind k) : kind_(k) {}

    ObjectiveKind kind_;
    Vector vec_;
    Matrix mat_;
    double min_eigenvalue_ = 0.0;
    double max_abs_eigenvalue_ = 0.0;
};

inline double evaluate_objective(const Objective& obj, const Occupancy& d) {
    return obj.evaluate(d.values());
}

/// Largest c for which f is c-strongly convex on the simplex; none for linear f.
inline std::optional<double> strong_convexity_constant(const Objective& obj) {
    switch (obj.kind()) {
        case ObjectiveKind::entropy:
        case ObjectiveKind::kl: return 1.0;
        case ObjectiveKind::quadratic: return 2.0 * obj.min_eigenvalue();
        case ObjectiveKind::linear: return std::nullopt;
    }
    return std::nullopt;
}

/// l1-Lipschitz constant on the simplex where one is known in closed form.
/// Quadratic: 2 * sigma_max(A). Linear: max |b_i|. Entropy and KL are not
/// Lipschitz on the closed simplex, so the caller has to supply one.
inline std::optional<double> lipschitz_constant(const Objective& obj) {
    switch (obj.kind()) {
        case ObjectiveKind::quadratic: return 2.0 * obj.spectral_norm();
        case ObjectiveKind::linear: return obj.weights().cwiseAbs().maxCoeff();
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Policy
// ---------------------------------------------------------------------------

/// Stationary Markov policy pi(a|s), stored as an |S| x |A| row-stochastic matrix.
class StationaryPolicy {
public:
    explicit StationaryPolicy(Matrix probs, double tolerance = kStochasticTolerance)
        : probs_(std::move(probs)) {
        if (probs_.rows() == 0 || probs_.cols() == 0)
            throw ValidationError("policy: empty probability table");
        for (Eigen::Index s = 0; s < probs_.rows(); ++s) {
            for (Eigen::Index a = 0; a < probs_.cols(); ++a)
                if (!(probs_(s, a) >= 0.0))
                    throw ValidationError("policy[" + std::to_string(s) + "][" +
                                          std::to_string(a) + "]: negative probability");
            double sum = probs_.row(s).sum();
            if (std::abs(sum - 1.0) > tolerance)
                throw ValidationError("policy[" + std::to_string(s) + "]: row sums to " +
                                      std::to_string(sum));
            probs_.row(s) /= sum;
        }
    }

    static StationaryPolicy uniform(int n_states, int n_actions) {
        return StationaryPolicy(Matrix::Constant(n_states, n_actions, 1.0 / n_actions));
    }

    static StationaryPolicy deterministic(std::span<const int> actions, int n_actions) {
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
        for (std::size_t s = 0; s < actions.size(); ++s) {
            if (actions[s] < 0 || actions[s] >= n_actions)
                throw ValidationError("policy: action index out of range");
            m(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
        }
        return StationaryPolicy(std::move(m));
    }

    int n_states() const { return static_cast<int>(probs_.rows()); }
    int n_actions() const { return static_cast<int>(probs_.cols()); }
    double operator()(int s, int a) const { return probs_(s, a); }
    const Matrix& probs() const { return probs_; }

private:
    Matrix probs_;
};

// ---------------------------------------------------------------------------
// GUMDP
// ---------------------------------------------------------------------------

/// General-utility MDP (S, A, p, p0, f). Immutable after construction.
/// The kernel is stored flat, indexed [s][a][s'].
class Gumdp {
public:
    Gumdp(int n_states, int n_actions, std::vector<double> kernel, Vector p0, Objective objective,
          bool state_only, double tolerance = kStochasticTolerance)
        : n_states_(n_states),
          n_actions_(n_actions),
          kernel_(std::move(kernel)),
          p0_(std::move(p0)),
          objective_(std::move(objective)),
          state_only_(state_only) {
        if (n_states_ <= 0) throw ValidationError("n_states: must be positive");
        if (n_actions_ <= 0) throw ValidationError("n_actions: must be positive");
        const auto expected = static_cast<std::size_t>(n_states_) * n_actions_ * n_states_;
        if (kernel_.size() != expected)
            throw ValidationError("kernel: expected " + std::to_string(expected) + " entries, got " +
                                  std::to_string(kernel_.size()));
        for (int s = 0; s < n_states_; ++s)
            for (int a = 0; a < n_actions_; ++a) {
                double* row = kernel_.data() + offset(s, a);
                double sum = 0.0;
                for (int t = 0; t < n_states_; ++t) {
                    if (!(row[t] >= 0.0))
                        throw ValidationError("kernel[" + std::to_string(s) + "][" +
                                              std::to_string(a) + "][" + std::to_string(t) +
                                              "]: negative or non-finite probability");
                    sum += row[t];
                }
                if (std::abs(sum - 1.0) > tolerance)
                    throw ValidationError("kernel[" + std::to_string(s) + "][" + std::to_string(a) +
                                          "]: row sums to " + std::to_string(sum) +
                                          " (state " + std::to_string(s) + ", action " +
                                          std::to_string(a) + ")");
                for (int t = 0; t < n_states_; ++t) row[t] /= sum;
            }
        if (p0_.size() != n_states_)
            throw ValidationError("p0: expected " + std::to_string(n_states_) + " entries");
        for (int s = 0; s < n_states_; ++s)
            if (!(p0_[s] >= 0.0))
                throw ValidationError("p0[" + std::to_string(s) + "]: negative probability");
        double p0_sum = p0_.sum();
        if (std::abs(p0_sum - 1.0) > tolerance)
            throw ValidationError("p0: sums to " + std::to_string(p0_sum));
        p0_ /= p0_sum;
        if (auto dim = objective_.dimension(); dim && *dim != occupancy_dim())
            throw ValidationError("objective: dimension " + std::to_string(*dim) +
                                  " does not match occupancy dimension " +
                                  std::to_string(occupancy_dim()));
    }

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    double p(int s, int a, int next) const { return kernel_[offset(s, a) + next]; }
    std::span<const double> row(int s, int a) const {
        return {kernel_.data() + offset(s, a), static_cast<std::size_t>(n_states_)};
    }
    const std::vector<double>& kernel() const { return kernel_; }
    const Vector& initial() const { return p0_; }
    const Objective& objective() const { return objective_; }
    bool state_only() const { return state_only_; }

    OccupancyKind occupancy_kind() const {
        return state_only_ ? OccupancyKind::state : OccupancyKind::state_action;
    }
    Eigen::Index occupancy_dim() const {
        return state_only_ ? n_states_ : static_cast<Eigen::Index>(n_states_) * n_actions_;
    }

    /// Optional metadata: display name and named policies shipped with the model.
    const std::string& name() const { return name_; }
    const std::map<std::string, Matrix>& policy_presets() const { return presets_; }

    Gumdp with_name(std::string name) const {
        Gumdp g = *this;
        g.name_ = std::move(name);
        return g;
    }
    Gumdp with_preset(std::string key, Matrix probs) const {
        StationaryPolicy check(probs);
        if (check.n_states() != n_states_ || check.n_actions() != n_actions_)
            throw ValidationError("policy_presets." + key + ": shape mismatch");
        Gumdp g = *this;
        g.presets_[std::move(key)] = check.probs();
        return g;
    }
    Gumdp with_objective(Objective objective, bool state_only) const {
        return Gumdp(n_states_, n_actions_, kernel_, p0_, std::move(objective), state_only)
            .with_metadata(name_, presets_);
    }

private:
    std::size_t offset(int s, int a) const {
        return (static_cast<std::size_t>(s) * n_actions_ + a) * n_states_;
    }
    Gumdp with_metadata(std::string name, std::map<std::string, Matrix> presets) const {
        Gumdp g = *this;
        g.name_ = std::move(name);
        g.presets_ = std::move(presets);
        return g;
    }

    int n_states_;
    int n_actions_;
    std::vector<double> kernel_;
    Vector p0_;
    Objective objective_;
    bool state_only_;
    std::string name_;
    std::map<std::string, Matrix> presets_;
};

inline void check_policy_shape(const Gumdp& g, const StationaryPolicy& pi) {
    if (pi.n_states() != g.n_states() || pi.n_actions() != g.n_actions())
        throw ValidationError("policy: shape " + std::to_string(pi.n_states()) + "x" +
                              std::to_string(pi.n_actions()) + " does not match GUMDP " +
                              std::to_string(g.n_states()) + "x" + std::to_string(g.n_actions()));
}

/// Resolves "uniform" or a preset stored on the model.
inline std::optional<StationaryPolicy> named_policy(const Gumdp& g, std::string_view name) {
    if (name == "uniform") return StationaryPolicy::uniform(g.n_states(), g.n_actions());
    if (auto it = g.policy_presets().find(std::string(name)); it != g.policy_presets().end())
        return StationaryPolicy(it->second);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Induced chains
// ---------------------------------------------------------------------------

/// P^pi(s, s') = sum_a pi(a|s) p(s'|s,a).
inline Matrix induced_state_chain(const Gumdp& g, const StationaryPolicy& pi) {
    check_policy_shape(g, pi);
    const int n = g.n_states();
    Matrix p = Matrix::Zero(n, n);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < g.n_actions(); ++a) {
            const double w = pi(s, a);
            if (w == 0.0) continue;
            auto row = g.row(s, a);
            for (int t = 0; t < n; ++t) p(s, t) += w * row[t];
        }
    return p;
}

/// Markov chain over state-action pairs, index s * |A| + a.
struct ExtendedChain {
    Matrix transition;
    Vector initial;
};

/// P~((s,a) -> (s',a')) = p(s'|s,a) pi(a'|s'),  p~0(s,a) = p0(s) pi(a|s).
inline ExtendedChain extended_chain(const Gumdp& g, const StationaryPolicy& pi) {
    check_policy_shape(g, pi);
    const int ns = g.n_states();
    const int na = g.n_actions();
    const Eigen::Index n = static_cast<Eigen::Index>(ns) * na;
    ExtendedChain ext{Matrix::Zero(n, n), Vector::Zero(n)};
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            const Eigen::Index from = static_cast<Eigen::Index>(s) * na + a;
            ext.initial[from] = g.initial()[s] * pi(s, a);
            auto row = g.row(s, a);
            for (int t = 0; t < ns; ++t) {
                if (row[t] == 0.0) continue;
                for (int b = 0; b < na; ++b)
                    ext.transition(from, static_cast<Eigen::Index>(t) * na + b) = row[t] * pi(t, b);
            }
        }
    return ext;
}

/// Mixes every kernel row with the uniform distribution: (1 - eps) p + eps / |S|.
inline Gumdp perturb_kernel(const Gumdp& g, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ValidationError("noise eps must lie in (0, 1), got " + std::to_string(eps));
    std::vector<double> kernel = g.kernel();
    const double floor = eps / g.n_states();
    for (double& x : kernel) x = (1.0 - eps) * x + floor;
    Gumdp out(g.n_states(), g.n_actions(), std::move(kernel), g.initial(), g.objective(),
              g.state_only());
    out = out.with_name(g.name().empty() ? std::string() : g.name() + "+noise");
    for (const auto& [key, probs] : g.policy_presets()) out = out.with_preset(key, probs);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation settings
// ---------------------------------------------------------------------------

enum class Setting { discounted, average };

inline std::string_view to_string(Setting s) {
    return s == Setting::discounted ? "discounted" : "average";
}

/// Parameters of a finite-trials evaluation. H is finite in the discounted
/// setting; the average setting always works with infinite-length trajectories.
struct EvalSettings {
    Setting setting = Setting::average;
    std::optional<double> gamma;
    int K = 1;
    std::optional<int> H;
    std::size_t N = 10000;
    std::uint64_t seed = 0;
    /// Extra key mixed into stream derivation so that grid cells get disjoint streams.
    std::uint64_t experiment = 0;

    static EvalSettings discounted(double gamma, int K, int H, std::size_t N, std::uint64_t seed) {
        EvalSettings s;
        s.setting = Setting::discounted;
        s.gamma = gamma;
        s.K = K;
        s.H = H;
        s.N = N;
        s.seed = seed;
        return s;
    }
    static EvalSettings average(int K, std::size_t N, std::uint64_t seed) {
        EvalSettings s;
        s.K = K;
        s.N = N;
        s.seed = seed;
        return s;
    }

    void validate() const {
        if (K < 1) throw ValidationError("K must be a positive integer");
        if (N < 1) throw ValidationError("N must be a positive integer");
        if (setting == Setting::discounted) {
            if (!gamma) throw ValidationError("discounted setting requires gamma");
            if (!(*gamma >= 0.0 && *gamma < 1.0))
                throw ValidationError("gamma must lie in [0, 1)");
            if (H && *H < 1) throw ValidationError("H must be a positive integer");
        } else {
            if (gamma) throw ValidationError("average setting takes no gamma");
            if (H) throw ValidationError("average setting uses infinite-length trajectories");
        }
    }
};

}  // namespace gumdp
