#pragma once

#include "gumdp/errors.hpp"
#include "gumdp/linalg.hpp"
#include "gumdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace gumdp {

/// Edges with smaller probability are treated as absent in the transition graph.
inline constexpr double kEdgeThreshold = 1e-12;
inline constexpr double kChainTolerance = 1e-10;
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

namespace detail {

using Adjacency = std::vector<std::vector<int>>;

inline Adjacency transition_graph(const Matrix& p) {
    const auto n = static_cast<int>(p.rows());
    Adjacency adj(n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (p(s, t) > kEdgeThreshold) adj[s].push_back(t);
    return adj;
}

/// Iterative Tarjan. Returns component id per vertex; ids are in reverse
/// topological order of the condensation.
inline std::vector<int> strongly_connected_components(const Adjacency& adj, int& n_components) {
    const int n = static_cast<int>(adj.size());
    constexpr int unvisited = -1;
    std::vector<int> index(n, unvisited), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;  // (vertex, next edge)
    int counter = 0;
    n_components = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge < adj[v].size()) {
                const int w = adj[v][edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = n_components;
                } while (w != done);
                ++n_components;
            }
        }
    }
    return comp;
}

/// Closed communicating classes, each sorted, ordered by smallest member.
inline std::vector<std::vector<int>> closed_classes(const Adjacency& adj) {
    int n_comp = 0;
    const auto comp = strongly_connected_components(adj, n_comp);
    std::vector<char> closed(n_comp, 1);
    for (std::size_t s = 0; s < adj.size(); ++s)
        for (int t : adj[s])
            if (comp[t] != comp[s]) closed[comp[s]] = 0;
    std::vector<std::vector<int>> members(n_comp);
    for (std::size_t s = 0; s < adj.size(); ++s) members[comp[s]].push_back(static_cast<int>(s));
    std::vector<std::vector<int>> out;
    for (int c = 0; c < n_comp; ++c)
        if (closed[c]) out.push_back(std::move(members[c]));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

inline int count_closed_classes(const Adjacency& adj) {
    int n_comp = 0;
    const auto comp = strongly_connected_components(adj, n_comp);
    std::vector<char> closed(n_comp, 1);
    for (std::size_t s = 0; s < adj.size(); ++s)
        for (int t : adj[s])
            if (comp[t] != comp[s]) closed[comp[s]] = 0;
    return static_cast<int>(std::count(closed.begin(), closed.end(), 1));
}

}  // namespace detail

/// Recurrent/transient structure of a finite chain started from p0.
struct ChainDecomposition {
    std::vector<std::vector<int>> recurrent_classes;
    std::vector<int> transient;
    /// mu_l as full-length vectors, zero off class l.
    std::vector<Vector> stationary;
    /// alpha_l: probability of eventually entering class l from p0.
    Vector absorption;
    /// h(s, l): probability of entering class l when started in state s.
    Matrix absorption_by_state;
    /// Class index of each state, -1 for transient states.
    std::vector<int> class_of;

    std::size_t n_classes() const { return recurrent_classes.size(); }
};

/// Splits P into closed classes and transient states, solves the per-class
/// stationary equations and the absorption system from the transient states.
inline ChainDecomposition decompose(const Matrix& p, const Vector& p0) {
    const auto n = static_cast<int>(p.rows());
    if (n == 0 || p.cols() != n) throw ValidationError("decompose: transition matrix must be square");
    if (p0.size() != n) throw ValidationError("decompose: initial distribution size mismatch");
    if ((p.array() < 0.0).any() || max_row_sum_error(p) > 1e-9)
        throw ValidationError("decompose: matrix is not row-stochastic");

    ChainDecomposition out;
    out.recurrent_classes = detail::closed_classes(detail::transition_graph(p));
    out.class_of.assign(n, -1);
    for (std::size_t l = 0; l < out.recurrent_classes.size(); ++l)
        for (int s : out.recurrent_classes[l]) out.class_of[s] = static_cast<int>(l);
    for (int s = 0; s < n; ++s)
        if (out.class_of[s] < 0) out.transient.push_back(s);

    // Stationary distribution of each class: (P_CC^T - I) mu = 0 with one
    // equation replaced by the normalization sum(mu) = 1.
    for (const auto& cls : out.recurrent_classes) {
        const auto m = static_cast<Eigen::Index>(cls.size());
        Matrix sys(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) sys(i, j) = p(cls[j], cls[i]) - (i == j ? 1.0 : 0.0);
        sys.row(m - 1).setOnes();
        Vector rhs = Vector::Zero(m);
        rhs[m - 1] = 1.0;
        Vector mu_c = DenseSolver(sys, "stationary distribution").solve(rhs);
        if ((mu_c.array() <= 0.0).any())
            throw NumericalError("stationary distribution: non-positive entry on a recurrent class");
        Vector mu = Vector::Zero(n);
        for (Eigen::Index i = 0; i < m; ++i) mu[cls[i]] = mu_c[i];
        out.stationary.push_back(std::move(mu));
    }

    const auto n_classes = static_cast<Eigen::Index>(out.recurrent_classes.size());
    out.absorption_by_state = Matrix::Zero(n, n_classes);
    for (int s = 0; s < n; ++s)
        if (out.class_of[s] >= 0) out.absorption_by_state(s, out.class_of[s]) = 1.0;

    if (n_classes == 1) {
        out.absorption_by_state.col(0).setOnes();
    } else if (!out.transient.empty()) {
        // First-step analysis: (I - Q) h_l = R_l 1.
        const auto nt = static_cast<Eigen::Index>(out.transient.size());
        Matrix iq = Matrix::Identity(nt, nt);
        Matrix r = Matrix::Zero(nt, n_classes);
        for (Eigen::Index i = 0; i < nt; ++i) {
            const int s = out.transient[i];
            for (Eigen::Index j = 0; j < nt; ++j) iq(i, j) -= p(s, out.transient[j]);
            for (int t = 0; t < n; ++t)
                if (out.class_of[t] >= 0) r(i, out.class_of[t]) += p(s, t);
        }
        Matrix h = DenseSolver(iq, "absorption probabilities").solve(r);
        for (Eigen::Index i = 0; i < nt; ++i)
            out.absorption_by_state.row(out.transient[i]) = h.row(i);
    }

    out.absorption = out.absorption_by_state.transpose() * p0;
    const double total = out.absorption.sum();
    if (std::abs(total - 1.0) > kChainTolerance)
        throw NumericalError("absorption probabilities sum to " + std::to_string(total));
    out.absorption = out.absorption.cwiseMax(0.0).cwiseMin(1.0);
    out.absorption /= out.absorption.sum();
    if (n_classes == 1) out.absorption[0] = 1.0;
    return out;
}

/// Structured text rendering used by the analyze-chain subcommand.
inline std::string format_decomposition(const ChainDecomposition& d) {
    std::ostringstream os;
    os.precision(12);
    auto list = [&](const std::vector<int>& xs) {
        os << '[';
        for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
        os << ']';
    };
    os << "recurrent_classes: " << d.n_classes() << '\n';
    for (std::size_t l = 0; l < d.n_classes(); ++l) {
        os << "  class " << l << ": states ";
        list(d.recurrent_classes[l]);
        os << "  alpha " << d.absorption[static_cast<Eigen::Index>(l)] << "\n    mu: [";
        for (Eigen::Index s = 0; s < d.stationary[l].size(); ++s)
            os << (s ? ", " : "") << d.stationary[l][s];
        os << "]\n";
    }
    os << "transient: ";
    list(d.transient);
    os << '\n';
    return os.str();
}

/// |A|^|S| with saturation at max uint64.
inline std::uint64_t deterministic_policy_count(int n_states, int n_actions) {
    std::uint64_t count = 1;
    for (int s = 0; s < n_states; ++s) {
        if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n_actions))
            return std::numeric_limits<std::uint64_t>::max();
        count *= static_cast<std::uint64_t>(n_actions);
    }
    return count;
}

/// True iff every deterministic stationary policy induces exactly one recurrent class.
inline bool is_unichain(const Gumdp& g, std::uint64_t cap = kDefaultEnumerationCap) {
    const int ns = g.n_states();
    const int na = g.n_actions();
    if (deterministic_policy_count(ns, na) > cap)
        throw NumericalError("is_unichain: |A|^|S| exceeds the enumeration cap of " +
                             std::to_string(cap));
    // Successor lists per (s, a) are reused for every policy.
    std::vector<std::vector<int>> successors(static_cast<std::size_t>(ns) * na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            auto row = g.row(s, a);
            for (int t = 0; t < ns; ++t)
                if (row[t] > kEdgeThreshold) successors[static_cast<std::size_t>(s) * na + a].push_back(t);
        }
    std::vector<int> choice(ns, 0);  // mixed-radix counter
    detail::Adjacency adj(ns);
    while (true) {
        for (int s = 0; s < ns; ++s) adj[s] = successors[static_cast<std::size_t>(s) * na + choice[s]];
        if (detail::count_closed_classes(adj) != 1) return false;
        int digit = 0;
        while (digit < ns && ++choice[digit] == na) choice[digit++] = 0;
        if (digit == ns) return true;
    }
}

/// Law of the almost-sure limit of a single trajectory's empirical average
/// occupancy: with probability alpha_l it equals mu_l(s) pi(a|s) on class l.
struct LimitOccupancyLaw {
    struct Atom {
        double probability;
        Occupancy occupancy;
    };
    std::vector<Atom> atoms;
};

inline Occupancy class_occupancy(const Gumdp& g, const StationaryPolicy& pi, const Vector& mu) {
    if (g.state_only()) return Occupancy(mu, OccupancyKind::state);
    Vector d(g.occupancy_dim());
    for (int s = 0; s < g.n_states(); ++s)
        for (int a = 0; a < g.n_actions(); ++a)
            d[static_cast<Eigen::Index>(s) * g.n_actions() + a] = mu[s] * pi(s, a);
    return Occupancy(std::move(d), OccupancyKind::state_action);
}

inline LimitOccupancyLaw limit_occupancy_law(const Gumdp& g, const StationaryPolicy& pi,
                                             const ChainDecomposition& dec) {
    LimitOccupancyLaw law;
    for (std::size_t l = 0; l < dec.n_classes(); ++l)
        law.atoms.push_back({dec.absorption[static_cast<Eigen::Index>(l)],
                             class_occupancy(g, pi, dec.stationary[l])});
    return law;
}

inline LimitOccupancyLaw limit_occupancy_law(const Gumdp& g, const StationaryPolicy& pi) {
    return limit_occupancy_law(g, pi, decompose(induced_state_chain(g, pi), g.initial()));
}

}  // namespace gumdp
