#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library beyond the model types.

#include <gumdp/model.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using gumdp::Matrix;
using gumdp::Vector;

/// P^t by repeated squaring.
inline Matrix matrix_power(Matrix p, std::uint64_t t) {
    Matrix out = Matrix::Identity(p.rows(), p.cols());
    while (t > 0) {
        if (t & 1u) out = out * p;
        p = p * p;
        t >>= 1u;
    }
    return out;
}

/// Truncated power series (1 - gamma) sum_t gamma^t p0^T P^t.
inline Vector discounted_series(const Matrix& p, const Vector& p0, double gamma, int terms = 20000) {
    Vector acc = Vector::Zero(p0.size());
    Vector row = p0;
    double w = 1.0 - gamma;
    for (int t = 0; t < terms; ++t) {
        acc += w * row;
        row = (row.transpose() * p).transpose();
        w *= gamma;
        if (w < 1e-18) break;
    }
    return acc;
}

/// Average of p0 P^t over t in [start, start + window); a window that is a
/// multiple of every period removes periodic oscillation once mixed.
inline Vector window_average(const Matrix& p, const Vector& p0, int start, int window) {
    Vector row = (p0.transpose() * matrix_power(p, start)).transpose();
    Vector acc = Vector::Zero(p0.size());
    for (int t = 0; t < window; ++t) {
        acc += row;
        row = (row.transpose() * p).transpose();
    }
    return acc / window;
}

/// Induced state chain computed directly from p(s'|s,a) and pi(a|s).
inline Matrix state_chain(const gumdp::Gumdp& g, const Matrix& pi) {
    Matrix p = Matrix::Zero(g.n_states(), g.n_states());
    for (int s = 0; s < g.n_states(); ++s)
        for (int a = 0; a < g.n_actions(); ++a)
            for (int t = 0; t < g.n_states(); ++t) p(s, t) += pi(s, a) * g.p(s, a, t);
    return p;
}

/// Lifts a state distribution to the model's occupancy space.
inline Vector lift(const gumdp::Gumdp& g, const Matrix& pi, const Vector& nu) {
    if (g.state_only()) return nu;
    Vector d(g.n_states() * g.n_actions());
    for (int s = 0; s < g.n_states(); ++s)
        for (int a = 0; a < g.n_actions(); ++a) d[s * g.n_actions() + a] = nu[s] * pi(s, a);
    return d;
}

/// E[f(mean of K iid atoms)] by summing over all L^K ordered sequences.
inline double expectation_by_sequences(const std::function<double(const Vector&)>& f,
                                       const std::vector<double>& probs, const std::vector<Vector>& atoms,
                                       int K) {
    const std::size_t L = probs.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(K), 0);
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        Vector d = Vector::Zero(atoms.front().size());
        for (auto i : idx) {
            w *= probs[i];
            d += atoms[i] / K;
        }
        total += w * f(d);
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == L) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return total;
}

/// Random row-stochastic rows; each row keeps each entry with probability `density`.
inline Vector random_simplex(std::mt19937_64& rng, int n, double density) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> e(1.0);
    Vector v = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
        if (u(rng) < density) v[i] = e(rng);
    if (v.sum() == 0.0) v[std::uniform_int_distribution<int>(0, n - 1)(rng)] = 1.0;
    return v / v.sum();
}

/// Random chain whose transitions are sparse enough to give multiple classes often.
inline Matrix random_chain(std::mt19937_64& rng, int n) {
    Matrix p(n, n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double density = 0.2 + 0.5 * u(rng);
    for (int i = 0; i < n; ++i) p.row(i) = random_simplex(rng, n, density).transpose();
    return p;
}

inline gumdp::Gumdp random_gumdp(std::mt19937_64& rng, int ns, int na, gumdp::Objective f, bool state_only) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double density = 0.2 + 0.6 * u(rng);
    std::vector<double> kernel;
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            Vector row = random_simplex(rng, ns, density);
            for (int t = 0; t < ns; ++t) kernel.push_back(row[t]);
        }
    Vector p0 = random_simplex(rng, ns, 0.6);
    return gumdp::Gumdp(ns, na, std::move(kernel), std::move(p0), std::move(f), state_only);
}

inline Matrix random_policy(std::mt19937_64& rng, int ns, int na) {
    Matrix pi(ns, na);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Mix of deterministic and stochastic rows.
    for (int s = 0; s < ns; ++s) pi.row(s) = random_simplex(rng, na, u(rng) < 0.3 ? 0.0 : 0.8).transpose();
    return pi;
}

/// Monte Carlo of J = sum_t gamma^t 1(S_t = s [, A_t = a]) with std::discrete_distribution.
struct ReturnSample {
    double mean;
    double variance;
    /// Standard error of the sample variance (from the fourth central moment).
    double variance_se;
};

inline ReturnSample monte_carlo_return(const gumdp::Gumdp& g, const Matrix& pi, double gamma, int target_s,
                                       int target_a, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int ns = g.n_states();
    const int na = g.n_actions();
    std::vector<std::discrete_distribution<int>> act, next;
    for (int s = 0; s < ns; ++s) {
        std::vector<double> w(static_cast<std::size_t>(na));
        for (int a = 0; a < na; ++a) w[a] = pi(s, a);
        act.emplace_back(w.begin(), w.end());
        for (int a = 0; a < na; ++a) {
            std::vector<double> r(ns);
            for (int t = 0; t < ns; ++t) r[t] = g.p(s, a, t);
            next.emplace_back(r.begin(), r.end());
        }
    }
    std::vector<double> p0(g.initial().data(), g.initial().data() + ns);
    std::discrete_distribution<int> init(p0.begin(), p0.end());
    int H = 1;
    while (std::pow(gamma, H) >= 1e-8) ++H;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) {
        int s = init(rng);
        double w = 1.0, j = 0.0;
        for (int t = 0; t < H; ++t) {
            const int a = act[s](rng);
            if (s == target_s && (target_a < 0 || a == target_a)) j += w;
            s = next[s * na + a](rng);
            w *= gamma;
        }
        x = j;
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    const double var = m2 * n / (n - 1);
    return {mean, var, std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

}  // namespace oracle
