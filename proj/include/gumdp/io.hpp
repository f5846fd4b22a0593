#pragma once

#include "gumdp/builtins.hpp"
#include "gumdp/errors.hpp"
#include "gumdp/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gumdp {

using Json = nlohmann::json;

/// Row-sum tolerance for documents; rows are renormalized after the check.
inline constexpr double kLoadTolerance = 1e-9;

namespace detail {

inline const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object()) throw ValidationError("document: expected a JSON object");
    auto it = doc.find(key);
    if (it == doc.end()) throw ValidationError(std::string(key) + ": missing field");
    return *it;
}

inline double number_at(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path + ": expected a number");
    return v.get<double>();
}

inline int positive_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ValidationError(path + ": expected a positive integer");
    return v.get<int>();
}

inline Vector vector_at(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path + ": expected an array");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = number_at(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

inline Matrix matrix_at(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ValidationError(path + ": expected a non-empty array of rows");
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != cols)
            throw ValidationError(row_path + ": expected " + std::to_string(cols) + " entries");
        out.row(static_cast<Eigen::Index>(i)) = vector_at(v[i], row_path).transpose();
    }
    return out;
}

inline Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

inline Json to_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
    return out;
}

}  // namespace detail

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(origin + ": malformed JSON: " + e.what());
    }
}

inline Objective objective_from_json(const Json& doc) {
    const auto kind = parse_objective_kind([&] {
        const Json& k = detail::require(doc, "kind");
        if (!k.is_string()) throw ValidationError("objective.kind: expected a string");
        return k.get<std::string>();
    }());
    auto field = [&](const char* key) -> const Json& {
        auto it = doc.find(key);
        if (it == doc.end())
            throw ValidationError(std::string("objective.") + key + ": required for kind '" +
                                  std::string(to_string(kind)) + "'");
        return *it;
    };
    switch (kind) {
        case ObjectiveKind::linear: return Objective::linear(detail::vector_at(field("b"), "objective.b"));
        case ObjectiveKind::entropy: return Objective::entropy();
        case ObjectiveKind::kl: return Objective::kl(detail::vector_at(field("d_beta"), "objective.d_beta"));
        case ObjectiveKind::quadratic:
            return Objective::quadratic(detail::matrix_at(field("A"), "objective.A"));
    }
    throw ValidationError("objective.kind: unsupported");
}

inline Json objective_to_json(const Objective& f) {
    Json out = {{"kind", std::string(to_string(f.kind()))}};
    switch (f.kind()) {
        case ObjectiveKind::linear: out["b"] = detail::to_json(f.weights()); break;
        case ObjectiveKind::kl: out["d_beta"] = detail::to_json(f.reference()); break;
        case ObjectiveKind::quadratic: out["A"] = detail::to_json(f.matrix()); break;
        case ObjectiveKind::entropy: break;
    }
    return out;
}

/// Builds a validated GUMDP from a parsed document (schema in the README).
inline Gumdp gumdp_from_json(const Json& doc) {
    const int ns = detail::positive_int(detail::require(doc, "n_states"), "n_states");
    const int na = detail::positive_int(detail::require(doc, "n_actions"), "n_actions");
    const Json& kj = detail::require(doc, "kernel");
    if (!kj.is_array() || kj.size() != static_cast<std::size_t>(ns))
        throw ValidationError("kernel: expected " + std::to_string(ns) + " state blocks");
    std::vector<double> kernel;
    kernel.reserve(static_cast<std::size_t>(ns) * na * ns);
    for (int s = 0; s < ns; ++s) {
        const std::string sp = "kernel[" + std::to_string(s) + "]";
        if (!kj[s].is_array() || kj[s].size() != static_cast<std::size_t>(na))
            throw ValidationError(sp + ": expected " + std::to_string(na) + " action rows");
        for (int a = 0; a < na; ++a) {
            const std::string ap = sp + "[" + std::to_string(a) + "]";
            Vector row = detail::vector_at(kj[s][a], ap);
            if (row.size() != ns) throw ValidationError(ap + ": expected " + std::to_string(ns) + " entries");
            for (int t = 0; t < ns; ++t) kernel.push_back(row[t]);
        }
    }
    Vector p0 = detail::vector_at(detail::require(doc, "p0"), "p0");
    const Json& so = detail::require(doc, "state_only");
    if (!so.is_boolean()) throw ValidationError("state_only: expected a boolean");
    Objective f = objective_from_json(detail::require(doc, "objective"));

    Gumdp g(ns, na, std::move(kernel), std::move(p0), std::move(f), so.get<bool>(), kLoadTolerance);
    if (auto it = doc.find("name"); it != doc.end() && it->is_string()) g = g.with_name(it->get<std::string>());
    if (auto it = doc.find("policy_presets"); it != doc.end()) {
        if (!it->is_object()) throw ValidationError("policy_presets: expected an object");
        for (const auto& [key, value] : it->items()) {
            Matrix probs = detail::matrix_at(value, "policy_presets." + key);
            g = g.with_preset(key, StationaryPolicy(probs, kLoadTolerance).probs());
        }
    }
    return g;
}

inline Json gumdp_to_json(const Gumdp& g) {
    Json kernel = Json::array();
    for (int s = 0; s < g.n_states(); ++s) {
        Json block = Json::array();
        for (int a = 0; a < g.n_actions(); ++a) {
            Json row = Json::array();
            for (double x : g.row(s, a)) row.push_back(x);
            block.push_back(std::move(row));
        }
        kernel.push_back(std::move(block));
    }
    Json doc = {{"n_states", g.n_states()},
                {"n_actions", g.n_actions()},
                {"kernel", std::move(kernel)},
                {"p0", detail::to_json(g.initial())},
                {"state_only", g.state_only()},
                {"objective", objective_to_json(g.objective())}};
    if (!g.name().empty()) doc["name"] = g.name();
    if (!g.policy_presets().empty()) {
        Json presets = Json::object();
        for (const auto& [key, probs] : g.policy_presets()) presets[key] = detail::to_json(probs);
        doc["policy_presets"] = std::move(presets);
    }
    return doc;
}

inline Gumdp load_gumdp(const std::filesystem::path& path) {
    const std::string origin = path.string();
    Json doc = parse_json(read_text_file(path), origin);
    try {
        return gumdp_from_json(doc);
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

inline void save_gumdp(const Gumdp& g, const std::filesystem::path& path) {
    write_text_file(path, gumdp_to_json(g).dump(2) + "\n");
}

/// A builtin name (mf1, mf2, mf3) or the path of a GUMDP document.
/// Builtins are only used when no file of that name exists.
inline Gumdp resolve_gumdp(const std::string& ref, bool builtin_state_only = false) {
    if (is_builtin_name(ref) && !std::filesystem::exists(ref)) return builtin_gumdp(ref, builtin_state_only);
    return load_gumdp(ref);
}

/// Policy document: either a bare |S| x |A| array or {"probs": [...]}.
inline StationaryPolicy policy_from_json(const Json& doc) {
    const Json& table = doc.is_object() ? detail::require(doc, "probs") : doc;
    return StationaryPolicy(detail::matrix_at(table, "policy"), kLoadTolerance);
}

/// "uniform", a preset stored on the model, or a policy file path.
inline StationaryPolicy resolve_policy(const Gumdp& g, const std::string& ref) {
    if (auto named = named_policy(g, ref)) return *named;
    if (!std::filesystem::exists(ref))
        throw ValidationError("policy '" + ref + "' is neither a preset of this GUMDP nor an existing file");
    StationaryPolicy pi = policy_from_json(parse_json(read_text_file(ref), ref));
    check_policy_shape(g, pi);
    return pi;
}

}  // namespace gumdp
