#include "cd2/losses.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cd2/chamfer.hpp"
#include "cd2/error.hpp"

namespace cd2 {

namespace {

constexpr std::array<std::pair<LossVariant, std::string_view>, 4> kVariantNames{{
    {LossVariant::cd, "cd"},
    {LossVariant::cd2_distance, "cd2_distance"},
    {LossVariant::cd2_threshold, "cd2_threshold"},
    {LossVariant::cd2_percent, "cd2_percent"},
}};

// ceil(fraction * n); the small slack keeps 0.3 * 10 at 3.
std::size_t fraction_count(double fraction, std::size_t n) {
    const double x = fraction * static_cast<double>(n);
    return static_cast<std::size_t>(std::max(0.0, std::ceil(x - 1e-9)));
}

void check_nonempty(const PointSet& s1, const PointSet& s2) {
    if (s1.empty() || s2.empty()) throw InputError("empty point set");
    if (s1.dim() != s2.dim()) throw InputError("dimension mismatch");
}

// The `count` indices with the largest keys, ties broken by lowest index.
template <typename Key>
std::vector<Index> top_by(std::size_t n, std::size_t count, Key&& key) {
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return key(a) > key(b); });
    order.resize(std::min(count, n));
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

std::string_view to_string(LossVariant v) {
    for (const auto& [variant, name] : kVariantNames) {
        if (variant == v) return name;
    }
    return "unknown";
}

LossVariant parse_variant(std::string_view name) {
    for (const auto& [variant, n] : kVariantNames) {
        if (n == name) return variant;
    }
    throw ConfigError("unknown loss variant '" + std::string(name) +
                      "' (expected cd, cd2_distance, cd2_threshold or cd2_percent)");
}

void LossConfig::validate() const {
    std::vector<std::string> errors;
    auto fraction = [&](const char* field, double v) {
        if (!(v >= 0.0 && v < 1.0)) {
            errors.push_back(std::string(field) + " must be in [0, 1), got " + std::to_string(v));
        }
    };
    switch (variant) {
        case LossVariant::cd:
            break;
        case LossVariant::cd2_distance:
            fraction("p_d", p_d);
            if (!(d_t >= 0.0) || !std::isfinite(d_t)) {
                errors.push_back("d_T must be a finite value >= 0, got " + std::to_string(d_t));
            }
            break;
        case LossVariant::cd2_threshold:
            if (pvi_t < 1) errors.push_back("pvi_t must be a positive integer, got " + std::to_string(pvi_t));
            break;
        case LossVariant::cd2_percent:
            fraction("pvi_p", pvi_p);
            fraction("s1_exclusion_fraction", s1_exclusion_fraction);
            break;
    }
    if (!errors.empty()) {
        std::string msg = "invalid loss config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

LossConfig parse_loss_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("loss config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("loss config must be a JSON object");

    LossConfig cfg;
    std::vector<std::string> errors;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "variant") {
                cfg.variant = parse_variant(value.get<std::string>());
            } else if (key == "p_d") {
                cfg.p_d = value.get<double>();
            } else if (key == "d_T") {
                cfg.d_t = value.get<double>();
            } else if (key == "pvi_t") {
                cfg.pvi_t = value.get<int>();
            } else if (key == "pvi_p") {
                cfg.pvi_p = value.get<double>();
            } else if (key == "s1_exclusion_fraction") {
                cfg.s1_exclusion_fraction = value.get<double>();
            } else {
                errors.push_back("unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception&) {
            errors.push_back(key + " has the wrong type");
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg = "invalid loss config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    cfg.validate();
    return cfg;
}

std::string loss_config_to_json(const LossConfig& cfg) {
    nlohmann::json j{{"variant", std::string(to_string(cfg.variant))},
                     {"p_d", cfg.p_d},
                     {"d_T", cfg.d_t},
                     {"pvi_t", cfg.pvi_t},
                     {"pvi_p", cfg.pvi_p},
                     {"s1_exclusion_fraction", cfg.s1_exclusion_fraction}};
    return j.dump();
}

LossResult cd_loss(const PointSet& s1, const PointSet& s2) {
    check_nonempty(s1, s2);
    auto cd = chamfer(s1, s2);
    const auto& t = cd.tables;
    const double w2 = 2.0 / static_cast<double>(s2.size());
    const double w1 = 2.0 / static_cast<double>(s1.size());

    LossResult r;
    r.value = cd.total;
    r.grad.resize(s2.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
        r.grad[i] = w2 * (s2[i] - s1[t.index2[i]]);
    }
    for (std::size_t j = 0; j < s1.size(); ++j) {
        const Index v = t.index1[j];
        r.grad[v] += w1 * (s2[v] - s1[j]);
    }
    r.residual_tables = std::move(cd.tables);
    return r;
}

Exclusion select_exclusion(const NnTables& t, std::size_t n1, std::size_t n2, const LossConfig& cfg) {
    Exclusion ex;
    switch (cfg.variant) {
        case LossVariant::cd:
            return ex;
        case LossVariant::cd2_distance: {
            const auto below = static_cast<std::size_t>(
                std::count_if(t.dist2.begin(), t.dist2.end(), [&](double d) { return d < cfg.d_t; }));
            const std::size_t k = std::max(fraction_count(cfg.p_d, n2), below);
            ex.vertices = top_by(n2, k, [&](Index i) { return -t.dist2[i]; });
            for (Index i : ex.vertices) ex.points.push_back(t.index2[i]);
            std::sort(ex.points.begin(), ex.points.end());
            ex.points.erase(std::unique(ex.points.begin(), ex.points.end()), ex.points.end());
            return ex;
        }
        case LossVariant::cd2_threshold:
        case LossVariant::cd2_percent: {
            const auto stats = mapping_stats(t, n1, n2);
            auto p_card = [&](Index i) { return stats.p_of_v[i].size(); };
            auto v_card = [&](Index j) { return stats.v_of_p[j].size(); };
            if (cfg.variant == LossVariant::cd2_threshold) {
                const auto limit = static_cast<std::size_t>(cfg.pvi_t);
                for (Index i = 0; i < n2; ++i) {
                    if (p_card(i) > limit) ex.vertices.push_back(i);
                }
                for (Index j = 0; j < n1; ++j) {
                    if (v_card(j) > limit) ex.points.push_back(j);
                }
            } else {
                ex.vertices = top_by(n2, fraction_count(cfg.pvi_p, n2), p_card);
                ex.points = top_by(n1, fraction_count(cfg.s1_exclusion_fraction, n1), v_card);
            }
            return ex;
        }
    }
    return ex;
}

LossResult residual_loss(const PointSet& s1, const PointSet& s2, Exclusion exclusion) {
    check_nonempty(s1, s2);
    if (exclusion.vertices.size() >= s2.size() || exclusion.points.size() >= s1.size()) {
        throw InputError("over-exclusion: excluding " + std::to_string(exclusion.vertices.size()) +
                         " of " + std::to_string(s2.size()) + " vertices and " +
                         std::to_string(exclusion.points.size()) + " of " +
                         std::to_string(s1.size()) + " points leaves an empty set");
    }
    // std::vector<bool> has no contiguous storage to view as a span.
    const auto drop_v = std::make_unique<bool[]>(s2.size());
    const auto drop_p = std::make_unique<bool[]>(s1.size());
    for (Index i : exclusion.vertices) {
        if (i >= s2.size()) throw InputError("excluded vertex index out of range");
        drop_v[i] = true;
    }
    for (Index j : exclusion.points) {
        if (j >= s1.size()) throw InputError("excluded point index out of range");
        drop_p[j] = true;
    }
    const PointSet s1r = s1.without({drop_p.get(), s1.size()});
    const PointSet s2r = s2.without({drop_v.get(), s2.size()});

    LossResult inner = cd_loss(s1r, s2r);
    LossResult r;
    r.value = inner.value;
    r.grad.assign(s2.size(), Vec3::Zero());
    std::size_t k = 0;
    for (std::size_t i = 0; i < s2.size(); ++i) {
        if (!drop_v[i]) r.grad[i] = inner.grad[k++];
    }
    r.excluded_vertices = std::move(exclusion.vertices);
    r.excluded_points = std::move(exclusion.points);
    r.residual_tables = std::move(inner.residual_tables);
    return r;
}

LossResult cd2_distance_loss(const PointSet& s1, const PointSet& s2, const LossConfig& cfg) {
    if (cfg.variant != LossVariant::cd2_distance) {
        throw ConfigError("cd2_distance_loss called with variant " + std::string(to_string(cfg.variant)));
    }
    cfg.validate();
    check_nonempty(s1, s2);
    const auto tables = nn_tables(s1, s2);
    return residual_loss(s1, s2, select_exclusion(tables, s1.size(), s2.size(), cfg));
}

LossResult cd2_mapping_loss(const PointSet& s1, const PointSet& s2, const LossConfig& cfg) {
    if (cfg.variant != LossVariant::cd2_threshold && cfg.variant != LossVariant::cd2_percent) {
        throw ConfigError("cd2_mapping_loss called with variant " + std::string(to_string(cfg.variant)));
    }
    cfg.validate();
    check_nonempty(s1, s2);
    const auto tables = nn_tables(s1, s2);
    return residual_loss(s1, s2, select_exclusion(tables, s1.size(), s2.size(), cfg));
}

LossResult loss_eval(const PointSet& s1, const PointSet& s2, const LossConfig& cfg) {
    switch (cfg.variant) {
        case LossVariant::cd:
            return cd_loss(s1, s2);
        case LossVariant::cd2_distance:
            return cd2_distance_loss(s1, s2, cfg);
        case LossVariant::cd2_threshold:
        case LossVariant::cd2_percent:
            return cd2_mapping_loss(s1, s2, cfg);
    }
    throw ConfigError("unknown loss variant");
}

}  // namespace cd2
