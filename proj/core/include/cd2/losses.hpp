#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cd2/geometry.hpp"
#include "cd2/nn_index.hpp"

namespace cd2 {

enum class LossVariant {
    cd,             ///< plain Chamfer distance
    cd2_distance,   ///< exclude the vertices closest to the ground truth
    cd2_threshold,  ///< exclude vertices / points mapped by more than pvi_t partners
    cd2_percent,    ///< exclude the top fraction by mapping cardinality
};

std::string_view to_string(LossVariant v);
/// Accepts the enum spelling ("cd2_threshold"); throws ConfigError otherwise.
LossVariant parse_variant(std::string_view name);

/// Loss selection and exclusion parameters. Only the fields used by the
/// chosen variant are read. Defaults are the standard full-scale settings.
struct LossConfig {
    LossVariant variant = LossVariant::cd;
    double p_d = 0.3;                      ///< fraction of vertices to exclude (distance)
    double d_t = 1e-7;                     ///< squared-distance threshold (distance)
    int pvi_t = 4;                         ///< mapping-cardinality threshold (threshold)
    double pvi_p = 0.08;                   ///< fraction of vertices to exclude (percent)
    double s1_exclusion_fraction = 0.01;   ///< fraction of points to exclude (percent)

    /// Throws ConfigError listing every out-of-range field.
    void validate() const;

    friend bool operator==(const LossConfig&, const LossConfig&) = default;
};

/// Parses a JSON object {variant, p_d, d_T, pvi_t, pvi_p,
/// s1_exclusion_fraction}; absent keys keep their defaults.
LossConfig parse_loss_config(std::string_view json_text);
std::string loss_config_to_json(const LossConfig& cfg);

/// Loss value plus its gradient with respect to every vertex of S2.
///
/// For the two-pass variants the value and gradient come from the Chamfer
/// distance of the residual sets; excluded vertices get exactly zero rows.
struct LossResult {
    double value = 0.0;
    std::vector<Vec3> grad;
    std::vector<Index> excluded_vertices;  ///< S_2d, sorted
    std::vector<Index> excluded_points;    ///< S_1d, sorted
    NnTables residual_tables;              ///< tables over (S1 - S_1d, S2 - S_2d)
};

/// Chamfer loss with the nearest-neighbor subgradient:
/// grad_i = 2/|S2| (V_i - phi(V_i)) + 2/|S1| sum_{j: psi(P_j) = V_i} (V_i - P_j).
LossResult cd_loss(const PointSet& s1, const PointSet& s2);

/// First pass ranks vertices by dist2 and excludes the
/// max(ceil(p_d |S2|), #{dist2 < d_T}) closest ones plus their nearest
/// points; the loss is the Chamfer distance of what remains.
LossResult cd2_distance_loss(const PointSet& s1, const PointSet& s2, const LossConfig& cfg);

/// First pass inverts the nearest-neighbor maps and excludes by mapping
/// cardinality (threshold or top fraction) on both sets.
LossResult cd2_mapping_loss(const PointSet& s1, const PointSet& s2, const LossConfig& cfg);

/// Dispatches on cfg.variant.
LossResult loss_eval(const PointSet& s1, const PointSet& s2, const LossConfig& cfg);

/// Exclusion sets a two-pass variant would pick from first-pass tables.
struct Exclusion {
    std::vector<Index> vertices;
    std::vector<Index> points;
};
Exclusion select_exclusion(const NnTables& tables, std::size_t n1, std::size_t n2,
                           const LossConfig& cfg);

/// Chamfer loss of (S1 - excluded points, S2 - excluded vertices) with the
/// gradient scattered back to the original vertex indices.
LossResult residual_loss(const PointSet& s1, const PointSet& s2, Exclusion exclusion);

}  // namespace cd2
