#include "cd2/chamfer.hpp"

#include <string>

#include "cd2/error.hpp"

namespace cd2 {

namespace {

double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

}  // namespace

ChamferResult chamfer_from_tables(NnTables tables) {
    if (tables.dist1.empty() || tables.dist2.empty()) {
        throw InputError("empty point set");
    }
    ChamferResult r;
    r.part1 = mean(tables.dist1);
    r.part2 = mean(tables.dist2);
    r.total = r.part1 + r.part2;
    r.tables = std::move(tables);
    return r;
}

ChamferResult chamfer(const PointSet& s1, const PointSet& s2) {
    return chamfer_from_tables(nn_tables(s1, s2));
}

MappingStats mapping_stats(const NnTables& tables, std::size_t n1, std::size_t n2) {
    if (tables.index1.size() != n1 || tables.dist1.size() != n1 || tables.index2.size() != n2 ||
        tables.dist2.size() != n2) {
        throw InputError("nearest-neighbor tables do not match set sizes " + std::to_string(n1) +
                         " / " + std::to_string(n2));
    }
    MappingStats m;
    m.p_of_v.resize(n2);
    m.v_of_p.resize(n1);
    for (std::size_t j = 0; j < n1; ++j) {
        const Index v = tables.index1[j];
        if (v >= n2) throw InputError("index1 entry out of range: " + std::to_string(v));
        m.p_of_v[v].push_back(static_cast<Index>(j));
    }
    for (std::size_t i = 0; i < n2; ++i) {
        const Index p = tables.index2[i];
        if (p >= n1) throw InputError("index2 entry out of range: " + std::to_string(p));
        m.v_of_p[p].push_back(static_cast<Index>(i));
    }
    return m;
}

}  // namespace cd2
