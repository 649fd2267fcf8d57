#include <gtest/gtest.h>

#include <random>

#include "cd2/chamfer.hpp"
#include "cd2/error.hpp"
#include "cd2/losses.hpp"
#include "oracles.hpp"

using namespace cd2;

namespace {

LossConfig config(LossVariant v) {
    LossConfig c;
    c.variant = v;
    return c;
}

// Scaled max-norm relative error between two gradient lists.
double grad_error(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    double scale = 1e-12;
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max(scale, b[i].cwiseAbs().maxCoeff());
        err = std::max(err, (a[i] - b[i]).cwiseAbs().maxCoeff());
    }
    return err / scale;
}

// Every point's two nearest candidates (in both directions) differ by at
// least `gap` in squared distance, so small perturbations keep the tables.
bool tie_free(const PointSet& s1, const PointSet& s2, double gap) {
    auto check = [&](const PointSet& from, const PointSet& to) {
        for (const auto& q : from.points()) {
            double best = 1e300, second = 1e300;
            for (const auto& p : to.points()) {
                const double d = oracle::sq(p, q);
                if (d < best) {
                    second = best;
                    best = d;
                } else if (d < second) {
                    second = d;
                }
            }
            if (to.size() > 1 && second - best < gap) return false;
        }
        return true;
    };
    return check(s1, s2) && check(s2, s1);
}

PointSet remaining(const PointSet& s, const std::vector<Index>& dropped) {
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::binary_search(dropped.begin(), dropped.end(), static_cast<Index>(i))) out.push_back(s[i]);
    }
    return PointSet(std::move(out), s.dim());
}

}  // namespace

TEST(CdLoss, SinglePairValueAndGradient) {
    const auto r = cd_loss(PointSet({Vec3(0, 0, 0)}), PointSet({Vec3(1, 0, 0)}));
    EXPECT_EQ(r.value, 2.0);
    ASSERT_EQ(r.grad.size(), 1u);
    EXPECT_EQ(r.grad[0], Vec3(4, 0, 0));
    EXPECT_TRUE(r.excluded_vertices.empty());
}

TEST(CdLoss, GradientHandCase) {
    // S1 = {(0,0,0), (2,0,0)}, S2 = {(0.5,0,0)}: both points map to the
    // single vertex, whose own nearest point is (0,0,0).
    const PointSet s1({Vec3(0, 0, 0), Vec3(2, 0, 0)});
    const PointSet s2({Vec3(0.5, 0, 0)});
    const auto r = cd_loss(s1, s2);
    EXPECT_DOUBLE_EQ(r.value, (0.25 + 2.25) / 2 + 0.25);
    // 2/1 * 0.5 + 2/2 * (0.5 + (-1.5)) = 1 - 1 = 0
    EXPECT_DOUBLE_EQ(r.grad[0].x(), 0.0);
}

TEST(CdLoss, ValueMatchesChamfer) {
    std::mt19937_64 rng(51);
    const auto s1 = oracle::random_points(rng, 90, 3);
    const auto s2 = oracle::random_points(rng, 70, 3);
    EXPECT_EQ(cd_loss(s1, s2).value, chamfer(s1, s2).total);
    EXPECT_THROW(cd_loss(PointSet(3), s2), InputError);
    EXPECT_THROW(cd_loss(s1, PointSet({Vec3::Zero()}, 2)), InputError);
}

TEST(Gradient, MatchesFiniteDifferencesWithFixedExclusion) {
    std::mt19937_64 rng(52);
    const std::array<LossConfig, 4> configs{
        config(LossVariant::cd),
        config(LossVariant::cd2_distance),
        [] { auto c = config(LossVariant::cd2_threshold); c.pvi_t = 2; return c; }(),
        [] { auto c = config(LossVariant::cd2_percent); c.pvi_p = 0.2; c.s1_exclusion_fraction = 0.1; return c; }(),
    };
    for (const auto& cfg : configs) {
        int done = 0;
        for (int attempt = 0; attempt < 500 && done < 20; ++attempt) {
            const int dim = attempt % 2 ? 3 : 2;
            const auto s1 = oracle::random_points(rng, 30, dim);
            const auto s2 = oracle::random_points(rng, 20, dim);
            const auto r = loss_eval(s1, s2, cfg);
            Exclusion ex{r.excluded_vertices, r.excluded_points};
            if (!tie_free(remaining(s1, ex.points), remaining(s2, ex.vertices), 1e-3)) continue;
            const auto fd = oracle::fd_gradient(
                [&](const PointSet& v) { return residual_loss(s1, v, ex).value; }, s2, 1e-6);
            EXPECT_LT(grad_error(r.grad, fd), 1e-5) << to_string(cfg.variant);
            ++done;
        }
        EXPECT_EQ(done, 20) << to_string(cfg.variant);
    }
}

TEST(Reduction, NonBindingConfigsEqualCd) {
    std::mt19937_64 rng(53);
    LossConfig dist = config(LossVariant::cd2_distance);
    dist.p_d = 0.0;
    dist.d_t = 0.0;
    LossConfig thr = config(LossVariant::cd2_threshold);
    thr.pvi_t = 1000;
    LossConfig pct = config(LossVariant::cd2_percent);
    pct.pvi_p = 0.0;
    pct.s1_exclusion_fraction = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto s1 = oracle::random_points(rng, 40 + trial, trial % 2 ? 3 : 2);
        const auto s2 = oracle::random_points(rng, 30 + trial, trial % 2 ? 3 : 2);
        const auto base = cd_loss(s1, s2);
        for (const auto& cfg : {config(LossVariant::cd), dist, thr, pct}) {
            const auto r = loss_eval(s1, s2, cfg);
            EXPECT_EQ(r.value, base.value);
            EXPECT_EQ(r.grad, base.grad);
            EXPECT_TRUE(r.excluded_vertices.empty());
            EXPECT_TRUE(r.excluded_points.empty());
        }
    }
}

TEST(Exclusion, DistanceHandCase) {
    // Vertex distances to S1 (squared): 0.01, 1, 0.04, 4. p_d = 0.5 picks
    // the two closest, vertices 0 and 2; both map to point 0.
    const PointSet s1({Vec3(0, 0, 0), Vec3(5, 0, 0)});
    const PointSet s2({Vec3(0.1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0.2, 0), Vec3(5, 2, 0)});
    LossConfig cfg = config(LossVariant::cd2_distance);
    cfg.p_d = 0.5;
    cfg.d_t = 0.0;
    const auto ex = select_exclusion(nn_tables(s1, s2), 2, 4, cfg);
    EXPECT_EQ(ex.vertices, (std::vector<Index>{0, 2}));
    EXPECT_EQ(ex.points, (std::vector<Index>{0}));

    // d_T larger than two of the distances but p_d asks for only one.
    cfg.p_d = 0.25;
    cfg.d_t = 0.05;
    EXPECT_EQ(select_exclusion(nn_tables(s1, s2), 2, 4, cfg).vertices, (std::vector<Index>{0, 2}));
    cfg.d_t = 0.02;
    EXPECT_EQ(select_exclusion(nn_tables(s1, s2), 2, 4, cfg).vertices, (std::vector<Index>{0}));
}

TEST(Exclusion, MatchesOracleAndTies) {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 60; ++trial) {
        const auto s1 = oracle::lattice_points(rng, 60, 2, 3);
        const auto s2 = oracle::lattice_points(rng, 25, 2, 3);
        const auto t = oracle::tables(s1, s2);
        std::vector<std::size_t> p_card(25, 0), v_card(60, 0);
        for (auto v : t.index1) ++p_card[v];
        for (auto p : t.index2) ++v_card[p];

        // Threshold.
        LossConfig thr = config(LossVariant::cd2_threshold);
        thr.pvi_t = 3;
        const auto et = select_exclusion(nn_tables(s1, s2), 60, 25, thr);
        std::vector<Index> want_v, want_p;
        for (Index i = 0; i < 25; ++i) if (p_card[i] > 3) want_v.push_back(i);
        for (Index j = 0; j < 60; ++j) if (v_card[j] > 3) want_p.push_back(j);
        EXPECT_EQ(et.vertices, want_v);
        EXPECT_EQ(et.points, want_p);

        // Percent: count = ceil(f n); selection by repeated argmax, lowest index first.
        auto top = [](const std::vector<std::size_t>& key, std::size_t count) {
            std::vector<bool> used(key.size(), false);
            std::vector<Index> out;
            for (std::size_t c = 0; c < count; ++c) {
                std::size_t best = key.size();
                for (std::size_t i = 0; i < key.size(); ++i) {
                    if (!used[i] && (best == key.size() || key[i] > key[best])) best = i;
                }
                used[best] = true;
                out.push_back(static_cast<Index>(best));
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        LossConfig pct = config(LossVariant::cd2_percent);
        pct.pvi_p = 0.2;                  // ceil(5) = 5 vertices
        pct.s1_exclusion_fraction = 0.05;  // ceil(3) = 3 points
        const auto ep = select_exclusion(nn_tables(s1, s2), 60, 25, pct);
        EXPECT_EQ(ep.vertices, top(p_card, 5));
        EXPECT_EQ(ep.points, top(v_card, 3));

        // Distance: k smallest dist2 with lowest index first on ties.
        LossConfig dist = config(LossVariant::cd2_distance);
        dist.p_d = 0.3;  // ceil(7.5) = 8
        dist.d_t = 0.0;
        std::vector<std::size_t> neg(25);
        for (std::size_t i = 0; i < 25; ++i) neg[i] = static_cast<std::size_t>(1000 - t.dist2[i]);
        const auto ed = select_exclusion(nn_tables(s1, s2), 60, 25, dist);
        EXPECT_EQ(ed.vertices, top(neg, 8));
    }
}

TEST(Exclusion, PercentIsMonotone) {
    std::mt19937_64 rng(55);
    const auto s1 = oracle::random_points(rng, 300, 3);
    const auto s2 = oracle::random_points(rng, 60, 3);
    const auto t = nn_tables(s1, s2);
    std::vector<Index> prev;
    for (double p = 0.0; p < 0.95; p += 0.05) {
        LossConfig cfg = config(LossVariant::cd2_percent);
        cfg.pvi_p = p;
        const auto ex = select_exclusion(t, 300, 60, cfg);
        EXPECT_TRUE(std::includes(ex.vertices.begin(), ex.vertices.end(), prev.begin(), prev.end())) << p;
        prev = ex.vertices;
    }
}

TEST(Residual, ExcludedRowsAreZeroAndValueIsResidualChamfer) {
    std::mt19937_64 rng(56);
    const auto s1 = oracle::random_points(rng, 80, 3);
    const auto s2 = oracle::random_points(rng, 40, 3);
    LossConfig cfg = config(LossVariant::cd2_distance);
    const auto r = loss_eval(s1, s2, cfg);
    EXPECT_EQ(r.excluded_vertices.size(), 12u);
    ASSERT_EQ(r.grad.size(), 40u);
    for (Index i : r.excluded_vertices) EXPECT_EQ(r.grad[i], Vec3::Zero());

    std::vector<bool> drop_v(40, false), drop_p(80, false);
    for (Index i : r.excluded_vertices) drop_v[i] = true;
    for (Index j : r.excluded_points) drop_p[j] = true;
    std::vector<Vec3> v, p;
    for (std::size_t i = 0; i < 40; ++i) if (!drop_v[i]) v.push_back(s2[i]);
    for (std::size_t j = 0; j < 80; ++j) if (!drop_p[j]) p.push_back(s1[j]);
    EXPECT_NEAR(r.value, oracle::chamfer(PointSet(p, 3), PointSet(v, 3)), 1e-12);

    double d1 = 0.0, d2 = 0.0;
    for (double d : r.residual_tables.dist1) d1 += d;
    for (double d : r.residual_tables.dist2) d2 += d;
    EXPECT_NEAR(r.value, d1 / p.size() + d2 / v.size(), 1e-12);
}

TEST(Residual, OverExclusionRejected) {
    const PointSet s1({Vec3(0, 0, 0), Vec3(1, 0, 0)});
    const PointSet s2({Vec3(0, 0, 0), Vec3(1, 0, 0)});
    EXPECT_THROW(residual_loss(s1, s2, Exclusion{{0, 1}, {}}), InputError);
    EXPECT_THROW(residual_loss(s1, s2, Exclusion{{}, {0, 1}}), InputError);
    EXPECT_THROW(residual_loss(s1, s2, Exclusion{{5}, {}}), InputError);
    // A single vertex with p_d close to 1 would exclude it.
    LossConfig cfg = config(LossVariant::cd2_distance);
    cfg.p_d = 0.9;
    try {
        loss_eval(s1, PointSet({Vec3::Zero()}), cfg);
        FAIL() << "expected over-exclusion";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("over-exclusion"), std::string::npos);
    }
}

TEST(Dispatch, WrongVariantRejected) {
    const PointSet s({Vec3(0, 0, 0), Vec3(1, 0, 0)});
    EXPECT_THROW(cd2_distance_loss(s, s, config(LossVariant::cd)), ConfigError);
    EXPECT_THROW(cd2_mapping_loss(s, s, config(LossVariant::cd2_distance)), ConfigError);
    LossConfig bad = config(LossVariant::cd2_threshold);
    bad.pvi_t = 0;
    EXPECT_THROW(loss_eval(s, s, bad), ConfigError);
}

TEST(Config, ValidateOnlyChecksActiveVariant) {
    LossConfig c;
    c.p_d = 5.0;  // ignored for plain cd
    EXPECT_NO_THROW(c.validate());
    c.variant = LossVariant::cd2_distance;
    EXPECT_THROW(c.validate(), ConfigError);
    c.p_d = 0.3;
    c.d_t = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.d_t = std::numeric_limits<double>::infinity();
    EXPECT_THROW(c.validate(), ConfigError);

    LossConfig p;
    p.variant = LossVariant::cd2_percent;
    p.pvi_p = 1.0;
    p.s1_exclusion_fraction = -0.1;
    try {
        p.validate();
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("pvi_p"), std::string::npos);
        EXPECT_NE(msg.find("s1_exclusion_fraction"), std::string::npos);
    }
}

TEST(Config, ParseAndSerialize) {
    const auto c = parse_loss_config(R"({"variant": "cd2_threshold", "pvi_t": 2})");
    EXPECT_EQ(c.variant, LossVariant::cd2_threshold);
    EXPECT_EQ(c.pvi_t, 2);
    EXPECT_EQ(c.p_d, 0.3);
    EXPECT_EQ(parse_loss_config(loss_config_to_json(c)), c);

    LossConfig d;
    d.variant = LossVariant::cd2_percent;
    d.pvi_p = 0.125;
    d.s1_exclusion_fraction = 0.0625;
    EXPECT_EQ(parse_loss_config(loss_config_to_json(d)), d);
    EXPECT_EQ(parse_loss_config("{}"), LossConfig{});

    try {
        parse_loss_config(R"({"variant": "cd3", "p_d": "x", "extra": 1})");
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("cd3"), std::string::npos);
        EXPECT_NE(msg.find("p_d"), std::string::npos);
        EXPECT_NE(msg.find("extra"), std::string::npos);
    }
    EXPECT_THROW(parse_loss_config("[1, 2]"), ConfigError);
    EXPECT_THROW(parse_loss_config("{"), ConfigError);
    EXPECT_THROW(parse_loss_config(R"({"variant": "cd2_distance", "p_d": 1.0})"), ConfigError);
}

TEST(Variant, NamesRoundTrip) {
    for (auto v : {LossVariant::cd, LossVariant::cd2_distance, LossVariant::cd2_threshold, LossVariant::cd2_percent}) {
        EXPECT_EQ(parse_variant(to_string(v)), v);
    }
    EXPECT_THROW(parse_variant("CD"), ConfigError);
}
