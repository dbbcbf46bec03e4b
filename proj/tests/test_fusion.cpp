#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "facegraph/errors.hpp"
#include "facegraph/fusion.hpp"
#include "support/oracle.hpp"

using namespace facegraph;
using namespace facegraph::testsupport;

namespace {

bool valid_mass(const MassFunction& m) {
    return m.m_genuine >= 0 && m.m_impostor >= 0 && m.m_uncertain >= 0 &&
           std::abs(m.m_genuine + m.m_impostor + m.m_uncertain - 1.0) < 1e-9;
}

}  // namespace

TEST_CASE("score-to-mass bridge") {
    MassFunction a = score_to_mass(1.0, 0.0);
    CHECK(a.m_genuine == doctest::Approx(1.0));
    CHECK(a.m_impostor == doctest::Approx(0.0));
    CHECK(a.m_uncertain == doctest::Approx(0.0));

    MassFunction b = score_to_mass(0.5, 0.2);
    CHECK(b.m_genuine == doctest::Approx(0.4));
    CHECK(b.m_impostor == doctest::Approx(0.4));
    CHECK(b.m_uncertain == doctest::Approx(0.2));

    MassFunction c = score_to_mass(0.75, 0.1);
    CHECK(c.m_genuine == doctest::Approx(0.675).epsilon(1e-12));
    CHECK(c.m_impostor == doctest::Approx(0.225).epsilon(1e-12));
    CHECK(c.m_uncertain == doctest::Approx(0.1).epsilon(1e-12));

    CHECK_THROWS_AS(score_to_mass(1.5, 0.1), Error);
    CHECK_THROWS_AS(score_to_mass(0.5, -0.1), Error);
}

TEST_CASE("bridge is strictly increasing in the genuine mass") {
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        double s = i / 20.0;
        MassFunction m = score_to_mass(s, 0.3);
        CHECK(m.m_genuine > prev);
        prev = m.m_genuine;
    }
}

TEST_CASE("vacuous mass is the exact identity") {
    std::mt19937 rng(41);
    for (int t = 0; t < 100; ++t) {
        MassFunction a = random_mass(rng);
        MassFunction r = dempster_combine(a, kVacuousMass);
        CHECK(r.m_genuine == a.m_genuine);
        CHECK(r.m_impostor == a.m_impostor);
        CHECK(r.m_uncertain == a.m_uncertain);
    }
}

TEST_CASE("total conflict is an explicit error") {
    CHECK_THROWS_AS(dempster_combine({1, 0, 0}, {0, 1, 0}), ConflictError);
}

TEST_CASE("worked triple-intersection example") {
    MassFunction r = dempster_combine({0.6, 0.3, 0.1}, {0.5, 0.2, 0.3});
    // K = 0.6*0.2 + 0.3*0.5 = 0.27
    CHECK(r.m_genuine == doctest::Approx(0.53 / 0.73).epsilon(1e-12));
    CHECK(r.m_impostor == doctest::Approx(0.17 / 0.73).epsilon(1e-12));
    CHECK(r.m_uncertain == doctest::Approx(0.03 / 0.73).epsilon(1e-12));
    CHECK(r.m_genuine == doctest::Approx(0.72603).epsilon(1e-4));

    MassFunction o = dempster_oracle({0.6, 0.3, 0.1}, {0.5, 0.2, 0.3});
    CHECK(r.m_genuine == doctest::Approx(o.m_genuine).epsilon(1e-12));
    CHECK(r.m_impostor == doctest::Approx(o.m_impostor).epsilon(1e-12));
    CHECK(r.m_uncertain == doctest::Approx(o.m_uncertain).epsilon(1e-12));
}

TEST_CASE("combination is commutative, associative and closed") {
    std::mt19937 rng(43);
    for (int t = 0; t < 500; ++t) {
        MassFunction a = random_mass(rng, 0.05);
        MassFunction b = random_mass(rng, 0.05);
        MassFunction c = random_mass(rng, 0.05);

        MassFunction ab = dempster_combine(a, b);
        MassFunction ba = dempster_combine(b, a);
        CHECK(std::abs(ab.m_genuine - ba.m_genuine) < 1e-12);
        CHECK(std::abs(ab.m_impostor - ba.m_impostor) < 1e-12);
        CHECK(valid_mass(ab));

        MassFunction abc1 = dempster_combine(ab, c);
        MassFunction abc2 = dempster_combine(a, dempster_combine(b, c));
        CHECK(std::abs(abc1.m_genuine - abc2.m_genuine) < 1e-12);
        CHECK(std::abs(abc1.m_impostor - abc2.m_impostor) < 1e-12);
        CHECK(std::abs(abc1.m_uncertain - abc2.m_uncertain) < 1e-12);
    }
}

TEST_CASE("positive alpha makes total conflict impossible") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FusionConfig cfg;
    cfg.uncertainty_alpha = 0.05;
    for (int t = 0; t < 1000; ++t) {
        std::array<std::optional<double>, kRegionCount> scores;
        for (auto& s : scores) s = u(rng);
        CHECK_NOTHROW(fuse_region_scores(scores, cfg));
    }
}

TEST_CASE("fusing four perfect scores accepts confidently") {
    FusionConfig cfg;
    cfg.uncertainty_alpha = 0.1;
    cfg.decision_threshold = 0.5;
    std::array<std::optional<double>, kRegionCount> scores;
    for (auto& s : scores) s = 1.0;
    auto out = fuse_region_scores(scores, cfg);
    CHECK(out.fused.m_genuine > 0.99);
    CHECK(out.accept);

    // oracle: repeated enumeration-based combination in region order
    MassFunction expect = kVacuousMass;
    for (int r = 0; r < kRegionCount; ++r)
        expect = dempster_oracle(expect, score_to_mass(1.0, 0.1));
    CHECK(out.fused.m_genuine == doctest::Approx(expect.m_genuine).epsilon(1e-12));
}

TEST_CASE("single scored region with the rest missing") {
    FusionConfig cfg;
    cfg.uncertainty_alpha = 0.2;
    std::array<std::optional<double>, kRegionCount> scores;
    scores[2] = 0.5;
    auto out = fuse_region_scores(scores, cfg);
    CHECK(out.fused.m_genuine == doctest::Approx(0.4));
    CHECK(out.fused.m_impostor == doctest::Approx(0.4));
    CHECK(out.fused.m_uncertain == doctest::Approx(0.2));
    CHECK(!out.accept);

    cfg.missing_region_policy = MissingRegionPolicy::Skip;
    auto out2 = fuse_region_scores(scores, cfg);
    CHECK(out2.fused.m_genuine == doctest::Approx(out.fused.m_genuine));
}

TEST_CASE("opposite certain scores with alpha 0 conflict totally") {
    FusionConfig cfg;
    cfg.uncertainty_alpha = 0.0;
    std::array<std::optional<double>, kRegionCount> scores;
    scores[0] = 1.0;
    scores[1] = 0.0;
    CHECK_THROWS_AS(fuse_region_scores(scores, cfg), ConflictError);
}

TEST_CASE("all regions missing is an error") {
    std::array<std::optional<double>, kRegionCount> scores;
    CHECK_THROWS_AS(fuse_region_scores(scores, FusionConfig{}), Error);
}

TEST_CASE("region fusion order cannot change the decision") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FusionConfig cfg;
    cfg.uncertainty_alpha = 0.1;
    for (int t = 0; t < 200; ++t) {
        double s[4] = {u(rng), u(rng), u(rng), u(rng)};
        std::array<std::optional<double>, kRegionCount> forward = {s[0], s[1], s[2], s[3]};
        std::array<std::optional<double>, kRegionCount> reversed = {s[3], s[2], s[1], s[0]};
        auto f = fuse_region_scores(forward, cfg);
        auto r = fuse_region_scores(reversed, cfg);
        CHECK(f.fused.m_genuine == doctest::Approx(r.fused.m_genuine).epsilon(1e-12));
        CHECK(f.accept == r.accept);
    }
}
