#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "slratio/potential.hpp"
#include "support/oracles.hpp"

using namespace slratio;

namespace {

constexpr double pi = std::numbers::pi;

Potential parse(const std::string& text) {
    std::istringstream in(text);
    return load_samples(in);
}

}  // namespace

TEST(PotentialEval, ConstantFamily) { EXPECT_EQ(eval(Potential::constant(-3), 0.5), -3.0); }

TEST(PotentialEval, BarrierSinAtPeak) { EXPECT_DOUBLE_EQ(eval(Potential::barrier_sin(-5, 4), 0.5), -1.0); }

TEST(PotentialEval, SampledInterpolatesLinearly) {
    const auto p = Potential::sampled({0.0, 1.0}, {0.0, -2.0});
    EXPECT_DOUBLE_EQ(eval(p, 0.25), -0.5);
    EXPECT_DOUBLE_EQ(eval(p, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(eval(p, 1.0), -2.0);
}

TEST(PotentialEval, PolyUsesAscendingCoefficients) {
    const auto p = Potential::poly({1.0, -2.0, 3.0});
    EXPECT_DOUBLE_EQ(eval(p, 0.5), 1.0 - 1.0 + 0.75);
}

TEST(PotentialEval, OutsideDomainThrows) {
    const auto p = Potential::ramp(-2, 2);
    EXPECT_THROW(eval(p, -1e-12), DomainError);
    EXPECT_THROW(eval(p, 1.0 + 1e-12), DomainError);
    const auto half = p.with_domain_end(0.5);
    EXPECT_NO_THROW(eval(half, 0.5));
    EXPECT_THROW(eval(half, 0.6), DomainError);
    EXPECT_THROW(p.with_domain_end(0.0), DomainError);
    EXPECT_THROW(p.with_domain_end(1.5), DomainError);
}

TEST(PotentialEval, AnalyticFamiliesMatchClosedForms) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> par(-10, 10), xs(0, 1);
    for (int i = 0; i < 500; ++i) {
        const double a = par(rng), b = par(rng), c = par(rng), x = xs(rng);
        EXPECT_EQ(eval(Potential::constant(a), x), a);
        EXPECT_EQ(eval(Potential::barrier_sin(a, b), x), a + b * std::sin(pi * x));
        EXPECT_EQ(eval(Potential::ramp(a, b), x), a + b * x);
        EXPECT_NEAR(eval(Potential::poly({a, b, c}), x), a + b * x + c * x * x, 1e-14 * (std::abs(a) + std::abs(b) + std::abs(c)));
    }
}

TEST(PotentialConstruct, SampledRejectsBadGrids) {
    EXPECT_THROW(Potential::sampled({0.0}, {0.0}), ParameterError);
    EXPECT_THROW(Potential::sampled({0.0, 0.5}, {0.0, 0.0}), ParameterError);
    EXPECT_THROW(Potential::sampled({0.1, 1.0}, {0.0, 0.0}), ParameterError);
    EXPECT_THROW(Potential::sampled({0.0, 0.5, 0.5, 1.0}, {0, 0, 0, 0}), ParameterError);
    EXPECT_THROW(Potential::sampled({0.0, 1.0}, {0.0}), ParameterError);
    EXPECT_THROW(Potential::constant(std::nan("")), ParameterError);
}

TEST(MinMax, BarrierSin) {
    const auto e = min_max(Potential::barrier_sin(-5, 4));
    EXPECT_DOUBLE_EQ(e.q_min, -5.0);
    EXPECT_DOUBLE_EQ(e.q_max, -1.0);
    EXPECT_TRUE(e.argmin == 0.0 || e.argmin == 1.0);
    EXPECT_NEAR(e.argmax, 0.5, 1e-12);
}

TEST(MinMax, Constant) {
    const auto e = min_max(Potential::constant(-3));
    EXPECT_EQ(e.q_min, -3.0);
    EXPECT_EQ(e.q_max, -3.0);
}

TEST(MinMax, Ramp) {
    const auto e = min_max(Potential::ramp(-2, 2));
    EXPECT_EQ(e.q_min, -2.0);
    EXPECT_EQ(e.argmin, 0.0);
    EXPECT_EQ(e.q_max, 0.0);
    EXPECT_EQ(e.argmax, 1.0);
}

TEST(MinMax, SubIntervalAndErrors) {
    const auto p = Potential::barrier_sin(-5, 4);
    const auto e = min_max(p, 0.0, 0.25);
    EXPECT_DOUBLE_EQ(e.q_min, -5.0);
    EXPECT_NEAR(e.q_max, -5.0 + 4.0 * std::sin(pi / 4), 1e-15);
    EXPECT_THROW(min_max(p, 0.5, 0.5), DomainError);
    EXPECT_THROW(min_max(p, 0.6, 0.5), DomainError);
    EXPECT_THROW(min_max(p.with_domain_end(0.5), 0.0, 0.7), DomainError);
}

TEST(MinMax, RefinementFindsOffGridPeak) {
    // Peak at x = 1/3, not on the 2048-point grid.
    const auto p = Potential::poly({0.0, 2.0 / 3.0, -1.0});
    const auto e = min_max(p);
    EXPECT_NEAR(e.argmax, 1.0 / 3.0, 1e-7);
    EXPECT_NEAR(e.q_max, 1.0 / 9.0, 1e-15);
}

TEST(MinMax, BoundsEveryGridValue) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> par(-5, 5);
    for (int trial = 0; trial < 40; ++trial) {
        const Potential analytic = Potential::poly({par(rng), par(rng), par(rng), par(rng)});
        const Potential sampled = ref::random_single_barrier(rng, 9 + trial % 7);
        for (const Potential* p : {&analytic, &sampled}) {
            const auto e = min_max(*p);
            const double tol = p->analytic() ? 1e-9 : 0.0;
            for (int i = 0; i <= 4000; ++i) {
                const double v = eval(*p, i / 4000.0);
                EXPECT_GE(v, e.q_min - tol);
                EXPECT_LE(v, e.q_max + tol);
            }
            for (double x : p->nodes()) {
                EXPECT_GE(eval(*p, x), e.q_min);
                EXPECT_LE(eval(*p, x), e.q_max);
            }
        }
    }
}

TEST(Classify, BarrierSin) {
    const auto r = classify(Potential::barrier_sin(-5, 4));
    ASSERT_TRUE(r.single_barrier);
    EXPECT_NEAR(*r.single_barrier, 0.5, 1e-12);
    EXPECT_FALSE(r.barrier_at_endpoint);
    EXPECT_TRUE(r.nonpositive);
    EXPECT_FALSE(r.nonnegative);
    EXPECT_FALSE(r.monotone_increasing);
    EXPECT_FALSE(r.single_well);
}

TEST(Classify, ConstantSatisfiesEveryShape) {
    const auto r = classify(Potential::constant(-1));
    EXPECT_TRUE(r.nonpositive);
    EXPECT_TRUE(r.monotone_increasing);
    ASSERT_TRUE(r.single_barrier);
    ASSERT_TRUE(r.single_well);
    EXPECT_EQ(*r.single_barrier, 0.0);
    EXPECT_EQ(*r.single_well, 0.0);
}

TEST(Classify, RampIsBarrierPeakedAtRightEnd) {
    const auto r = classify(Potential::ramp(-2, 2));
    EXPECT_TRUE(r.monotone_increasing);
    ASSERT_TRUE(r.single_barrier);
    EXPECT_EQ(*r.single_barrier, 1.0);
    EXPECT_TRUE(r.barrier_at_endpoint);
    EXPECT_TRUE(r.nonpositive);
}

TEST(Classify, NonnegativeSingleWell) {
    const auto r = classify(Potential::barrier_sin(5, -4));
    EXPECT_TRUE(r.nonnegative);
    ASSERT_TRUE(r.single_well);
    EXPECT_NEAR(*r.single_well, 0.5, 1e-12);
    EXPECT_FALSE(r.single_barrier);
}

TEST(Classify, DoubleBumpIsNeither) {
    const auto p = Potential::sampled({0, 0.25, 0.5, 0.75, 1}, {-1, 0, -1, 0, -1});
    const auto r = classify(p);
    EXPECT_FALSE(r.single_barrier);
    EXPECT_FALSE(r.single_well);
    EXPECT_FALSE(r.monotone_increasing);
    EXPECT_TRUE(r.nonpositive);
}

TEST(Classify, ToleranceAdmitsSmallViolations) {
    const auto p = Potential::sampled({0, 0.5, 1}, {-1, -1.0 - 1e-6, 0});
    EXPECT_FALSE(classify(p, 0.0).monotone_increasing);
    EXPECT_TRUE(classify(p, 1e-5).monotone_increasing);
    EXPECT_THROW(classify(p, -1.0), ParameterError);
}

TEST(Classify, BarrierPeakWithinGridSpacing) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(-10, 10), b(0.01, 10);
    for (int i = 0; i < 50; ++i) {
        const auto r = classify(Potential::barrier_sin(a(rng), b(rng)));
        ASSERT_TRUE(r.single_barrier);
        EXPECT_LE(std::abs(*r.single_barrier - 0.5), 1.0 / 2048);
    }
}

TEST(Classify, ShapeInvariantUnderConstantShift) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> shift(-20, 20), par(-5, 5);
    for (int i = 0; i < 60; ++i) {
        const Potential p = i % 2 ? ref::random_single_barrier(rng)
                                  : Potential::poly({par(rng), par(rng), par(rng)});
        const Potential q = p.plus_constant(shift(rng));
        const auto a = classify(p, 1e-9), b = classify(q, 1e-9);
        EXPECT_EQ(a.monotone_increasing, b.monotone_increasing);
        EXPECT_EQ(a.single_barrier.has_value(), b.single_barrier.has_value());
        EXPECT_EQ(a.single_well.has_value(), b.single_well.has_value());
    }
}

TEST(Classify, NondecreasingOnSubinterval) {
    const auto p = Potential::barrier_sin(-5, 4);
    EXPECT_TRUE(is_nondecreasing_on(p, 0.0, 0.5, 1e-9));
    EXPECT_FALSE(is_nondecreasing_on(p, 0.0, 0.75, 1e-9));
}

TEST(LoadSamples, TwoPointZero) {
    const auto p = parse("0,0\n1,0\n");
    EXPECT_EQ(p.kind(), Potential::Kind::sampled);
    EXPECT_EQ(p.nodes().size(), 2u);
    EXPECT_EQ(eval(p, 0.3), 0.0);
}

TEST(LoadSamples, SingleBarrierWithCommentsAndUnicodeMinus) {
    const auto p = parse("# x,q\n0,\xE2\x88\x92" "1\n\n0.5,-0.2   # peak\n1,-1\n");
    const auto r = classify(p);
    ASSERT_TRUE(r.single_barrier);
    EXPECT_EQ(*r.single_barrier, 0.5);
    EXPECT_TRUE(r.nonpositive);
    EXPECT_DOUBLE_EQ(eval(p, 0.25), -0.6);
}

TEST(LoadSamples, ErrorsNameTheLine) {
    auto fails_at = [](const std::string& text, std::size_t line, const std::string& fragment) {
        try {
            parse(text);
            ADD_FAILURE() << "no error for: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), line) << e.what();
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    fails_at("0.1,0\n1,0", 1, "domain must start at 0");
    fails_at("0,0\n0.5,0\n0.9,0\n", 3, "domain must end at 1");
    fails_at("0,0\n0.5;0\n1,0", 2, "two fields");
    fails_at("0,0\n0.5,abc\n1,0", 2, "malformed q");
    fails_at("0,0\n0.5,1,2\n1,0", 2, "two fields");
    fails_at("0,0\n0.6,0\n0.5,0\n1,0", 3, "not sorted");
    fails_at("0,0\n0.5,0\n0.5,1\n1,0", 3, "duplicate");
    fails_at("0,0\n1.5,0", 2, "outside");
    fails_at("0,0\n", 1, "at least 2");
    fails_at("0,0\n1,1e999", 2, "malformed q");
}
