#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "igeo/intersections.hpp"

namespace igeo {
namespace {

using namespace std::complex_literals;

LinearSubspace coords(Index n, std::initializer_list<Index> idx) {
    Matrix m = Matrix::Zero(n, static_cast<Index>(idx.size()));
    Index j = 0;
    for (Index i : idx) {
        m(i, j++) = 1.0;
    }
    return LinearSubspace(n, m);
}

TEST(IntersectionDim, Examples) {
    EXPECT_EQ(intersection_dim(coords(5, {0, 1}), coords(5, {2})), 0);
    EXPECT_EQ(intersection_dim(coords(5, {0, 1, 2}), coords(5, {0, 1, 2})), 3);
    EXPECT_EQ(intersection_dim(coords(3, {0, 1}), coords(3, {1, 2})), 1);
    EXPECT_THROW(intersection_dim(coords(3, {0}), coords(4, {0})), GeometryError);
}

TEST(IntersectionDim, NonOrthonormalSpans) {
    Matrix a(3, 2);
    a << 1, 1, 0, 1e-3, 0, 0;
    Matrix b(3, 2);
    b << 1, 0, 1, 0, 0, 1;
    EXPECT_EQ(intersection_dim(LinearSubspace(3, a), LinearSubspace(3, b)), 1);
}

TEST(IntersectionDim, RankDeficientSpanRejected) {
    Matrix a(3, 2);
    a << 1, 2, 1, 2, 0, 0;
    EXPECT_THROW(LinearSubspace(3, a), GeometryError);
}

TEST(DegeneracyVolume, Examples) {
    EXPECT_NEAR(degeneracy_volume(Matrix::Identity(5, 5), 2, 3), 1.0, 1e-15);
    const Matrix swap = swap_rotation(2, 3, 2);
    EXPECT_NEAR(swap.determinant(), 1.0, 1e-12);
    EXPECT_LE(degeneracy_volume(swap, 2, 3), 1e-9);
}

TEST(DegeneracyVolume, GenericRotationsAreTransversal) {
    RandomStream s(1);
    for (int i = 0; i < 10000; ++i) {
        ASSERT_GT(degeneracy_volume(sample_rotation(5, s), 2, 3), 1e-6);
    }
}

TEST(DegeneracyVolume, VanishesExactlyWhenFactorsMeet) {
    RandomStream s(2);
    const Index k = 2;
    const Index l = 3;
    const Index n = 5;
    const LinearSubspace fixed = LinearSubspace::coordinate(n, k, l - k);
    for (int t = 0; t < 200; ++t) {
        Matrix y = sample_rotation(n, s);
        if (t % 2 == 0) {
            // rotate y e_1 onto e_{k+1} so that y R^k contains a vector of R^{l-k}
            const Vector target = Vector::Unit(n, k);
            const Vector from = y.col(0);
            const Vector w = (target - from.dot(target) * from).normalized();
            const double angle = std::acos(std::clamp(from.dot(target), -1.0, 1.0));
            Matrix g = Matrix::Identity(n, n) + std::sin(angle) * (w * from.transpose() - from * w.transpose()) +
                       (std::cos(angle) - 1.0) * (from * from.transpose() + w * w.transpose());
            y = g * y;
        }
        const bool degenerate = degeneracy_volume(y, k, l) <= 1e-9;
        const bool meet = intersection_dim(LinearSubspace(n, y.leftCols(k)), fixed) >= 1;
        EXPECT_EQ(degenerate, meet);
        EXPECT_EQ(degenerate, t % 2 == 0);
    }
}

TEST(GrassmannMeet, IdentityGivesCoordinatePlane) {
    const auto meet = grassmann_meet(Matrix::Identity(3, 3), 1, 2, 1);
    ASSERT_TRUE(meet.has_value());
    EXPECT_EQ(meet->rank(), 2);
    EXPECT_EQ(intersection_dim(*meet, coords(3, {0, 1})), 2);
}

TEST(GrassmannMeet, SwapIsDegenerate) {
    EXPECT_FALSE(grassmann_meet(swap_rotation(2, 3, 2), 2, 3, 2).has_value());
    EXPECT_FALSE(grassmann_meet(swap_rotation(1, 2, 1), 1, 2, 1).has_value());
}

TEST(GrassmannMeet, RandomRotationsContainBothFactors) {
    RandomStream s(3);
    const Index k = 2;
    const Index l = 3;
    const Index m = 2;
    const LinearSubspace fixed = LinearSubspace::coordinate(l + m, k, l - k);
    for (int i = 0; i < 10000; ++i) {
        const Matrix y = sample_rotation(l + m, s);
        const auto meet = grassmann_meet(y, k, l, m);
        ASSERT_TRUE(meet.has_value());
        ASSERT_EQ(meet->rank(), l);
        EXPECT_EQ(intersection_dim(*meet, fixed), l - k);
        EXPECT_EQ(intersection_dim(*meet, LinearSubspace(l + m, y.leftCols(k))), k);
    }
}

TEST(LineCurveCount, LineMeetsLineOnce) {
    const HomogeneousCurve x(1, {{1, 0, 0, 1.0}});
    const LineCount c = line_curve_count(x, {{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    EXPECT_EQ(c.with_multiplicity, 1);
    EXPECT_EQ(c.distinct, 1);
    // the line x = 0 lies in the curve
    try {
        line_curve_count(x, {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), ErrorCode::IdenticallyZero);
    }
}

TEST(LineCurveCount, RootAtInfinityOfChart) {
    // x restricted to s (1,0,0) + t (0,1,0) vanishes only at the second point
    const HomogeneousCurve x(1, {{1, 0, 0, 1.0}});
    const LineCount c = line_curve_count(x, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    EXPECT_EQ(c.with_multiplicity, 1);
    EXPECT_EQ(c.distinct, 1);
    const LineCount r = line_curve_count(x, {{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}});
    EXPECT_EQ(r.with_multiplicity, 1);
    EXPECT_EQ(r.distinct, 1);
}

TEST(LineCurveCount, ConicRandomLines) {
    RandomStream s(4);
    const HomogeneousCurve conic = HomogeneousCurve::fermat(2);
    for (int i = 0; i < 1000; ++i) {
        const LineCount c = line_curve_count(conic, sample_line_cp2(s));
        EXPECT_EQ(c.with_multiplicity, 2);
        EXPECT_EQ(c.distinct, 2);
    }
}

TEST(LineCurveCount, ConicTangentsFromGradient) {
    const HomogeneousCurve conic = HomogeneousCurve::fermat(2);
    // P on the conic, Q in the tangent plane P . Q = 0: the restriction is t^2 (Q . Q)
    const std::array<std::array<Complex, 3>, 2> points{{{1.0, 1.0i, 0.0}, {3.0, 4.0, 5.0i}}};
    const std::array<std::array<Complex, 3>, 2> directions{{{0.0, 0.0, 1.0}, {4.0, -3.0, 0.0}}};
    for (std::size_t i = 0; i < points.size(); ++i) {
        ASSERT_EQ(conic.evaluate(points[i]), 0.0);
        const LineCount c = line_curve_count(conic, {points[i], directions[i]});
        EXPECT_EQ(c.with_multiplicity, 2);
        EXPECT_EQ(c.distinct, 1);
    }
}

TEST(LineCurveCount, FermatCubicFlexLine) {
    // x + y = 0 meets x^3 + y^3 + z^3 only at (1, -1, 0), to order three
    const LineCount c = line_curve_count(HomogeneousCurve::fermat(3), {{1.0, -1.0, 0.0}, {0.0, 0.0, 1.0}});
    EXPECT_EQ(c.with_multiplicity, 3);
    EXPECT_EQ(c.distinct, 1);
}

TEST(LineCurveCount, BezoutForRandomCurves) {
    RandomStream s(5);
    for (int d = 1; d <= 5; ++d) {
        std::vector<HomogeneousCurve::Term> terms;
        for (int a = 0; a <= d; ++a) {
            for (int b = 0; a + b <= d; ++b) {
                terms.push_back({a, b, d - a - b, Complex(s.normal(), s.normal())});
            }
        }
        const HomogeneousCurve curve(d, terms);
        for (int i = 0; i < 200; ++i) {
            const LineCount c = line_curve_count(curve, sample_line_cp2(s));
            EXPECT_EQ(c.with_multiplicity, d);
            EXPECT_LE(c.distinct, d);
        }
    }
}

TEST(LineCurveCount, DegenerateLine) {
    try {
        line_curve_count(HomogeneousCurve::fermat(2), {{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}});
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateLine);
    }
}

TEST(HomogeneousCurve, Validation) {
    EXPECT_THROW(HomogeneousCurve(2, {{1, 0, 0, 1.0}}), GeometryError);
    EXPECT_THROW(HomogeneousCurve(1, {{1, 0, 0, 0.0}}), GeometryError);
    EXPECT_THROW(HomogeneousCurve(0, {{0, 0, 0, 1.0}}), GeometryError);
}

TEST(CurveText, RoundTripAndErrors) {
    const HomogeneousCurve c(2, {{2, 0, 0, Complex(1.5, -0.25)}, {0, 1, 1, Complex(0.0, 3.0)}});
    std::istringstream in(format_curve(c));
    const HomogeneousCurve back = parse_curve(in);
    ASSERT_EQ(back.degree(), 2);
    ASSERT_EQ(back.terms().size(), 2U);
    EXPECT_EQ(back.terms()[0].coefficient, c.terms()[0].coefficient);
    EXPECT_EQ(back.terms()[1].coefficient, c.terms()[1].coefficient);
    std::istringstream bad("CURVE 2\n1 0 0 1 0\n");
    EXPECT_THROW(parse_curve(bad), GeometryError);
    std::istringstream no_header("2 0 0 1 0\n");
    EXPECT_THROW(parse_curve(no_header), GeometryError);
}

TEST(Equidistribution, SmoothFermatCurves) {
    for (int d = 1; d <= 3; ++d) {
        const EquidistributionResult r =
            equidistribution_experiment(HomogeneousCurve::fermat(d), 10000, RandomStream(40 + d));
        ASSERT_EQ(r.histogram.size(), 1U);
        EXPECT_EQ(r.histogram.at(d), 10000U);
        EXPECT_EQ(r.exceptional_fraction, 0.0);
    }
}

TEST(Equidistribution, ThreadCountDoesNotChangeHistogram) {
    const HomogeneousCurve c = HomogeneousCurve::fermat(3);
    const auto a = equidistribution_experiment(c, 3000, RandomStream(7), {1, 500});
    const auto b = equidistribution_experiment(c, 3000, RandomStream(7), {3, 500});
    EXPECT_EQ(a.histogram, b.histogram);
}

TEST(Equidistribution, NeedsEnoughSamples) {
    EXPECT_THROW(equidistribution_experiment(HomogeneousCurve::fermat(1), 99, RandomStream(1)), GeometryError);
}

TEST(SuCircle, RootsOfUnity) {
    for (int n = 1; n <= 5; ++n) {
        const SuCircleResult r = su_circle_intersections(n);
        ASSERT_EQ(r.points.size(), static_cast<std::size_t>(n));
        EXPECT_LE(r.orthogonality_residual, 1e-12);
        EXPECT_LE(r.root_residual, 1e-12);
        EXPECT_LE(r.det_residual, 1e-12);
        for (int k = 0; k < n; ++k) {
            const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
            EXPECT_LT((r.points[k] - z * Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
    const SuCircleResult two = su_circle_intersections(2);
    EXPECT_LT((two.points[1] + Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(su_circle_intersections(0), GeometryError);
}

}  // namespace
}  // namespace igeo
