#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "igeo/deformation.hpp"
#include "igeo/exterior.hpp"
#include "igeo/random.hpp"

namespace igeo {
namespace {

Vector e(Index n, Index i) { return Vector::Unit(n, i); }

OrthoFrame frame(std::initializer_list<Vector> cols) {
    Matrix m(cols.begin()->size(), static_cast<Index>(cols.size()));
    Index j = 0;
    for (const auto& c : cols) {
        m.col(j++) = c;
    }
    return orthonormalize(m);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Orthonormalize, IdentityIsFixed) {
    const OrthoFrame f = orthonormalize(Matrix::Identity(3, 3));
    EXPECT_LT(max_abs(f.columns() - Matrix::Identity(3, 3)), 1e-15);
}

TEST(Orthonormalize, GramSchmidtByHand) {
    Matrix m(3, 2);
    m << 1, 1, 0, 1, 0, 0;
    const OrthoFrame f = orthonormalize(m);
    EXPECT_LT((f.column(0) - e(3, 0)).norm(), 1e-15);
    EXPECT_LT((f.column(1) - e(3, 1)).norm(), 1e-15);
}

TEST(Orthonormalize, RescalingOnly) {
    Matrix m(3, 2);
    m << 2, 0, 0, 0, 0, 3;
    const OrthoFrame f = orthonormalize(m);
    EXPECT_LT((f.column(0) - e(3, 0)).norm(), 1e-15);
    EXPECT_LT((f.column(1) - e(3, 2)).norm(), 1e-15);
}

TEST(Orthonormalize, FirstColumnKeepsDirection) {
    RandomStream s(3);
    for (int t = 0; t < 20; ++t) {
        Matrix m = Matrix::Random(6, 3);
        for (Index i = 0; i < m.size(); ++i) {
            m.data()[i] = s.normal();
        }
        const OrthoFrame f = orthonormalize(m);
        EXPECT_LT((f.column(0) - m.col(0).normalized()).norm(), 1e-14);
        EXPECT_LT(max_abs(f.columns().transpose() * f.columns() - Matrix::Identity(3, 3)), 1e-12);
        // same span
        EXPECT_LT(max_abs(m - f.projector() * m), 1e-12);
    }
}

TEST(Orthonormalize, RankDeficientThrows) {
    Matrix m(3, 2);
    m << 1, 2, 1, 2, 0, 0;
    try {
        orthonormalize(m);
        FAIL();
    } catch (const GeometryError& err) {
        EXPECT_EQ(err.code(), ErrorCode::RankDeficient);
    }
}

TEST(OrthoFrame, RejectsNonOrthonormal) {
    Matrix m(2, 2);
    m << 1, 0.1, 0, 1;
    EXPECT_THROW(OrthoFrame{m}, GeometryError);
}

TEST(Pairing, Examples) {
    const OrthoFrame v = frame({e(3, 0), e(3, 1)});
    EXPECT_NEAR(pairing(v, v), 1.0, 1e-15);
    EXPECT_NEAR(pairing(v, frame({e(3, 0), e(3, 2)})), 0.0, 1e-15);
    const double a = std::numbers::pi / 3;
    const OrthoFrame w = frame({e(3, 0), std::cos(a) * e(3, 1) + std::sin(a) * e(3, 2)});
    EXPECT_NEAR(pairing(v, w), 0.5, 1e-15);
}

TEST(Pairing, DimensionMismatch) {
    const OrthoFrame v = frame({e(3, 0), e(3, 1)});
    EXPECT_THROW(pairing(v, frame({e(3, 0)})), GeometryError);
    EXPECT_THROW(pairing(v, frame({e(4, 0), e(4, 1)})), GeometryError);
}

TEST(Pairing, SymmetricAndRotationInvariant) {
    RandomStream s(11);
    for (int t = 0; t < 1000; ++t) {
        const OrthoFrame v = sample_plane(5, 2, s);
        const OrthoFrame w = sample_plane(5, 2, s);
        const Matrix g = sample_rotation(5, s);
        const double p = pairing(v, w);
        EXPECT_NEAR(p, pairing(w, v), 1e-12);
        EXPECT_NEAR(p, pairing(OrthoFrame(g * v.columns()), OrthoFrame(g * w.columns())), 1e-10);
    }
}

TEST(Pairing, HadamardBoundByColumns) {
    RandomStream s(12);
    for (int t = 0; t < 500; ++t) {
        const OrthoFrame v = sample_plane(6, 3, s);
        const OrthoFrame w = sample_plane(6, 3, s);
        double product = 1.0;
        for (Index j = 0; j < 3; ++j) {
            product *= projection_volume(v, OrthoFrame(w.columns().col(j)));
        }
        EXPECT_LE(pairing(v, w), product + 1e-12);
    }
}

TEST(ProjectionVolume, Examples) {
    const OrthoFrame v = frame({e(3, 0), e(3, 1)});
    EXPECT_NEAR(projection_volume(v, frame({e(3, 1)})), 1.0, 1e-15);
    EXPECT_NEAR(projection_volume(v, frame({e(3, 2)})), 0.0, 1e-15);
    EXPECT_NEAR(projection_volume(v, frame({(e(3, 0) + e(3, 2)) / std::sqrt(2.0)})), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(projection_volume(frame({e(3, 0)}), v), GeometryError);
}

TEST(ProjectionVolume, EqualsPairingAtFullRank) {
    RandomStream s(13);
    for (int t = 0; t < 100; ++t) {
        const OrthoFrame v = sample_plane(7, 3, s);
        const OrthoFrame w = sample_plane(7, 3, s);
        EXPECT_NEAR(projection_volume(v, w), pairing(v, w), 1e-12);
    }
}

TEST(ProjectionVolume, ContainmentGivesOne) {
    RandomStream s(14);
    for (int t = 0; t < 50; ++t) {
        const OrthoFrame v = sample_plane(6, 4, s);
        const Matrix coeffs = sample_rotation(4, s).leftCols(2);
        EXPECT_NEAR(projection_volume(v, OrthoFrame(v.columns() * coeffs)), 1.0, 1e-12);
    }
}

TEST(GramVolume, ClosedFormsMatchDeterminant) {
    RandomStream s(15);
    for (Index j = 1; j <= 5; ++j) {
        for (int t = 0; t < 50; ++t) {
            Matrix m(6, j);
            for (Index i = 0; i < m.size(); ++i) {
                m.data()[i] = s.normal();
            }
            const double reference = std::sqrt(std::max(0.0, (m.transpose() * m).determinant()));
            EXPECT_NEAR(detail::gram_volume(m), reference, 1e-10 * std::max(1.0, reference)) << "j=" << j;
        }
    }
}

TEST(InterleavedWedge, Examples) {
    const InterleaveOperator op22(2, 2);
    const OrthoFrame w = interleaved_wedge(e(2, 0), op22);
    ASSERT_EQ(w.rank(), 2);
    EXPECT_LT((w.column(0) - e(4, 0)).norm(), 1e-15);
    EXPECT_LT((w.column(1) - e(4, 2)).norm(), 1e-15);

    const OrthoFrame u = interleaved_wedge(Vector::Ones(1), InterleaveOperator(1, 3));
    EXPECT_LT(max_abs(u.columns() - Matrix::Identity(3, 3)), 1e-15);

    RandomStream s(16);
    const Vector x = sample_sphere(4, s);
    EXPECT_LT((interleaved_wedge(x, InterleaveOperator(4, 1)).column(0) - x).norm(), 1e-15);
}

TEST(InterleavedWedge, RejectsNonUnit) {
    try {
        interleaved_wedge(Vector::Constant(2, 1.0), InterleaveOperator(2, 2));
        FAIL();
    } catch (const GeometryError& err) {
        EXPECT_EQ(err.code(), ErrorCode::NotUnit);
    }
}

TEST(InterleaveOperator, PeriodicAndOrthogonal) {
    for (Index q = 1; q <= 4; ++q) {
        for (Index m = 1; m <= 4; ++m) {
            const InterleaveOperator op(q, m);
            const Matrix i = op.matrix();
            EXPECT_LT(max_abs(op.matrix(m) - Matrix::Identity(q * m, q * m)), 1e-15);
            EXPECT_LT(max_abs(i.transpose() * i - Matrix::Identity(q * m, q * m)), 1e-15);
            Matrix power = Matrix::Identity(q * m, q * m);
            for (Index r = 0; r < m; ++r) {
                power = i * power;
            }
            EXPECT_LT(max_abs(power - Matrix::Identity(q * m, q * m)), 1e-15);
        }
    }
}

TEST(InterleaveOperator, ShiftsBlocksForward) {
    const InterleaveOperator op(2, 3);
    Vector v(6);
    v << 1, 2, 3, 4, 5, 6;
    Vector expected(6);
    expected << 5, 6, 1, 2, 3, 4;
    EXPECT_LT((op.apply(v) - expected).norm(), 1e-15);
}

TEST(ComplexStructure, Validation) {
    const ComplexStructure j = ComplexStructure::standard(3);
    EXPECT_LT(max_abs(j.matrix() * j.matrix() + Matrix::Identity(6, 6)), 1e-15);
    EXPECT_LT((j.apply(e(6, 2)) - e(6, 3)).norm(), 1e-15);
    EXPECT_THROW(ComplexStructure(Matrix::Identity(2, 2)), GeometryError);
    const ComplexStructure t = twisted_interleave_structure(2);
    Vector u(4);
    u << 1, 2, 3, 4;
    Vector expected(4);
    expected << -3, -4, 1, 2;
    EXPECT_LT((t.apply(u) - expected).norm(), 1e-15);
}

TEST(BrForm, BlockAlignedProductPlane) {
    for (Index m = 1; m <= 3; ++m) {
        const Index q = 4;
        const Index p = 2;
        const OrthoFrame v = product_plane(Interleaved{m, p, q, false});
        const InterleaveOperator op(q, m);
        Matrix expected = Matrix::Zero(q, q);
        expected.diagonal().head(p).setOnes();
        for (Index r = 0; r < m; ++r) {
            EXPECT_LT(max_abs(b_r_form(v, r, op).matrix() - expected), 1e-15);
        }
    }
}

TEST(BrForm, WholeBlockZero) {
    const Index q = 3;
    const Index m = 3;
    Matrix cols = Matrix::Zero(q * m, q);
    cols.topRows(q).setIdentity();
    const OrthoFrame v(cols);
    const InterleaveOperator op(q, m);
    EXPECT_LT(max_abs(b_r_form(v, 0, op).matrix() - Matrix::Identity(q, q)), 1e-15);
    for (Index r = 1; r < m; ++r) {
        EXPECT_LT(max_abs(b_r_form(v, r, op).matrix()), 1e-15);
    }
}

TEST(BrForm, DimensionMismatch) {
    EXPECT_THROW(b_r_form(OrthoFrame(Matrix::Identity(5, 1)), 0, InterleaveOperator(2, 2)), GeometryError);
}

TEST(BrForm, SpectrumInUnitInterval) {
    RandomStream s(17);
    for (int t = 0; t < 200; ++t) {
        const Index q = 2 + t % 3;
        const Index m = 1 + t % 3;
        const Index d = 1 + static_cast<Index>(s.bits() % static_cast<std::uint64_t>(q * m));
        const OrthoFrame v = sample_plane(q * m, d, s);
        const InterleaveOperator op(q, m);
        for (Index r = 0; r < m; ++r) {
            const Vector ev = b_r_form(v, r, op).eigenvalues();
            EXPECT_GE(ev.minCoeff(), -1e-10);
            EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-10);
        }
    }
}

// Independent route: sum over an orthonormal basis w_j of R^q of the squared
// projection of every block copy, with the projector formed explicitly.
double brute_force_trace(const OrthoFrame& v, Index q, Index m) {
    const Matrix proj = v.projector();
    double total = 0.0;
    for (Index r = 0; r < m; ++r) {
        for (Index j = 0; j < q; ++j) {
            Vector copy = Vector::Zero(q * m);
            copy(r * q + j) = 1.0;
            total += (proj * copy).squaredNorm();
        }
    }
    return total;
}

TEST(TraceIdentity, Examples) {
    RandomStream s(18);
    const OrthoFrame v = sample_plane(8, 4, s);
    EXPECT_NEAR(trace_identity(v, InterleaveOperator(2, 4)), 4.0, 1e-10);
    EXPECT_NEAR(trace_identity(v, InterleaveOperator(4, 2)), 4.0, 1e-10);
    const OrthoFrame diag(Vector::Constant(6, 1.0 / std::sqrt(6.0)));
    EXPECT_NEAR(trace_identity(diag, InterleaveOperator(2, 3)), 1.0, 1e-12);
}

TEST(TraceIdentity, RandomFramesAgainstBruteForce) {
    RandomStream s(19);
    for (int t = 0; t < 100; ++t) {
        const Index q = 2 + t % 3;
        const Index m = 1 + (t / 3) % 3;
        const Index d = 1 + t % (q * m);
        const OrthoFrame v = sample_plane(q * m, d, s);
        const double value = trace_identity(v, InterleaveOperator(q, m));
        EXPECT_NEAR(value, static_cast<double>(d), 1e-10);
        EXPECT_NEAR(value, brute_force_trace(v, q, m), 1e-10);
    }
}

TEST(KahlerAngle, ComplexLine) {
    const ComplexStructure j = ComplexStructure::standard(2);
    const KahlerAngle k = kahler_angle(frame({e(4, 0), e(4, 1)}), j);
    EXPECT_NEAR(k.tau, 0.0, 1e-12);
    EXPECT_TRUE(k.v2_arbitrary);
}

TEST(KahlerAngle, TotallyReal) {
    const ComplexStructure j = ComplexStructure::standard(2);
    const KahlerAngle k = kahler_angle(frame({e(4, 0), e(4, 2)}), j);
    EXPECT_NEAR(k.tau, std::numbers::pi / 2, 1e-12);
    EXPECT_FALSE(k.v2_arbitrary);
}

TEST(KahlerAngle, TiltedPlaneAndNormalForm) {
    const ComplexStructure j = ComplexStructure::standard(3);
    for (double a : {0.1, 0.5, std::numbers::pi / 4, 1.2, 1.5}) {
        const OrthoFrame v = frame({e(6, 0), std::cos(a) * e(6, 1) + std::sin(a) * e(6, 2)});
        const KahlerAngle k = kahler_angle(v, j);
        EXPECT_NEAR(k.tau, a, 1e-10);
        // span(v1, cos tau J v1 + sin tau v2) reproduces V
        const Vector second = std::cos(k.tau) * j.apply(k.v1) + std::sin(k.tau) * k.v2;
        EXPECT_NEAR(pairing(v, frame({k.v1, second})), 1.0, 1e-10);
        EXPECT_NEAR(k.v2.dot(k.v1), 0.0, 1e-10);
        EXPECT_NEAR(k.v2.dot(j.apply(k.v1)), 0.0, 1e-10);
    }
}

TEST(KahlerAngle, BasisInvariance) {
    RandomStream s(20);
    const ComplexStructure j = ComplexStructure::standard(3);
    const OrthoFrame v = sample_plane(6, 2, s);
    const double tau = kahler_angle(v, j).tau;
    for (int t = 0; t < 50; ++t) {
        const Matrix g = sample_rotation(2, s);
        EXPECT_NEAR(kahler_angle(OrthoFrame(v.columns() * g), j).tau, tau, 1e-10);
    }
}

TEST(KahlerAngle, RankMismatch) {
    EXPECT_THROW(kahler_angle(OrthoFrame(Matrix::Identity(4, 3)), ComplexStructure::standard(2)), GeometryError);
}

}  // namespace
}  // namespace igeo
