#pragma once

#include <Eigen/Dense>

#include "igeo/error.hpp"

namespace igeo {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kFrameTolerance = 1e-10;
inline constexpr double kRankThreshold = 1e-9;

/// Orthonormal k-frame in R^n. Stands in for the unit simple k-vector of its
/// span; orientation is not tracked because every pairing used here is taken
/// in absolute value.
class OrthoFrame {
public:
    /// Throws NotUnit when columns^T columns is farther than 1e-10 from I.
    explicit OrthoFrame(Matrix columns);

    Index ambient_dim() const { return columns_.rows(); }
    Index rank() const { return columns_.cols(); }
    const Matrix& columns() const { return columns_; }
    Vector column(Index i) const { return columns_.col(i); }

    /// Orthogonal projector onto the span.
    Matrix projector() const { return columns_ * columns_.transpose(); }

private:
    Matrix columns_;
};

/// Gram-Schmidt in input column order. The first output column is the first
/// input column normalized. Throws RankDeficient when the smallest singular
/// value of the input is at most 1e-9.
OrthoFrame orthonormalize(const Matrix& vectors);

/// Orthogonal matrix squaring to -identity.
class ComplexStructure {
public:
    explicit ComplexStructure(Matrix matrix);

    /// J on C^n realified with z_j = x_{2j} + i x_{2j+1}, so J e_{2j} = e_{2j+1}.
    static ComplexStructure standard(Index complex_dim);

    Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }
    Vector apply(const Vector& v) const { return matrix_ * v; }

private:
    Matrix matrix_;
};

/// Twisted structure on R^q + R^q used for two copies: the block shift on
/// the first block and minus the block shift on the second,
/// (u0, u1) -> (-u1, u0).
ComplexStructure twisted_interleave_structure(Index block_dim);

/// Cyclic block shift on R^{l m} viewed as m copies of R^l: block i moves to
/// block i + 1 (mod m).
class InterleaveOperator {
public:
    InterleaveOperator(Index block_dim, Index copies);

    Index block_dim() const { return block_dim_; }
    Index copies() const { return copies_; }
    Index dim() const { return block_dim_ * copies_; }

    Vector apply(const Vector& v, Index power = 1) const;
    Matrix matrix(Index power = 1) const;

    /// I^r applied to x placed in block 0, i.e. x copied into block r.
    Vector block_copy(const Vector& x, Index r) const;

private:
    Index block_dim_;
    Index copies_;
};

/// Symmetric positive semidefinite form on R^q with spectrum in [0, 1].
class ProjectionForm {
public:
    explicit ProjectionForm(Matrix matrix);

    Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }
    double trace() const { return matrix_.trace(); }
    /// Ascending.
    Vector eigenvalues() const;
    double evaluate(const Vector& x) const { return x.dot(matrix_ * x); }

private:
    Matrix matrix_;
};

/// |det(V^T W)|, the absolute pairing of the two unit simple k-vectors.
double pairing(const OrthoFrame& v, const OrthoFrame& w);

/// j-volume of the orthogonal projection of span(Z) onto span(V), j <= k.
double projection_volume(const OrthoFrame& v, const OrthoFrame& z);

/// Frame of x, I(x), ..., I^{m-1}(x) with x a unit vector of R^q sitting in
/// block 0. Throws NotUnit when |x| differs from 1 by more than 1e-12.
OrthoFrame interleaved_wedge(const Vector& x, const InterleaveOperator& op);

/// Complex-line analogue: x, Jx and their m block copies (2m columns).
/// op.block_dim() must be even; J is the standard structure on each block.
OrthoFrame interleaved_complex_wedge(const Vector& x, const InterleaveOperator& op);

/// B_r(x, x) = |proj_V I^r(x)|^2 on R^q. With V_r the rows of V belonging
/// to block r this is V_r V_r^T.
ProjectionForm b_r_form(const OrthoFrame& v, Index r, const InterleaveOperator& op);

/// sum_r trace(B_r); equals rank(V) for every V.
double trace_identity(const OrthoFrame& v, const InterleaveOperator& op);

struct KahlerAngle {
    double tau = 0.0;
    Vector v1;
    Vector v2;
    /// V is a complex line, so v2 is not determined by V. v2 is then an
    /// arbitrary unit vector orthogonal to v1 and Jv1 (zero when none exists).
    bool v2_arbitrary = false;
};

/// Normal form span(v1, cos(tau) J v1 + sin(tau) v2) of a real 2-plane.
KahlerAngle kahler_angle(const OrthoFrame& v, const ComplexStructure& j);

/// max-entry norm of (I - P_V) A V: zero iff span(V) is A-invariant.
double invariance_residual(const OrthoFrame& v, const Matrix& a);

namespace detail {

/// sqrt(det(M^T M)) for a d x j block, clamped at zero.
double gram_volume(const Eigen::Ref<const Matrix>& m);

}  // namespace detail

}  // namespace igeo
