#include "igeo/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace igeo {

namespace {

std::string dims(Index a, Index b) {
    return std::to_string(a) + " vs " + std::to_string(b);
}

void require_same_ambient(const OrthoFrame& a, const OrthoFrame& b) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch,
                            "ambient dimensions " + dims(a.ambient_dim(), b.ambient_dim()));
    }
}

void require_unit(const Vector& x) {
    if (std::abs(x.norm() - 1.0) > 1e-12) {
        throw GeometryError(ErrorCode::NotUnit, "vector norm " + std::to_string(x.norm()));
    }
}

}  // namespace

OrthoFrame::OrthoFrame(Matrix columns) : columns_(std::move(columns)) {
    if (columns_.cols() < 1 || columns_.cols() > columns_.rows()) {
        throw GeometryError(ErrorCode::DimensionMismatch,
                            "frame rank " + dims(columns_.cols(), columns_.rows()));
    }
    const Matrix gram = columns_.transpose() * columns_;
    const double dev = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= kFrameTolerance)) {
        throw GeometryError(ErrorCode::NotUnit,
                            "columns are not orthonormal (deviation " + std::to_string(dev) + ")");
    }
}

OrthoFrame orthonormalize(const Matrix& vectors) {
    if (vectors.cols() < 1 || vectors.cols() > vectors.rows()) {
        throw GeometryError(ErrorCode::RankDeficient,
                            "cannot span " + std::to_string(vectors.cols()) + " independent columns in R^" +
                                std::to_string(vectors.rows()));
    }
    Eigen::JacobiSVD<Matrix> svd(vectors);
    const double smallest = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smallest > kRankThreshold)) {
        throw GeometryError(ErrorCode::RankDeficient,
                            "smallest singular value " + std::to_string(smallest));
    }
    Matrix q = vectors;
    for (Index i = 0; i < q.cols(); ++i) {
        // two passes of modified Gram-Schmidt keep the result orthonormal to rounding
        for (int pass = 0; pass < 2; ++pass) {
            for (Index j = 0; j < i; ++j) {
                q.col(i) -= q.col(j).dot(q.col(i)) * q.col(j);
            }
        }
        q.col(i).normalize();
    }
    return OrthoFrame(std::move(q));
}

ComplexStructure::ComplexStructure(Matrix matrix) : matrix_(std::move(matrix)) {
    const Index n = matrix_.rows();
    if (n != matrix_.cols() || n == 0 || n % 2 != 0) {
        throw GeometryError(ErrorCode::DimensionMismatch, "complex structure must be square of even size");
    }
    const Matrix id = Matrix::Identity(n, n);
    const double square = (matrix_ * matrix_ + id).cwiseAbs().maxCoeff();
    const double ortho = (matrix_.transpose() * matrix_ - id).cwiseAbs().maxCoeff();
    if (square > 1e-12 || ortho > 1e-12) {
        throw GeometryError(ErrorCode::InvalidArgument, "matrix is not an orthogonal complex structure");
    }
}

ComplexStructure ComplexStructure::standard(Index complex_dim) {
    Matrix j = Matrix::Zero(2 * complex_dim, 2 * complex_dim);
    for (Index i = 0; i < complex_dim; ++i) {
        j(2 * i + 1, 2 * i) = 1.0;
        j(2 * i, 2 * i + 1) = -1.0;
    }
    return ComplexStructure(std::move(j));
}

ComplexStructure twisted_interleave_structure(Index block_dim) {
    Matrix j = Matrix::Zero(2 * block_dim, 2 * block_dim);
    j.bottomLeftCorner(block_dim, block_dim).setIdentity();
    j.topRightCorner(block_dim, block_dim) = -Matrix::Identity(block_dim, block_dim);
    return ComplexStructure(std::move(j));
}

InterleaveOperator::InterleaveOperator(Index block_dim, Index copies)
    : block_dim_(block_dim), copies_(copies) {
    if (block_dim < 1 || copies < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "block dimension and copies must be positive");
    }
}

Vector InterleaveOperator::apply(const Vector& v, Index power) const {
    if (v.size() != dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "vector size " + dims(v.size(), dim()));
    }
    const Index shift = ((power % copies_) + copies_) % copies_;
    Vector out(v.size());
    for (Index i = 0; i < copies_; ++i) {
        out.segment(((i + shift) % copies_) * block_dim_, block_dim_) = v.segment(i * block_dim_, block_dim_);
    }
    return out;
}

Matrix InterleaveOperator::matrix(Index power) const {
    Matrix out(dim(), dim());
    for (Index c = 0; c < dim(); ++c) {
        out.col(c) = apply(Vector::Unit(dim(), c), power);
    }
    return out;
}

Vector InterleaveOperator::block_copy(const Vector& x, Index r) const {
    if (x.size() != block_dim_) {
        throw GeometryError(ErrorCode::DimensionMismatch, "block vector size " + dims(x.size(), block_dim_));
    }
    Vector out = Vector::Zero(dim());
    out.segment(((r % copies_) + copies_) % copies_ * block_dim_, block_dim_) = x;
    return out;
}

ProjectionForm::ProjectionForm(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "form must be square");
    }
    if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw GeometryError(ErrorCode::InvalidArgument, "form must be symmetric");
    }
}

Vector ProjectionForm::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double pairing(const OrthoFrame& v, const OrthoFrame& w) {
    require_same_ambient(v, w);
    if (v.rank() != w.rank()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "ranks " + dims(v.rank(), w.rank()));
    }
    const Matrix m = v.columns().transpose() * w.columns();
    return std::clamp(std::abs(m.determinant()), 0.0, 1.0);
}

double projection_volume(const OrthoFrame& v, const OrthoFrame& z) {
    require_same_ambient(v, z);
    if (z.rank() > v.rank()) {
        throw GeometryError(ErrorCode::DimensionMismatch,
                            "projected rank exceeds target rank: " + dims(z.rank(), v.rank()));
    }
    const Matrix m = v.columns().transpose() * z.columns();
    return std::min(detail::gram_volume(m), 1.0);
}

OrthoFrame interleaved_wedge(const Vector& x, const InterleaveOperator& op) {
    require_unit(x);
    Matrix cols(op.dim(), op.copies());
    for (Index r = 0; r < op.copies(); ++r) {
        cols.col(r) = op.block_copy(x, r);
    }
    return OrthoFrame(std::move(cols));
}

OrthoFrame interleaved_complex_wedge(const Vector& x, const InterleaveOperator& op) {
    if (op.block_dim() % 2 != 0) {
        throw GeometryError(ErrorCode::DimensionMismatch, "complex blocks need even real dimension");
    }
    require_unit(x);
    const Vector jx = ComplexStructure::standard(op.block_dim() / 2).apply(x);
    Matrix cols(op.dim(), 2 * op.copies());
    for (Index r = 0; r < op.copies(); ++r) {
        cols.col(2 * r) = op.block_copy(x, r);
        cols.col(2 * r + 1) = op.block_copy(jx, r);
    }
    return OrthoFrame(std::move(cols));
}

ProjectionForm b_r_form(const OrthoFrame& v, Index r, const InterleaveOperator& op) {
    if (v.ambient_dim() != op.dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch,
                            "frame ambient vs operator dimension " + dims(v.ambient_dim(), op.dim()));
    }
    if (r < 0 || r >= op.copies()) {
        throw GeometryError(ErrorCode::InvalidArgument, "power r out of range");
    }
    const auto rows = v.columns().middleRows(r * op.block_dim(), op.block_dim());
    Matrix b = rows * rows.transpose();
    b = 0.5 * (b + b.transpose()).eval();
    return ProjectionForm(std::move(b));
}

double trace_identity(const OrthoFrame& v, const InterleaveOperator& op) {
    double total = 0.0;
    for (Index r = 0; r < op.copies(); ++r) {
        total += b_r_form(v, r, op).trace();
    }
    return total;
}

KahlerAngle kahler_angle(const OrthoFrame& v, const ComplexStructure& j) {
    if (v.rank() != 2 || v.ambient_dim() != j.dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "Kahler angle needs a 2-plane in the space of J");
    }
    const Vector u1 = v.column(0);
    Vector u2 = v.column(1);
    const Matrix mixed = v.columns().transpose() * j.matrix() * v.columns();
    // mixed is antisymmetric, so both singular values equal |<u1, J u2>|
    Eigen::JacobiSVD<Matrix> svd(mixed);
    const double cos_tau = std::clamp(svd.singularValues()(0), 0.0, 1.0);

    KahlerAngle out;
    out.v1 = u1;
    const Vector ju1 = j.apply(u1);
    if (u2.dot(ju1) < 0.0) {
        u2 = -u2;
    }
    const double sin_tau = std::sqrt(std::max(0.0, 1.0 - cos_tau * cos_tau));
    if (sin_tau < kRankThreshold) {
        out.tau = 0.0;
        out.v2_arbitrary = true;
        out.v2 = Vector::Zero(v.ambient_dim());
        Matrix basis(v.ambient_dim(), 2);
        basis << u1, ju1;
        for (Index e = 0; e < v.ambient_dim(); ++e) {
            Vector cand = Vector::Unit(v.ambient_dim(), e);
            cand -= basis * (basis.transpose() * cand);
            if (cand.norm() > 0.5) {
                out.v2 = cand.normalized();
                break;
            }
        }
        return out;
    }
    out.tau = std::acos(cos_tau);
    out.v2 = ((u2 - cos_tau * ju1) / sin_tau).normalized();
    return out;
}

double invariance_residual(const OrthoFrame& v, const Matrix& a) {
    if (a.rows() != v.ambient_dim() || a.cols() != v.ambient_dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "operator size vs frame ambient dimension");
    }
    const Matrix image = a * v.columns();
    const Matrix outside = image - v.columns() * (v.columns().transpose() * image);
    return outside.cwiseAbs().maxCoeff();
}

namespace detail {

double gram_volume(const Eigen::Ref<const Matrix>& m) {
    const Index j = m.cols();
    double det = 0.0;
    if (j == 1) {
        det = m.col(0).squaredNorm();
    } else if (j == 2) {
        const double a = m.col(0).squaredNorm();
        const double b = m.col(0).dot(m.col(1));
        const double d = m.col(1).squaredNorm();
        det = a * d - b * b;
    } else if (j == 3) {
        const double g00 = m.col(0).squaredNorm(), g11 = m.col(1).squaredNorm(), g22 = m.col(2).squaredNorm();
        const double g01 = m.col(0).dot(m.col(1)), g02 = m.col(0).dot(m.col(2)), g12 = m.col(1).dot(m.col(2));
        det = g00 * (g11 * g22 - g12 * g12) - g01 * (g01 * g22 - g12 * g02) + g02 * (g01 * g12 - g11 * g02);
    } else if (m.rows() == j) {
        const double d = m.determinant();
        return std::abs(d);
    } else {
        det = (m.transpose() * m).eval().determinant();
    }
    return std::sqrt(std::max(det, 0.0));
}

}  // namespace detail

}  // namespace igeo
