#include "igeo/intersections.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace igeo {

namespace {

// An r-fold root splits by about eps^(1/r) under roundoff (1e-8 for double,
// 5e-6 for triple roots), so clusters must be wider than that.
constexpr double kClusterRadius = 1e-5;
constexpr double kChartThreshold = 1e-8;

Matrix orthonormal_basis(const Matrix& span) {
    if (span.cols() == 0) {
        return span;
    }
    Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
    return svd.matrixU();
}

Index numerical_rank(const Matrix& m) {
    if (m.cols() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > kRankThreshold * s(0)) {
            ++r;
        }
    }
    return r;
}

std::array<Complex, 3> normalized(const std::array<Complex, 3>& v) {
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    return {v[0] / n, v[1] / n, v[2] / n};
}

/// Coefficients of t^j in F(P + t Q).
std::vector<Complex> restrict_to_line(const HomogeneousCurve& curve, const std::array<Complex, 3>& p,
                                      const std::array<Complex, 3>& q) {
    const int d = curve.degree();
    std::vector<Complex> total(d + 1, Complex(0.0, 0.0));
    std::vector<Complex> poly;
    std::vector<Complex> next;
    for (const auto& term : curve.terms()) {
        poly.assign(1, term.coefficient);
        const int powers[3] = {term.a, term.b, term.c};
        for (int axis = 0; axis < 3; ++axis) {
            for (int e = 0; e < powers[axis]; ++e) {
                next.assign(poly.size() + 1, Complex(0.0, 0.0));
                for (std::size_t i = 0; i < poly.size(); ++i) {
                    next[i] += poly[i] * p[axis];
                    next[i + 1] += poly[i] * q[axis];
                }
                poly.swap(next);
            }
        }
        for (std::size_t j = 0; j < poly.size(); ++j) {
            total[j] += poly[j];
        }
    }
    return total;
}

double max_modulus(const std::vector<Complex>& c) {
    double m = 0.0;
    for (const auto& z : c) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
    const Index d = static_cast<Index>(c.size()) - 1;
    if (d == 1) {
        return {-c[0] / c[1]};
    }
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (Index i = 1; i < d; ++i) {
        companion(i, i - 1) = 1.0;
    }
    for (Index i = 0; i < d; ++i) {
        companion(i, d - 1) = -c[i] / c[d];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> roots(d);
    for (Index i = 0; i < d; ++i) {
        roots[i] = solver.eigenvalues()(i);
    }
    return roots;
}

int count_clusters(const std::vector<Complex>& roots) {
    std::vector<Complex> reps;
    for (const auto& r : roots) {
        const bool known = std::any_of(reps.begin(), reps.end(), [&](const Complex& s) {
            const double scale = std::max({1.0, std::abs(r), std::abs(s)});
            return std::abs(r - s) <= kClusterRadius * scale;
        });
        if (!known) {
            reps.push_back(r);
        }
    }
    return static_cast<int>(reps.size());
}

}  // namespace

LinearSubspace::LinearSubspace(Index ambient_dim, Matrix span) : ambient_dim_(ambient_dim), span_(std::move(span)) {
    if (span_.rows() != ambient_dim_ && span_.cols() > 0) {
        throw GeometryError(ErrorCode::DimensionMismatch, "span rows must equal the ambient dimension");
    }
    if (span_.cols() == 0) {
        span_.resize(ambient_dim_, 0);
        return;
    }
    if (span_.cols() > ambient_dim_ || numerical_rank(span_) != span_.cols()) {
        throw GeometryError(ErrorCode::RankDeficient, "span columns are numerically dependent");
    }
}

LinearSubspace LinearSubspace::coordinate(Index ambient_dim, Index first, Index count) {
    if (first < 0 || count < 0 || first + count > ambient_dim) {
        throw GeometryError(ErrorCode::InvalidArgument, "coordinate range outside ambient space");
    }
    return LinearSubspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim).middleCols(first, count));
}

Index intersection_dim(const LinearSubspace& a, const LinearSubspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "subspaces live in different ambient spaces");
    }
    Matrix joined(a.ambient_dim(), a.rank() + b.rank());
    joined << orthonormal_basis(a.span()), orthonormal_basis(b.span());
    return a.rank() + b.rank() - numerical_rank(joined);
}

double degeneracy_volume(const Matrix& y, Index k, Index l) {
    const Index n = y.rows();
    if (y.cols() != n || k < 1 || k > l || l > n) {
        throw GeometryError(ErrorCode::DimensionMismatch, "need 1 <= k <= l <= dim and a square y");
    }
    Matrix frame(n, l);
    frame.leftCols(k) = y.leftCols(k);
    frame.rightCols(l - k) = Matrix::Identity(n, n).middleCols(k, l - k);
    // QR keeps the volume accurate near zero, where sqrt(det G) would inflate roundoff to ~1e-8
    const Eigen::HouseholderQR<Matrix> qr(frame);
    return qr.matrixQR().diagonal().cwiseAbs().prod();
}

std::optional<LinearSubspace> grassmann_meet(const Matrix& y, Index k, Index l, Index m) {
    if (y.rows() != l + m) {
        throw GeometryError(ErrorCode::DimensionMismatch, "y must act on R^{l+m}");
    }
    if (degeneracy_volume(y, k, l) <= kRankThreshold) {
        return std::nullopt;
    }
    const Index n = l + m;
    Matrix span(n, l);
    span.leftCols(l - k) = Matrix::Identity(n, n).middleCols(k, l - k);
    span.rightCols(k) = y.leftCols(k);
    return LinearSubspace(n, orthonormalize(span).columns());
}

Matrix swap_rotation(Index k, Index l, Index m) {
    if (k < 1 || k >= l) {
        throw GeometryError(ErrorCode::InvalidArgument, "swap rotation needs 1 <= k < l");
    }
    const Index n = l + m;
    Matrix y = Matrix::Identity(n, n);
    y.col(0).swap(y.col(k));
    y.col(0) = -y.col(0);
    return y;
}

HomogeneousCurve::HomogeneousCurve(int degree, std::vector<Term> terms) : degree_(degree), terms_(std::move(terms)) {
    if (degree_ < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "curve degree must be at least 1");
    }
    bool nonzero = false;
    for (const auto& t : terms_) {
        if (t.a < 0 || t.b < 0 || t.c < 0 || t.a + t.b + t.c != degree_) {
            throw GeometryError(ErrorCode::InvalidArgument, "monomial degree does not match curve degree");
        }
        nonzero = nonzero || std::abs(t.coefficient) > 0.0;
    }
    if (!nonzero) {
        throw GeometryError(ErrorCode::InvalidArgument, "curve has no nonzero coefficient");
    }
}

HomogeneousCurve HomogeneousCurve::fermat(int degree) {
    return HomogeneousCurve(degree, {{degree, 0, 0, 1.0}, {0, degree, 0, 1.0}, {0, 0, degree, 1.0}});
}

Complex HomogeneousCurve::evaluate(const std::array<Complex, 3>& point) const {
    Complex sum(0.0, 0.0);
    for (const auto& t : terms_) {
        sum += t.coefficient * std::pow(point[0], t.a) * std::pow(point[1], t.b) * std::pow(point[2], t.c);
    }
    return sum;
}

HomogeneousCurve parse_curve(std::istream& in) {
    std::string line;
    int degree = -1;
    std::vector<HomogeneousCurve::Term> terms;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream row(line);
        if (degree < 0) {
            std::string tag;
            if (!(row >> tag >> degree) || tag != "CURVE") {
                throw GeometryError(ErrorCode::ParseError, "expected header 'CURVE d'");
            }
            continue;
        }
        HomogeneousCurve::Term t;
        double re = 0.0;
        double im = 0.0;
        if (!(row >> t.a >> t.b >> t.c >> re >> im)) {
            throw GeometryError(ErrorCode::ParseError, "bad monomial line: " + line);
        }
        t.coefficient = Complex(re, im);
        terms.push_back(t);
    }
    if (degree < 0) {
        throw GeometryError(ErrorCode::ParseError, "missing 'CURVE d' header");
    }
    return HomogeneousCurve(degree, std::move(terms));
}

std::string format_curve(const HomogeneousCurve& curve) {
    std::ostringstream out;
    out.precision(17);
    out << "CURVE " << curve.degree() << '\n';
    for (const auto& t : curve.terms()) {
        out << t.a << ' ' << t.b << ' ' << t.c << ' ' << t.coefficient.real() << ' ' << t.coefficient.imag() << '\n';
    }
    return out.str();
}

ProjectiveLine line_from_real(const Vector& p, const Vector& q) {
    if (p.size() != 6 || q.size() != 6) {
        throw GeometryError(ErrorCode::DimensionMismatch, "points of CP^2 are represented in R^6");
    }
    ProjectiveLine line;
    for (int i = 0; i < 3; ++i) {
        line.p[i] = Complex(p(2 * i), p(2 * i + 1));
        line.q[i] = Complex(q(2 * i), q(2 * i + 1));
    }
    return line;
}

LineCount line_curve_count(const HomogeneousCurve& curve, const ProjectiveLine& line) {
    Eigen::Matrix<Complex, 3, 2> pq;
    for (int i = 0; i < 3; ++i) {
        pq(i, 0) = line.p[i];
        pq(i, 1) = line.q[i];
    }
    Eigen::JacobiSVD<Eigen::Matrix<Complex, 3, 2>> svd(pq);
    if (!(svd.singularValues()(1) > kRankThreshold * svd.singularValues()(0))) {
        throw GeometryError(ErrorCode::DegenerateLine, "line points are projectively dependent");
    }
    auto p = normalized(line.p);
    auto q = normalized(line.q);

    double scale = 0.0;
    for (const auto& t : curve.terms()) {
        scale += std::abs(t.coefficient);
    }
    auto coeffs = restrict_to_line(curve, p, q);
    const double cmax = max_modulus(coeffs);
    if (cmax <= 1e-10 * scale) {
        throw GeometryError(ErrorCode::IdenticallyZero, "line is contained in the curve");
    }

    const int d = curve.degree();
    if (std::abs(coeffs[d]) < kChartThreshold * cmax) {
        if (std::abs(coeffs[0]) >= kChartThreshold * cmax) {
            std::reverse(coeffs.begin(), coeffs.end());
        } else {
            // both chart ends are (near) roots: move the point at infinity to
            // one of d + 1 fixed line points, at least one of which is not a root
            double best = -1.0;
            std::array<Complex, 3> best_q = q;
            for (int i = 0; i <= d; ++i) {
                const Complex lambda = std::polar(1.0 + i, 0.7 * i);
                std::array<Complex, 3> cand{q[0] + lambda * p[0], q[1] + lambda * p[1], q[2] + lambda * p[2]};
                cand = normalized(cand);
                const double value = std::abs(curve.evaluate(cand));
                if (value > best) {
                    best = value;
                    best_q = cand;
                }
            }
            coeffs = restrict_to_line(curve, p, best_q);
        }
    }
    const double norm = max_modulus(coeffs);
    for (auto& c : coeffs) {
        c /= norm;
    }
    const auto roots = polynomial_roots(coeffs);
    LineCount out;
    out.with_multiplicity = static_cast<int>(roots.size());
    out.distinct = count_clusters(roots);
    return out;
}

ProjectiveLine sample_line_cp2(RandomStream& stream) {
    const Vector p = sample_cp_point(3, stream);
    const Vector q = sample_cp_point(3, stream);
    return line_from_real(p, q);
}

EquidistributionResult equidistribution_experiment(const HomogeneousCurve& curve, std::size_t samples,
                                                   const RandomStream& stream, const ExecPolicy& exec) {
    if (samples < 100) {
        throw GeometryError(ErrorCode::InvalidArgument, "equidistribution needs at least 100 samples");
    }
    const std::size_t batch = std::max<std::size_t>(1, exec.batch_size);
    const std::size_t batches = (samples + batch - 1) / batch;
    std::vector<EquidistributionResult> parts(batches);
    parallel_for(batches, exec.threads, [&](std::size_t b) {
        RandomStream local = stream.split(b);
        const std::size_t n = std::min(batch, samples - b * batch);
        auto& part = parts[b];
        for (std::size_t i = 0; i < n; ++i) {
            for (;;) {
                try {
                    const LineCount c = line_curve_count(curve, sample_line_cp2(local));
                    ++part.histogram[c.distinct];
                    break;
                } catch (const GeometryError& e) {
                    if (e.code() != ErrorCode::IdenticallyZero && e.code() != ErrorCode::DegenerateLine) {
                        throw;
                    }
                    ++part.rejected;
                }
            }
        }
        part.samples = n;
    });
    EquidistributionResult out;
    for (const auto& part : parts) {
        for (const auto& [count, lines] : part.histogram) {
            out.histogram[count] += lines;
        }
        out.samples += part.samples;
        out.rejected += part.rejected;
    }
    const auto hit = out.histogram.find(curve.degree());
    const std::size_t regular = hit == out.histogram.end() ? 0 : hit->second;
    out.exceptional_fraction = static_cast<double>(out.samples - regular) / static_cast<double>(out.samples);
    return out;
}

SuCircleResult su_circle_intersections(int n) {
    if (n < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "matrix size must be positive");
    }
    SuCircleResult out;
    const Complex i_unit(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
        Eigen::MatrixXcd x = z * Eigen::MatrixXcd::Identity(n, n);
        out.root_residual = std::max(out.root_residual, std::abs(std::pow(z, n) - 1.0));
        out.det_residual = std::max(out.det_residual, std::abs(x.determinant() - 1.0));
        out.points.push_back(std::move(x));
    }
    // tangent of the scalar circle, translated to the identity
    const Eigen::MatrixXcd xi = i_unit * Eigen::MatrixXcd::Identity(n, n);
    auto check = [&](const Eigen::MatrixXcd& eta) {
        out.orthogonality_residual = std::max(out.orthogonality_residual, std::abs((xi * eta).trace()));
    };
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            Eigen::MatrixXcd eta = Eigen::MatrixXcd::Zero(n, n);
            eta(a, b) = 1.0;
            eta(b, a) = -1.0;
            check(eta);
            eta(a, b) = i_unit;
            eta(b, a) = i_unit;
            check(eta);
        }
        if (a + 1 < n) {
            Eigen::MatrixXcd eta = Eigen::MatrixXcd::Zero(n, n);
            eta(a, a) = i_unit;
            eta(a + 1, a + 1) = -i_unit;
            check(eta);
        }
    }
    return out;
}

}  // namespace igeo
