#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "igeo/monte_carlo.hpp"

namespace igeo {

using Complex = std::complex<double>;

/// Span of the columns of an n x d matrix (not necessarily orthonormal).
class LinearSubspace {
public:
    /// Throws RankDeficient unless the smallest singular value exceeds 1e-9
    /// times the largest. Zero columns give the zero subspace.
    LinearSubspace(Index ambient_dim, Matrix span);

    static LinearSubspace coordinate(Index ambient_dim, Index first, Index count);

    Index ambient_dim() const { return ambient_dim_; }
    Index rank() const { return span_.cols(); }
    const Matrix& span() const { return span_; }

private:
    Index ambient_dim_;
    Matrix span_;
};

/// dim A + dim B - rank [A | B].
Index intersection_dim(const LinearSubspace& a, const LinearSubspace& b);

/// Volume of the l-frame [y e_1, ..., y e_k, e_{k+1}, ..., e_l]; vanishes
/// exactly when y R^k meets R^{l-k} = span(e_{k+1}, ..., e_l).
double degeneracy_volume(const Matrix& y, Index k, Index l);

/// The unique l-plane containing both R^{l-k} and y R^k, or nullopt when
/// the two factors meet (degeneracy volume at most 1e-9).
std::optional<LinearSubspace> grassmann_meet(const Matrix& y, Index k, Index l, Index m);

/// Rotation of R^{l+m} exchanging e_1 and e_{k+1} (one sign flipped so that
/// the determinant is +1). Always degenerate for grassmann_meet when k < l.
Matrix swap_rotation(Index k, Index l, Index m);

/// Degree-d form sum c_{abc} x^a y^b z^c on C^3.
class HomogeneousCurve {
public:
    struct Term {
        int a = 0;
        int b = 0;
        int c = 0;
        Complex coefficient;
    };

    HomogeneousCurve(int degree, std::vector<Term> terms);

    /// x^d + y^d + z^d (smooth for every d >= 1).
    static HomogeneousCurve fermat(int degree);

    int degree() const { return degree_; }
    const std::vector<Term>& terms() const { return terms_; }
    Complex evaluate(const std::array<Complex, 3>& point) const;

private:
    int degree_;
    std::vector<Term> terms_;
};

/// Reads "CURVE d" followed by lines "a b c re im".
HomogeneousCurve parse_curve(std::istream& in);
std::string format_curve(const HomogeneousCurve& curve);

/// Projective line through two points of C^3.
struct ProjectiveLine {
    std::array<Complex, 3> p;
    std::array<Complex, 3> q;
};

/// Line through the points represented by two unit vectors of R^6.
ProjectiveLine line_from_real(const Vector& p, const Vector& q);

struct LineCount {
    int with_multiplicity = 0;
    int distinct = 0;
};

/// Intersection of the curve with the line s P + t Q. Throws IdenticallyZero
/// when the line lies in the curve and DegenerateLine when P and Q are
/// projectively dependent.
LineCount line_curve_count(const HomogeneousCurve& curve, const ProjectiveLine& line);

/// Fubini-Study uniform line: two independent uniform points of CP^2.
ProjectiveLine sample_line_cp2(RandomStream& stream);

struct EquidistributionResult {
    /// distinct intersection count -> number of lines
    std::map<int, std::size_t> histogram;
    double exceptional_fraction = 0.0;
    std::size_t samples = 0;
    /// lines contained in the curve, redrawn
    std::size_t rejected = 0;
};

EquidistributionResult equidistribution_experiment(const HomogeneousCurve& curve, std::size_t samples,
                                                   const RandomStream& stream, const ExecPolicy& exec = {});

struct SuCircleResult {
    /// diag(exp(2 pi i k / n)), k = 0..n-1
    std::vector<Eigen::MatrixXcd> points;
    /// max |tr(i Id eta)| over a basis of traceless skew-Hermitian eta
    double orthogonality_residual = 0.0;
    /// max |z^n - 1| and max |det - 1| over the points
    double root_residual = 0.0;
    double det_residual = 0.0;
};

/// The n points where the scalar circle of U_n meets SU_n.
SuCircleResult su_circle_intersections(int n);

}  // namespace igeo
