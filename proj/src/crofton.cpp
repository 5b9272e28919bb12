#include "igeo/crofton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace igeo {

namespace {

constexpr double kVertexUnitTolerance = 1e-12;
constexpr double kSegmentTolerance = 1e-9;
constexpr double kOnHypersphere = 1e-9;

void check_segment(const Vector& a, const Vector& b) {
    const double c = a.dot(b);
    if (!(c > -1.0 + kSegmentTolerance && c < 1.0 - kSegmentTolerance)) {
        throw GeometryError(ErrorCode::InvalidArgument, "consecutive vertices are equal or antipodal");
    }
}

}  // namespace

SphericalPolyline::SphericalPolyline(std::vector<Vector> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed) {
    if (vertices_.size() < (closed_ ? 3U : 2U)) {
        throw GeometryError(ErrorCode::InvalidArgument, "too few vertices for a polyline");
    }
    const Index dim = vertices_.front().size();
    if (dim < 2) {
        throw GeometryError(ErrorCode::DimensionMismatch, "polyline must live in R^{n+1} with n >= 1");
    }
    for (const auto& v : vertices_) {
        if (v.size() != dim) {
            throw GeometryError(ErrorCode::DimensionMismatch, "vertices of different dimensions");
        }
        if (std::abs(v.norm() - 1.0) > kVertexUnitTolerance) {
            throw GeometryError(ErrorCode::NotUnit, "polyline vertex is not unit");
        }
    }
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        check_segment(vertices_[i], vertices_[i + 1]);
    }
    if (closed_) {
        check_segment(vertices_.back(), vertices_.front());
    }
}

SphericalPolyline SphericalPolyline::latitude_circle(Index ambient_dim, double colatitude, std::size_t count) {
    if (ambient_dim < 3) {
        throw GeometryError(ErrorCode::DimensionMismatch, "latitude circles need S^n with n >= 2");
    }
    std::vector<Vector> vertices;
    vertices.reserve(count);
    const double s = std::sin(colatitude);
    const double c = std::cos(colatitude);
    for (std::size_t i = 0; i < count; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        Vector v = Vector::Zero(ambient_dim);
        v(0) = s * std::cos(phi);
        v(1) = s * std::sin(phi);
        v(2) = c;
        v.normalize();
        vertices.push_back(std::move(v));
    }
    return SphericalPolyline(std::move(vertices), true);
}

SphericalPolyline SphericalPolyline::rotated(const Matrix& g) const {
    std::vector<Vector> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) {
        out.push_back((g * v).normalized());
    }
    return SphericalPolyline(std::move(out), closed_);
}

SphericalPolyline SphericalPolyline::refined() const {
    std::vector<Vector> out;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(vertices_[i]);
        if (i + 1 < n || closed_) {
            out.push_back((vertices_[i] + vertices_[(i + 1) % n]).normalized());
        }
    }
    return SphericalPolyline(std::move(out), closed_);
}

SphericalPolyline parse_polyline(std::istream& in) {
    std::string line;
    Index n = -1;
    bool closed = false;
    std::vector<Vector> vertices;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream row(line);
        if (n < 0) {
            std::string tag;
            std::string kind;
            if (!(row >> tag >> n >> kind) || tag != "SPHERE" || n < 1 || (kind != "CLOSED" && kind != "OPEN")) {
                throw GeometryError(ErrorCode::ParseError, "expected header 'SPHERE n CLOSED|OPEN'");
            }
            closed = kind == "CLOSED";
            continue;
        }
        Vector v(n + 1);
        for (Index i = 0; i <= n; ++i) {
            if (!(row >> v(i))) {
                throw GeometryError(ErrorCode::ParseError, "vertex line needs n+1 reals: " + line);
            }
        }
        double extra = 0.0;
        if (row >> extra) {
            throw GeometryError(ErrorCode::ParseError, "vertex line has more than n+1 reals: " + line);
        }
        vertices.push_back(std::move(v));
    }
    if (n < 0) {
        throw GeometryError(ErrorCode::ParseError, "missing 'SPHERE n' header");
    }
    return SphericalPolyline(std::move(vertices), closed);
}

std::string format_polyline(const SphericalPolyline& c) {
    std::ostringstream out;
    out.precision(17);
    out << "SPHERE " << c.ambient_dim() - 1 << (c.closed() ? " CLOSED" : " OPEN") << '\n';
    for (const auto& v : c.vertices()) {
        for (Index i = 0; i < v.size(); ++i) {
            out << (i ? " " : "") << v(i);
        }
        out << '\n';
    }
    return out.str();
}

double polyline_length(const SphericalPolyline& c) {
    const auto& v = c.vertices();
    double total = 0.0;
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
        const Vector& a = v[i];
        const Vector& b = v[(i + 1) % v.size()];
        // equals acos(<a, b>) but keeps full precision for short arcs
        total += 2.0 * std::atan2((a - b).norm(), (a + b).norm());
    }
    return total;
}

std::optional<int> count_great_hypersphere(const SphericalPolyline& c, const Vector& u) {
    if (u.size() != c.ambient_dim()) {
        throw GeometryError(ErrorCode::DimensionMismatch, "normal and polyline dimensions differ");
    }
    const auto& v = c.vertices();
    std::vector<double> side(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        side[i] = u.dot(v[i]);
        if (std::abs(side[i]) < kOnHypersphere) {
            return std::nullopt;
        }
    }
    int count = 0;
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
        if ((side[i] > 0.0) != (side[(i + 1) % v.size()] > 0.0)) {
            ++count;
        }
    }
    return count;
}

namespace {

McEstimate mean_hit_count(const SphericalPolyline& c, std::size_t samples, const RandomStream& stream,
                          const ExecPolicy& exec, double scale) {
    if (samples < 100) {
        throw GeometryError(ErrorCode::InvalidArgument, "Crofton estimators need at least 100 samples");
    }
    const Index dim = c.ambient_dim();
    return run_batches(samples, stream, exec, [&](RandomStream& s, std::size_t n, Accumulator& acc) {
        Vector u(dim);
        for (std::size_t i = 0; i < n; ++i) {
            for (;;) {
                detail::fill_sphere(s, u);
                if (const auto hits = count_great_hypersphere(c, u)) {
                    acc.add(scale * *hits);
                    break;
                }
                acc.reject();
            }
        }
    });
}

}  // namespace

McEstimate crofton_length(const SphericalPolyline& c, std::size_t samples, const RandomStream& stream,
                          const ExecPolicy& exec) {
    return mean_hit_count(c, samples, stream, exec, kCroftonCurveConstant);
}

ZetaCalibration calibrate_zeta(Index n, const SphericalPolyline& reference, std::size_t samples,
                               const RandomStream& stream, const ExecPolicy& exec) {
    if (reference.ambient_dim() != n + 1) {
        throw GeometryError(ErrorCode::DimensionMismatch, "reference does not live on S^n");
    }
    const double length = polyline_length(reference);
    if (!(length > 0.0)) {
        throw GeometryError(ErrorCode::InvalidArgument, "reference length must be positive");
    }
    ZetaCalibration out;
    out.mean_count = mean_hit_count(reference, samples, stream, exec, 1.0);
    const double mean = out.mean_count.mean;
    if (mean > 0.0) {
        out.value = length / mean;
        out.std_error = length * out.mean_count.std_error / (mean * mean);
    } else {
        out.value = std::numeric_limits<double>::infinity();
        out.std_error = std::numeric_limits<double>::infinity();
    }
    out.low_power = !std::isfinite(out.value) || out.std_error > 0.05 * out.value;
    return out;
}

McEstimate crofton_area_cp2(const HomogeneousCurve& curve, std::size_t samples, const RandomStream& stream,
                            const ExecPolicy& exec) {
    if (samples < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "need at least one sample");
    }
    return run_batches(samples, stream, exec, [&](RandomStream& s, std::size_t n, Accumulator& acc) {
        for (std::size_t i = 0; i < n; ++i) {
            for (;;) {
                try {
                    acc.add(line_curve_count(curve, sample_line_cp2(s)).distinct);
                    break;
                } catch (const GeometryError& e) {
                    if (e.code() != ErrorCode::IdenticallyZero && e.code() != ErrorCode::DegenerateLine) {
                        throw;
                    }
                    acc.reject();
                }
            }
        }
    });
}

}  // namespace igeo
