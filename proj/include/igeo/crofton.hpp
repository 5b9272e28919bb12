#pragma once

#include <cstddef>
#include <istream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "igeo/intersections.hpp"
#include "igeo/monte_carlo.hpp"

namespace igeo {

/// Ratio of curve length to the expected number of hits by a uniform great
/// hypersphere, for every S^n.
inline constexpr double kCroftonCurveConstant = std::numbers::pi;

/// Geodesic polyline on S^n in R^{n+1}.
class SphericalPolyline {
public:
    /// Vertices must be unit to 1e-12; consecutive vertices (and the closing
    /// pair when closed) may be neither equal nor antipodal.
    SphericalPolyline(std::vector<Vector> vertices, bool closed);

    /// Closed polyline with `count` equally spaced vertices on the circle at
    /// the given colatitude around e_{axis}, lying in span(e_0, e_1, e_axis).
    static SphericalPolyline latitude_circle(Index ambient_dim, double colatitude, std::size_t count);

    Index ambient_dim() const { return vertices_.front().size(); }
    const std::vector<Vector>& vertices() const { return vertices_; }
    bool closed() const { return closed_; }
    std::size_t segment_count() const { return closed_ ? vertices_.size() : vertices_.size() - 1; }

    SphericalPolyline rotated(const Matrix& g) const;
    /// Inserts the geodesic midpoint of every segment.
    SphericalPolyline refined() const;

private:
    std::vector<Vector> vertices_;
    bool closed_;
};

/// Reads "SPHERE n CLOSED|OPEN" then one vertex per line.
SphericalPolyline parse_polyline(std::istream& in);
std::string format_polyline(const SphericalPolyline& c);

/// Sum of arc lengths of the segments, in radians.
double polyline_length(const SphericalPolyline& c);

/// Segments whose endpoints lie on opposite sides of the great hypersphere
/// {x : <u, x> = 0}. nullopt (Degenerate) when some vertex lies within 1e-9
/// of it; the caller redraws u.
std::optional<int> count_great_hypersphere(const SphericalPolyline& c, const Vector& u);

/// pi times the mean hit count of uniform great hyperspheres. Degenerate
/// normals are redrawn and reported in `rejected`.
McEstimate crofton_length(const SphericalPolyline& c, std::size_t samples, const RandomStream& stream,
                          const ExecPolicy& exec = {});

struct ZetaCalibration {
    double value = 0.0;
    double std_error = 0.0;
    McEstimate mean_count;
    /// relative standard error above 5% (or no hits at all)
    bool low_power = false;
};

/// length / E[count] for a reference of known length on S^n.
ZetaCalibration calibrate_zeta(Index n, const SphericalPolyline& reference, std::size_t samples,
                               const RandomStream& stream, const ExecPolicy& exec = {});

/// Area of a plane curve in units of the area of CP^1: the mean number of
/// distinct points on a uniform random line.
McEstimate crofton_area_cp2(const HomogeneousCurve& curve, std::size_t samples, const RandomStream& stream,
                            const ExecPolicy& exec = {});

}  // namespace igeo
