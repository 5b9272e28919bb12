#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "igeo/exterior.hpp"

namespace igeo {

/// Seeded, splittable randomness. The sample sequence is a pure function of
/// (seed, path); split() derives a child stream from the address alone, so
/// it does not depend on how much of the parent has been consumed.
///
/// A stream is single-consumer. Concurrent work splits, it never shares.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path = {});

    RandomStream split(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

    /// Uniform on [0, 1).
    double uniform();
    double normal();
    std::uint64_t bits() { return engine_(); }

private:
    std::uint64_t seed_;
    std::vector<std::uint64_t> path_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Hopf-torus coordinates of a point of S^3:
/// (sin b cos a, sin b sin a, cos b cos g, cos b sin g), b in [0, pi].
struct TorusPoint {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    Eigen::Vector4d to_r4() const;
};

Vector sample_sphere(Index q, RandomStream& stream);

/// Haar rotation in SO(n).
Matrix sample_rotation(Index n, RandomStream& stream);

/// Haar unitary in U(n), realified to 2n x 2n in the convention of
/// ComplexStructure::standard (commutes with it).
Matrix sample_unitary(Index n, RandomStream& stream);

/// Uniform point of S^3 in torus coordinates; the density of (a, b, g) is
/// proportional to |sin b cos b|.
TorusPoint sample_torus_s3(RandomStream& stream);

/// Unit representative in R^{2n} of a Fubini-Study uniform point of CP^{n-1}.
Vector sample_cp_point(Index n, RandomStream& stream);

namespace detail {

void fill_sphere(RandomStream& stream, Eigen::Ref<Vector> out);

}  // namespace detail

}  // namespace igeo
