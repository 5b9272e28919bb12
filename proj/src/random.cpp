#include "igeo/random.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace igeo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
    std::uint64_t key = splitmix64(seed);
    for (std::uint64_t step : path) {
        key = splitmix64(key ^ splitmix64(step + 0x632BE59BD9B4E019ULL));
    }
    return key;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)), engine_(derive_key(seed_, path_)) {}

RandomStream RandomStream::split(std::uint64_t index) const {
    std::vector<std::uint64_t> child = path_;
    child.push_back(index);
    return RandomStream(seed_, std::move(child));
}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

Eigen::Vector4d TorusPoint::to_r4() const {
    return {std::sin(beta) * std::cos(alpha), std::sin(beta) * std::sin(alpha), std::cos(beta) * std::cos(gamma),
            std::cos(beta) * std::sin(gamma)};
}

namespace detail {

void fill_sphere(RandomStream& stream, Eigen::Ref<Vector> out) {
    double norm = 0.0;
    do {
        for (Index i = 0; i < out.size(); ++i) {
            out(i) = stream.normal();
        }
        norm = out.norm();
    } while (norm < 1e-300);
    out /= norm;
}

}  // namespace detail

Vector sample_sphere(Index q, RandomStream& stream) {
    if (q < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "sphere dimension must be positive");
    }
    Vector x(q);
    detail::fill_sphere(stream, x);
    return x;
}

Matrix sample_rotation(Index n, RandomStream& stream) {
    if (n < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "rotation dimension must be positive");
    }
    Matrix g(n, n);
    for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) {
            g(r, c) = stream.normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (Index i = 0; i < n; ++i) {
        if (r(i, i) < 0.0) {
            q.col(i) = -q.col(i);
        }
    }
    if (q.determinant() < 0.0) {
        q.col(0) = -q.col(0);
    }
    return q;
}

Matrix sample_unitary(Index n, RandomStream& stream) {
    if (n < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "unitary dimension must be positive");
    }
    using Complex = std::complex<double>;
    Eigen::MatrixXcd g(n, n);
    for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) {
            const double re = stream.normal();
            const double im = stream.normal();
            g(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (Index i = 0; i < n; ++i) {
        const double mod = std::abs(r(i, i));
        if (mod > 0.0) {
            q.col(i) *= r(i, i) / mod;
        }
    }
    Matrix out(2 * n, 2 * n);
    for (Index c = 0; c < n; ++c) {
        for (Index r2 = 0; r2 < n; ++r2) {
            const Complex z = q(r2, c);
            out(2 * r2, 2 * c) = z.real();
            out(2 * r2, 2 * c + 1) = -z.imag();
            out(2 * r2 + 1, 2 * c) = z.imag();
            out(2 * r2 + 1, 2 * c + 1) = z.real();
        }
    }
    return out;
}

TorusPoint sample_torus_s3(RandomStream& stream) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    TorusPoint t;
    t.alpha = two_pi * stream.uniform();
    t.gamma = two_pi * stream.uniform();
    // sin^2(beta) is uniform on [0, 1] for beta in [0, pi/2]; the reflection
    // (beta, gamma) -> (pi - beta, gamma + pi) is the same point of S^3.
    t.beta = std::asin(std::sqrt(stream.uniform()));
    if (stream.uniform() < 0.5) {
        t.beta = std::numbers::pi - t.beta;
        t.gamma = std::fmod(t.gamma + std::numbers::pi, two_pi);
    }
    return t;
}

Vector sample_cp_point(Index n, RandomStream& stream) {
    if (n < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "complex dimension must be positive");
    }
    return sample_sphere(2 * n, stream);
}

}  // namespace igeo
