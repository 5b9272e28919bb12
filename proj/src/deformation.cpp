#include "igeo/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace igeo {

namespace {

[[noreturn]] void mismatch(const std::string& what) { throw GeometryError(ErrorCode::DimensionMismatch, what); }

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Copies of the first `width` coordinates of every block of size `block`.
Matrix blockwise_coordinate_frame(Index block, Index copies, Index width) {
    Matrix w = Matrix::Zero(block * copies, width * copies);
    for (Index r = 0; r < copies; ++r) {
        for (Index i = 0; i < width; ++i) {
            w(r * block + i, r * width + i) = 1.0;
        }
    }
    return w;
}

OrthoFrame canonical_reference(const FamilyKind& kind) {
    return std::visit(
        Overloaded{
            [](const CpHyperplanes& f) {
                if (f.n < 1) {
                    mismatch("CP^n needs n >= 1");
                }
                return OrthoFrame(Matrix::Identity(2 * f.n, 2));
            },
            [](const Grassmann& f) {
                if (f.k < 1 || f.k > f.l || f.m < 1) {
                    mismatch("Grassmann family needs 1 <= k <= l and m >= 1");
                }
                return OrthoFrame(blockwise_coordinate_frame(f.l, f.m, f.k));
            },
            [](const Interleaved& f) {
                if (f.p < 1 || f.p > f.q || f.m < 1) {
                    mismatch("interleaved family needs 1 <= p <= q and m >= 1");
                }
                return f.complex ? OrthoFrame(blockwise_coordinate_frame(2 * f.q, f.m, 2 * f.p))
                                 : OrthoFrame(blockwise_coordinate_frame(f.q, f.m, f.p));
            },
            [](const WirtingerCp& f) {
                if (f.k < 1 || f.k > f.n + 1) {
                    mismatch("Wirtinger family needs 1 <= k <= n + 1");
                }
                return OrthoFrame(Matrix::Identity(2 * (f.n + 1), 2 * f.k));
            },
        },
        kind);
}

/// Writes the block-diagonal action of g on the reference W into z.
void blockwise_apply(const Matrix& g, Index copies, Index width, Eigen::Ref<Matrix> z) {
    const Index block = g.rows();
    z.setZero();
    for (Index r = 0; r < copies; ++r) {
        z.block(r * block, r * width, block, width) = g.leftCols(width);
    }
}

void require_interleaved_shape(const OrthoFrame& v, Index m, Index q, Index per_copy) {
    if (m < 1 || q < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "m and q must be positive");
    }
    if (v.ambient_dim() != per_copy * q * m) {
        mismatch("plane must live in m copies of the block space");
    }
    if (v.rank() % (per_copy * m) != 0 || v.rank() / (per_copy * m) > q) {
        mismatch("plane rank must be m p (times 2 when complex) with p <= q");
    }
}

PlaneSampler interleaved_sampler(Index m, Index q, bool complex) {
    PlaneSampler s;
    if (!complex) {
        s.ambient_dim = q * m;
        s.rank = m;
        s.fill = [m, q](RandomStream& stream, Eigen::Ref<Matrix> z) {
            Vector x(q);
            detail::fill_sphere(stream, x);
            z.setZero();
            for (Index r = 0; r < m; ++r) {
                z.block(r * q, r, q, 1) = x;
            }
        };
    } else {
        s.ambient_dim = 2 * q * m;
        s.rank = 2 * m;
        s.fill = [m, q](RandomStream& stream, Eigen::Ref<Matrix> z) {
            Vector x(2 * q);
            detail::fill_sphere(stream, x);
            z.setZero();
            for (Index r = 0; r < m; ++r) {
                for (Index i = 0; i < q; ++i) {
                    z(r * 2 * q + 2 * i, 2 * r) = x(2 * i);
                    z(r * 2 * q + 2 * i + 1, 2 * r) = x(2 * i + 1);
                    // J x
                    z(r * 2 * q + 2 * i, 2 * r + 1) = -x(2 * i + 1);
                    z(r * 2 * q + 2 * i + 1, 2 * r + 1) = x(2 * i);
                }
            }
        };
    }
    return s;
}

PlaneSampler complex_line_sampler(Index complex_dim) {
    PlaneSampler s;
    s.ambient_dim = 2 * complex_dim;
    s.rank = 2;
    s.fill = [complex_dim](RandomStream& stream, Eigen::Ref<Matrix> z) {
        Vector x(2 * complex_dim);
        detail::fill_sphere(stream, x);
        z.col(0) = x;
        for (Index i = 0; i < complex_dim; ++i) {
            z(2 * i, 1) = -x(2 * i + 1);
            z(2 * i + 1, 1) = x(2 * i);
        }
    };
    return s;
}

void add_projections(const Matrix& coords, Index rank, std::size_t n, Accumulator& acc) {
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(std::min(1.0, detail::gram_volume(coords.middleCols(static_cast<Index>(i) * rank, rank))));
    }
}

}  // namespace

FamilySpec::FamilySpec(FamilyKind kind) : kind_(kind), reference_(canonical_reference(kind)) {}

FamilySpec::FamilySpec(FamilyKind kind, OrthoFrame reference) : kind_(kind), reference_(std::move(reference)) {
    const OrthoFrame canonical = canonical_reference(kind_);
    if (canonical.ambient_dim() != reference_.ambient_dim() || canonical.rank() != reference_.rank()) {
        mismatch("reference plane does not match the family's rank and ambient dimension");
    }
}

std::string FamilySpec::name() const {
    return std::visit(Overloaded{
                          [](const CpHyperplanes& f) { return "CP_hyperplanes(" + std::to_string(f.n) + ")"; },
                          [](const Grassmann& f) {
                              return "Grassmann(" + std::to_string(f.k) + "," + std::to_string(f.l) + "," +
                                     std::to_string(f.m) + ")";
                          },
                          [](const Interleaved& f) {
                              return "Interleaved(" + std::to_string(f.m) + "," + std::to_string(f.p) + "," +
                                     std::to_string(f.q) + "," + (f.complex ? "complex" : "real") + ")";
                          },
                          [](const WirtingerCp& f) {
                              return "WirtingerCP(" + std::to_string(f.n) + "," + std::to_string(f.k) + ")";
                          },
                      },
                      kind_);
}

PlaneSampler orbit_sampler(const FamilySpec& spec) {
    PlaneSampler s;
    s.ambient_dim = spec.ambient_dim();
    s.rank = spec.plane_rank();
    s.fill = std::visit(
        Overloaded{
            [](const CpHyperplanes& f) -> decltype(s.fill) {
                return [f](RandomStream& stream, Eigen::Ref<Matrix> z) { z = sample_unitary(f.n, stream).leftCols(2); };
            },
            [](const Grassmann& f) -> decltype(s.fill) {
                return [f](RandomStream& stream, Eigen::Ref<Matrix> z) {
                    blockwise_apply(sample_rotation(f.l, stream), f.m, f.k, z);
                };
            },
            [](const Interleaved& f) -> decltype(s.fill) {
                return [f](RandomStream& stream, Eigen::Ref<Matrix> z) {
                    if (f.complex) {
                        blockwise_apply(sample_unitary(f.q, stream), f.m, 2 * f.p, z);
                    } else {
                        blockwise_apply(sample_rotation(f.q, stream), f.m, f.p, z);
                    }
                };
            },
            [](const WirtingerCp& f) -> decltype(s.fill) {
                return [f](RandomStream& stream, Eigen::Ref<Matrix> z) {
                    z = sample_unitary(f.n + 1, stream).leftCols(2 * f.k);
                };
            },
        },
        spec.kind());
    // canonical references are coordinate frames; a custom reference W is
    // reached by the fixed rotation taking the canonical one to it
    const OrthoFrame canonical = canonical_reference(spec.kind());
    if ((canonical.columns() - spec.reference_plane().columns()).cwiseAbs().maxCoeff() > 0.0) {
        throw GeometryError(ErrorCode::InvalidArgument, "orbit sampling needs the canonical reference plane");
    }
    return s;
}

PlaneSampler objective_sampler(const FamilySpec& spec) {
    return std::visit(Overloaded{
                          [&](const Interleaved& f) { return interleaved_sampler(f.m, f.q, f.complex); },
                          [&](const WirtingerCp& f) { return complex_line_sampler(f.n + 1); },
                          [&](const auto&) { return orbit_sampler(spec); },
                      },
                      spec.kind());
}

McEstimate estimate_projection(const OrthoFrame& v, const PlaneSampler& sampler, std::size_t samples,
                               const RandomStream& stream, const ExecPolicy& exec) {
    if (sampler.ambient_dim != v.ambient_dim()) {
        mismatch("sampler and plane ambient dimensions differ");
    }
    if (sampler.rank > v.rank()) {
        mismatch("sampled planes have larger rank than the target plane");
    }
    const Matrix& basis = v.columns();
    return run_batches(samples, stream, exec, [&](RandomStream& s, std::size_t n, Accumulator& acc) {
        Matrix z(sampler.ambient_dim, sampler.rank * static_cast<Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            sampler.fill(s, z.middleCols(static_cast<Index>(i) * sampler.rank, sampler.rank));
        }
        const Matrix coords = basis.transpose() * z;
        add_projections(coords, sampler.rank, n, acc);
    });
}

PlaneSampleSet::PlaneSampleSet(const PlaneSampler& sampler, std::size_t samples, RandomStream stream)
    : frames_(sampler.ambient_dim, sampler.rank * static_cast<Index>(samples)),
      rank_(sampler.rank),
      samples_(samples),
      seed_(stream.seed()) {
    for (std::size_t i = 0; i < samples; ++i) {
        sampler.fill(stream, frames_.middleCols(static_cast<Index>(i) * rank_, rank_));
    }
}

McEstimate PlaneSampleSet::evaluate(const OrthoFrame& v) const {
    if (v.ambient_dim() != frames_.rows() || v.rank() < rank_) {
        mismatch("plane does not fit the frozen sample set");
    }
    const Matrix coords = v.columns().transpose() * frames_;
    Accumulator acc;
    add_projections(coords, rank_, samples_, acc);
    return acc.estimate(seed_);
}

McEstimate cd_cp_tau(double tau, std::size_t samples, const RandomStream& stream, const ExecPolicy& exec) {
    if (!(tau >= 0.0 && tau <= std::numbers::pi / 2 + 1e-12)) {
        throw GeometryError(ErrorCode::InvalidArgument, "Kahler angle must lie in [0, pi/2]");
    }
    if (samples < 1000) {
        throw GeometryError(ErrorCode::InvalidArgument, "cd_cp_tau needs at least 1000 samples");
    }
    const double c = std::cos(tau);
    const double s = std::sin(tau);
    return estimate_mean(samples, stream, exec, [c, s](RandomStream& rs) {
        const TorusPoint t = sample_torus_s3(rs);
        const Eigen::Vector4d x = t.to_r4();  // (a1, a2, b1, b2)
        const double a1 = x(0), a2 = x(1), b1 = x(2), b2 = x(3);
        return std::abs((a1 * a1 + b1 * b1) * c + (a2 * b1 - a1 * b2) * s);
    });
}

McEstimate cd_generic(const OrthoFrame& v, const FamilySpec& spec, std::size_t samples, const RandomStream& stream,
                      const ExecPolicy& exec) {
    if (v.ambient_dim() != spec.ambient_dim() || v.rank() != spec.plane_rank()) {
        mismatch("plane must match the family's reference rank and ambient dimension");
    }
    return estimate_projection(v, orbit_sampler(spec), samples, stream, exec);
}

McEstimate m_objective(const OrthoFrame& v, Index m, Index q, std::size_t samples, const RandomStream& stream,
                       const ExecPolicy& exec) {
    require_interleaved_shape(v, m, q, 1);
    return estimate_projection(v, interleaved_sampler(m, q, false), samples, stream, exec);
}

McEstimate m_objective_complex(const OrthoFrame& v, Index m, Index q, std::size_t samples,
                               const RandomStream& stream, const ExecPolicy& exec) {
    require_interleaved_shape(v, m, q, 2);
    return estimate_projection(v, interleaved_sampler(m, q, true), samples, stream, exec);
}

McEstimate wirtinger_objective(const OrthoFrame& v, std::size_t samples, const RandomStream& stream,
                               const ExecPolicy& exec) {
    if (v.ambient_dim() % 2 != 0 || v.rank() % 2 != 0) {
        mismatch("Wirtinger objective needs an even-rank plane in an even-dimensional space");
    }
    return estimate_projection(v, complex_line_sampler(v.ambient_dim() / 2), samples, stream, exec);
}

BoundChain interleaved_bound_chain(const OrthoFrame& v, Index m, Index q, std::size_t samples,
                                   const RandomStream& stream) {
    require_interleaved_shape(v, m, q, 1);
    Accumulator objective;
    Accumulator hadamard;
    Accumulator am_gm;
    RandomStream s = stream;
    Vector x(q);
    Matrix coords(v.rank(), m);
    const double scale = std::pow(static_cast<double>(m), -0.5 * static_cast<double>(m));
    for (std::size_t i = 0; i < samples; ++i) {
        detail::fill_sphere(s, x);
        double product = 1.0;
        double squares = 0.0;
        for (Index r = 0; r < m; ++r) {
            coords.col(r) = v.columns().middleRows(r * q, q).transpose() * x;
            product *= coords.col(r).norm();
            squares += coords.col(r).squaredNorm();
        }
        objective.add(detail::gram_volume(coords));
        hadamard.add(product);
        am_gm.add(scale * std::pow(squares, 0.5 * static_cast<double>(m)));
    }
    return {objective.estimate(stream.seed()), hadamard.estimate(stream.seed()), am_gm.estimate(stream.seed())};
}

double eigenvalue_surrogate(const Vector& eta, Index m, int nodes) {
    const double scale = std::pow(static_cast<double>(m), -0.5 * static_cast<double>(m));
    const double half_m = 0.5 * static_cast<double>(m);
    if (eta.size() == 2) {
        double sum = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double t = 2.0 * std::numbers::pi * (i + 0.5) / nodes;
            const double c = std::cos(t);
            const double s = std::sin(t);
            sum += std::pow(eta(0) * c * c + eta(1) * s * s, half_m);
        }
        return scale * sum / nodes;
    }
    if (eta.size() == 3) {
        // uniform measure on S^2 is uniform in the height z
        const int nz = std::max(8, nodes / 8);
        const int nphi = std::max(8, nodes / 8);
        double sum = 0.0;
        for (int i = 0; i < nz; ++i) {
            const double z = -1.0 + 2.0 * (i + 0.5) / nz;
            const double rho2 = 1.0 - z * z;
            for (int j = 0; j < nphi; ++j) {
                const double phi = 2.0 * std::numbers::pi * (j + 0.5) / nphi;
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                sum += std::pow(rho2 * (eta(0) * c * c + eta(1) * s * s) + eta(2) * z * z, half_m);
            }
        }
        return scale * sum / (static_cast<double>(nz) * nphi);
    }
    throw GeometryError(ErrorCode::InvalidArgument, "surrogate quadrature supports q = 2 or 3");
}

StructureTest structure_test_product(const OrthoFrame& v, Index m, Index q, double tol) {
    if (m < 1 || q < 1 || v.ambient_dim() != m * q || v.rank() % m != 0) {
        mismatch("product test needs a plane of rank m p in m copies of R^q");
    }
    const InterleaveOperator op(q, m);
    const ProjectionForm b0 = b_r_form(v, 0, op);
    double block_mismatch = 0.0;
    for (Index r = 1; r < m; ++r) {
        block_mismatch = std::max(block_mismatch, (b_r_form(v, r, op).matrix() - b0.matrix()).cwiseAbs().maxCoeff());
    }
    double spectrum = 0.0;
    const Vector eig = b0.eigenvalues();
    for (Index i = 0; i < eig.size(); ++i) {
        spectrum = std::max(spectrum, std::min(std::abs(eig(i)), std::abs(1.0 - eig(i))));
    }
    return {block_mismatch <= tol && spectrum <= tol, {block_mismatch, spectrum}};
}

StructureTest i_prime_complex_test(const OrthoFrame& v, Index q, double tol) {
    if (v.ambient_dim() != 2 * q) {
        mismatch("twisted structure acts on two copies of R^q");
    }
    const double residual = invariance_residual(v, twisted_interleave_structure(q).matrix());
    return {residual <= tol, {residual}};
}

StructureTest complex_subspace_test(const OrthoFrame& v, double tol) {
    if (v.ambient_dim() % 2 != 0) {
        mismatch("complex test needs an even-dimensional space");
    }
    const double residual =
        invariance_residual(v, ComplexStructure::standard(v.ambient_dim() / 2).matrix());
    return {residual <= tol, {residual}};
}

double default_structure_tolerance(std::size_t samples) { return samples >= 1000000 ? 0.01 : 0.05; }

StructureDiagnosis diagnose(const OrthoFrame& v, const FamilySpec& spec, double tol) {
    StructureDiagnosis d;
    auto record_product = [&](Index m, Index q) {
        const auto t = structure_test_product(v, m, q, tol);
        d.product_form = t.pass;
        d.residuals.emplace_back("product.block_mismatch", t.residuals[0]);
        d.residuals.emplace_back("product.spectrum", t.residuals[1]);
    };
    auto record_i_prime = [&](Index q) {
        const auto t = i_prime_complex_test(v, q, tol);
        d.i_prime_complex = t.pass;
        d.residuals.emplace_back("i_prime.invariance", t.residuals[0]);
    };
    auto record_complex = [&] {
        const auto t = complex_subspace_test(v, tol);
        d.complex_subspace = t.pass;
        d.residuals.emplace_back("complex.invariance", t.residuals[0]);
        if (v.rank() == 2) {
            d.kahler_angle = kahler_angle(v, ComplexStructure::standard(v.ambient_dim() / 2)).tau;
            d.residuals.emplace_back("kahler_angle", *d.kahler_angle);
        }
    };
    std::visit(Overloaded{
                   [&](const Interleaved& f) {
                       if (f.complex) {
                           record_product(f.m, 2 * f.q);
                           record_complex();
                           d.recognized = d.product_form && d.complex_subspace;
                       } else {
                           record_product(f.m, f.q);
                           if (f.m == 2) {
                               record_i_prime(f.q);
                           }
                           d.recognized = d.product_form || (f.m == 2 && d.i_prime_complex);
                       }
                   },
                   [&](const Grassmann& f) {
                       record_product(f.m, f.l);
                       if (f.m == 2) {
                           record_i_prime(f.l);
                       }
                       d.recognized = d.product_form || (f.m == 2 && d.i_prime_complex);
                   },
                   [&](const auto&) {
                       record_complex();
                       d.recognized = d.complex_subspace;
                   },
               },
               spec.kind());
    return d;
}

OrthoFrame product_plane(const Interleaved& kind) { return FamilySpec(kind).reference_plane(); }

OrthoFrame tasaki_plane(Index q, const Vector& u) {
    if (u.size() != 2 * q) {
        mismatch("Tasaki plane needs u in two copies of R^q");
    }
    if (std::abs(u.norm() - 1.0) > 1e-12) {
        throw GeometryError(ErrorCode::NotUnit, "u must be a unit vector");
    }
    const Vector iu = twisted_interleave_structure(q).apply(u);
    if (std::abs(u.dot(iu)) >= 1.0 - 1e-9) {
        throw GeometryError(ErrorCode::DegenerateVector, "u and I'u are parallel");
    }
    Matrix span(2 * q, 2);
    span << u, iu;
    return orthonormalize(span);
}

OrthoFrame tasaki_plane(Index q, RandomStream& stream) {
    for (;;) {
        OrthoFrame v = tasaki_plane(q, sample_sphere(2 * q, stream));
        if (!structure_test_product(v, 2, q, 0.1).pass) {
            return v;
        }
    }
}

OrthoFrame sample_plane(Index n, Index d, RandomStream& stream) {
    Matrix g(n, d);
    for (Index c = 0; c < d; ++c) {
        for (Index r = 0; r < n; ++r) {
            g(r, c) = stream.normal();
        }
    }
    return orthonormalize(g);
}

namespace {

struct RestartOutcome {
    Matrix plane;
    bool converged = false;
    std::size_t evaluations = 0;
    double trace_residual = 0.0;
};

std::optional<InterleaveOperator> trace_operator(const FamilyKind& kind) {
    if (const auto* f = std::get_if<Interleaved>(&kind)) {
        return InterleaveOperator(f->complex ? 2 * f->q : f->q, f->m);
    }
    if (const auto* f = std::get_if<Grassmann>(&kind)) {
        return InterleaveOperator(f->l, f->m);
    }
    return std::nullopt;
}

RestartOutcome ascend(const FamilySpec& spec, const PlaneSampler& sampler, std::size_t samples,
                      const RandomStream& base, const ScanOptions& options) {
    const Index n = spec.ambient_dim();
    const Index d = spec.plane_rank();
    const PlaneSampleSet crn(sampler, samples, base.split(0));
    RandomStream init = base.split(1);
    RandomStream moves = base.split(2);
    const auto op = trace_operator(spec.kind());

    RestartOutcome out;
    OrthoFrame plane = sample_plane(n, d, init);
    auto score = [&](const OrthoFrame& v) {
        ++out.evaluations;
        if (op) {
            out.trace_residual = std::max(out.trace_residual, std::abs(trace_identity(v, *op) - static_cast<double>(d)));
        }
        return crn.evaluate(v).mean;
    };
    double best = score(plane);
    if (n == d) {
        out.plane = plane.columns();
        out.converged = true;
        return out;
    }

    std::vector<std::pair<Index, Index>> directions;
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < n - d; ++i) {
            directions.emplace_back(j, 2 * i);
            directions.emplace_back(j, 2 * i + 1);
        }
    }
    double step = options.initial_step;
    std::size_t polls = 0;
    while (step >= options.step_floor && polls < options.max_polls) {
        Eigen::HouseholderQR<Matrix> qr(plane.columns());
        const Matrix full = qr.householderQ();
        const Matrix complement = full.rightCols(n - d);
        for (std::size_t i = directions.size(); i > 1; --i) {
            std::swap(directions[i - 1], directions[moves.bits() % i]);
        }
        bool improved = false;
        for (const auto& [col, code] : directions) {
            if (++polls > options.max_polls) {
                break;
            }
            const double sign = code % 2 == 0 ? 1.0 : -1.0;
            Matrix cand = plane.columns();
            cand.col(col) = std::cos(step) * cand.col(col) + sign * std::sin(step) * complement.col(code / 2);
            OrthoFrame candidate = orthonormalize(cand);
            const double value = score(candidate);
            if (value > best) {
                best = value;
                plane = std::move(candidate);
                improved = true;
                break;
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    out.plane = plane.columns();
    out.converged = step < options.step_floor;
    return out;
}

}  // namespace

ScanResult maximizer_scan(const FamilySpec& spec, std::size_t restarts, std::size_t samples_per_eval,
                          const RandomStream& stream, const ScanOptions& options) {
    if (restarts < 1) {
        throw GeometryError(ErrorCode::InvalidArgument, "need at least one restart");
    }
    if (samples_per_eval < 1000) {
        throw GeometryError(ErrorCode::InvalidArgument, "need at least 1000 samples per evaluation");
    }
    const PlaneSampler sampler = objective_sampler(spec);
    std::vector<RestartOutcome> outcomes(restarts);
    parallel_for(restarts, options.threads,
                 [&](std::size_t r) { outcomes[r] = ascend(spec, sampler, samples_per_eval, stream.split(r), options); });

    // one fresh shared sample set ranks the restart outputs
    const PlaneSampleSet judge(sampler, samples_per_eval, stream.split(restarts));
    std::vector<McEstimate> values;
    std::size_t best = 0;
    for (std::size_t r = 0; r < restarts; ++r) {
        values.push_back(judge.evaluate(OrthoFrame(outcomes[r].plane)));
        if (values[r].mean > values[best].mean) {
            best = r;
        }
    }
    ScanResult result{OrthoFrame(outcomes[best].plane), values[best], restarts, {}, values, {}, false, 0.0, 0};
    for (const auto& o : outcomes) {
        result.restart_converged.push_back(o.converged);
        result.non_convergence = result.non_convergence || !o.converged;
        result.max_trace_residual = std::max(result.max_trace_residual, o.trace_residual);
        result.evaluations += o.evaluations;
    }
    const double tol =
        options.structure_tolerance > 0.0 ? options.structure_tolerance : default_structure_tolerance(samples_per_eval);
    result.structure = diagnose(result.best_plane, spec, tol);
    return result;
}

}  // namespace igeo
