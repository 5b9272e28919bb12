#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "igeo/monte_carlo.hpp"

namespace igeo {

// All deformation coefficients below are expectations under probability
// measures. Volume constants of the homogeneous spaces are never formed;
// only ratios and maximizers are meaningful.

/// Complex hyperplanes of CP^n; tangent space C^n, W a complex line.
struct CpHyperplanes {
    Index n = 1;
};
/// Sub-Grassmannian G_k(R^{k+m}) inside G_l(R^{l+m}); tangent space is m
/// copies of R^l and SO_l acts on every copy at once.
struct Grassmann {
    Index k = 1;
    Index l = 1;
    Index m = 1;
};
/// Interleaved objective on m copies of R^q (or C^q when complex).
struct Interleaved {
    Index m = 1;
    Index p = 1;
    Index q = 1;
    bool complex = false;
};
/// Complex k-planes of C^{n+1}.
struct WirtingerCp {
    Index n = 1;
    Index k = 1;
};

using FamilyKind = std::variant<CpHyperplanes, Grassmann, Interleaved, WirtingerCp>;

/// A measured family of test planes together with its reference plane W.
class FamilySpec {
public:
    /// Uses the canonical reference plane of the kind.
    explicit FamilySpec(FamilyKind kind);
    /// Throws DimensionMismatch when the reference rank or ambient dimension
    /// does not fit the kind.
    FamilySpec(FamilyKind kind, OrthoFrame reference);

    const FamilyKind& kind() const { return kind_; }
    const OrthoFrame& reference_plane() const { return reference_; }
    Index ambient_dim() const { return reference_.ambient_dim(); }
    Index plane_rank() const { return reference_.rank(); }
    std::string name() const;

private:
    FamilyKind kind_;
    OrthoFrame reference_;
};

/// Random simple polyvector: `fill` writes one sampled frame into an
/// ambient_dim x rank block.
struct PlaneSampler {
    Index ambient_dim = 0;
    Index rank = 0;
    std::function<void(RandomStream&, Eigen::Ref<Matrix>)> fill;
};

/// g W for Haar-random g in the symmetry group of the family.
PlaneSampler orbit_sampler(const FamilySpec& spec);

/// The test planes whose mean projection volume is the objective that
/// maximizer_scan ascends (interleaved wedges, complex lines, or orbit planes).
PlaneSampler objective_sampler(const FamilySpec& spec);

/// E[projection_volume(V, Z)] for Z drawn from the sampler.
McEstimate estimate_projection(const OrthoFrame& v, const PlaneSampler& sampler, std::size_t samples,
                               const RandomStream& stream, const ExecPolicy& exec = {});

/// Frozen draw of test planes (common random numbers): every plane is
/// scored against the same samples.
class PlaneSampleSet {
public:
    PlaneSampleSet(const PlaneSampler& sampler, std::size_t samples, RandomStream stream);

    McEstimate evaluate(const OrthoFrame& v) const;
    std::size_t size() const { return samples_; }

private:
    Matrix frames_;
    Index rank_;
    std::size_t samples_;
    std::uint64_t seed_;
};

/// E over S^3 of |(a1^2 + b1^2) cos t + (a2 b1 - a1 b2) sin t|, the complex
/// hyperplane coefficient of a plane with Kahler angle t. Equals 1/2 at t = 0.
McEstimate cd_cp_tau(double tau, std::size_t samples, const RandomStream& stream, const ExecPolicy& exec = {});

/// E_g pairing(V, g W).
McEstimate cd_generic(const OrthoFrame& v, const FamilySpec& spec, std::size_t samples, const RandomStream& stream,
                      const ExecPolicy& exec = {});

/// M(V) = E_x projection_volume(V, x ^ I x ^ ... ^ I^{m-1} x), x uniform on S^{q-1}.
McEstimate m_objective(const OrthoFrame& v, Index m, Index q, std::size_t samples, const RandomStream& stream,
                       const ExecPolicy& exec = {});

/// Complex version: x uniform in CP^{q-1}, complex lines x ^ Jx interleaved.
McEstimate m_objective_complex(const OrthoFrame& v, Index m, Index q, std::size_t samples,
                               const RandomStream& stream, const ExecPolicy& exec = {});

/// E over uniform complex lines x of C^{n+1} of projection_volume(V, x ^ Jx),
/// n + 1 = ambient_dim / 2.
McEstimate wirtinger_objective(const OrthoFrame& v, std::size_t samples, const RandomStream& stream,
                               const ExecPolicy& exec = {});

/// Pointwise chain M(V) <= E prod_r |P_V I^r x| <= m^{-m/2} E (sum_r B_r(x,x))^{m/2},
/// all three estimated on the same samples.
struct BoundChain {
    McEstimate objective;
    McEstimate hadamard;
    McEstimate am_gm;
};
BoundChain interleaved_bound_chain(const OrthoFrame& v, Index m, Index q, std::size_t samples,
                                   const RandomStream& stream);

/// m^{-m/2} E_x (sum_j eta_j x_j^2)^{m/2} over S^{q-1} by deterministic
/// quadrature; q = eta.size() must be 2 or 3.
double eigenvalue_surrogate(const Vector& eta, Index m, int nodes = 4000);

struct StructureTest {
    bool pass = false;
    std::vector<double> residuals;
};

/// Product form V = V^p + I V^p + ... : all B_r equal (max entry distance)
/// and spec(B_0) within tol of {0, 1}.
StructureTest structure_test_product(const OrthoFrame& v, Index m, Index q, double tol);

/// Invariance of V under the twisted structure (u0, u1) -> (-u1, u0) on two copies of R^q.
StructureTest i_prime_complex_test(const OrthoFrame& v, Index q, double tol);

/// Invariance of V under the standard complex structure.
StructureTest complex_subspace_test(const OrthoFrame& v, double tol);

/// 0.05 below 10^6 evaluation samples, 0.01 from there on.
double default_structure_tolerance(std::size_t samples);

struct StructureDiagnosis {
    bool product_form = false;
    bool i_prime_complex = false;
    bool complex_subspace = false;
    std::optional<double> kahler_angle;
    std::vector<std::pair<std::string, double>> residuals;
    /// the plane belongs to one of the known maximizer families of the kind
    bool recognized = false;
};

StructureDiagnosis diagnose(const OrthoFrame& v, const FamilySpec& spec, double tol);

/// Exact product plane built from e_1..e_p (real) or the complex p-plane
/// span(e_1, J e_1, ...) (complex) in every copy.
OrthoFrame product_plane(const Interleaved& kind);

/// span(u, I' u), I' the twisted structure on two copies of R^q. Throws
/// NotUnit for non-unit u and DegenerateVector if |<u, I'u>| >= 1 - 1e-9.
OrthoFrame tasaki_plane(Index q, const Vector& u);

/// Random I'-complex plane that is not of product form.
OrthoFrame tasaki_plane(Index q, RandomStream& stream);

/// Uniform d-plane of R^n.
OrthoFrame sample_plane(Index n, Index d, RandomStream& stream);

struct ScanOptions {
    double initial_step = 0.5;
    double step_floor = 1e-4;
    std::size_t max_polls = 20000;
    /// 0 selects default_structure_tolerance(samples_per_eval)
    double structure_tolerance = 0.0;
    unsigned threads = 1;
};

struct ScanResult {
    OrthoFrame best_plane;
    McEstimate best_value;
    std::size_t restarts = 0;
    StructureDiagnosis structure;
    /// final iterate of every restart, scored on one shared sample set
    std::vector<McEstimate> restart_values;
    std::vector<bool> restart_converged;
    /// some restart hit max_polls before the step floor
    bool non_convergence = false;
    /// max |sum_r tr B_r - rank| over evaluated planes (interleaved kinds)
    double max_trace_residual = 0.0;
    std::size_t evaluations = 0;
};

/// Random-restart compass ascent over the Grassmannian of planes of the
/// family's rank. Each restart scores candidates on its own frozen sample
/// set, moves by rotating one frame vector towards one complement vector,
/// and halves the step when no move improves.
ScanResult maximizer_scan(const FamilySpec& spec, std::size_t restarts, std::size_t samples_per_eval,
                          const RandomStream& stream, const ScanOptions& options = {});

}  // namespace igeo
