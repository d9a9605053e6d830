#pragma once

#include <cstdint>
#include <functional>

#include "tfdw/mlf.hpp"
#include "tfdw/spectral.hpp"

namespace tfdw::forward {

// Diagonal solution-operator coefficients in the Laplacian eigenbasis:
//   S: E_{a,1}(-l t^a)          (initial value)
//   T: t E_{a,2}(-l t^a)        (initial velocity)
//   G: t^(a-1) E_{a,a}(-l t^a)  (general source kernel)
//   Q: t^a E_{a,a+1}(-l t^a)    (time-constant source)
enum class OpKind { S, T, G, Q };

double op_coeff(OpKind kind, double lambda, double t, double alpha,
                const mlf::MLConfig& cfg = {});

// S_n(t), Q_n(t) across all modes of an eigensystem.
struct OperatorDiag {
    std::vector<double> S, Q;
};
OperatorDiag operator_diag(const spectral::EigenSystem& eig, double t, double alpha,
                           const mlf::MLConfig& cfg = {});

// Builds the exact field on an arbitrary domain (used to evaluate the same
// analytic (a, f) on both the data-generation and reconstruction grids).
using FieldFactory = std::function<spectral::Field(const spectral::Domain&)>;

struct ProblemSetup {
    double alpha = 1.5;  // (1,2)
    double T1 = 0.0, T2 = 0.0;
    spectral::EigenSystem eig;
    spectral::Field a, f;  // exact fields on eig.domain (coeffs populated)
    // optional analytic definitions; default to zero-padding the stored coeffs
    FieldFactory make_a, make_f;

    void validate() const;
    spectral::Field a_on(const spectral::Domain& d) const;
    spectral::Field f_on(const spectral::Domain& d) const;
};

// u(t) = S(t) a + Q(t) f, mode-wise on setup.eig.
spectral::Field solve_direct(const ProblemSetup& setup, double t);

struct MeasurementPair {
    spectral::Field g1, g2;              // noisy (nodal + coeffs)
    spectral::Field g1_exact, g2_exact;  // restricted exact data
    double delta = 0.0;    // eps * max of the weight-h L2 norms of the exact data
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double noise_norm1 = 0.0, noise_norm2 = 0.0;  // actual discrete perturbation norms
};

// Exact data restricted to the reconstruction grid (synthesized with the
// continuous eigensystem on a data_grid_factor times finer grid).
struct ExactData {
    spectral::Field g1, g2;  // nodal + coeffs on the reconstruction domain
};
ExactData synthesize_exact(const ProblemSetup& setup, int data_grid_factor = 4,
                           const mlf::MLConfig& cfg = {});

// Adds eps * max_i |g(x_i)| * xi per node, xi iid uniform on [-1,1] from a
// seeded deterministic generator (g1's nodes first, then g2's).
MeasurementPair apply_noise(const ExactData& exact, const spectral::Domain& d, double epsilon,
                            std::uint64_t seed);

// synthesize_exact followed by apply_noise.
MeasurementPair synthesize(const ProblemSetup& setup, double epsilon, std::uint64_t seed,
                           int data_grid_factor = 4, const mlf::MLConfig& cfg = {});

}  // namespace tfdw::forward
