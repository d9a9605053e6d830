#pragma once

#include <utility>
#include <vector>

#include "tfdw/forward.hpp"
#include "tfdw/spectral.hpp"

namespace tfdw::inverse {

enum class Solver { Iterate, FixedPoint };

struct RegConfig {
    double mu = 1e-6;  // regularization parameter, > 0
    int k_max = 500;
    double stop_tol = 1e-8;       // relative successive-iterate change
    spectral::Field f0;           // initial source guess; empty means zero
    double smoothness_p = 1.0;    // a-priori index for mu selection
    Solver solver = Solver::Iterate;

    void validate(const spectral::Domain& d) const;
};

struct IterRecord {
    double da = 0.0, df = 0.0;      // successive-iterate change norms
    double re_a = -1.0, re_f = -1.0;  // relative errors when the exact pair is known
};

struct ReconstructionRun {
    RegConfig config;
    spectral::Field a_rec, f_rec;
    int iterations_used = 0;
    std::vector<IterRecord> history;
    double d_estimate = 0.0;
};

// Per-mode ratios r_n = Q_n(T1) S_n(T2) / (S_n(T1) Q_n(T2)).
// d_abs = max |r_n| governs the sweep contraction; modes with r_n <= 0 violate
// the sign hypothesis of the contraction lemma (tracked, not fatal); modes with
// |r_n| >= 1 make the unregularized iteration divergent.
struct ContractionReport {
    double d_abs = 0.0;
    double d_signed = 0.0;
    std::vector<int> nonpositive_modes;
    std::vector<int> divergent_modes;
    bool passed() const { return divergent_modes.empty(); }
};

ContractionReport check_contraction(double alpha, double T1, double T2,
                                    const spectral::EigenSystem& eig,
                                    const mlf::MLConfig& cfg = {});

// throws ContractionError when any |r_n| >= 1; returns d_abs otherwise
double require_contraction(double alpha, double T1, double T2,
                           const spectral::EigenSystem& eig, const mlf::MLConfig& cfg = {});

// Exact per-mode 2x2 inversion of the forward map:
//   a_n = (Q2 g1 - Q1 g2)/R_n,  f_n = (S1 g2 - S2 g1)/R_n,
//   R_n = S1 Q2 - S2 Q1 evaluated at (T1, T2).
std::pair<spectral::Field, spectral::Field> cramer_invert(
    const spectral::Field& g1, const spectral::Field& g2, double alpha, double T1, double T2,
    const spectral::EigenSystem& eig, const mlf::MLConfig& cfg = {});

// Unregularized alternating iteration (k sweeps from the initial guess f0).
std::pair<spectral::Field, spectral::Field> alternating_exact(
    const spectral::Field& g1, const spectral::Field& g2, const forward::ProblemSetup& setup,
    const spectral::Field& f0, int k, const mlf::MLConfig& cfg = {});

// Quasi-boundary-value regularized alternating iteration (or its closed-form
// per-mode fixed point when config.solver == FixedPoint).
ReconstructionRun alternating_regularized(const spectral::Field& g1d,
                                          const spectral::Field& g2d,
                                          const forward::ProblemSetup& setup,
                                          const RegConfig& config,
                                          const mlf::MLConfig& cfg = {});

// a-priori rule mu = c * delta^(1/(p+1))
double choose_mu(double delta, double p, double c);

}  // namespace tfdw::inverse
