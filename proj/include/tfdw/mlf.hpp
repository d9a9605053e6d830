#pragma once

#include <span>
#include <string>
#include <vector>

namespace tfdw::mlf {

// Evaluation request for the generalized Mittag-Leffler function E_{alpha,beta}(z).
// The evaluator accepts alpha in (0,2] and real z <= 0; the solvers only use
// alpha in (1,2).
struct MLQuery {
    double alpha;
    double beta;
    double z;
};

struct MLConfig {
    double series_cutoff = 1.0;       // |z| below which the defining series is used
    double asymptotic_cutoff = 1e4;   // |z| above which the large-|z| expansion is used
    int asymptotic_terms = 10;        // expansion order p >= 1
    double target_rel_tol = 1e-12;

    void validate() const;
};

// E_{alpha,beta}(z) to target_rel_tol.
//   |z| <= series_cutoff      : power series with compensated summation
//   |z| >= asymptotic_cutoff  : p-term large-argument expansion
//   in between                : parabolic-contour inverse Laplace quadrature with
//                               residue correction; extended-precision series
//                               fallback when the contour self-check fails or
//                               alpha is too close to 1 or 2.
double ml_eval(const MLQuery& q, const MLConfig& cfg = {});

// Batch evaluation at fixed (alpha, beta) over many arguments.
std::vector<double> ml_eval_batch(double alpha, double beta, std::span<const double> z,
                                  const MLConfig& cfg = {});

// Ground-truth evaluation of the defining series in extended precision,
// terminating when the tail falls below 10^(-digits) relative to the result.
// Requires |z| <= 1e4 and digits >= 30.
double ml_oracle(const MLQuery& q, int digits);

// Same, returning the value as a decimal string with `digits` significant digits.
std::string ml_oracle_str(const MLQuery& q, int digits);

}  // namespace tfdw::mlf
