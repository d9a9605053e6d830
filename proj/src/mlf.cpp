#include "tfdw/mlf.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "tfdw/errors.hpp"
#include "tfdw/gamma_util.hpp"

namespace tfdw::mlf {

namespace detail {
double ml_mpfr(double alpha, double beta, double x, double rel_tol);  // mlf_mpfr.cpp
}

namespace {

// ---- defining power series, |z| <= series_cutoff ----------------------------

// Reciprocal-gamma table 1/Gamma(alpha*k + beta) for the series.
std::vector<double> series_table(double alpha, double beta, int n) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = reciprocal_gamma(alpha * k + beta);
    return t;
}

double series_eval(double x, std::span<const double> rg) {
    // Kahan summation; terms (-x)^k / Gamma(alpha k + beta)
    double sum = 0.0, comp = 0.0, zk = 1.0;
    int quiet = 0;
    for (size_t k = 0; k < rg.size(); ++k) {
        double term = zk * rg[k];
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        zk *= -x;
        if (k >= 4) {
            quiet = (std::fabs(term) <= 1e-18 * (std::fabs(sum) + 1e-300)) ? quiet + 1 : 0;
            if (quiet >= 2) break;
        }
    }
    return sum;
}

// ---- large-argument expansion, |z| >= asymptotic_cutoff ----------------------
//
// For 1 <= alpha < 2 the function has a conjugate pole pair of its Laplace
// representation at s = x^(1/alpha) e^(+- i pi/alpha); their residues decay like
// exp(x^(1/alpha) cos(pi/alpha)) — faster than any power, so Lemma-2.2 style
// expansions absorb them into the remainder, but numerically they dominate the
// first omitted power term whenever alpha is close to 2. They are explicit and
// cheap, so the expansion always carries them.

double pole_pair(double alpha, double beta, double x) {
    if (alpha < 1.0 || alpha >= 2.0) return 0.0;
    double r = std::pow(x, 1.0 / alpha);
    double theta = M_PI / alpha;
    if (r * std::cos(theta) < -745.0) return 0.0;  // underflows
    std::complex<double> spole = std::polar(r, theta);
    std::complex<double> lp(std::log(r), theta);
    double v = std::real(std::exp(spole + (1.0 - beta) * lp)) / alpha;
    return alpha == 1.0 ? v : 2.0 * v;  // at alpha == 1 the pair coincides on the axis
}

struct Expansion {
    double value;
    double tail_bound;  // magnitude of the first omitted power term
};

// magnitude of the k-th expansion term |z|^-k / |Gamma(beta - alpha k)|
double tail_term_mag(double alpha, double beta, double x, int k) {
    SignedLog sl = signed_log_reciprocal_gamma(beta - alpha * k);
    return sl.sign == 0 ? 0.0 : std::exp(sl.log_abs - k * std::log(x));
}

// A single omitted term is no bound when it sits on a Gamma pole (it is then
// exactly zero while the one after is not); two consecutive terms cannot both
// vanish for non-integer alpha.
double tail_bound_after(double alpha, double beta, double x, int k) {
    return std::max(tail_term_mag(alpha, beta, x, k + 1),
                    tail_term_mag(alpha, beta, x, k + 2));
}

Expansion asymptotic_eval(double alpha, double beta, double x, int p) {
    double sum = pole_pair(alpha, beta, x), comp = 0.0;
    double pxk = 1.0;  // (-1/x)^k
    for (int k = 1; k <= p; ++k) {
        pxk *= -1.0 / x;
        double term = -pxk * reciprocal_gamma(beta - alpha * k);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return {sum, tail_bound_after(alpha, beta, x, p)};
}

// Mid-range fast path: pole pair plus the power tail truncated at its smallest
// term. Certified by the omitted term; covers most of the mid range except
// small |z|, where the contour or extended precision take over.
struct TailResult {
    double value = 0.0;
    bool ok = false;
};

TailResult residue_tail_eval(double alpha, double beta, double x, double tol) {
    double res = pole_pair(alpha, beta, x);
    double sum = res, comp = 0.0;
    double pxk = 1.0;
    double best = res, best_bound = std::numeric_limits<double>::infinity();
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 60; ++k) {
        pxk *= -1.0 / x;
        double term = -pxk * reciprocal_gamma(beta - alpha * k);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        double bound = tail_bound_after(alpha, beta, x, k);
        if (bound < best_bound) {
            best_bound = bound;
            best = sum;
        }
        if (bound <= 0.1 * tol * std::fabs(sum)) return {sum, true};
        // the tail has turned: stop once terms grow again
        double mag = std::fabs(term);
        if (k > 3 && mag > prev_mag && bound > mag) break;
        prev_mag = std::max(mag, 1e-300);
    }
    if (best_bound <= 0.1 * tol * std::fabs(best) && best != 0.0) return {best, true};
    return {best, false};
}

// ---- parabolic contour, mid range -------------------------------------------
//
// E_{a,b}(-x) = 2 Re[(1/a) s+^(1-b) e^{s+}] + (1/2 pi i) \int_P e^s s^(a-b)/(s^a+x) ds,
// s+ = x^(1/a) e^{i pi/a}, with the parabola P: s(u) = nu (1+iu)^2 chosen strictly
// between the branch cut and the pole pair. Valid for alpha in (1,2); near the
// endpoints the pole hugs the cut or the imaginary axis and the caller falls
// back to extended precision.

double contour_quadrature(double alpha, double beta, double x, double nu, int n_nodes) {
    const double decay = 39.0;  // integrand truncated at e^(-39)
    double umax = std::sqrt(1.0 + decay / nu);
    double h = umax / n_nodes;
    double s0 = nu;
    double acc = std::exp(s0) * std::pow(s0, alpha - beta) / (std::pow(s0, alpha) + x);
    for (int j = 1; j <= n_nodes; ++j) {
        std::complex<double> one_iu(1.0, j * h);
        std::complex<double> s = nu * one_iu * one_iu;
        std::complex<double> ls = std::log(s);
        std::complex<double> f =
            std::exp(s + (alpha - beta) * ls) / (std::exp(alpha * ls) + x) * one_iu;
        acc += 2.0 * f.real();
    }
    return nu / M_PI * h * acc;
}

struct ContourResult {
    double value = 0.0;
    bool ok = false;
};

ContourResult contour_eval(double alpha, double beta, double x, double tol) {
    if (alpha < 1.02 || alpha > 1.95) return {};
    double r = std::pow(x, 1.0 / alpha);
    double theta = M_PI / alpha;
    double c = std::cos(0.5 * theta);
    double nu = std::min(9.0, 0.40 * r * c * c);
    if (nu < 0.5) return {};
    std::complex<double> spole = std::polar(r, theta);
    std::complex<double> lp(std::log(r), theta);
    double residue = 2.0 / alpha * std::real(std::exp(spole + (1.0 - beta) * lp));
    double e1 = residue + contour_quadrature(alpha, beta, x, nu, 96);
    double e2 = residue + contour_quadrature(alpha, beta, x, nu, 144);
    if (std::fabs(e1 - e2) <= 0.3 * tol * std::fabs(e2) && e2 != 0.0) return {e2, true};
    return {e2, false};
}

void validate_query(const MLQuery& q) {
    if (!(q.alpha > 0.0) || q.alpha > 2.0)
        throw DomainError("ml_eval: alpha must lie in (0,2]");
    if (!(q.z <= 0.0)) throw DomainError("ml_eval: z must be <= 0");
    if (!std::isfinite(q.beta)) throw DomainError("ml_eval: beta must be finite");
}

double eval_mid(double alpha, double beta, double x, double tol) {
    if (alpha == 2.0) {
        // closed forms where they exist; otherwise extended precision
        if (beta == 1.0) return std::cos(std::sqrt(x));
        if (beta == 2.0) {
            double s = std::sqrt(x);
            return s == 0.0 ? 1.0 : std::sin(s) / s;
        }
        return detail::ml_mpfr(alpha, beta, x, tol);
    }
    TailResult t = residue_tail_eval(alpha, beta, x, tol);
    if (t.ok) return t.value;
    ContourResult c = contour_eval(alpha, beta, x, tol);
    if (c.ok) return c.value;
    return detail::ml_mpfr(alpha, beta, x, tol);
}

}  // namespace

void MLConfig::validate() const {
    if (!(series_cutoff > 0.0) || !(series_cutoff <= asymptotic_cutoff))
        throw DomainError("MLConfig: require 0 < series_cutoff <= asymptotic_cutoff");
    if (asymptotic_terms < 1) throw DomainError("MLConfig: asymptotic_terms >= 1");
    if (!(target_rel_tol > 0.0)) throw DomainError("MLConfig: target_rel_tol > 0");
}

double ml_eval(const MLQuery& q, const MLConfig& cfg) {
    cfg.validate();
    validate_query(q);
    double x = -q.z;
    if (x <= cfg.series_cutoff) {
        auto rg = series_table(q.alpha, q.beta, 220);
        return series_eval(x, rg);
    }
    if (q.alpha == 2.0 && q.beta == 1.0) return std::cos(std::sqrt(x));
    if (q.alpha == 2.0 && q.beta == 2.0) return std::sin(std::sqrt(x)) / std::sqrt(x);
    if (x >= cfg.asymptotic_cutoff && q.alpha < 2.0) {
        Expansion e = asymptotic_eval(q.alpha, q.beta, x, cfg.asymptotic_terms);
        double scale = std::max(std::fabs(e.value), 1e-300);
        if (e.tail_bound > cfg.target_rel_tol * scale) {
            std::ostringstream msg;
            msg << "ml_eval: expansion tail " << e.tail_bound << " exceeds tolerance at z="
                << q.z << " (best estimate " << e.value << ")";
            throw ConvergenceError(msg.str());
        }
        return e.value;
    }
    return eval_mid(q.alpha, q.beta, x, cfg.target_rel_tol);
}

std::vector<double> ml_eval_batch(double alpha, double beta, std::span<const double> z,
                                  const MLConfig& cfg) {
    cfg.validate();
    std::vector<double> out(z.size());
    // shared reciprocal-gamma tables across all arguments at fixed (alpha, beta)
    std::vector<double> rg_series;
    for (size_t i = 0; i < z.size(); ++i) {
        MLQuery q{alpha, beta, z[i]};
        validate_query(q);
        double x = -z[i];
        if (x <= cfg.series_cutoff) {
            if (rg_series.empty()) rg_series = series_table(alpha, beta, 220);
            out[i] = series_eval(x, rg_series);
        } else {
            out[i] = ml_eval(q, cfg);
        }
    }
    return out;
}

}  // namespace tfdw::mlf
