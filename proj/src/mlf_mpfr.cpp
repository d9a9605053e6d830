// Extended-precision evaluation of the Mittag-Leffler series via MPFR.
// Backs ml_oracle and the mid-range fallback of ml_eval. The alternating
// series cancels down from a maximum term of size ~exp(x^(1/alpha)), so the
// working precision must carry that many bits on top of the requested digits;
// the loop below measures the actual cancellation and escalates until the
// result is trustworthy.

#include "tfdw/mlf.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "tfdw/errors.hpp"

namespace tfdw::mlf {

namespace {

constexpr long kPrecCap = 1L << 22;
constexpr long kTermCap = 500000;

struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
};

// natural log of the series' maximum term, ~x^(1/alpha) for x > 1
double max_term_nats(double alpha, double x) {
    return x > 1.0 ? std::pow(x, 1.0 / alpha) : 0.0;
}

// estimate (in double) of the index where terms drop `bits` below the maximum
long estimate_k_end(double alpha, double beta, double x, long bits) {
    const double target = max_term_nats(alpha, x) - 0.6931 * static_cast<double>(bits);
    const double lx = std::log(std::max(x, 1.0));
    long k = static_cast<long>(max_term_nats(alpha, x) / alpha) + 4;
    for (; k < kTermCap; ++k) {
        double arg = alpha * k + beta;
        if (arg > 2.0 && k * lx - std::lgamma(arg) < target) break;
    }
    return k;
}

// Gamma(alpha k + beta), k = 0..n-1, built in parallel when large. Entries are
// computed independently at fixed precision, so the thread count cannot change
// any value.
class GammaTable {
  public:
    GammaTable(double alpha, double beta, long n, mpfr_prec_t prec) : vals_(n) {
        for (auto& v : vals_) mpfr_init2(v, prec);
        long workers = 1;
        if (prec > 1500 && n > 256) {
            unsigned hc = std::thread::hardware_concurrency();
            workers = std::min<long>(hc == 0 ? 1 : hc, 16);
        }
        auto fill = [&](long w) {
            MpfrVal a(prec), b(prec), garg(prec);
            mpfr_set_d(a.v, alpha, MPFR_RNDN);
            mpfr_set_d(b.v, beta, MPFR_RNDN);
            for (long k = w; k < n; k += workers) {
                mpfr_mul_si(garg.v, a.v, k, MPFR_RNDN);
                mpfr_add(garg.v, garg.v, b.v, MPFR_RNDN);
                if (mpfr_integer_p(garg.v) && mpfr_sgn(garg.v) <= 0)
                    mpfr_set_nan(vals_[k]);
                else
                    mpfr_gamma(vals_[k], garg.v, MPFR_RNDN);
            }
        };
        if (workers == 1) {
            fill(0);
        } else {
            std::vector<std::thread> pool;
            for (long w = 0; w < workers; ++w) pool.emplace_back(fill, w);
            for (auto& t : pool) t.join();
        }
    }
    ~GammaTable() {
        for (auto& v : vals_) mpfr_clear(v);
    }
    GammaTable(const GammaTable&) = delete;
    long size() const { return static_cast<long>(vals_.size()); }
    const mpfr_t& operator[](long k) const { return vals_[k]; }
    bool is_pole(long k) const { return mpfr_nan_p(vals_[k]); }

  private:
    std::vector<mpfr_t> vals_;
};

// Sums the series at fixed precision. Returns false when the observed
// cancellation leaves fewer than `digits` trustworthy decimal digits.
bool sum_at_precision(double alpha, double beta, double x, int digits, long prec,
                      mpfr_t out) {
    MpfrVal a(prec), b(prec), z(prec), zk(prec), garg(prec), g(prec), term(prec), sum(prec);
    mpfr_set_d(a.v, alpha, MPFR_RNDN);
    mpfr_set_d(b.v, beta, MPFR_RNDN);
    mpfr_set_d(z.v, -x, MPFR_RNDN);
    mpfr_set_ui(zk.v, 1, MPFR_RNDN);
    mpfr_set_ui(sum.v, 0, MPFR_RNDN);

    mpfr_exp_t max_exp = mpfr_get_emin();
    bool have_term = false;
    const double peak_k = max_term_nats(alpha, x) / alpha + 4.0;

    // For integer alpha the term ratio needs no Gamma evaluations:
    // t_{k+1} = t_k * z / prod_{j=0..alpha-1} (alpha k + beta + j).
    const long ia = static_cast<long>(alpha);
    const bool alpha_integral = (alpha == static_cast<double>(ia));
    bool recur_live = false;

    for (long k = 0;; ++k) {
        if (k > kTermCap) throw PrecisionError("mittag-leffler series did not terminate");
        mpfr_mul_si(garg.v, a.v, k, MPFR_RNDN);
        mpfr_add(garg.v, garg.v, b.v, MPFR_RNDN);
        bool pole = mpfr_integer_p(garg.v) && mpfr_sgn(garg.v) <= 0;
        bool have_this = false;
        if (recur_live) {
            // term already holds t_k from the recurrence
            have_this = true;
        } else if (!pole) {
            mpfr_gamma(g.v, garg.v, MPFR_RNDN);
            mpfr_div(term.v, zk.v, g.v, MPFR_RNDN);
            have_this = true;
            // the recurrence is valid once no later Gamma argument can be a pole
            if (alpha_integral && mpfr_sgn(garg.v) > 0) recur_live = true;
        }
        if (have_this) {
            mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
            if (mpfr_sgn(term.v) != 0) {
                max_exp = std::max(max_exp, mpfr_get_exp(term.v));
                have_term = true;
            }
            // past the peak, terms below one ulp of the max term cannot move the sum
            if (have_term && k > peak_k &&
                (mpfr_sgn(term.v) == 0 || mpfr_get_exp(term.v) < max_exp - prec - 8))
                break;
        }
        if (recur_live) {
            mpfr_mul(term.v, term.v, z.v, MPFR_RNDN);
            for (long j = 0; j < ia; ++j) {
                mpfr_mul_si(garg.v, a.v, k, MPFR_RNDN);
                mpfr_add(garg.v, garg.v, b.v, MPFR_RNDN);
                mpfr_add_si(garg.v, garg.v, j, MPFR_RNDN);
                mpfr_div(term.v, term.v, garg.v, MPFR_RNDN);
            }
        } else {
            mpfr_mul(zk.v, zk.v, z.v, MPFR_RNDN);
        }
    }

    if (mpfr_sgn(sum.v) == 0) return false;
    long cancel_bits = static_cast<long>(max_exp - mpfr_get_exp(sum.v));
    long needed = cancel_bits + static_cast<long>(digits * 3.33) + 24;
    if (prec < needed) return false;
    mpfr_set(out, sum.v, MPFR_RNDN);
    return true;
}

void eval_core(double alpha, double beta, double x, int digits, mpfr_t out) {
    long prec = static_cast<long>(max_term_nats(alpha, x) * 1.4427) +
                static_cast<long>(digits * 3.33) + 96;
    for (int attempt = 0; attempt < 8; ++attempt) {
        if (prec > kPrecCap)
            throw PrecisionError("cancellation exhausts the working precision cap");
        if (sum_at_precision(alpha, beta, x, digits, prec, out)) return;
        prec = prec * 3 / 2 + 256;
    }
    throw PrecisionError("cancellation exhausts the working precision cap");
}

void validate_oracle_query(const MLQuery& q, int digits) {
    if (!(q.z <= 0.0)) throw DomainError("ml_oracle: z must be <= 0");
    if (!(q.alpha > 0.0)) throw DomainError("ml_oracle: alpha must be positive");
    if (!std::isfinite(q.beta)) throw DomainError("ml_oracle: beta must be finite");
    if (!(-q.z <= 1e4)) throw DomainError("ml_oracle: |z| <= 1e4 required");
    if (digits < 30) throw DomainError("ml_oracle: digits >= 30 required");
}

}  // namespace

double ml_oracle(const MLQuery& q, int digits) {
    validate_oracle_query(q, digits);
    MpfrVal out(static_cast<mpfr_prec_t>(digits * 3.33) + 64);
    eval_core(q.alpha, q.beta, -q.z, digits, out.v);
    return mpfr_get_d(out.v, MPFR_RNDN);
}

std::string ml_oracle_str(const MLQuery& q, int digits) {
    validate_oracle_query(q, digits);
    MpfrVal out(static_cast<mpfr_prec_t>(digits * 3.33) + 64);
    eval_core(q.alpha, q.beta, -q.z, digits, out.v);
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, out.v);
    return std::string(buf.data());
}

namespace detail {

// Result-relative evaluation used as the certified mid-range fallback.
double ml_mpfr(double alpha, double beta, double x, double rel_tol) {
    int digits = std::max(16, static_cast<int>(std::ceil(-std::log10(rel_tol))) + 3);
    MpfrVal out(static_cast<mpfr_prec_t>(digits * 3.33) + 64);
    eval_core(alpha, beta, x, digits, out.v);
    return mpfr_get_d(out.v, MPFR_RNDN);
}

}  // namespace detail

}  // namespace tfdw::mlf
