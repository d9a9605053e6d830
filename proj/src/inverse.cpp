#include "tfdw/inverse.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tfdw/errors.hpp"

namespace tfdw::inverse {

using forward::OperatorDiag;
using spectral::Field;

void RegConfig::validate(const spectral::Domain& d) const {
    if (!(mu > 0.0)) throw DomainError("RegConfig: mu > 0 required");
    if (k_max < 1) throw DomainError("RegConfig: k_max >= 1 required");
    if (!(stop_tol > 0.0)) throw DomainError("RegConfig: stop_tol > 0 required");
    if (f0.has_coeffs() && f0.domain != d)
        throw DomainError("RegConfig: f0 must live on the eigensystem's domain");
}

namespace {

struct Diags {
    OperatorDiag t1, t2;
};

Diags make_diags(double alpha, double T1, double T2, const spectral::EigenSystem& eig,
                 const mlf::MLConfig& cfg) {
    if (!(T1 > 0.0 && T2 > T1)) throw DomainError("require 0 < T1 < T2");
    return {forward::operator_diag(eig, T1, alpha, cfg),
            forward::operator_diag(eig, T2, alpha, cfg)};
}

std::vector<double> coeffs_of(const Field& f) {
    return (f.has_coeffs() ? f : spectral::to_coeffs(f)).coeffs;
}

double rel_change(const std::vector<double>& next, const std::vector<double>& prev) {
    double dn = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        double d = next[i] - prev[i];
        dn += d * d;
        nn += next[i] * next[i];
    }
    return std::sqrt(dn) / std::max(std::sqrt(nn), 1e-300);
}

}  // namespace

ContractionReport check_contraction(double alpha, double T1, double T2,
                                    const spectral::EigenSystem& eig,
                                    const mlf::MLConfig& cfg) {
    Diags d = make_diags(alpha, T1, T2, eig, cfg);
    ContractionReport rep;
    rep.d_signed = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < eig.lambda.size(); ++n) {
        double r = (d.t1.Q[n] * d.t2.S[n]) / (d.t1.S[n] * d.t2.Q[n]);
        rep.d_abs = std::max(rep.d_abs, std::fabs(r));
        rep.d_signed = std::max(rep.d_signed, r);
        if (r <= 0.0) rep.nonpositive_modes.push_back(static_cast<int>(n) + 1);
        if (std::fabs(r) >= 1.0) rep.divergent_modes.push_back(static_cast<int>(n) + 1);
    }
    return rep;
}

double require_contraction(double alpha, double T1, double T2,
                           const spectral::EigenSystem& eig, const mlf::MLConfig& cfg) {
    ContractionReport rep = check_contraction(alpha, T1, T2, eig, cfg);
    if (!rep.passed()) {
        std::ostringstream msg;
        msg << "contraction check failed: |r_n| >= 1 at modes";
        for (std::size_t i = 0; i < rep.divergent_modes.size() && i < 8; ++i)
            msg << ' ' << rep.divergent_modes[i];
        if (rep.divergent_modes.size() > 8) msg << " ...";
        throw ContractionError(msg.str());
    }
    return rep.d_abs;
}

std::pair<Field, Field> cramer_invert(const Field& g1, const Field& g2, double alpha,
                                      double T1, double T2, const spectral::EigenSystem& eig,
                                      const mlf::MLConfig& cfg) {
    Diags d = make_diags(alpha, T1, T2, eig, cfg);
    std::vector<double> g1c = coeffs_of(g1), g2c = coeffs_of(g2);
    if (g1c.size() != eig.lambda.size() || g2c.size() != eig.lambda.size())
        throw DomainError("cramer_invert: data size mismatch");
    std::vector<double> ac(g1c.size()), fc(g1c.size());
    for (std::size_t n = 0; n < g1c.size(); ++n) {
        double s1 = d.t1.S[n], q1 = d.t1.Q[n], s2 = d.t2.S[n], q2 = d.t2.Q[n];
        double R = s1 * q2 - s2 * q1;
        if (std::fabs(R) < 1e-3 * std::fabs(s1 * q2)) {
            std::ostringstream msg;
            msg << "cramer_invert: |R_n| degenerate at mode " << n + 1 << " (R=" << R
                << ", S1*Q2=" << s1 * q2 << ")";
            throw SingularModeError(msg.str());
        }
        ac[n] = (q2 * g1c[n] - q1 * g2c[n]) / R;
        fc[n] = (s1 * g2c[n] - s2 * g1c[n]) / R;
    }
    return {spectral::field_from_coeffs(eig.domain, std::move(ac)),
            spectral::field_from_coeffs(eig.domain, std::move(fc))};
}

std::pair<Field, Field> alternating_exact(const Field& g1, const Field& g2,
                                          const forward::ProblemSetup& setup, const Field& f0,
                                          int k, const mlf::MLConfig& cfg) {
    if (k < 0) throw DomainError("alternating_exact: k >= 0 required");
    Diags d = make_diags(setup.alpha, setup.T1, setup.T2, setup.eig, cfg);
    std::vector<double> g1c = coeffs_of(g1), g2c = coeffs_of(g2);
    std::vector<double> f = f0.has_coeffs() || f0.has_nodal()
                                ? coeffs_of(f0)
                                : std::vector<double>(g1c.size(), 0.0);
    std::vector<double> a(g1c.size());
    for (std::size_t n = 0; n < a.size(); ++n)
        a[n] = (g1c[n] - d.t1.Q[n] * f[n]) / d.t1.S[n];
    for (int j = 1; j <= k; ++j) {
        for (std::size_t n = 0; n < a.size(); ++n)
            f[n] = (g2c[n] - d.t2.S[n] * a[n]) / d.t2.Q[n];
        for (std::size_t n = 0; n < a.size(); ++n)
            a[n] = (g1c[n] - d.t1.Q[n] * f[n]) / d.t1.S[n];
    }
    return {spectral::field_from_coeffs(setup.eig.domain, std::move(a)),
            spectral::field_from_coeffs(setup.eig.domain, std::move(f))};
}

ReconstructionRun alternating_regularized(const Field& g1d, const Field& g2d,
                                          const forward::ProblemSetup& setup,
                                          const RegConfig& config, const mlf::MLConfig& cfg) {
    config.validate(setup.eig.domain);
    Diags d = make_diags(setup.alpha, setup.T1, setup.T2, setup.eig, cfg);
    const double mu = config.mu;
    std::vector<double> g1c = coeffs_of(g1d), g2c = coeffs_of(g2d);
    const std::size_t N = g1c.size();
    if (N != setup.eig.lambda.size()) throw DomainError("alternating_regularized: size mismatch");

    ReconstructionRun run;
    run.config = config;
    run.d_estimate = check_contraction(setup.alpha, setup.T1, setup.T2, setup.eig, cfg).d_abs;

    // exact fields for the error history, when provided
    const bool have_exact = setup.a.has_nodal() || setup.a.has_coeffs();
    std::vector<double> a_ex, f_ex;
    double na_ex = 0.0, nf_ex = 0.0;
    if (have_exact) {
        a_ex = (setup.a.has_nodal() ? setup.a : spectral::to_nodal(setup.a)).nodal;
        f_ex = (setup.f.has_nodal() ? setup.f : spectral::to_nodal(setup.f)).nodal;
        na_ex = spectral::norm_nodal(setup.eig.domain, a_ex);
        nf_ex = spectral::norm_nodal(setup.eig.domain, f_ex);
    }
    auto rel_err_nodal = [&](const std::vector<double>& c, const std::vector<double>& ex,
                             double nex) {
        Field nf = spectral::to_nodal(spectral::field_from_coeffs(setup.eig.domain, c));
        double s = 0.0;
        for (std::size_t i = 0; i < ex.size(); ++i) {
            double e = nf.nodal[i] - ex[i];
            s += e * e;
        }
        return std::sqrt(s * std::pow(setup.eig.domain.h(), setup.eig.domain.dim)) /
               std::max(nex, 1e-300);
    };

    std::vector<double> f = config.f0.has_coeffs() || config.f0.has_nodal()
                                ? coeffs_of(config.f0)
                                : std::vector<double>(N, 0.0);
    std::vector<double> a(N);

    if (config.solver == Solver::FixedPoint) {
        for (std::size_t n = 0; n < N; ++n) {
            double s1 = d.t1.S[n], q1 = d.t1.Q[n], s2 = d.t2.S[n], q2 = d.t2.Q[n];
            double D = (s1 - mu) * (q2 + mu) - q1 * s2;
            a[n] = ((q2 + mu) * g1c[n] - q1 * g2c[n]) / D;
            f[n] = (g2c[n] - s2 * a[n]) / (q2 + mu);
            if (!std::isfinite(a[n]) || !std::isfinite(f[n]))
                throw NonFiniteError("alternating_regularized: non-finite fixed-point mode");
        }
        run.iterations_used = 0;
    } else {
        for (std::size_t n = 0; n < N; ++n)
            a[n] = (g1c[n] - d.t1.Q[n] * f[n]) / (d.t1.S[n] - mu);
        std::vector<double> a_prev(N), f_prev(N);
        for (int k = 1; k <= config.k_max; ++k) {
            a_prev = a;
            f_prev = f;
            for (std::size_t n = 0; n < N; ++n)
                f[n] = (g2c[n] - d.t2.S[n] * a_prev[n]) / (d.t2.Q[n] + mu);
            for (std::size_t n = 0; n < N; ++n)
                a[n] = (g1c[n] - d.t1.Q[n] * f[n]) / (d.t1.S[n] - mu);
            for (std::size_t n = 0; n < N; ++n)
                if (!std::isfinite(a[n]) || !std::isfinite(f[n]))
                    throw NonFiniteError("alternating_regularized: non-finite iterate");
            IterRecord rec;
            rec.da = rel_change(a, a_prev);
            rec.df = rel_change(f, f_prev);
            if (have_exact) {
                rec.re_a = rel_err_nodal(a, a_ex, na_ex);
                rec.re_f = rel_err_nodal(f, f_ex, nf_ex);
            }
            run.history.push_back(rec);
            run.iterations_used = k;
            if (rec.da <= config.stop_tol && rec.df <= config.stop_tol) break;
        }
    }
    run.a_rec = spectral::field_from_coeffs(setup.eig.domain, std::move(a));
    run.f_rec = spectral::field_from_coeffs(setup.eig.domain, std::move(f));
    return run;
}

double choose_mu(double delta, double p, double c) {
    if (!(delta > 0.0)) throw DomainError("choose_mu: delta > 0 required");
    return c * std::pow(delta, 1.0 / (p + 1.0));
}

}  // namespace tfdw::inverse
