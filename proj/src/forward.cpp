#include "tfdw/forward.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tfdw/errors.hpp"

namespace tfdw::forward {

using spectral::Domain;
using spectral::EigenSystem;
using spectral::EigenVariant;
using spectral::Field;

double op_coeff(OpKind kind, double lambda, double t, double alpha, const mlf::MLConfig& cfg) {
    if (!(lambda > 0.0)) throw DomainError("op_coeff: lambda > 0 required");
    if (!(t > 0.0)) throw DomainError("op_coeff: t > 0 required");
    double z = -lambda * std::pow(t, alpha);
    switch (kind) {
        case OpKind::S: return mlf::ml_eval({alpha, 1.0, z}, cfg);
        case OpKind::T: return t * mlf::ml_eval({alpha, 2.0, z}, cfg);
        case OpKind::G: return std::pow(t, alpha - 1.0) * mlf::ml_eval({alpha, alpha, z}, cfg);
        case OpKind::Q: return std::pow(t, alpha) * mlf::ml_eval({alpha, alpha + 1.0, z}, cfg);
    }
    throw DomainError("op_coeff: bad kind");
}

OperatorDiag operator_diag(const EigenSystem& eig, double t, double alpha,
                           const mlf::MLConfig& cfg) {
    const double ta = std::pow(t, alpha);
    std::vector<double> z(eig.lambda.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = -eig.lambda[i] * ta;
    OperatorDiag d;
    d.S = mlf::ml_eval_batch(alpha, 1.0, z, cfg);
    d.Q = mlf::ml_eval_batch(alpha, alpha + 1.0, z, cfg);
    for (double& q : d.Q) q *= ta;
    return d;
}

void ProblemSetup::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("ProblemSetup: alpha in (1,2)");
    if (!(T1 > 0.0 && T2 > T1)) throw DomainError("ProblemSetup: 0 < T1 < T2 required");
    if (a.domain != eig.domain || f.domain != eig.domain)
        throw DomainError("ProblemSetup: a, f must live on the eigensystem's domain");
}

namespace {

Field zero_padded(const Field& coarse, const Domain& d) {
    // carries the coarse coefficients onto a finer grid; exact when the field
    // is bandlimited to the coarse modes
    Field withc = coarse.has_coeffs() ? coarse : spectral::to_coeffs(coarse);
    std::vector<double> c(d.mode_count(), 0.0);
    int mc = coarse.domain.modes_per_axis();
    int mf = d.modes_per_axis();
    if (d.dim != coarse.domain.dim || mf < mc) throw DomainError("zero_padded: bad target");
    if (d.dim == 1) {
        std::copy(withc.coeffs.begin(), withc.coeffs.end(), c.begin());
    } else {
        for (int n = 0; n < mc; ++n)
            for (int m = 0; m < mc; ++m)
                c[static_cast<std::size_t>(n) * mf + m] =
                    withc.coeffs[static_cast<std::size_t>(n) * mc + m];
    }
    return spectral::field_from_coeffs(d, std::move(c));
}

}  // namespace

Field ProblemSetup::a_on(const Domain& d) const {
    if (d == eig.domain) return a.has_coeffs() ? a : spectral::to_coeffs(a);
    return make_a ? make_a(d) : zero_padded(a, d);
}

Field ProblemSetup::f_on(const Domain& d) const {
    if (d == eig.domain) return f.has_coeffs() ? f : spectral::to_coeffs(f);
    return make_f ? make_f(d) : zero_padded(f, d);
}

Field solve_direct(const ProblemSetup& setup, double t) {
    setup.validate();
    if (!(t > 0.0)) throw DomainError("solve_direct: t > 0 required");
    OperatorDiag d = operator_diag(setup.eig, t, setup.alpha);
    const Field ac = setup.a.has_coeffs() ? setup.a : spectral::to_coeffs(setup.a);
    const Field fc = setup.f.has_coeffs() ? setup.f : spectral::to_coeffs(setup.f);
    std::vector<double> u(ac.coeffs.size());
    for (std::size_t n = 0; n < u.size(); ++n)
        u[n] = d.S[n] * ac.coeffs[n] + d.Q[n] * fc.coeffs[n];
    return spectral::field_from_coeffs(setup.eig.domain, std::move(u));
}

namespace {

// deterministic uniform [-1,1) stream
struct UniformStream {
    std::mt19937_64 eng;
    explicit UniformStream(std::uint64_t seed) : eng(seed) {}
    double next() {
        double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0,1)
        return 2.0 * u - 1.0;
    }
};

}  // namespace

ExactData synthesize_exact(const ProblemSetup& setup, int data_grid_factor,
                           const mlf::MLConfig& cfg) {
    setup.validate();
    if (data_grid_factor < 1) throw DomainError("synthesize: data_grid_factor >= 1");

    const Domain& dc = setup.eig.domain;
    Domain df{dc.dim, dc.K * data_grid_factor};
    EigenSystem fine = spectral::build_eigensystem(df, EigenVariant::Continuous);

    Field af = setup.a_on(df);
    Field ff = setup.f_on(df);
    OperatorDiag d1 = operator_diag(fine, setup.T1, setup.alpha, cfg);
    OperatorDiag d2 = operator_diag(fine, setup.T2, setup.alpha, cfg);
    std::vector<double> g1c(af.coeffs.size()), g2c(af.coeffs.size());
    for (std::size_t n = 0; n < g1c.size(); ++n) {
        g1c[n] = d1.S[n] * af.coeffs[n] + d1.Q[n] * ff.coeffs[n];
        g2c[n] = d2.S[n] * af.coeffs[n] + d2.Q[n] * ff.coeffs[n];
    }
    Field g1f = spectral::to_nodal(spectral::field_from_coeffs(df, std::move(g1c)));
    Field g2f = spectral::to_nodal(spectral::field_from_coeffs(df, std::move(g2c)));

    auto restrict_nodal = [&](const std::vector<double>& vf) {
        int mc = dc.modes_per_axis(), mf = df.modes_per_axis();
        std::vector<double> v(dc.mode_count());
        if (dc.dim == 1) {
            for (int i = 0; i < mc; ++i) v[i] = vf[(i + 1) * data_grid_factor - 1];
        } else {
            for (int i = 0; i < mc; ++i)
                for (int j = 0; j < mc; ++j)
                    v[static_cast<std::size_t>(i) * mc + j] =
                        vf[static_cast<std::size_t>((i + 1) * data_grid_factor - 1) * mf +
                           (j + 1) * data_grid_factor - 1];
        }
        return v;
    };
    ExactData ex;
    ex.g1 = spectral::to_coeffs(spectral::field_from_nodal(dc, restrict_nodal(g1f.nodal)));
    ex.g2 = spectral::to_coeffs(spectral::field_from_nodal(dc, restrict_nodal(g2f.nodal)));
    return ex;
}

MeasurementPair apply_noise(const ExactData& exact, const Domain& dc, double epsilon,
                            std::uint64_t seed) {
    if (epsilon < 0.0) throw DomainError("synthesize: epsilon >= 0");
    const std::vector<double>& g1 = exact.g1.nodal;
    const std::vector<double>& g2 = exact.g2.nodal;

    MeasurementPair mp;
    mp.epsilon = epsilon;
    mp.seed = seed;
    mp.delta = epsilon * std::max(spectral::norm_nodal(dc, g1), spectral::norm_nodal(dc, g2));

    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    };
    double amp1 = epsilon * max_abs(g1), amp2 = epsilon * max_abs(g2);
    UniformStream rng(seed);
    std::vector<double> g1d = g1, g2d = g2;
    for (double& v : g1d) v += amp1 * rng.next();
    for (double& v : g2d) v += amp2 * rng.next();

    std::vector<double> n1(g1.size()), n2(g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) n1[i] = g1d[i] - g1[i];
    for (std::size_t i = 0; i < g2.size(); ++i) n2[i] = g2d[i] - g2[i];
    mp.noise_norm1 = spectral::norm_nodal(dc, n1);
    mp.noise_norm2 = spectral::norm_nodal(dc, n2);

    mp.g1_exact = exact.g1;
    mp.g2_exact = exact.g2;
    mp.g1 = spectral::to_coeffs(spectral::field_from_nodal(dc, std::move(g1d)));
    mp.g2 = spectral::to_coeffs(spectral::field_from_nodal(dc, std::move(g2d)));
    return mp;
}

MeasurementPair synthesize(const ProblemSetup& setup, double epsilon, std::uint64_t seed,
                           int data_grid_factor, const mlf::MLConfig& cfg) {
    ExactData ex = synthesize_exact(setup, data_grid_factor, cfg);
    return apply_noise(ex, setup.eig.domain, epsilon, seed);
}

}  // namespace tfdw::forward
