#include "tfdw/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "tfdw/errors.hpp"
#include "tfdw/fmtnum.hpp"

namespace tfdw::bench {

using spectral::Domain;
using spectral::EigenVariant;
using spectral::Field;

ExampleId example_from_string(const std::string& s) {
    if (s == "ex1") return ExampleId::Ex1;
    if (s == "ex2") return ExampleId::Ex2;
    if (s == "ex3") return ExampleId::Ex3;
    if (s == "custom") return ExampleId::Custom;
    throw DomainError("unknown example: " + s);
}

const char* to_string(ExampleId id) {
    switch (id) {
        case ExampleId::Ex1: return "ex1";
        case ExampleId::Ex2: return "ex2";
        case ExampleId::Ex3: return "ex3";
        case ExampleId::Custom: return "custom";
    }
    return "?";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// ---- exact fields of the three examples --------------------------------------

// orthonormal-sine coefficients of e^{-x} sin(pi x) on (0,1)
double ex3_u_coeff(int n) {
    auto cosint = [](int m) {  // int_0^1 e^{-x} cos(m pi x) dx
        double c = m * M_PI;
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        return (1.0 - sgn / M_E) / (1.0 + c * c);
    };
    return kSqrt2 / 2.0 * (cosint(n - 1) - cosint(n + 1));
}

// orthonormal-sine coefficients of x(1-x) on (0,1)
double ex3_w_coeff(int n) {
    if (n % 2 == 0) return 0.0;
    double npi = n * M_PI;
    return 4.0 * kSqrt2 / (npi * npi * npi);
}

std::vector<double> coeffs_1d(ExampleId id, bool source, int m) {
    std::vector<double> c(m, 0.0);
    switch (id) {
        case ExampleId::Ex1:
            if (source) {
                c[0] = 1.0 / kSqrt2;  // sin(pi x)
            } else if (m >= 2) {
                c[1] = 1.0 / kSqrt2;  // sin(2 pi x)
            }
            break;
        case ExampleId::Ex2:
            for (int n = 1; n <= m; ++n) {
                double n2p2 = static_cast<double>(n) * n * M_PI * M_PI;
                c[n - 1] = source ? 2.0 * kSqrt2 / n2p2 * std::sin(n * M_PI / 2.0)
                                  : 3.0 * kSqrt2 / n2p2 *
                                        (std::sin(0.3 * n * M_PI) + std::sin(0.7 * n * M_PI));
            }
            break;
        default:
            throw DomainError("coeffs_1d: 1D example expected");
    }
    return c;
}

Field exact_field(ExampleId id, bool source, const Domain& d) {
    if (id == ExampleId::Ex3) {
        int m = d.modes_per_axis();
        if (d.dim != 2) throw DomainError("Ex3 is two-dimensional");
        std::vector<double> u(m), w(m), c(d.mode_count());
        for (int n = 1; n <= m; ++n) {
            u[n - 1] = source ? ex3_w_coeff(n) : ex3_u_coeff(n);
            w[n - 1] = u[n - 1];
        }
        for (int n = 0; n < m; ++n)
            for (int q = 0; q < m; ++q)
                c[static_cast<std::size_t>(n) * m + q] = 0.5 * u[n] * w[q];
        return spectral::field_from_coeffs(d, std::move(c));
    }
    if (d.dim != 1) throw DomainError("Ex1/Ex2 are one-dimensional");
    return spectral::field_from_coeffs(d, coeffs_1d(id, source, d.modes_per_axis()));
}

// pointwise exact fields, used as the reference the reconstruction is scored against
double sample_exact(ExampleId id, bool source, double x, double y) {
    switch (id) {
        case ExampleId::Ex1:
            return source ? std::sin(M_PI * x) : std::sin(2.0 * M_PI * x);
        case ExampleId::Ex2:
            if (source) return x <= 0.5 ? x : 1.0 - x;
            if (x <= 0.3) return 3.0 * x;
            if (x <= 0.7) return 0.9;
            return 3.0 * (1.0 - x);
        case ExampleId::Ex3:
            return source ? 0.5 * x * y * (1.0 - x) * (1.0 - y)
                          : 0.5 * std::exp(-(x + y)) * std::sin(M_PI * x) * std::sin(M_PI * y);
        default:
            throw DomainError("sample_exact: no fixture for custom example");
    }
}

std::vector<double> sample_nodal(ExampleId id, bool source, const Domain& d) {
    int m = d.modes_per_axis();
    double h = d.h();
    std::vector<double> v(d.mode_count());
    if (d.dim == 1) {
        for (int i = 0; i < m; ++i) v[i] = sample_exact(id, source, (i + 1) * h, 0.0);
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                v[static_cast<std::size_t>(i) * m + j] =
                    sample_exact(id, source, (i + 1) * h, (j + 1) * h);
    }
    return v;
}

double rel_err_vs_sampled(const Field& rec_coeffs, const std::vector<double>& exact_nodal) {
    Field n = spectral::to_nodal(rec_coeffs);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < exact_nodal.size(); ++i) {
        double e = n.nodal[i] - exact_nodal[i];
        err += e * e;
        ref += exact_nodal[i] * exact_nodal[i];
    }
    return std::sqrt(err / ref);
}

// continuous-L2 noise level from the analytic coefficient expansions; feeds the
// h-rule before the grid exists
double probe_delta_w(const ExperimentSpec& spec, double eps) {
    Domain d{1, 512};
    spectral::EigenSystem eig = spectral::build_eigensystem(d, EigenVariant::Continuous);
    forward::OperatorDiag d1 = forward::operator_diag(eig, spec.T1(), spec.alpha);
    forward::OperatorDiag d2 = forward::operator_diag(eig, spec.T2, spec.alpha);
    Field a = exact_field(spec.example, false, d);
    Field f = exact_field(spec.example, true, d);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t n = 0; n < eig.lambda.size(); ++n) {
        double g1 = d1.S[n] * a.coeffs[n] + d1.Q[n] * f.coeffs[n];
        double g2 = d2.S[n] * a.coeffs[n] + d2.Q[n] * f.coeffs[n];
        s1 += g1 * g1;
        s2 += g2 * g2;
    }
    return eps * std::sqrt(std::max(s1, s2));
}

int resolve_K(const ExperimentSpec& spec, double eps) {
    if (spec.fixed_K > 0) return spec.fixed_K;
    double dw = probe_delta_w(spec, eps);
    double h_raw;
    if (spec.delta_rule == DeltaRule::Euclidean) {
        // the rule consumes the grid 2-norm delta = dw * h^{-1/2}; solve
        // h = c * (dw h^{-1/2})^e for h
        h_raw = std::pow(spec.h_rule.c * std::pow(dw, spec.h_rule.exponent),
                         1.0 / (1.0 + spec.h_rule.exponent / 2.0));
    } else {
        h_raw = spec.h_rule.c * std::pow(dw, spec.h_rule.exponent);
    }
    long K = std::lround(1.0 / h_raw);
    return static_cast<int>(std::clamp(K, 4L, 2048L));
}

struct SeedOutcome {
    double re_a = 0.0, re_f = 0.0;
    int iterations = 0;
    bool ok = false;
    std::string error;
};

}  // namespace

double ExperimentSpec::T1() const {
    switch (t1_rule) {
        case T1Rule::DPower: return T2 * std::pow(d_target, 1.0 / alpha);
        case T1Rule::DTimes: return T2 * d_target;
        case T1Rule::RatioTwoThirds: return T2 * 2.0 / 3.0;
        case T1Rule::Explicit: return t1_explicit;
    }
    return 0.0;
}

void ExperimentSpec::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("ExperimentSpec: alpha in (1,2)");
    if (eps_list.empty()) throw DomainError("ExperimentSpec: eps_list nonempty");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i + 1]))
            throw DomainError("ExperimentSpec: eps_list strictly increasing");
    if (eps_list[0] < 0.0 || (eps_list[0] == 0.0 && eps_list.size() > 1))
        throw DomainError("ExperimentSpec: eps_list entries > 0, or a single 0 entry");
    if (seeds.empty()) throw DomainError("ExperimentSpec: seeds nonempty");
    if (data_grid_factor < 1) throw DomainError("ExperimentSpec: data_grid_factor >= 1");
}

ExperimentSpec example_spec(ExampleId id) {
    ExperimentSpec s;
    s.example = id;
    s.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    switch (id) {
        case ExampleId::Ex1:
            s.alpha = 1.6;
            s.d_target = 0.4;
            s.T2 = 1.5;
            s.t1_rule = T1Rule::RatioTwoThirds;
            s.eps_list = {0.0005, 0.001, 0.005, 0.01};
            s.variant = EigenVariant::Galerkin1D;
            s.h_rule = {1.0, 0.5};
            s.mu_rule = {0.2, 2.0 / 3.0};
            s.p = 1.0;
            s.delta_rule = DeltaRule::Euclidean;
            break;
        case ExampleId::Ex2:
            s.alpha = 1.5;
            s.d_target = 0.3;
            s.T2 = 1.5;
            s.t1_rule = T1Rule::RatioTwoThirds;
            s.eps_list = {0.001, 0.003, 0.006, 0.009, 0.01};
            s.variant = EigenVariant::Galerkin1D;
            s.h_rule = {0.8, 0.5};
            s.mu_rule = {3.0, 2.0 / 3.0};
            s.p = 0.5;
            s.delta_rule = DeltaRule::Euclidean;
            break;
        case ExampleId::Ex3:
        case ExampleId::Custom:
            s.alpha = 1.5;
            s.d_target = 0.4;
            s.T2 = 1.0;
            s.t1_rule = T1Rule::Explicit;
            s.t1_explicit = 0.75;
            s.eps_list = {0.001};
            s.variant = EigenVariant::Lumped2D;
            s.mu_rule = {1.0 / 6.0, 0.5};
            s.p = 1.0;
            s.delta_rule = DeltaRule::Weighted;
            s.fixed_K = 64;
            break;
    }
    return s;
}

forward::FieldFactory exact_a_factory(ExampleId id) {
    return [id](const Domain& d) { return exact_field(id, false, d); };
}

forward::FieldFactory exact_f_factory(ExampleId id) {
    return [id](const Domain& d) { return exact_field(id, true, d); };
}

double compute_order(double re, double delta) {
    if (!(re > 0.0 && re < 1.0 && delta > 0.0 && delta < 1.0))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log(re) / std::log(delta);
}

int bench_threads() {
    if (const char* env = std::getenv("BENCH_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

ResultRow run_row(const ExperimentSpec& spec, double eps) {
    auto t_start = std::chrono::steady_clock::now();
    ResultRow row;
    row.eps = eps;
    try {
        const double T1 = spec.T1(), T2 = spec.T2;
        int K = resolve_K(spec, eps);
        row.K = K;
        Domain d{spec.variant == EigenVariant::Lumped2D ? 2 : 1, K};
        spectral::EigenSystem eig = spectral::build_eigensystem(d, spec.variant);

        forward::ProblemSetup setup;
        setup.alpha = spec.alpha;
        setup.T1 = T1;
        setup.T2 = T2;
        setup.eig = eig;
        setup.make_a = exact_a_factory(spec.example);
        setup.make_f = exact_f_factory(spec.example);
        setup.a = setup.make_a(d);
        setup.f = setup.make_f(d);

        inverse::ContractionReport rep =
            inverse::check_contraction(spec.alpha, T1, T2, eig);
        row.d_estimate = rep.d_abs;
        if (!rep.passed())
            throw ContractionError("contraction precheck failed for this row (max|r|=" +
                                   format_double(rep.d_abs) + ")");

        forward::ExactData exact = forward::synthesize_exact(setup, spec.data_grid_factor);
        row.delta = eps * std::max(spectral::norm_nodal(d, exact.g1.nodal),
                                   spectral::norm_nodal(d, exact.g2.nodal));
        double delta_rule = row.delta;
        if (spec.delta_rule == DeltaRule::Euclidean)
            delta_rule /= std::pow(d.h(), d.dim / 2.0);
        double mu = spec.mu_override
                        ? *spec.mu_override
                        : spec.mu_rule.c * std::pow(delta_rule, spec.mu_rule.exponent);
        row.mu = mu;

        std::vector<double> a_ref = sample_nodal(spec.example, false, d);
        std::vector<double> f_ref = sample_nodal(spec.example, true, d);

        const std::size_t S = spec.seeds.size();
        std::vector<SeedOutcome> out(S);
        int workers = std::min<int>(bench_threads(), static_cast<int>(S));
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= S) return;
                try {
                    forward::MeasurementPair mp =
                        forward::apply_noise(exact, d, eps, spec.seeds[i]);
                    inverse::RegConfig rc;
                    rc.mu = mu;
                    rc.k_max = spec.k_max;
                    rc.stop_tol = spec.stop_tol;
                    rc.solver = spec.solver;
                    inverse::ReconstructionRun run =
                        inverse::alternating_regularized(mp.g1, mp.g2, setup, rc);
                    out[i].re_a = rel_err_vs_sampled(run.a_rec, a_ref);
                    out[i].re_f = rel_err_vs_sampled(run.f_rec, f_ref);
                    out[i].iterations = run.iterations_used;
                    out[i].ok = true;
                } catch (const std::exception& e) {
                    out[i].error = e.what();
                }
            }
        };
        if (workers <= 1) {
            work();
        } else {
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }

        double sa = 0.0, sf = 0.0;
        int n_ok = 0;
        for (std::size_t i = 0; i < S; ++i) {
            const SeedOutcome& o = out[i];
            if (!o.ok)
                throw NonFiniteError("seed " + std::to_string(spec.seeds[i]) + ": " + o.error);
            sa += o.re_a;
            sf += o.re_f;
            row.iterations = std::max(row.iterations, o.iterations);
            ++n_ok;
        }
        row.re_a = sa / n_ok;
        row.re_f = sf / n_ok;
        row.order_a = compute_order(row.re_a, row.delta);
        row.order_f = compute_order(row.re_f, row.delta);
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.re_a = row.re_f = std::numeric_limits<double>::quiet_NaN();
        row.order_a = row.order_f = std::numeric_limits<double>::quiet_NaN();
    }
    row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return row;
}

void finalize_orders(Table& t) {
    for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
        const ResultRow& r0 = t.rows[i];
        const ResultRow& r1 = t.rows[i + 1];
        double la = std::log(r0.re_a / r1.re_a) / std::log(r0.delta / r1.delta);
        double lf = std::log(r0.re_f / r1.re_f) / std::log(r0.delta / r1.delta);
        t.pairwise_order_a.push_back(la);
        t.pairwise_order_f.push_back(lf);
    }
}

}  // namespace

Table run_example(const ExperimentSpec& spec) {
    spec.validate();
    Table t;
    t.name = to_string(spec.example);
    for (double eps : spec.eps_list) t.rows.push_back(run_row(spec, eps));
    finalize_orders(t);
    return t;
}

Table sweep_T2(const ExperimentSpec& spec, const std::vector<double>& t2_list) {
    if (t2_list.empty()) throw DomainError("sweep_T2: empty T2 list");
    Table t;
    t.name = std::string(to_string(spec.example)) + "_sweep_t2";
    for (double T2 : t2_list) {
        ExperimentSpec s = spec;
        s.T2 = T2;
        s.eps_list = {spec.eps_list.front()};
        Table one = run_example(s);
        t.rows.push_back(one.rows.front());
    }
    return t;
}

Table sweep_alpha(const ExperimentSpec& spec, const std::vector<double>& alpha_list) {
    if (alpha_list.empty()) throw DomainError("sweep_alpha: empty alpha list");
    Table t;
    t.name = std::string(to_string(spec.example)) + "_sweep_alpha";
    for (double a : alpha_list) {
        ExperimentSpec s = spec;
        s.alpha = a;
        s.eps_list = {spec.eps_list.front()};
        Table one = run_example(s);
        t.rows.push_back(one.rows.front());
    }
    return t;
}

std::string Table::csv(bool include_timing) const {
    std::ostringstream os;
    os << "eps,delta,re_a,order_a,re_f,order_f,iters,d,time_s\n";
    for (const ResultRow& r : rows) {
        os << format_double(r.eps) << ',' << format_double(r.delta) << ','
           << format_double(r.re_a) << ',' << format_double(r.order_a) << ','
           << format_double(r.re_f) << ',' << format_double(r.order_f) << ',' << r.iterations
           << ',' << format_double(r.d_estimate) << ','
           << format_double(include_timing ? r.time_s : 0.0) << '\n';
    }
    return os.str();
}

std::vector<Table> reproduce_paper(const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    std::vector<Table> tables;

    Table t1 = run_example(example_spec(ExampleId::Ex1));
    t1.name = "table1_ex1_galerkin";
    tables.push_back(std::move(t1));

    ExperimentSpec ex2 = example_spec(ExampleId::Ex2);
    Table t2 = run_example(ex2);
    t2.name = "table2_ex2_galerkin";
    tables.push_back(std::move(t2));

    ex2.variant = EigenVariant::Lumped1D;
    Table t3 = run_example(ex2);
    t3.name = "table3_ex2_lumped";
    tables.push_back(std::move(t3));

    ExperimentSpec ex3 = example_spec(ExampleId::Ex3);
    Table t4 = sweep_alpha(ex3, {1.1, 1.2, 1.3, 1.4, 1.5});
    t4.name = "table4_ex3_alpha";
    tables.push_back(std::move(t4));

    Table t5 = sweep_T2(ex3, {1.0, 2.0, 5.0, 8.0, 10.0});
    t5.name = "table5_ex3_t2";
    tables.push_back(std::move(t5));

    for (const Table& t : tables) {
        std::ofstream f(fs::path(outdir) / (t.name + ".csv"));
        f << t.csv();
    }
    return tables;
}

}  // namespace tfdw::bench
