#include "tfdw/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "tfdw/errors.hpp"
#include "tfdw/fmtnum.hpp"

namespace tfdw::spectral {

namespace {

// Cached sampled-sine table for grid K: S[i*(K-1)+n] = sqrt(2) sin((i+1)(n+1) pi / K).
// Symmetric in (i, n); immutable once built.
std::shared_ptr<const std::vector<double>> sine_table(int K) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(K);
    if (it != cache.end()) return it->second;
    int m = K - 1;
    auto tab = std::make_shared<std::vector<double>>(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int n = 0; n < m; ++n)
            (*tab)[static_cast<std::size_t>(i) * m + n] =
                std::sqrt(2.0) * std::sin((i + 1.0) * (n + 1.0) * M_PI / K);
    cache[K] = tab;
    return tab;
}

// y = S x (S is the symmetric sine table of size m x m)
void apply_sine(const std::vector<double>& S, int m, const double* x, double* y) {
    for (int i = 0; i < m; ++i) {
        const double* row = S.data() + static_cast<std::size_t>(i) * m;
        double acc = 0.0;
        for (int n = 0; n < m; ++n) acc += row[n] * x[n];
        y[i] = acc;
    }
}

// 2D separable apply: out = S * X * S, X row-major m x m
std::vector<double> apply_sine_2d(const std::vector<double>& S, int m,
                                  const std::vector<double>& X) {
    std::vector<double> tmp(static_cast<std::size_t>(m) * m), out(tmp.size());
    // tmp = X * S (rows of X transformed)
    for (int i = 0; i < m; ++i)
        apply_sine(S, m, X.data() + static_cast<std::size_t>(i) * m,
                   tmp.data() + static_cast<std::size_t>(i) * m);
    // out = S * tmp (columns): transpose-apply-transpose via strided access
    std::vector<double> col(m), res(m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) col[i] = tmp[static_cast<std::size_t>(i) * m + j];
        apply_sine(S, m, col.data(), res.data());
        for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i) * m + j] = res[i];
    }
    return out;
}

}  // namespace

void Domain::validate() const {
    if (dim != 1 && dim != 2) throw DomainError("Domain: dim must be 1 or 2");
    if (K < 2) throw DomainError("Domain: K >= 2 required");
}

const char* to_string(EigenVariant v) {
    switch (v) {
        case EigenVariant::Continuous: return "continuous";
        case EigenVariant::Galerkin1D: return "galerkin";
        case EigenVariant::Lumped1D: return "lumped";
        case EigenVariant::Lumped2D: return "lumped2d";
    }
    return "?";
}

EigenVariant variant_from_string(const std::string& s) {
    if (s == "continuous") return EigenVariant::Continuous;
    if (s == "galerkin") return EigenVariant::Galerkin1D;
    if (s == "lumped") return EigenVariant::Lumped1D;
    if (s == "lumped2d") return EigenVariant::Lumped2D;
    throw DomainError("unknown eigensystem variant: " + s);
}

EigenSystem build_eigensystem(const Domain& domain, EigenVariant variant) {
    domain.validate();
    const int K = domain.K;
    const double h = domain.h();
    EigenSystem es{domain, variant, {}};
    es.lambda.reserve(domain.mode_count());
    auto lumped1d = [&](int n) {
        double s = std::sin(n * M_PI / (2.0 * K));
        return 4.0 / (h * h) * s * s;
    };
    switch (variant) {
        case EigenVariant::Continuous:
            if (domain.dim == 1) {
                for (int n = 1; n < K; ++n) es.lambda.push_back(n * M_PI * n * M_PI);
            } else {
                for (int n = 1; n < K; ++n)
                    for (int m = 1; m < K; ++m)
                        es.lambda.push_back((static_cast<double>(n) * n + static_cast<double>(m) * m) * M_PI * M_PI);
            }
            break;
        case EigenVariant::Lumped1D:
            if (domain.dim != 1) throw DomainError("Lumped1D requires dim 1");
            for (int n = 1; n < K; ++n) es.lambda.push_back(lumped1d(n));
            break;
        case EigenVariant::Galerkin1D:
            if (domain.dim != 1) throw DomainError("Galerkin1D requires dim 1");
            for (int n = 1; n < K; ++n) {
                double lb = lumped1d(n);
                es.lambda.push_back(lb / (1.0 - h * h / 6.0 * lb));
            }
            break;
        case EigenVariant::Lumped2D:
            if (domain.dim != 2) throw DomainError("Lumped2D requires dim 2");
            for (int n = 1; n < K; ++n)
                for (int m = 1; m < K; ++m) es.lambda.push_back(lumped1d(n) + lumped1d(m));
            break;
    }
    return es;
}

Field field_from_nodal(const Domain& d, std::vector<double> nodal) {
    d.validate();
    if (nodal.size() != d.mode_count()) throw DomainError("field_from_nodal: size mismatch");
    return Field{d, std::move(nodal), {}};
}

Field field_from_coeffs(const Domain& d, std::vector<double> coeffs) {
    d.validate();
    if (coeffs.size() != d.mode_count()) throw DomainError("field_from_coeffs: size mismatch");
    return Field{d, {}, std::move(coeffs)};
}

Field to_coeffs(const Field& f) {
    if (!f.has_nodal()) throw DomainError("to_coeffs: nodal values absent");
    if (f.nodal.size() != f.domain.mode_count()) throw DomainError("to_coeffs: size mismatch");
    auto S = sine_table(f.domain.K);
    int m = f.domain.modes_per_axis();
    Field out = f;
    if (f.domain.dim == 1) {
        out.coeffs.assign(m, 0.0);
        apply_sine(*S, m, f.nodal.data(), out.coeffs.data());
        for (double& c : out.coeffs) c *= f.domain.h();
    } else {
        out.coeffs = apply_sine_2d(*S, m, f.nodal);
        double w = f.domain.h() * f.domain.h();
        for (double& c : out.coeffs) c *= w;
    }
    return out;
}

Field to_nodal(const Field& f) {
    if (!f.has_coeffs()) throw DomainError("to_nodal: coefficients absent");
    if (f.coeffs.size() != f.domain.mode_count()) throw DomainError("to_nodal: size mismatch");
    auto S = sine_table(f.domain.K);
    int m = f.domain.modes_per_axis();
    Field out = f;
    if (f.domain.dim == 1) {
        out.nodal.assign(m, 0.0);
        apply_sine(*S, m, f.coeffs.data(), out.nodal.data());
    } else {
        out.nodal = apply_sine_2d(*S, m, f.coeffs);
    }
    return out;
}

Field project_function(const std::function<double(double, double)>& fn, const Domain& d) {
    d.validate();
    int m = d.modes_per_axis();
    double h = d.h();
    std::vector<double> nodal(d.mode_count());
    if (d.dim == 1) {
        for (int i = 0; i < m; ++i) nodal[i] = fn((i + 1) * h, 0.0);
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                nodal[static_cast<std::size_t>(i) * m + j] = fn((i + 1) * h, (j + 1) * h);
    }
    return to_coeffs(field_from_nodal(d, std::move(nodal)));
}

double norm_nodal(const Domain& d, std::span<const double> nodal) {
    double s = 0.0;
    for (double v : nodal) s += v * v;
    return std::sqrt(s * std::pow(d.h(), d.dim));
}

double norm_coeffs(std::span<const double> coeffs) {
    double s = 0.0;
    for (double v : coeffs) s += v * v;
    return std::sqrt(s);
}

std::string field_to_csv(const Field& f) {
    const Field* src = &f;
    Field tmp;
    if (!f.has_nodal()) {
        tmp = to_nodal(f);
        src = &tmp;
    }
    std::ostringstream os;
    int m = f.domain.modes_per_axis();
    double h = f.domain.h();
    if (f.domain.dim == 1) {
        os << "i,x,value\n";
        for (int i = 0; i < m; ++i)
            os << (i + 1) << ',' << format_double((i + 1) * h) << ','
               << format_double(src->nodal[i]) << '\n';
    } else {
        os << "i,j,x,y,value\n";
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                os << (i + 1) << ',' << (j + 1) << ',' << format_double((i + 1) * h) << ','
                   << format_double((j + 1) * h) << ','
                   << format_double(src->nodal[static_cast<std::size_t>(i) * m + j]) << '\n';
    }
    return os.str();
}

std::string field_to_json(const Field& f) {
    const Field* src = &f;
    Field tmp;
    if (!f.has_coeffs()) {
        tmp = to_coeffs(f);
        src = &tmp;
    }
    nlohmann::json j;
    j["domain"] = {{"dim", f.domain.dim}, {"K", f.domain.K}};
    int m = f.domain.modes_per_axis();
    nlohmann::json modes = nlohmann::json::array();
    if (f.domain.dim == 1) {
        for (int n = 1; n <= m; ++n) modes.push_back(n);
    } else {
        for (int n = 1; n <= m; ++n)
            for (int q = 1; q <= m; ++q) modes.push_back(nlohmann::json::array({n, q}));
    }
    j["modes"] = std::move(modes);
    j["coeffs"] = src->coeffs;
    return j.dump();
}

Field field_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    Domain d{j.at("domain").at("dim").get<int>(), j.at("domain").at("K").get<int>()};
    std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
    return field_from_coeffs(d, std::move(coeffs));
}

}  // namespace tfdw::spectral
