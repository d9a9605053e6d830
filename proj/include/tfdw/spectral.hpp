#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tfdw::spectral {

// Unit interval (dim 1) or unit square (dim 2), K equal subintervals per axis,
// mesh size h = 1/K, interior nodes x_i = i*h, i = 1..K-1.
struct Domain {
    int dim = 1;
    int K = 2;

    double h() const { return 1.0 / K; }
    int modes_per_axis() const { return K - 1; }
    std::size_t mode_count() const {
        auto m = static_cast<std::size_t>(K - 1);
        return dim == 1 ? m : m * m;
    }
    void validate() const;
    bool operator==(const Domain&) const = default;
};

enum class EigenVariant { Continuous, Galerkin1D, Lumped1D, Lumped2D };

const char* to_string(EigenVariant v);
EigenVariant variant_from_string(const std::string& s);

// Eigenvalues of the (discrete) Dirichlet Laplacian in the sampled-sine basis.
// 2D modes are ordered row-major over (n, m) with n outer.
struct EigenSystem {
    Domain domain;
    EigenVariant variant = EigenVariant::Continuous;
    std::vector<double> lambda;
};

EigenSystem build_eigensystem(const Domain& domain, EigenVariant variant);

// A spatial field held as interior-node values and/or orthonormal-sine
// coefficients (basis sqrt(2) sin(n pi x) sampled at the nodes, orthonormal
// under the weight-h^dim nodal inner product).
struct Field {
    Domain domain;
    std::vector<double> nodal;   // empty when absent
    std::vector<double> coeffs;  // empty when absent

    bool has_nodal() const { return !nodal.empty(); }
    bool has_coeffs() const { return !coeffs.empty(); }
};

Field field_from_nodal(const Domain& d, std::vector<double> nodal);
Field field_from_coeffs(const Domain& d, std::vector<double> coeffs);

// c_n = h * sum_i v_i sqrt(2) sin(n pi x_i) (tensor product in 2D)
Field to_coeffs(const Field& f);
// v_i = sum_n c_n sqrt(2) sin(n pi x_i); exact inverse of to_coeffs
Field to_nodal(const Field& f);

// Sample fn at the interior nodes and transform. fn receives (x) in 1D and
// (x, y) in 2D (the second argument is 0 in 1D).
Field project_function(const std::function<double(double, double)>& fn, const Domain& d);

// discrete L2 norm, weight h^dim, of nodal values (equals the coefficient
// l2 norm by Parseval)
double norm_nodal(const Domain& d, std::span<const double> nodal);
double norm_coeffs(std::span<const double> coeffs);

// serialization: CSV rows "i[,j],x[,y],value" for nodal values; JSON carries
// the domain, mode list and coefficients with round-trip exact doubles
std::string field_to_csv(const Field& f);
std::string field_to_json(const Field& f);
Field field_from_json(const std::string& json_text);

}  // namespace tfdw::spectral
