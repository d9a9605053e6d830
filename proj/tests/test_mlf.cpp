#include <doctest.h>

#include <cmath>
#include <random>

#include "tfdw/errors.hpp"
#include "tfdw/mlf.hpp"

using namespace tfdw;
using mlf::MLConfig;
using mlf::MLQuery;

namespace {
double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }
}

TEST_CASE("closed-form values") {
    CHECK(mlf::ml_eval({1.5, 1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rel(mlf::ml_eval({1.0, 1.0, -1.0}), std::exp(-1.0)) < 1e-13);
    CHECK(rel(mlf::ml_eval({2.0, 1.0, -1.0}), std::cos(1.0)) < 1e-13);
    CHECK(rel(mlf::ml_oracle({1.0, 1.0, -5.0}, 40), std::exp(-5.0)) < 1e-15);
    CHECK(rel(mlf::ml_oracle({2.0, 2.0, -4.0}, 40), std::sin(2.0) / 2.0) < 1e-15);
}

TEST_CASE("frozen reference values") {
    // extended-precision series references
    CHECK(rel(mlf::ml_eval({1.6, 1.0, -100.0}), -0.00369712876307395118) < 1e-12);
    CHECK(rel(mlf::ml_oracle({1.6, 1.0, -100.0}, 40), -0.00369712876307395118) < 1e-14);

    std::string s = mlf::ml_oracle_str({1.5, 1.0, -50.0}, 40);
    CHECK(s.substr(0, 32) == "-4.57838510583927799129879715300");

    // large-argument expansion cross-checked against the oracle at the boundary
    CHECK(rel(mlf::ml_eval({1.5, 2.5, -1e6}), 1.0000002820947918e-06) < 1e-12);
    double at_1e4 = mlf::ml_eval({1.5, 2.5, -1e4}, MLConfig{1.0, 5e3, 10, 1e-12});
    CHECK(rel(at_1e4, mlf::ml_oracle({1.5, 2.5, -1e4}, 40)) < 1e-12);
}

TEST_CASE("identity spot checks") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> U(0.0, 1000.0);
    for (int i = 0; i < 60; ++i) {
        double x = U(eng);
        double e = mlf::ml_eval({1.0, 1.0, -x});
        CHECK(std::fabs(e - std::exp(-x)) <= 1e-12 * std::exp(-x) + 1e-300);
        double c = mlf::ml_eval({2.0, 1.0, -x});
        CHECK(std::fabs(c - std::cos(std::sqrt(x))) <= 1e-10);
    }
    // E_{2,2}(-x) = sin(sqrt x)/sqrt x
    for (double x : {0.5, 4.0, 123.0, 900.0}) {
        CHECK(std::fabs(mlf::ml_eval({2.0, 2.0, -x}) - std::sin(std::sqrt(x)) / std::sqrt(x)) <
              1e-10);
    }
}

TEST_CASE("mid-range agrees with oracle across alpha") {
    for (double alpha : {1.05, 1.1, 1.3, 1.5, 1.7, 1.9}) {
        for (double beta : {1.0, alpha, alpha + 1.0}) {
            for (double x : {1.5, 8.0, 33.0, 210.0, 1500.0, 9000.0}) {
                double got = mlf::ml_eval({alpha, beta, -x});
                double want = mlf::ml_oracle({alpha, beta, -x}, 36);
                CAPTURE(alpha);
                CAPTURE(beta);
                CAPTURE(x);
                CHECK(rel(got, want) < 1e-11);
            }
        }
    }
}

TEST_CASE("branch consistency in the overlap windows") {
    MLConfig lo{0.25, 1e4, 10, 1e-12};   // forces the mid-range branch from |z| > 0.25
    MLConfig hi{1.0, 1e4, 10, 1e-12};    // series up to 1
    for (double x : {0.3, 0.5, 0.8, 1.0}) {
        double mid = mlf::ml_eval({1.6, 1.0, -x}, lo);
        double ser = mlf::ml_eval({1.6, 1.0, -x}, hi);
        CHECK(rel(mid, ser) < 1e-8);
    }
    MLConfig asym_early{1.0, 3e3, 10, 1e-12};
    for (double x : {4e3, 7e3, 9.9e3}) {
        double asy = mlf::ml_eval({1.4, 1.0, -x}, asym_early);
        double mid = mlf::ml_eval({1.4, 1.0, -x}, hi);
        CHECK(rel(asy, mid) < 1e-8);
    }
}

TEST_CASE("sign structure at large argument") {
    // leading terms: E_{a,1} ~ 1/(z Gamma(1-a)) < 0 and E_{a,a+1} ~ -1/z > 0
    for (double alpha : {1.2, 1.6, 1.9}) {
        // find X0 with the oracle, then the evaluator must hold the sign beyond it
        double X0 = 1.0;
        for (double x = 1.0; x <= 1e4; x *= 1.25) {
            if (mlf::ml_oracle({alpha, 1.0, -x}, 30) >= 0.0 ||
                mlf::ml_oracle({alpha, alpha + 1.0, -x}, 30) <= 0.0)
                X0 = x * 1.25;
        }
        for (double x = X0 * 1.01; x <= 1e6; x *= 2.7) {
            CHECK(mlf::ml_eval({alpha, 1.0, -x}) < 0.0);
            CHECK(mlf::ml_eval({alpha, alpha + 1.0, -x}) > 0.0);
        }
    }
}

TEST_CASE("batch equals scalar") {
    std::vector<double> z{-0.2, -3.0, -55.0, -2e4};
    auto got = mlf::ml_eval_batch(1.7, 1.7, z);
    for (std::size_t i = 0; i < z.size(); ++i)
        CHECK(got[i] == mlf::ml_eval({1.7, 1.7, z[i]}));
}

TEST_CASE("domain and config errors") {
    CHECK_THROWS_AS(mlf::ml_eval({1.5, 1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(mlf::ml_eval({2.5, 1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(mlf::ml_eval({0.0, 1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(mlf::ml_eval({1.5, std::nan(""), -1.0}), DomainError);
    CHECK_THROWS_AS(mlf::ml_eval({1.5, 1.0, -1.0}, MLConfig{2.0, 1.0, 10, 1e-12}), DomainError);
    CHECK_THROWS_AS(mlf::ml_eval({1.5, 1.0, -1.0}, MLConfig{1.0, 1e4, 0, 1e-12}), DomainError);
    CHECK_THROWS_AS(mlf::ml_oracle({1.5, 1.0, -2e4}, 40), DomainError);
    CHECK_THROWS_AS(mlf::ml_oracle({1.5, 1.0, -1.0}, 20), DomainError);
    // a deliberately starved expansion must refuse rather than return garbage
    CHECK_THROWS_AS(mlf::ml_eval({1.9, 1.0, -60.0}, MLConfig{1.0, 50.0, 1, 1e-12}),
                    ConvergenceError);
}

TEST_CASE("lemma 2.1 style boundedness") {
    // (1+x)|E_{a,b}(-x)| stays bounded on a log-spaced grid, and the sup is
    // stable when the grid is refined 4x
    for (double alpha : {1.3, 1.7}) {
        for (double beta : {1.0, alpha}) {
            auto sup_on = [&](int n) {
                double sup = 0.0;
                for (int i = 0; i < n; ++i) {
                    double x = std::pow(10.0, -2.0 + 10.0 * i / (n - 1.0));
                    double v = (1.0 + x) * std::fabs(mlf::ml_eval({alpha, beta, -x}));
                    sup = std::max(sup, v);
                }
                return sup;
            };
            double s1 = sup_on(200), s4 = sup_on(800);
            CHECK(s4 < 50.0);
            CHECK(s4 <= s1 * 1.05 + 0.5);
        }
    }
}
