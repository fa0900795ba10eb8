#include <doctest.h>

#include <cmath>

#include "gaussdyn/errors.hpp"
#include "gaussdyn/gaussian.hpp"
#include "support/oracles.hpp"

using namespace gaussdyn;

TEST_CASE("upper-triangle storage") {
    CovarianceMatrix v;
    v(2, 1) = 3.0;
    CHECK(v(1, 2) == 3.0);
    CHECK(v.components()[CovarianceMatrix::index(1, 2)] == 3.0);
    // v11 v12 v13 v14 v22 v23 v24 v33 v34 v44
    CHECK(CovarianceMatrix::index(0, 0) == 0);
    CHECK(CovarianceMatrix::index(0, 3) == 3);
    CHECK(CovarianceMatrix::index(1, 1) == 4);
    CHECK(CovarianceMatrix::index(1, 3) == 6);
    CHECK(CovarianceMatrix::index(2, 3) == 8);
    CHECK(CovarianceMatrix::index(3, 3) == 9);
    const Eigen::Matrix4d m = v.matrix();
    CHECK(m == m.transpose());
}

TEST_CASE("symplectic form") {
    const Eigen::Matrix4d s = symplectic_form();
    CHECK(s.transpose() == -s);
    CHECK(s * s == -Eigen::Matrix4d::Identity());
}

TEST_CASE("two-mode squeezed vacuum") {
    CHECK(tmsv_covariance(0.0).matrix() == 0.5 * Eigen::Matrix4d::Identity());
    const auto v = tmsv_covariance(2.0);
    // cosh(4) / 2 and sinh(4) / 2
    CHECK(v(0, 0) == doctest::Approx(13.654116).epsilon(1e-7));
    CHECK(v(0, 2) == doctest::Approx(-13.644958).epsilon(1e-7));
    CHECK(v(1, 3) == doctest::Approx(13.644958).epsilon(1e-7));
    CHECK(v(0, 0) * v(0, 0) - v(0, 2) * v(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(v(0, 1) == 0.0);
    for (double r : {0.0, 0.1, 1.0, 2.0}) {
        CHECK(symplectic_eigenvalues(tmsv_covariance(r))[0] == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tmsv_covariance(INFINITY), DomainError);
}

TEST_CASE("partial transpose") {
    const auto v = tmsv_covariance(1.3);
    CHECK(partial_transpose(partial_transpose(v)) == v);
    CHECK(partial_transpose(tmsv_covariance(0.0)) == tmsv_covariance(0.0));
    const auto pt = partial_transpose(v);
    CHECK(pt(1, 3) == -v(1, 3));
    CHECK(pt(0, 2) == v(0, 2));
    CHECK(pt.matrix().determinant() == doctest::Approx(v.matrix().determinant()).epsilon(1e-13));
    for (double r : {0.1, 1.0, 2.0}) {
        const auto expected = std::exp(-2.0 * r) / 2.0;
        CHECK(pt_min_symplectic_eigenvalue(tmsv_covariance(r)) == doctest::Approx(expected).epsilon(1e-10));
        const auto brute = oracle::symplectic_eigenvalues_squared_route(partial_transpose(tmsv_covariance(r)).matrix());
        CHECK(brute[0] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("log negativity") {
    CHECK(log_negativity(tmsv_covariance(0.0)) < 1e-15);
    CHECK(log_negativity(tmsv_covariance(2.0)) == doctest::Approx(5.77078).epsilon(1e-6));
    CHECK(log_negativity(tmsv_covariance(2.0)) == doctest::Approx(4.0 / std::log(2.0)).epsilon(1e-12));
    CHECK(log_negativity_from_vs(0.5) == 0.0);
    CHECK(log_negativity_from_vs(3.0) == 0.0);
    CHECK_THROWS_AS(log_negativity_from_vs(0.0), InvalidStateError);
    CHECK_THROWS_AS(log_negativity_from_vs(-0.1), InvalidStateError);
}

TEST_CASE("separability") {
    CHECK(is_separable(tmsv_covariance(0.0)));
    CHECK_FALSE(is_separable(tmsv_covariance(0.1)));
    // Thermal product state.
    CovarianceMatrix th = tmsv_covariance(0.0);
    for (std::size_t i = 0; i < 4; ++i) th(i, i) = 3.0;
    CHECK(is_separable(th));
}

TEST_CASE("a matrix with no symplectic spectrum is rejected") {
    CovarianceMatrix v;
    v(0, 0) = 1.0;
    v(1, 1) = -1.0;
    v(2, 2) = 1.0;
    v(3, 3) = 1.0;
    CHECK_THROWS_AS(symplectic_eigenvalues(v), InvalidStateError);
}
