#include "cansys/extension.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace cansys;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

SelfAdjointBVP identity_bvp(double beta = pi) {
    return SelfAdjointBVP(builtin("identity"), 1.0, BoundaryAngle(pi), BoundaryAngle(beta));
}

} // namespace

TEST_CASE("characteristic function closed forms") {
    const SelfAdjointBVP dirichlet = identity_bvp();
    const SelfAdjointBVP mixed = identity_bvp(pi / 2);
    for (double lambda = -12.0; lambda <= 12.0; lambda += 0.37) {
        CHECK_THAT(char_function(dirichlet, lambda), WithinAbs(-std::sin(lambda), 1e-14));
        CHECK_THAT(char_function(mixed, lambda), WithinAbs(-std::cos(lambda), 1e-14));
    }
    const SelfAdjointBVP random(builtin("random-psd", {{"seed", 4}}), BoundaryAngle(pi), BoundaryAngle(pi));
    CHECK(char_function(random, 0.0) == 0.0);
    CHECK_THROWS_AS(char_function(dirichlet, 1e4), DomainError);
}

TEST_CASE("eigenvalues: closed forms") {
    const EigenList id = eigenvalues_in(identity_bvp(), -10.0, 10.0);
    REQUIRE(id.values.size() == 7);
    for (int k = -3; k <= 3; ++k) {
        CHECK_THAT(id.values[k + 3], WithinAbs(k * pi, 1e-8));
    }
    for (std::size_t j = 1; j < id.values.size(); ++j) {
        CHECK_THAT(id.values[j] - id.values[j - 1], WithinAbs(pi, 1e-8));
    }

    const SelfAdjointBVP half(trace_normalize(builtin("identity")), 1.0, BoundaryAngle(pi), BoundaryAngle(pi));
    const EigenList h = eigenvalues_in(half, 0.0, 10.0);
    REQUIRE(h.values.size() == 2);
    CHECK_THAT(h.values[0], WithinAbs(0.0, 1e-8));
    CHECK_THAT(h.values[1], WithinAbs(2 * pi, 1e-8));

    CHECK(eigenvalues_in(identity_bvp(), 1.0, 1.0 + 1e-6).values.empty());
    CHECK_THROWS_AS(eigenvalues_in(identity_bvp(), 2.0, 1.0), std::invalid_argument);

    const EigenList mixed = eigenvalues_in(identity_bvp(pi / 2), 0.0, 10.0);
    REQUIRE(mixed.values.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK_THAT(mixed.values[k], WithinAbs((k + 0.5) * pi, 1e-8));
    }
}

TEST_CASE("eigenvalue spacing for H = I on longer intervals") {
    for (double N : {2.0, 3.5}) {
        const SelfAdjointBVP bvp(builtin("identity", {{"length", N}}), BoundaryAngle(pi), BoundaryAngle(pi));
        const EigenList list = eigenvalues_in(bvp, -7.0, 7.0);
        REQUIRE(list.values.size() >= 2);
        for (std::size_t j = 1; j < list.values.size(); ++j) {
            CHECK_THAT(list.values[j] - list.values[j - 1], WithinAbs(pi / N, 1e-8));
        }
    }
}

TEST_CASE("eigenfunctions") {
    const SelfAdjointBVP bvp = identity_bvp();
    const Trajectory phi = eigenfunction(bvp, pi);
    for (double x : {0.0, 0.3, 0.77, 1.0}) {
        const Vec2c v = phi(x);
        CHECK(std::abs(v(0) + std::cos(pi * x)) <= 1e-13);
        CHECK(std::abs(v(1) - std::sin(pi * x)) <= 1e-13);
    }
    const Trajectory constant = eigenfunction(bvp, 0.0);
    CHECK((constant(0.6) - Vec2c(-1.0, 0.0)).norm() == 0.0);
    CHECK_THROWS_AS(eigenfunction(bvp, pi / 2), DomainError);
}

TEST_CASE("eigenfunctions of distinct eigenvalues are H-orthogonal") {
    const QuadratureRule quad{8, 4};
    for (int seed : {1, 2, 3}) {
        const HamiltonianField f = builtin("random-psd", {{"seed", seed}, {"count", 6}, {"length", 3.0}});
        const SelfAdjointBVP bvp(f, BoundaryAngle(1.0), BoundaryAngle(2.2));
        const EigenList list = eigenvalues_in(bvp, -15.0, 15.0);
        REQUIRE(list.values.size() >= 3);
        std::vector<Trajectory> phis;
        for (double E : list.values) {
            phis.push_back(eigenfunction(bvp, E));
            CHECK(boundary_residual(bvp, E) <= 1e-8);
        }
        for (std::size_t i = 0; i < phis.size(); ++i) {
            const double ni = std::sqrt(h_norm_squared(phis[i], quad, bvp.N));
            CHECK(ni > 0.0);
            for (std::size_t j = i + 1; j < phis.size(); ++j) {
                const double nj = std::sqrt(h_norm_squared(phis[j], quad, bvp.N));
                CHECK(std::abs(h_inner_product(phis[i], phis[j], quad, bvp.N)) <= 1e-8 * ni * nj);
            }
        }
    }
}

TEST_CASE("characteristic function is real for real lambda") {
    // Real generators give real transfer matrices; compare against the RK4 oracle too.
    const HamiltonianField f = builtin("random-psd", {{"seed", 9}, {"count", 5}, {"length", 2.0}});
    const SelfAdjointBVP bvp(f, BoundaryAngle(0.7), BoundaryAngle(pi));
    for (double lambda : {-3.0, 0.5, 4.0}) {
        const Mat2c t = oracle::rk4_transfer(f, lambda, f.total_length());
        const Vec2c u = t * Vec2c(std::cos(0.7), -std::sin(0.7));
        const double expected = (u(0) * 0.0 + u(1) * -1.0).real();
        CHECK_THAT(char_function(bvp, lambda), WithinAbs(expected, 1e-8));
    }
}
