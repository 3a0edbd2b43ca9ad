#include "cansys/weyl.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace cansys;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
const std::vector<double> kSchedule{5, 10, 20, 40};

FieldExtender builtin_extender(const std::string& name, BuiltinParams params = {}) {
    params["length"] = 40.0;
    return truncating_extender(builtin(name, params));
}

} // namespace

TEST_CASE("boundary angles") {
    CHECK(BoundaryAngle(pi).sin() == 0.0);
    CHECK(BoundaryAngle(pi).cos() == -1.0);
    CHECK(BoundaryAngle(pi / 2).sin() == 1.0);
    CHECK(BoundaryAngle(pi / 2).cos() == 0.0);
    CHECK_THROWS_AS(BoundaryAngle(0.0), std::invalid_argument);
    CHECK_THROWS_AS(BoundaryAngle(4.0), std::invalid_argument);
    const BoundaryAngle a(1.1);
    CHECK(std::abs(a.condition(a.initial_vector())) <= 1e-16);
}

TEST_CASE("m-function closed forms") {
    const HamiltonianField id = builtin("identity", {{"length", 20.0}});
    const BoundaryAngle beta(pi);
    for (Complex z : {Complex(0.3, 0.2), Complex(-1.0, 0.5), Complex(0.0, 1.0), Complex(2.0, -0.1)}) {
        for (double N : {0.5, 1.0, 2.7}) {
            const Complex expected = std::tan(z * N);
            CHECK(std::abs(m_function(id, z, beta, N) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        }
    }
    CHECK(std::abs(m_function(id, Complex(0.0, 1.0), beta, 20.0) - Complex(0.0, 1.0)) <= 1e-10);

    const HamiltonianField random = builtin("random-psd", {{"seed", 2}});
    for (double b : {0.4, 1.0, 2.5}) {
        CHECK(std::abs(m_function(random, 0.0, BoundaryAngle(b), 3.0) + std::tan(b)) <= 1e-15);
    }
    CHECK_THROWS_AS(m_function(id, 0.0, BoundaryAngle(pi / 2), 1.0), DomainError);
    CHECK_THROWS_AS(m_function(id, 1.0, beta, 25.0), DomainError);
}

TEST_CASE("m-function conjugation symmetry and Herglotz sign") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const HamiltonianField f = oracle::random_field(rng, 8, 4.0, 1.0);
        Complex z = oracle::random_z(rng, 3.0);
        z = Complex(z.real(), std::abs(z.imag()) + 0.05);
        const BoundaryAngle beta(oracle::uniform(rng, 0.1, pi));
        const double N = f.total_length();
        const Complex m = m_function(f, z, beta, N);
        const Complex mb = m_function(f, std::conj(z), beta, N);
        CHECK(std::abs(mb - std::conj(m)) <= 1e-12 * std::max(1.0, std::abs(m)));
        CHECK(m.imag() > 0.0);
    }
}

TEST_CASE("m_N(i) approaches i monotonically for H = I") {
    const HamiltonianField id = builtin("identity", {{"length", 40.0}});
    double previous = INFINITY;
    for (double N = 2.0; N <= 40.0; N += 0.5) {
        const double err = std::abs(m_function(id, Complex(0.0, 1.0), BoundaryAngle(pi), N) - Complex(0.0, 1.0));
        // Closed form |tan(iN) - i| = 2 / (e^{2N} + 1); below ~1e-16 rounding dominates.
        CHECK_THAT(err, WithinAbs(2.0 / (std::exp(2 * N) + 1.0), 1e-15));
        CHECK(err <= previous + 0x1.0p-52);
        previous = err;
        if (N >= 20.0) {
            CHECK(err <= 1e-8);
        }
    }
}

TEST_CASE("classification examples") {
    const Complex i(0.0, 1.0);
    const ClassificationReport decay = classify(builtin_extender("exp-decay", {{"rate", 1.0}, {"count", 400}}), i, kSchedule);
    CHECK(decay.verdict == Verdict::LimitCircle);
    CHECK(decay.defect_estimate == 2);
    CHECK_FALSE(decay.zero_norm_class);

    const ClassificationReport half = classify(builtin_extender("half-identity"), i, kSchedule);
    CHECK(half.verdict == Verdict::LimitPoint);
    CHECK(half.defect_estimate == 1);

    const ClassificationReport r1 = classify(builtin_extender("rank-one"), i, kSchedule);
    CHECK(r1.verdict == Verdict::LimitPoint);
    CHECK(r1.defect_estimate == 1);
    CHECK(r1.zero_norm_class);
    for (std::size_t k = 0; k < kSchedule.size(); ++k) {
        // u = (1, -i x): ∫ |1|^2 = N; v = (0, 1) has zero H-norm.
        CHECK_THAT(r1.norms_u[k], WithinRel(kSchedule[k], 1e-14));
        CHECK(r1.norms_v[k] == 0.0);
    }

    CHECK_THROWS_AS(classify(builtin_extender("identity"), i, {5, 10, 20}), std::invalid_argument);
    CHECK_THROWS_AS(classify(builtin_extender("identity"), i, {5, 10, 10, 20}), std::invalid_argument);
    CHECK_THROWS_AS(classify(builtin_extender("identity"), i, {5, 10, 20, 80}), DomainError);
}

TEST_CASE("half-identity norms against the closed-form oracle") {
    // H = I/2: u(x) = (cos(zx/2), -sin(zx/2)); ‖u‖² = ½ ∫ |cos|² + |sin|² = ½ ∫ cosh(Im z · x) dx.
    const Complex z(0.4, 1.0);
    const ClassificationReport rep = classify(builtin_extender("half-identity"), z, kSchedule);
    for (std::size_t k = 0; k < kSchedule.size(); ++k) {
        const double N = kSchedule[k];
        const double expected = 0.5 * std::sinh(z.imag() * N) / z.imag();
        CHECK_THAT(rep.norms_u[k], WithinRel(expected, 1e-12));
        CHECK_THAT(rep.norms_v[k], WithinRel(expected, 1e-12));
    }
}

TEST_CASE("defect constancy scans") {
    const std::vector<Complex> zs{{0, 1}, {0, -1}, {0, 0}, {1, 0}, {2.5, 0}};
    const DefectScan decay = defect_constancy_scan(builtin_extender("exp-decay", {{"count", 400}}), zs, kSchedule);
    REQUIRE(decay.entries.size() == zs.size());
    CHECK(decay.constant);
    for (const auto& e : decay.entries) {
        CHECK(e.defect_estimate == 2);
    }

    const DefectScan half = defect_constancy_scan(builtin_extender("half-identity"), {{0, 1}, {0, -1}}, kSchedule);
    CHECK(half.constant);
    for (const auto& e : half.entries) {
        CHECK(e.defect_estimate == 1);
    }
    CHECK(defect_constancy_scan(builtin_extender("identity"), {}, kSchedule).entries.empty());
}

TEST_CASE("de Branges checks") {
    const DeBrangesReport half = debranges_check(builtin("half-identity", {{"length", 40.0}}), kSchedule);
    CHECK(half.passed());
    CHECK(half.classification.verdict == Verdict::LimitPoint);

    const HamiltonianField random = trace_normalize(builtin("random-psd", {{"seed", 7}, {"count", 64}}));
    REQUIRE(random.total_length() >= 40.0);
    const DeBrangesReport rep = debranges_check(random, kSchedule);
    CHECK(rep.trace_check);
    CHECK(rep.norm_check);
    CHECK(rep.limit_point);
    for (std::size_t k = 0; k < kSchedule.size(); ++k) {
        CHECK_THAT(rep.constant_norm_sum[k], WithinRel(kSchedule[k], 1e-12));
    }

    CHECK_THROWS_AS(debranges_check(builtin("identity", {{"length", 40.0}}), kSchedule), DomainError);
}

TEST_CASE("trace-normalized builtin families are limit point") {
    for (int seed = 0; seed < 10; ++seed) {
        const HamiltonianField f = trace_normalize(builtin("random-psd", {{"seed", seed}, {"count", 64}}));
        REQUIRE(f.total_length() >= 40.0);
        CHECK(classify(truncating_extender(f), Complex(0.0, 1.0), kSchedule).verdict == Verdict::LimitPoint);
    }
    const HamiltonianField r1 = trace_normalize(builtin("rank-one", {{"length", 40.0}}));
    CHECK(classify(truncating_extender(r1), Complex(0.0, 1.0), kSchedule).verdict == Verdict::LimitPoint);
}
