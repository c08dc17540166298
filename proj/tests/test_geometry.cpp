#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperkg/geometry.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace hyperkg::geometry;
using testsupport::artanh_oracle;
using testsupport::random_ball_point;
using testsupport::random_vector;
using testsupport::tanh_oracle;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("curvature validation") {
    CHECK(Curvature(0.0).value() == 0.0);
    CHECK(Curvature(1.0).sqrt() == 1.0);
    CHECK(!Curvature(0.0).hyperbolic());
    CHECK(Curvature(0.33).hyperbolic());
    CHECK_THROWS_AS(Curvature(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(Curvature(std::nan("")), std::invalid_argument);
}

TEST_CASE("ball point stays inside the ball") {
    const Curvature c(1.0);
    CHECK_NOTHROW(BallPoint(vec2(0.5, 0.5), c));
    CHECK_THROWS_AS(BallPoint(vec2(1.0, 0.0), c), std::domain_error);
    CHECK_THROWS_AS(BallPoint(vec2(0.8, 0.8), c), std::domain_error);
    // c = 0 has no boundary.
    CHECK_NOTHROW(BallPoint(vec2(5.0, 5.0), Curvature(0.0)));
}

TEST_CASE("conformal factor") {
    const Curvature c(1.0);
    CHECK(conformal_factor(BallPoint::origin(3, c)) == doctest::Approx(2.0).epsilon(1e-15));
    // ||x||^2 = 0.5 at c = 1 gives 2 / (1 - 0.5) = 4.
    const BallPoint x(vec2(0.5, 0.5), c);
    CHECK(conformal_factor(x) == doctest::Approx(4.0).epsilon(1e-15));
    // Euclidean limit: always 2.
    CHECK(conformal_factor(BallPoint(vec2(3.0, 4.0), Curvature(0.0))) == 2.0);
}

TEST_CASE("mobius addition identities and inverse") {
    std::mt19937_64 rng(7001);
    for (const double cv : {0.1, 0.33, 1.0}) {
        const Curvature c(cv);
        for (int i = 0; i < 200; ++i) {
            const auto x = random_ball_point(rng, 4, c);
            const auto zero = BallPoint::origin(4, c);
            CHECK((mobius_add(x, zero).coords() - x.coords()).norm() <= 1e-12);
            CHECK((mobius_add(zero, x).coords() - x.coords()).norm() <= 1e-12);
            const BallPoint neg(-x.coords(), c);
            CHECK(mobius_add(neg, x).coords().norm() <= 1e-12);
        }
    }
}

TEST_CASE("mobius addition at c = 0 is vector addition") {
    const Curvature c(0.0);
    const BallPoint x(vec2(1.5, -2.0), c);
    const BallPoint y(vec2(0.25, 4.0), c);
    CHECK((mobius_add(x, y).coords() - vec2(1.75, 2.0)).norm() <= 1e-15);
}

TEST_CASE("mobius addition dimension and curvature checks") {
    const Curvature c(1.0);
    const BallPoint x(vec2(0.1, 0.1), c);
    Eigen::VectorXd three = Eigen::VectorXd::Zero(3);
    const BallPoint y(three, c);
    CHECK_THROWS_AS(mobius_add(x, y), std::invalid_argument);
    const BallPoint z(vec2(0.1, 0.1), Curvature(0.5));
    CHECK_THROWS_AS(mobius_add(x, z), std::invalid_argument);
}

TEST_CASE("distance basics") {
    const Curvature c(1.0);
    const BallPoint x(vec2(0.3, -0.2), c);
    CHECK(distance(x, x) == 0.0);

    // d(0, exp0(v)) = 2||v|| with ||v|| = 0.3.
    const TangentVector v(vec2(0.3, 0.0));
    const auto y = exp_map_origin(v, c);
    CHECK(distance(BallPoint::origin(2, c), y) == doctest::Approx(0.6).epsilon(1e-12));

    // Symmetry.
    std::mt19937_64 rng(7002);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_ball_point(rng, 3, c);
        const auto b = random_ball_point(rng, 3, c);
        CHECK(std::abs(distance(a, b) - distance(b, a)) <= 1e-10);
    }
}

TEST_CASE("distance small-curvature limit approaches 2||x - y||") {
    std::mt19937_64 rng(7003);
    const Curvature c(1e-8);
    for (int i = 0; i < 200; ++i) {
        const BallPoint x(random_vector(rng, 3), c);
        const BallPoint y(random_vector(rng, 3), c);
        const double euclid = 2.0 * (x.coords() - y.coords()).norm();
        if (euclid == 0.0) continue;
        CHECK(std::abs(distance(x, y) - euclid) / euclid <= 1e-4);
    }
    // c = 0 dispatches exactly.
    const Curvature zero(0.0);
    const BallPoint x(vec2(1.0, 2.0), zero);
    const BallPoint y(vec2(-1.0, 0.0), zero);
    CHECK(distance(x, y) == doctest::Approx(2.0 * std::sqrt(8.0)).epsilon(1e-15));
}

TEST_CASE("exponential map frozen value") {
    // tanh(1) computed with the exp-based oracle: 0.7615941559557649.
    const double expected = tanh_oracle(1.0);
    CHECK(expected == doctest::Approx(0.7615941559557649).epsilon(1e-15));

    const auto y = exp_map_origin(TangentVector(vec2(1.0, 0.0)), Curvature(1.0));
    CHECK(y.coords()[0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(y.coords()[1] == 0.0);
}

TEST_CASE("logarithmic map frozen value") {
    // artanh(tanh(1)) = 1 via the log-based oracle.
    const double boundary_arg = 0.7615941559557649;
    CHECK(artanh_oracle(boundary_arg) == doctest::Approx(1.0).epsilon(1e-12));

    const auto v = log_map_origin(BallPoint(vec2(boundary_arg, 0.0), Curvature(1.0)));
    CHECK(v.coords()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.coords()[1] == 0.0);
}

TEST_CASE("exp and log map edge cases") {
    const Curvature c(0.44);
    CHECK(exp_map_origin(TangentVector(Eigen::VectorXd::Zero(3)), c).coords().norm() == 0.0);
    CHECK(log_map_origin(BallPoint::origin(3, c)).coords().norm() == 0.0);
    // Output always strictly inside the ball, even for huge inputs.
    const auto far = exp_map_origin(TangentVector(vec2(500.0, 0.0)), c);
    CHECK(c.value() * far.coords().squaredNorm() < 1.0);
}

TEST_CASE("exp/log roundtrip and radial isometry") {
    std::mt19937_64 rng(7004);
    std::uniform_real_distribution<double> norm_pick(0.0, 3.0);
    for (const double cv : {0.26, 0.33, 0.44, 1.0}) {
        const Curvature c(cv);
        for (int i = 0; i < 500; ++i) {
            Eigen::VectorXd dir = random_vector(rng, 5);
            if (dir.norm() == 0.0) continue;
            dir *= norm_pick(rng) / dir.norm();
            const TangentVector v(dir);
            const auto y = exp_map_origin(v, c);
            const auto back = log_map_origin(y);
            const double tol = 1e-9 * std::max(1.0, dir.norm());
            CHECK((back.coords() - dir).norm() <= tol);
            CHECK(std::abs(distance(BallPoint::origin(5, c), y) - 2.0 * dir.norm()) <= tol);
        }
    }
}

TEST_CASE("projection clamps to the boundary margin") {
    const Curvature c(1.0);
    const auto inside = project_to_ball(vec2(0.25, 0.25), c);
    CHECK(inside.coords() == vec2(0.25, 0.25));

    const auto clamped = project_to_ball(vec2(2.0, 0.0), c, 1e-5);
    CHECK(clamped.coords().norm() == doctest::Approx(0.99999).epsilon(1e-12));

    const auto zero = project_to_ball(Eigen::VectorXd::Zero(2), c);
    CHECK(zero.coords().norm() == 0.0);

    // Scaled ball: norm clamps to (1 - eps)/sqrt(c).
    const Curvature half(0.25);
    const auto scaled = project_to_ball(vec2(9.0, 0.0), half, 1e-5);
    CHECK(scaled.coords().norm() == doctest::Approx(0.99999 / 0.5).epsilon(1e-12));
}

TEST_CASE("ball-valued operations stay closed") {
    std::mt19937_64 rng(7005);
    for (const double cv : {0.26, 1.0}) {
        const Curvature c(cv);
        for (int i = 0; i < 500; ++i) {
            const auto x = random_ball_point(rng, 3, c, 0.999);
            const auto y = random_ball_point(rng, 3, c, 0.999);
            const auto sum = mobius_add(x, y);
            CHECK(cv * sum.coords().squaredNorm() < 1.0);
        }
    }
}
