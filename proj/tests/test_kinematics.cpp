#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holored/kinematics.hpp"
#include "oracles.hpp"

using namespace holored;
using std::numbers::pi;

namespace {

const MassTriple kEqual(1.0, 1.0, 1.0);

double max_diff(const Vec3& a, const Vec3& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("mass triple rejects non-positive masses") {
    CHECK_THROWS_AS(MassTriple(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(MassTriple(1.0, -2.0, 1.0), DomainError);
    CHECK_THROWS_AS(MassTriple(1.0, 1.0, INFINITY), DomainError);
}

TEST_CASE("clustering names round trip") {
    for (Clustering c : {Clustering::Pair13_2, Clustering::Pair12_3, Clustering::Pair23_1}) {
        CHECK(parse_clustering(to_string(c)) == c);
    }
    CHECK(parse_clustering("(1,3)+2") == Clustering::Pair13_2);
    CHECK_THROWS_AS(parse_clustering("11+2"), DomainError);
}

TEST_CASE("jacobi vectors for the unit right triangle") {
    const Positions x{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)};
    const JacobiPair j = jacobi_from_positions(kEqual, x, Clustering::Pair13_2);
    CHECK(max_diff(j.r(), Vec3(std::sqrt(0.5), 0, 0)) < 1e-15);
    CHECK(max_diff(j.s(), std::sqrt(2.0 / 3.0) * Vec3(-0.5, 1, 0)) < 1e-15);

    SUBCASE("translation invariance") {
        const Vec3 t(3.5, -1.25, 7.0);
        const JacobiPair k = jacobi_from_positions(kEqual, {x.x1 + t, x.x2 + t, x.x3 + t}, Clustering::Pair13_2);
        CHECK(max_diff(j.r(), k.r()) < 1e-14);
        CHECK(max_diff(j.s(), k.s()) < 1e-14);
    }
    SUBCASE("inverse recovers positions relative to the center of mass") {
        const Positions y = positions_from_jacobi(kEqual, j, Clustering::Pair13_2);
        const Vec3 com(1.0 / 3.0, 1.0 / 3.0, 0.0);
        for (int i = 0; i < 3; ++i) CHECK(max_diff(y[i], x[i] - com) < 1e-15);
    }
}

TEST_CASE("jacobi construction rejects degenerate configurations") {
    CHECK_THROWS_AS(jacobi_from_positions(kEqual, {Vec3::Zero(), Vec3(0, 1, 0), Vec3::Zero()}, Clustering::Pair13_2),
                    CollisionalPair);
    CHECK_THROWS_AS(
        jacobi_from_positions(kEqual, {Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2)}, Clustering::Pair13_2),
        CollinearConfiguration);
    CHECK_THROWS_AS(JacobiPair(Vec3(1, 0, 0), Vec3(2, 0, 0)), CollinearConfiguration);
    CHECK_THROWS_AS(JacobiPair(Vec3(1, 0, 0), Vec3::Zero()), CollinearConfiguration);
}

TEST_CASE("positions_from_jacobi inverts the forward map") {
    const JacobiPair j(Vec3(std::sqrt(0.5), 0, 0), Vec3(0, std::sqrt(2.0 / 3.0), 0));
    const Positions x = positions_from_jacobi(kEqual, j, Clustering::Pair13_2);
    // x1 - x3 = rvec / sqrt(1/2), x2 - (x1 + x3)/2 = svec / sqrt(2/3)
    CHECK(max_diff(x.x1 - x.x3, Vec3(1, 0, 0)) < 1e-15);
    CHECK(max_diff(x.x2 - 0.5 * (x.x1 + x.x3), Vec3(0, 1, 0)) < 1e-15);
    CHECK((x.x1 + x.x2 + x.x3).norm() < 1e-15);
}

TEST_CASE("property: positions -> jacobi -> positions is the identity modulo translation") {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 100; ++n) {
        const MassTriple m(oracle::uniform(rng, 0.2, 5), oracle::uniform(rng, 0.2, 5), oracle::uniform(rng, 0.2, 5));
        const Positions x = oracle::random_triangle(rng);
        for (Clustering c : {Clustering::Pair13_2, Clustering::Pair12_3, Clustering::Pair23_1}) {
            const Positions y = positions_from_jacobi(m, jacobi_from_positions(m, x, c), c);
            const Vec3 com = (m[0] * x.x1 + m[1] * x.x2 + m[2] * x.x3) / m.total();
            for (int i = 0; i < 3; ++i) REQUIRE(max_diff(y[i], x[i] - com) < 1e-12);
            REQUIRE((m[0] * y.x1 + m[1] * y.x2 + m[2] * y.x3).norm() < 1e-12);
        }
    }
}

TEST_CASE("shape coordinates from jacobi vectors") {
    const ShapePoint a = shape_from_jacobi(JacobiPair(Vec3(1, 0, 0), Vec3(0, 1, 0)));
    CHECK(a.r() == doctest::Approx(1.0));
    CHECK(a.s() == doctest::Approx(1.0));
    CHECK(a.phi() == doctest::Approx(pi / 2));
    const ShapePoint b = shape_from_jacobi(JacobiPair(Vec3(1, 0, 0), Vec3(1, 1, 0)));
    CHECK(b.s() == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.phi() == doctest::Approx(pi / 4));
    CHECK_THROWS_AS(ShapePoint(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(ShapePoint(-1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("w coordinates") {
    const WPoint a = w_from_shape({1, 1, pi / 2});
    CHECK(std::abs(a.w1()) < 1e-15);
    CHECK(std::abs(a.w2()) < 1e-15);
    CHECK(a.w3() == doctest::Approx(2.0));
    const WPoint b = w_from_shape({2, 1, pi / 3});
    CHECK(b.w1() == doctest::Approx(3.0));
    CHECK(b.w2() == doctest::Approx(2.0));
    CHECK(b.w3() == doctest::Approx(2.0 * std::sqrt(3.0)));
    CHECK_THROWS_AS(WPoint(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(WPoint(1.0, 1.0, -1.0), DomainError);

    SUBCASE("property: round trip and norm identity") {
        std::mt19937_64 rng(5);
        for (int n = 0; n < 200; ++n) {
            const ShapePoint p(oracle::uniform(rng, 0.1, 3), oracle::uniform(rng, 0.1, 3),
                               oracle::uniform(rng, 0.01, pi - 0.01));
            const WPoint w = w_from_shape(p);
            const ShapePoint q = shape_from_w(w);
            REQUIRE(std::abs(q.r() - p.r()) < 1e-12);
            REQUIRE(std::abs(q.s() - p.s()) < 1e-12);
            REQUIRE(std::abs(q.phi() - p.phi()) < 1e-12);
            const double rho = p.r() * p.r() + p.s() * p.s();
            REQUIRE(std::abs(w.w1() * w.w1() + w.w2() * w.w2() + w.w3() * w.w3() - rho * rho) < 1e-12 * rho * rho);
        }
    }
}

TEST_CASE("democracy rotation") {
    const JacobiPair j(Vec3(0.3, -1.1, 0.4), Vec3(0.9, 0.2, -0.5));
    const JacobiPair same = democracy_rotate(j, 0.0);
    CHECK(max_diff(same.r(), j.r()) == 0.0);
    CHECK(max_diff(same.s(), j.s()) == 0.0);

    SUBCASE("property: cross product, size and w3 invariant; (w1, w2) turns by 2 theta") {
        std::mt19937_64 rng(17);
        for (int n = 0; n < 100; ++n) {
            const JacobiPair a(oracle::random_vec(rng), oracle::random_vec(rng));
            const double theta = oracle::uniform(rng, -pi, pi);
            const JacobiPair b = democracy_rotate(a, theta);
            REQUIRE(max_diff(a.r().cross(a.s()), b.r().cross(b.s())) < 1e-12);
            REQUIRE(std::abs(a.r().squaredNorm() + a.s().squaredNorm() - b.r().squaredNorm() - b.s().squaredNorm()) <
                    1e-12);
            const WPoint wa = w_from_shape(shape_from_jacobi(a));
            const WPoint wb = w_from_shape(shape_from_jacobi(b));
            const double c = std::cos(2 * theta), s = std::sin(2 * theta);
            REQUIRE(std::abs(wb.w1() - (c * wa.w1() - s * wa.w2())) < 1e-11);
            REQUIRE(std::abs(wb.w2() - (s * wa.w1() + c * wa.w2())) < 1e-11);
            REQUIRE(std::abs(wb.w3() - wa.w3()) < 1e-11);
        }
    }
}

TEST_CASE("democracy angle between clusterings") {
    std::mt19937_64 rng(23);
    const Positions x = oracle::random_triangle(rng);
    CHECK(democracy_angle(kEqual, x, Clustering::Pair13_2, Clustering::Pair13_2) == 0.0);

    SUBCASE("agrees with a brute-force scan") {
        for (int n = 0; n < 20; ++n) {
            const Positions y = oracle::random_triangle(rng);
            const MassTriple m = n % 2 ? kEqual
                                       : MassTriple(oracle::uniform(rng, 0.3, 4), oracle::uniform(rng, 0.3, 4),
                                                    oracle::uniform(rng, 0.3, 4));
            const JacobiPair a = jacobi_from_positions(m, y, Clustering::Pair13_2);
            const JacobiPair b = jacobi_from_positions(m, y, Clustering::Pair23_1);
            const double theta = democracy_angle(m, y, Clustering::Pair13_2, Clustering::Pair23_1);
            const double scanned = oracle::scan_rotation_angle(a, b);
            REQUIRE(std::abs(std::remainder(theta - scanned, 2 * pi)) < 1e-7);
            REQUIRE(democracy_residual(a, b, theta) < 1e-10);
        }
    }
    SUBCASE("equal masses give the kinematic rotation by a third of a turn") {
        // Cyclic relabeling of equal masses is a rotation by +-2pi/3.
        const double theta = democracy_angle(kEqual, x, Clustering::Pair13_2, Clustering::Pair12_3);
        CHECK(std::abs(std::abs(theta) - 2 * pi / 3) < 1e-12);
    }
    SUBCASE("w3 agrees between clusterings") {
        for (int n = 0; n < 50; ++n) {
            const Positions y = oracle::random_triangle(rng);
            const MassTriple m(oracle::uniform(rng, 0.3, 4), oracle::uniform(rng, 0.3, 4), oracle::uniform(rng, 0.3, 4));
            const double wa = w_from_shape(shape_from_jacobi(jacobi_from_positions(m, y, Clustering::Pair13_2))).w3();
            const double wb = w_from_shape(shape_from_jacobi(jacobi_from_positions(m, y, Clustering::Pair12_3))).w3();
            REQUIRE(std::abs(wa - wb) < 1e-12 * std::max(1.0, wa));
        }
    }
}

TEST_CASE("angular momentum") {
    const JacobiPair j(Vec3(1, 0, 0), Vec3(0.3, 1, 0));
    CHECK(angular_momentum({j, 2.0 * j.r(), -0.5 * j.s()}).norm() < 1e-15);
    CHECK(max_diff(angular_momentum({j, Vec3(0, 1, 0), Vec3::Zero()}), Vec3(0, 0, 1)) < 1e-15);

    SUBCASE("property: invariant under democracy rotation, equivariant under SO(3)") {
        std::mt19937_64 rng(3);
        for (int n = 0; n < 100; ++n) {
            const JacobiPair a(oracle::random_vec(rng), oracle::random_vec(rng));
            const Vec3 dr = oracle::random_vec(rng), ds = oracle::random_vec(rng);
            const Vec3 j0 = angular_momentum({a, dr, ds});

            const double t = oracle::uniform(rng, -pi, pi);
            const double c = std::cos(t), s = std::sin(t);
            const JacobiPair b = democracy_rotate(a, t);
            const Vec3 j1 = angular_momentum({b, c * dr - s * ds, s * dr + c * ds});
            REQUIRE(max_diff(j0, j1) < 1e-12);

            const Mat3 g = oracle::random_rotation(rng);
            const Vec3 j2 = angular_momentum({JacobiPair(g * a.r(), g * a.s()), g * dr, g * ds});
            REQUIRE(max_diff(g * j0, j2) < 1e-12);
        }
    }
}

TEST_CASE("interatomic distances") {
    const Positions x{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)};
    const ShapePoint p = shape_from_jacobi(jacobi_from_positions(kEqual, x, Clustering::Pair13_2));
    const PairDistances d = interatomic_distances(kEqual, Clustering::Pair13_2, p);
    CHECK(d.d13 == doctest::Approx(1.0));
    CHECK(d.d12 == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.d23 == doctest::Approx(1.0));

    SUBCASE("equilateral triangle") {
        const Positions e{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)};
        for (Clustering c : {Clustering::Pair13_2, Clustering::Pair12_3, Clustering::Pair23_1}) {
            const PairDistances q = interatomic_distances(kEqual, c, shape_from_jacobi(jacobi_from_positions(kEqual, e, c)));
            CHECK(q.d12 == doctest::Approx(1.0));
            CHECK(q.d13 == doctest::Approx(1.0));
            CHECK(q.d23 == doctest::Approx(1.0));
        }
    }
    SUBCASE("property: matches Cartesian distances") {
        std::mt19937_64 rng(29);
        for (int n = 0; n < 100; ++n) {
            const MassTriple m(oracle::uniform(rng, 0.2, 5), oracle::uniform(rng, 0.2, 5), oracle::uniform(rng, 0.2, 5));
            const Positions y = oracle::random_triangle(rng);
            for (Clustering c : {Clustering::Pair13_2, Clustering::Pair12_3, Clustering::Pair23_1}) {
                const JacobiPair j = jacobi_from_positions(m, y, c);
                const Positions z = positions_from_jacobi(m, j, c);
                const PairDistances q = interatomic_distances(m, c, shape_from_jacobi(j));
                REQUIRE(std::abs(q.d12 - (z.x1 - z.x2).norm()) < 1e-12);
                REQUIRE(std::abs(q.d13 - (z.x1 - z.x3).norm()) < 1e-12);
                REQUIRE(std::abs(q.d23 - (z.x2 - z.x3).norm()) < 1e-12);
            }
        }
    }
}
