#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holored/potentials.hpp"
#include "oracles.hpp"

using namespace holored;
using std::numbers::pi;

namespace {

const MassTriple kEqual(1.0, 1.0, 1.0);

PairwiseSpec morse_spec(const MassTriple& m = kEqual, Clustering c = Clustering::Pair13_2) {
    const PairForm f = pair_form::Morse{1.0, 1.0, 1.0};
    return {{f, f, f}, m, c};
}

/// A model whose gradient has the wrong sign.
class SignFlipped final : public PotentialModel {
public:
    explicit SignFlipped(PotentialPtr inner) : inner_(std::move(inner)) {}
    double evaluate(const ShapePoint& p) const override { return inner_->evaluate(p); }
    ShapeGradient gradient(const ShapePoint& p) const override {
        const ShapeGradient g = inner_->gradient(p);
        return {-g.dr, -g.ds, -g.dphi};
    }
    std::string describe() const override { return "sign-flipped"; }

private:
    PotentialPtr inner_;
};

}  // namespace

TEST_CASE("shape-harmonic model") {
    const ShapePoint ref(1.0, 1.2, 1.5);
    const auto v = shape_harmonic(ref, {1.0, 1.0, 1.0});
    CHECK(v->evaluate(ref) == 0.0);
    const ShapeGradient g0 = v->gradient(ref);
    CHECK(g0.dr == 0.0);
    CHECK(g0.ds == 0.0);
    CHECK(g0.dphi == 0.0);
    CHECK(v->evaluate({1.1, 1.2, 1.5}) == doctest::Approx(0.005));
    CHECK_THROWS_AS(shape_harmonic(ref, {1.0, 0.0, 1.0}), PotentialDomainError);

    SUBCASE("exactly quadratic along the coordinate axes") {
        const auto w = shape_harmonic(ref, {2.0, 3.0, 0.5});
        for (double d : {0.05, 0.1, 0.2}) {
            CHECK(w->evaluate({1.0 + 2 * d, 1.2, 1.5}) == doctest::Approx(4 * w->evaluate({1.0 + d, 1.2, 1.5})));
            CHECK(w->evaluate({1.0, 1.2 + 2 * d, 1.5}) == doctest::Approx(4 * w->evaluate({1.0, 1.2 + d, 1.5})));
            CHECK(w->evaluate({1.0, 1.2, 1.5 + 2 * d}) == doctest::Approx(4 * w->evaluate({1.0, 1.2, 1.5 + d})));
        }
    }
    SUBCASE("gradient check") {
        const auto report = gradient_check(*v, 100, 1e-5, 1e-6, 3);
        CHECK(report.passed());
        CHECK(report.max_rel_error < 1e-10);
    }
}

TEST_CASE("pair forms") {
    const auto [vm, dm] = evaluate_pair_form(pair_form::Morse{2.0, 1.5, 1.0}, 1.0);
    CHECK(vm == 0.0);
    CHECK(dm == 0.0);
    const auto [vh, dh] = evaluate_pair_form(pair_form::Harmonic{4.0, 1.0}, 1.5);
    CHECK(vh == doctest::Approx(0.5));
    CHECK(dh == doctest::Approx(2.0));
    const auto [vl, dl] = evaluate_pair_form(pair_form::LennardJones{1.0, 1.0}, std::pow(2.0, 1.0 / 6.0));
    CHECK(vl == doctest::Approx(-1.0));
    CHECK(std::abs(dl) < 1e-12);
    CHECK_THROWS_AS(evaluate_pair_form(pair_form::LennardJones{1.0, 1.0}, 0.0), PotentialDomainError);
    CHECK_THROWS_AS(pairwise_potential({{pair_form::Morse{-1.0, 1.0, 1.0}, pair_form::None{}, pair_form::None{}},
                                        kEqual,
                                        Clustering::Pair13_2}),
                    PotentialDomainError);
}

TEST_CASE("pairwise potential") {
    SUBCASE("harmonic pairs vanish at their rest geometry") {
        const Positions x{Vec3(0.1, 0.2, -0.3), Vec3(1.2, 0.1, 0.4), Vec3(0.3, 1.4, 0.0)};
        const MassTriple m(1.0, 2.0, 3.0);
        const Clustering c = Clustering::Pair12_3;
        const ShapePoint p = shape_from_jacobi(jacobi_from_positions(m, x, c));
        const auto v = pairwise_potential({{pair_form::Harmonic{1.0, (x.x1 - x.x2).norm()},
                                            pair_form::Harmonic{2.0, (x.x1 - x.x3).norm()},
                                            pair_form::Harmonic{3.0, (x.x2 - x.x3).norm()}},
                                           m,
                                           c});
        CHECK(std::abs(v->evaluate(p)) < 1e-28);
        const ShapeGradient g = v->gradient(p);
        CHECK(std::abs(g.dr) + std::abs(g.ds) + std::abs(g.dphi) < 1e-13);
    }
    SUBCASE("depends only on the shape") {
        const auto v = pairwise_potential(morse_spec());
        std::mt19937_64 rng(19);
        for (int n = 0; n < 50; ++n) {
            const Positions x = oracle::random_triangle(rng);
            const Mat3 g = oracle::random_rotation(rng);
            const Vec3 t = oracle::random_vec(rng);
            const Positions y{g * x.x1 + t, g * x.x2 + t, g * x.x3 + t};
            const double a = v->evaluate(shape_from_jacobi(jacobi_from_positions(kEqual, x, Clustering::Pair13_2)));
            const double b = v->evaluate(shape_from_jacobi(jacobi_from_positions(kEqual, y, Clustering::Pair13_2)));
            REQUIRE(std::abs(a - b) < 1e-12);
        }
    }
    SUBCASE("invariant under a change of clustering") {
        std::mt19937_64 rng(31);
        for (int n = 0; n < 50; ++n) {
            const MassTriple m(oracle::uniform(rng, 0.5, 3), oracle::uniform(rng, 0.5, 3), oracle::uniform(rng, 0.5, 3));
            const PairwiseSpec base{{pair_form::Morse{1.0, 1.2, 0.9}, pair_form::Harmonic{2.0, 1.1},
                                     pair_form::LennardJones{0.3, 0.8}},
                                    m,
                                    Clustering::Pair13_2};
            const Positions x = oracle::random_triangle(rng, 0.3);
            double values[3];
            int k = 0;
            for (Clustering c : {Clustering::Pair13_2, Clustering::Pair12_3, Clustering::Pair23_1}) {
                PairwiseSpec spec = base;
                spec.clustering = c;
                values[k++] = PairwisePotential(spec).evaluate(shape_from_jacobi(jacobi_from_positions(m, x, c)));
            }
            REQUIRE(std::abs(values[0] - values[1]) < 1e-10 * std::max(1.0, std::abs(values[0])));
            REQUIRE(std::abs(values[0] - values[2]) < 1e-10 * std::max(1.0, std::abs(values[0])));
        }
    }
    SUBCASE("Morse chain-rule gradient") {
        const auto report = gradient_check(*pairwise_potential(morse_spec()), 100, 1e-5, 1e-6, 7);
        CHECK(report.passed());
        CHECK(report.max_rel_error < 1e-6);
        const auto unequal = gradient_check(*pairwise_potential(morse_spec(MassTriple(1.0, 16.0, 2.0), Clustering::Pair23_1)),
                                            100, 1e-5, 1e-6, 8);
        CHECK(unequal.passed());
    }
    SUBCASE("every shipped model passes the gradient check") {
        const PairForm lj = pair_form::LennardJones{0.5, 0.9};
        const PairForm h = pair_form::Harmonic{3.0, 1.2};
        const std::vector<PotentialPtr> models = {
            make_zero_potential(), shape_harmonic({1, 1, 1}, {1, 2, 3}), pairwise_potential(morse_spec()),
            pairwise_potential({{lj, lj, lj}, kEqual, Clustering::Pair13_2}),
            pairwise_potential({{h, pair_form::None{}, h}, MassTriple(2, 1, 1), Clustering::Pair12_3})};
        for (const auto& m : models) {
            const auto report = gradient_check(*m, 100, 1e-5, 1e-6, 9);
            INFO(m->describe());
            CHECK(report.passed());
        }
    }
}

TEST_CASE("gradient check reports a wrong gradient") {
    const SignFlipped bad(pairwise_potential(morse_spec()));
    const auto report = gradient_check(bad, 50, 1e-5, 1e-6, 5);
    CHECK_FALSE(report.passed());
    CHECK(report.max_rel_error > 0.1);
    CHECK(report.failures.size() > 0);
}
