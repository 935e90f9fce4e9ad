#include "holored/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/core.h>

namespace holored {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_pair_form(const PairForm& form) {
    std::visit(overloaded{
                   [](const pair_form::None&) {},
                   [](const pair_form::Harmonic& h) {
                       if (!(h.k > 0.0) || !(h.d0 > 0.0)) throw PotentialDomainError("harmonic pair needs k > 0, d0 > 0");
                   },
                   [](const pair_form::Morse& m) {
                       if (!(m.D > 0.0) || !(m.a > 0.0) || !(m.d0 > 0.0)) {
                           throw PotentialDomainError("Morse pair needs D > 0, a > 0, d0 > 0");
                       }
                   },
                   [](const pair_form::LennardJones& lj) {
                       if (!(lj.epsilon > 0.0) || !(lj.sigma > 0.0)) {
                           throw PotentialDomainError("Lennard-Jones pair needs epsilon > 0, sigma > 0");
                       }
                   },
               },
               form);
}

}  // namespace

ShapeHarmonic::ShapeHarmonic(const ShapePoint& reference, const std::array<double, 3>& stiffness)
    : ref_(reference), k_(stiffness) {
    for (double k : k_) {
        if (!(k > 0.0) || !std::isfinite(k)) throw PotentialDomainError("shape-harmonic stiffness must be positive");
    }
}

double ShapeHarmonic::evaluate(const ShapePoint& p) const {
    const double dr = p.r() - ref_.r();
    const double ds = p.s() - ref_.s();
    const double dphi = p.phi() - ref_.phi();
    return 0.5 * (k_[0] * dr * dr + k_[1] * ds * ds + k_[2] * dphi * dphi);
}

ShapeGradient ShapeHarmonic::gradient(const ShapePoint& p) const {
    return {k_[0] * (p.r() - ref_.r()), k_[1] * (p.s() - ref_.s()), k_[2] * (p.phi() - ref_.phi())};
}

std::string ShapeHarmonic::describe() const {
    return fmt::format("shape-harmonic reference=({:.17g}, {:.17g}, {:.17g}) k=({:.17g}, {:.17g}, {:.17g})", ref_.r(),
                       ref_.s(), ref_.phi(), k_[0], k_[1], k_[2]);
}

std::pair<double, double> evaluate_pair_form(const PairForm& form, double d) {
    return std::visit(overloaded{
                          [](const pair_form::None&) { return std::pair{0.0, 0.0}; },
                          [d](const pair_form::Harmonic& h) {
                              const double x = d - h.d0;
                              return std::pair{0.5 * h.k * x * x, h.k * x};
                          },
                          [d](const pair_form::Morse& m) {
                              const double e = std::exp(-m.a * (d - m.d0));
                              const double one_minus = 1.0 - e;
                              return std::pair{m.D * one_minus * one_minus, 2.0 * m.D * m.a * one_minus * e};
                          },
                          [d](const pair_form::LennardJones& lj) {
                              if (!(d > 0.0)) throw PotentialDomainError("Lennard-Jones pole at zero distance");
                              const double sr6 = std::pow(lj.sigma / d, 6);
                              const double sr12 = sr6 * sr6;
                              return std::pair{4.0 * lj.epsilon * (sr12 - sr6),
                                               4.0 * lj.epsilon * (-12.0 * sr12 + 6.0 * sr6) / d};
                          },
                      },
                      form);
}

std::string describe_pair_form(const PairForm& form) {
    return std::visit(overloaded{
                          [](const pair_form::None&) { return std::string("none"); },
                          [](const pair_form::Harmonic& h) { return fmt::format("harmonic {:.17g} {:.17g}", h.k, h.d0); },
                          [](const pair_form::Morse& m) {
                              return fmt::format("morse {:.17g} {:.17g} {:.17g}", m.D, m.a, m.d0);
                          },
                          [](const pair_form::LennardJones& lj) {
                              return fmt::format("lj {:.17g} {:.17g}", lj.epsilon, lj.sigma);
                          },
                      },
                      form);
}

PairwisePotential::PairwisePotential(PairwiseSpec spec)
    : spec_(std::move(spec)), coeffs_(distance_coefficients(spec_.masses, spec_.clustering)) {
    for (const auto& f : spec_.pairs) validate_pair_form(f);
}

double PairwisePotential::evaluate(const ShapePoint& p) const {
    double v = 0.0;
    for (std::size_t n = 0; n < 3; ++n) {
        const double d2 = coeffs_[n].value(p);
        if (!(d2 > 0.0)) throw PotentialDomainError("coincident particles");
        v += evaluate_pair_form(spec_.pairs[n], std::sqrt(d2)).first;
    }
    if (!std::isfinite(v)) throw PotentialDomainError("potential is not finite");
    return v;
}

ShapeGradient PairwisePotential::gradient(const ShapePoint& p) const {
    const double c = std::cos(p.phi());
    const double sn = std::sin(p.phi());
    ShapeGradient g;
    for (std::size_t n = 0; n < 3; ++n) {
        const QuadraticDistance& q = coeffs_[n];
        const double d2 = q.value(p);
        if (!(d2 > 0.0)) throw PotentialDomainError("coincident particles");
        const double d = std::sqrt(d2);
        // dv/d(d^2) = v'(d) / (2d); the d^2 derivatives come straight from the law of cosines.
        const double dv_dd2 = evaluate_pair_form(spec_.pairs[n], d).second / (2.0 * d);
        g.dr += dv_dd2 * (2.0 * q.rr * p.r() + q.rs_cos * p.s() * c);
        g.ds += dv_dd2 * (2.0 * q.ss * p.s() + q.rs_cos * p.r() * c);
        g.dphi += dv_dd2 * (-q.rs_cos * p.r() * p.s() * sn);
    }
    return g;
}

std::string PairwisePotential::describe() const {
    return fmt::format("pairwise clustering={} masses=({:.17g}, {:.17g}, {:.17g}) pair12=[{}] pair13=[{}] pair23=[{}]",
                       to_string(spec_.clustering), spec_.masses[0], spec_.masses[1], spec_.masses[2],
                       describe_pair_form(spec_.pairs[0]), describe_pair_form(spec_.pairs[1]),
                       describe_pair_form(spec_.pairs[2]));
}

PotentialPtr make_zero_potential() { return std::make_shared<ZeroPotential>(); }

PotentialPtr shape_harmonic(const ShapePoint& reference, const std::array<double, 3>& stiffness) {
    return std::make_shared<ShapeHarmonic>(reference, stiffness);
}

PotentialPtr pairwise_potential(PairwiseSpec spec) { return std::make_shared<PairwisePotential>(std::move(spec)); }

GradientCheckReport gradient_check(const PotentialModel& v, std::size_t samples, double step, double tol,
                                   std::uint64_t seed, const ShapeBox& box) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(box.r_min, box.r_max);
    std::uniform_real_distribution<double> us(box.s_min, box.s_max);
    std::uniform_real_distribution<double> uphi(box.phi_min, box.phi_max);

    GradientCheckReport report;
    report.samples = samples;
    for (std::size_t n = 0; n < samples; ++n) {
        const ShapePoint p(ur(rng), us(rng), uphi(rng));
        const ShapeGradient g = v.gradient(p);
        const double fd_r = (v.evaluate({p.r() + step, p.s(), p.phi()}) - v.evaluate({p.r() - step, p.s(), p.phi()})) /
                            (2.0 * step);
        const double fd_s = (v.evaluate({p.r(), p.s() + step, p.phi()}) - v.evaluate({p.r(), p.s() - step, p.phi()})) /
                            (2.0 * step);
        const double fd_phi =
            (v.evaluate({p.r(), p.s(), p.phi() + step}) - v.evaluate({p.r(), p.s(), p.phi() - step})) / (2.0 * step);
        const double scale = std::max({1.0, std::abs(fd_r), std::abs(fd_s), std::abs(fd_phi)});
        const double err =
            std::max({std::abs(g.dr - fd_r), std::abs(g.ds - fd_s), std::abs(g.dphi - fd_phi)}) / scale;
        report.max_rel_error = std::max(report.max_rel_error, err);
        if (!(err <= tol)) report.failures.push_back(p);
    }
    return report;
}

}  // namespace holored
