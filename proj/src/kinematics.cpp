#include "holored/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace holored {

namespace {

bool finite3(const Vec3& v) { return v.allFinite(); }

int pair_slot(int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == 0 && b == 1) return 0;
    if (a == 0 && b == 2) return 1;
    return 2;
}

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

}  // namespace

MassTriple::MassTriple(double m1, double m2, double m3) : m_{m1, m2, m3} {
    for (double m : m_) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw DomainError(fmt::format("masses must be positive and finite, got ({}, {}, {})", m1, m2, m3));
        }
    }
}

ClusterIndices cluster_indices(Clustering c) {
    switch (c) {
    case Clustering::Pair13_2: return {0, 2, 1};
    case Clustering::Pair12_3: return {1, 0, 2};
    case Clustering::Pair23_1: return {2, 1, 0};
    }
    throw DomainError("unknown clustering");
}

std::string_view to_string(Clustering c) {
    switch (c) {
    case Clustering::Pair13_2: return "13+2";
    case Clustering::Pair12_3: return "12+3";
    case Clustering::Pair23_1: return "23+1";
    }
    return "?";
}

Clustering parse_clustering(std::string_view text) {
    std::string t;
    for (char ch : text) {
        if (ch != '(' && ch != ')' && ch != ',' && ch != ' ') t.push_back(ch);
    }
    if (t == "13+2" || t == "31+2") return Clustering::Pair13_2;
    if (t == "12+3" || t == "21+3") return Clustering::Pair12_3;
    if (t == "23+1" || t == "32+1") return Clustering::Pair23_1;
    throw DomainError(fmt::format("unknown clustering '{}'", text));
}

JacobiPair::JacobiPair(const Vec3& rvec, const Vec3& svec) : r_(rvec), s_(svec) {
    if (!finite3(rvec) || !finite3(svec)) throw DomainError("Jacobi vectors must be finite");
    const double rn = rvec.norm();
    const double sn = svec.norm();
    if (rn == 0.0 || sn == 0.0) throw CollinearConfiguration("a Jacobi vector vanishes");
    if (rvec.cross(svec).norm() < kCollinearTolerance * rn * sn) {
        throw CollinearConfiguration("Jacobi vectors are parallel");
    }
}

ShapePoint::ShapePoint(double r, double s, double phi) : r_(r), s_(s), phi_(phi) {
    if (!(r > 0.0) || !(s > 0.0) || !(phi > 0.0) || !(phi < std::numbers::pi) || !std::isfinite(r) ||
        !std::isfinite(s)) {
        throw DomainError(fmt::format("shape point ({}, {}, {}) outside r>0, s>0, 0<phi<pi", r, s, phi));
    }
}

WPoint::WPoint(double w1, double w2, double w3) : w1_(w1), w2_(w2), w3_(w3) {
    if (!(w3 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2) || !std::isfinite(w3)) {
        throw DomainError(fmt::format("w-point ({}, {}, {}) requires finite values and w3 > 0", w1, w2, w3));
    }
}

double reduced_mass_pair(const MassTriple& m, Clustering c) {
    const auto [i, j, k] = cluster_indices(c);
    return m[i] * m[j] / (m[i] + m[j]);
}

double reduced_mass_third(const MassTriple& m, Clustering c) {
    const auto [i, j, k] = cluster_indices(c);
    return m[k] * (m[i] + m[j]) / m.total();
}

JacobiPair jacobi_from_positions(const MassTriple& m, const Positions& x, Clustering c) {
    const auto [i, j, k] = cluster_indices(c);
    const Vec3 rel = x[i] - x[j];
    const double scale = std::max({x[i].norm(), x[j].norm(), x[k].norm(), 1.0});
    if (rel.norm() <= 1e-14 * scale) {
        throw CollisionalPair(fmt::format("particles {} and {} coincide", i + 1, j + 1));
    }
    const Vec3 pair_com = (m[i] * x[i] + m[j] * x[j]) / (m[i] + m[j]);
    const Vec3 rvec = std::sqrt(reduced_mass_pair(m, c)) * rel;
    const Vec3 svec = std::sqrt(reduced_mass_third(m, c)) * (x[k] - pair_com);
    try {
        return JacobiPair(rvec, svec);
    } catch (const CollinearConfiguration&) {
        throw CollinearConfiguration("the three positions are collinear");
    }
}

Positions positions_from_jacobi(const MassTriple& m, const JacobiPair& pair, Clustering c) {
    const auto [i, j, k] = cluster_indices(c);
    const double mij = m[i] + m[j];
    const Vec3 rel = pair.r() / std::sqrt(reduced_mass_pair(m, c));
    const Vec3 third = pair.s() / std::sqrt(reduced_mass_third(m, c));
    // Pair center chosen so that the total center of mass is the origin.
    const Vec3 center = -m[k] / m.total() * third;
    Positions x;
    x[i] = center + (m[j] / mij) * rel;
    x[j] = center - (m[i] / mij) * rel;
    x[k] = center + third;
    return x;
}

ShapePoint shape_from_jacobi(const JacobiPair& pair) {
    const double r = pair.r().norm();
    const double s = pair.s().norm();
    const double cross = pair.r().cross(pair.s()).norm();
    if (cross < kCollinearTolerance * r * s) throw CollinearConfiguration("Jacobi vectors are parallel");
    return ShapePoint(r, s, std::atan2(cross, pair.r().dot(pair.s())));
}

WPoint w_from_shape(const ShapePoint& p) {
    const double rs2 = 2.0 * p.r() * p.s();
    return WPoint(p.r() * p.r() - p.s() * p.s(), rs2 * std::cos(p.phi()), rs2 * std::sin(p.phi()));
}

ShapePoint shape_from_w(const WPoint& w) {
    const double rho = std::sqrt(w.w1() * w.w1() + w.w2() * w.w2() + w.w3() * w.w3());
    const double r2 = 0.5 * (rho + w.w1());
    const double s2 = 0.5 * (rho - w.w1());
    return ShapePoint(std::sqrt(r2), std::sqrt(s2), std::atan2(w.w3(), w.w2()));
}

JacobiPair democracy_rotate(const JacobiPair& pair, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return JacobiPair(c * pair.r() - s * pair.s(), s * pair.r() + c * pair.s());
}

double democracy_residual(const JacobiPair& a, const JacobiPair& b, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Vec3 dr = c * a.r() - s * a.s() - b.r();
    const Vec3 ds = s * a.r() + c * a.s() - b.s();
    return std::max(dr.cwiseAbs().maxCoeff(), ds.cwiseAbs().maxCoeff());
}

double democracy_angle(const MassTriple& m, const Positions& x, Clustering ca, Clustering cb) {
    const JacobiPair a = jacobi_from_positions(m, x, ca);
    const JacobiPair b = jacobi_from_positions(m, x, cb);
    if (ca == cb) return 0.0;

    const double w1a = a.r().squaredNorm() - a.s().squaredNorm();
    const double w2a = 2.0 * a.r().dot(a.s());
    const double w1b = b.r().squaredNorm() - b.s().squaredNorm();
    const double w2b = 2.0 * b.r().dot(b.s());
    const double size2 = a.r().squaredNorm() + a.s().squaredNorm();

    double theta = 0.0;
    if (std::hypot(w1a, w2a) > 1e-12 * size2) {
        theta = 0.5 * (std::atan2(w2b, w1b) - std::atan2(w2a, w1a));
    } else {
        // (w1, w2) vanishes: rotation angle follows from projecting b onto a.
        const double cos_t = (b.r().dot(a.r()) + b.s().dot(a.s())) / size2;
        const double sin_t = (b.s().dot(a.r()) - b.r().dot(a.s())) / size2;
        theta = std::atan2(sin_t, cos_t);
    }
    // (w1, w2) fixes theta only modulo pi.
    const double alt = theta + std::numbers::pi;
    if (democracy_residual(a, b, alt) < democracy_residual(a, b, theta)) theta = alt;
    theta = wrap_angle(theta);

    const double residual = democracy_residual(a, b, theta);
    const double tol = 1e-10 * std::max(1.0, std::sqrt(size2));
    if (!(residual <= tol)) {
        throw NoSuchRotation(fmt::format("democracy rotation residual {:.3e} exceeds {:.1e}", residual, tol));
    }
    return theta;
}

Vec3 angular_momentum(const FullState& st) {
    return st.config.r().cross(st.dr) + st.config.s().cross(st.ds);
}

double QuadraticDistance::value(const ShapePoint& p) const {
    return rr * p.r() * p.r() + ss * p.s() * p.s() + rs_cos * p.r() * p.s() * std::cos(p.phi());
}

std::array<QuadraticDistance, 3> distance_coefficients(const MassTriple& m, Clustering c) {
    const auto [i, j, k] = cluster_indices(c);
    const double mu_pair = reduced_mass_pair(m, c);
    const double mu_third = reduced_mass_third(m, c);
    const double mij = m[i] + m[j];
    // Offsets of particles i and j from the pair's center of mass, per unit r.
    const double fi = m[j] / mij;
    const double fj = m[i] / mij;
    const double cross = 1.0 / std::sqrt(mu_pair * mu_third);

    std::array<QuadraticDistance, 3> out{};
    out[static_cast<std::size_t>(pair_slot(i, j))] = {1.0 / mu_pair, 0.0, 0.0};
    out[static_cast<std::size_t>(pair_slot(i, k))] = {fi * fi / mu_pair, 1.0 / mu_third, -2.0 * fi * cross};
    out[static_cast<std::size_t>(pair_slot(j, k))] = {fj * fj / mu_pair, 1.0 / mu_third, 2.0 * fj * cross};
    return out;
}

PairDistances interatomic_distances(const MassTriple& m, Clustering c, const ShapePoint& p) {
    const auto coeffs = distance_coefficients(m, c);
    return {std::sqrt(coeffs[0].value(p)), std::sqrt(coeffs[1].value(p)), std::sqrt(coeffs[2].value(p))};
}

}  // namespace holored
