#include "holored/connection.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/core.h>

namespace holored {

namespace {

Mat3 hat(const Vec3& w) {
    Mat3 m;
    m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
    return m;
}

int even_intervals(int points) {
    if (points < 2) throw QuadratureFailure(fmt::format("need at least 2 quadrature points, got {}", points));
    return points % 2 == 0 ? points : points + 1;
}

/// Composite Simpson of f over [a, b] with n (even) subintervals.
template <class F>
double simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
    return sum * h / 3.0;
}

/// dA(e_a, e_b) for coordinate directions a, b.
double curvature_component(const Curvature& f, ShapeAxis a, ShapeAxis b) {
    auto one_way = [&](ShapeAxis x, ShapeAxis y) -> double {
        if (x == ShapeAxis::R && y == ShapeAxis::Phi) return f.r_phi;
        if (x == ShapeAxis::S && y == ShapeAxis::Phi) return f.s_phi;
        return 0.0;
    };
    return one_way(a, b) - one_way(b, a);
}

struct BodyShape {
    Vec3 rho, sigma, drho, dsigma;
};

BodyShape body_shape(const ShapePoint& p, const ShapeTangent& v) {
    const double c = std::cos(p.phi());
    const double sn = std::sin(p.phi());
    return {Vec3(p.r(), 0.0, 0.0), Vec3(p.s() * c, p.s() * sn, 0.0), Vec3(v.dr, 0.0, 0.0),
            Vec3(v.ds * c - p.s() * sn * v.dphi, v.ds * sn + p.s() * c * v.dphi, 0.0)};
}

/// Spatial angular velocity that cancels the angular momentum generated by
/// the shape change, plus the optional spurious spin about u1.
Vec3 lift_angular_velocity(const ShapeSegment& seg, double tl, const Mat3& u, const LiftOptions& options) {
    const BodyShape b = body_shape(seg.at(tl), seg.tangent(tl));
    const Vec3 x1 = u * b.rho;
    const Vec3 x2 = u * b.sigma;
    const Vec3 j_shape = x1.cross(u * b.drho) + x2.cross(u * b.dsigma);
    const Mat3 inertia = (x1.squaredNorm() + x2.squaredNorm()) * Mat3::Identity() - x1 * x1.transpose() -
                         x2 * x2.transpose();
    Vec3 omega = -inertia.partialPivLu().solve(j_shape);
    if (options.extra_u1_rate != 0.0) omega += options.extra_u1_rate * u.col(0).normalized();
    return omega;
}

std::size_t segment_index(const ShapePath& path, double t) {
    const double last = static_cast<double>(path.size() - 1);
    return static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, last));
}

}  // namespace

ShapeSegment ShapeSegment::analytic(PositionFn position, TangentFn tangent) {
    ShapeSegment seg;
    seg.position_ = std::move(position);
    seg.tangent_ = std::move(tangent);
    return seg;
}

ShapeSegment ShapeSegment::line(const ShapePoint& from, const ShapePoint& to) {
    const ShapeTangent d{to.r() - from.r(), to.s() - from.s(), to.phi() - from.phi()};
    return analytic(
        [from, d](double t) { return ShapePoint(from.r() + t * d.dr, from.s() + t * d.ds, from.phi() + t * d.dphi); },
        [d](double) { return d; });
}

ShapeSegment ShapeSegment::polyline(std::vector<ShapePoint> vertices) {
    if (vertices.size() < 2) throw QuadratureFailure("a polyline needs at least two vertices");
    ShapeSegment seg;
    seg.vertices_ = std::move(vertices);
    return seg;
}

ShapePoint ShapeSegment::at(double t) const {
    if (!is_polyline()) return position_(t);
    const std::size_t pieces = vertices_.size() - 1;
    const double u = std::clamp(t, 0.0, 1.0) * static_cast<double>(pieces);
    const std::size_t k = std::min(static_cast<std::size_t>(u), pieces - 1);
    const double f = u - static_cast<double>(k);
    const ShapePoint& a = vertices_[k];
    const ShapePoint& b = vertices_[k + 1];
    return ShapePoint(a.r() + f * (b.r() - a.r()), a.s() + f * (b.s() - a.s()), a.phi() + f * (b.phi() - a.phi()));
}

ShapeTangent ShapeSegment::tangent(double t) const {
    if (!is_polyline()) return tangent_(t);
    const std::size_t pieces = vertices_.size() - 1;
    const double n = static_cast<double>(pieces);
    const std::size_t k = std::min(static_cast<std::size_t>(std::clamp(t, 0.0, 1.0) * n), pieces - 1);
    const ShapePoint& a = vertices_[k];
    const ShapePoint& b = vertices_[k + 1];
    return {(b.r() - a.r()) * n, (b.s() - a.s()) * n, (b.phi() - a.phi()) * n};
}

ShapePath::ShapePath(std::vector<ShapeSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw DomainError("a shape path needs at least one segment");
    for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
        const ShapePoint a = segments_[k].at(1.0);
        const ShapePoint b = segments_[k + 1].at(0.0);
        const double gap = std::max({std::abs(a.r() - b.r()), std::abs(a.s() - b.s()), std::abs(a.phi() - b.phi())});
        if (gap > 1e-12) throw DomainError(fmt::format("segments {} and {} do not join (gap {:.3e})", k, k + 1, gap));
    }
}

ShapePath ShapePath::r_phi_rectangle(double s, double r0, double r1, double phi0, double phi1) {
    const ShapePoint a(r0, s, phi0), b(r1, s, phi0), c(r1, s, phi1), d(r0, s, phi1);
    return ShapePath({ShapeSegment::line(a, b), ShapeSegment::line(b, c), ShapeSegment::line(c, d),
                      ShapeSegment::line(d, a)});
}

ShapePath ShapePath::s_phi_rectangle(double r, double s0, double s1, double phi0, double phi1) {
    const ShapePoint a(r, s0, phi0), b(r, s1, phi0), c(r, s1, phi1), d(r, s0, phi1);
    return ShapePath({ShapeSegment::line(a, b), ShapeSegment::line(b, c), ShapeSegment::line(c, d),
                      ShapeSegment::line(d, a)});
}

bool ShapePath::closed(double tol) const {
    const ShapePoint a = start();
    const ShapePoint b = end();
    return std::max({std::abs(a.r() - b.r()), std::abs(a.s() - b.s()), std::abs(a.phi() - b.phi())}) <= tol;
}

ShapePath ShapePath::then(const ShapePath& next) const {
    std::vector<ShapeSegment> all = segments_;
    all.insert(all.end(), next.segments_.begin(), next.segments_.end());
    return ShapePath(std::move(all));
}

ShapePath ShapePath::reversed() const {
    std::vector<ShapeSegment> out;
    out.reserve(segments_.size());
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
        if (it->is_polyline()) {
            std::vector<ShapePoint> v(it->vertices().rbegin(), it->vertices().rend());
            out.push_back(ShapeSegment::polyline(std::move(v)));
        } else {
            const ShapeSegment seg = *it;
            out.push_back(ShapeSegment::analytic([seg](double t) { return seg.at(1.0 - t); },
                                                 [seg](double t) {
                                                     const ShapeTangent d = seg.tangent(1.0 - t);
                                                     return ShapeTangent{-d.dr, -d.ds, -d.dphi};
                                                 }));
        }
    }
    return ShapePath(std::move(out));
}

double gauge_potential(const ShapePoint& p) {
    const double s2 = p.s() * p.s();
    return s2 / (p.r() * p.r() + s2);
}

double horizontal_gamma_rate(const ShapePoint& p, double dphi_dt) { return -gauge_potential(p) * dphi_dt; }

double zeta(const ShapePoint& p, double dphi_dt, double dgamma_dt) {
    const double r2 = p.r() * p.r();
    const double s2 = p.s() * p.s();
    return s2 * dphi_dt + (r2 + s2) * dgamma_dt;
}

Curvature curvature(const ShapePoint& p) {
    const double r = p.r();
    const double s = p.s();
    const double rho = r * r + s * s;
    return {-2.0 * r * s * s / (rho * rho), 2.0 * r * r * s / (rho * rho)};
}

double holonomy_of_path(const ShapePath& path, int points_per_segment) {
    const int n = even_intervals(points_per_segment);
    double total = 0.0;
    for (const ShapeSegment& seg : path.segments()) {
        auto integrand = [&seg](double t) { return -gauge_potential(seg.at(t)) * seg.tangent(t).dphi; };
        if (!seg.is_polyline()) {
            total += simpson(integrand, 0.0, 1.0, n);
            continue;
        }
        const std::size_t count = seg.vertices().size();
        if (count < 3) {
            throw QuadratureFailure(fmt::format("polyline segment has {} vertices; at least 3 are required", count));
        }
        // Integrate piece by piece so the kinks are never straddled.
        const double width = 1.0 / static_cast<double>(count - 1);
        for (std::size_t k = 0; k + 1 < count; ++k) {
            const double a = static_cast<double>(k) * width;
            const double mid = a + 0.5 * width;
            const double dphi = seg.tangent(mid).dphi;
            total += simpson([&](double t) { return -gauge_potential(seg.at(t)) * dphi; }, a, a + width, n);
        }
    }
    return total;
}

double curvature_flux(const ShapePatch& patch, int points) {
    const int n = even_intervals(points);
    if (patch.u_axis == patch.v_axis) return 0.0;
    auto point_at = [&](double u, double v) {
        double c[3] = {patch.base.r(), patch.base.s(), patch.base.phi()};
        c[static_cast<int>(patch.u_axis)] = u;
        c[static_cast<int>(patch.v_axis)] = v;
        return ShapePoint(c[0], c[1], c[2]);
    };
    auto inner = [&](double u) {
        return simpson(
            [&](double v) { return curvature_component(curvature(point_at(u, v)), patch.u_axis, patch.v_axis); },
            patch.v0, patch.v1, n);
    };
    return simpson(inner, patch.u0, patch.u1, n);
}

FrameState::FrameState(double t, const ShapePoint& shape, const Mat3& frame) : t_(t), shape_(shape), frame_(frame) {
    const double ortho = (frame.transpose() * frame - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (!(ortho < 1e-10) || !(frame.determinant() > 0.0)) {
        throw DomainError(fmt::format("frame is not a proper rotation (orthogonality error {:.3e})", ortho));
    }
}

JacobiPair FrameState::jacobi() const {
    const double c = std::cos(shape_.phi());
    const double sn = std::sin(shape_.phi());
    return JacobiPair(shape_.r() * u1(), shape_.s() * (c * u1() + sn * u2()));
}

Mat3 nearest_rotation(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 d = Mat3::Identity();
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
    return svd.matrixU() * d * svd.matrixV().transpose();
}

std::vector<FrameState> horizontal_lift_full(const ShapePath& path, const Mat3& initial_frame, double dt,
                                             const LiftOptions& options) {
    if (!(dt > 0.0)) throw DomainError("lift step must be positive");
    const int steps = std::max(1, static_cast<int>(std::ceil(1.0 / dt - 1e-9)));
    const double h = 1.0 / steps;

    std::vector<FrameState> out;
    out.reserve(path.size() * static_cast<std::size_t>(steps) + 1);
    out.emplace_back(0.0, path.start(), initial_frame);

    Mat3 u = initial_frame;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const ShapeSegment& seg = path.segments()[k];
        auto rhs = [&](double tl, const Mat3& m) { return Mat3(hat(lift_angular_velocity(seg, tl, m, options)) * m); };
        for (int n = 0; n < steps; ++n) {
            const double t0 = n * h;
            const Mat3 k1 = rhs(t0, u);
            const Mat3 k2 = rhs(t0 + 0.5 * h, u + 0.5 * h * k1);
            const Mat3 k3 = rhs(t0 + 0.5 * h, u + 0.5 * h * k2);
            const Mat3 k4 = rhs(t0 + h, u + h * k3);
            const Mat3 next = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double drift = (next.transpose() * next - Mat3::Identity()).cwiseAbs().maxCoeff();
            if (drift > 1e-8) {
                throw StepTooLarge(fmt::format("frame orthogonality drifted by {:.3e} at t={}; reduce the step", drift,
                                               static_cast<double>(k) + t0));
            }
            u = nearest_rotation(next);
            const double tl = (n + 1 == steps) ? 1.0 : (n + 1) * h;
            out.emplace_back(static_cast<double>(k) + tl, seg.at(tl), u);
        }
    }
    return out;
}

FullState lifted_state(const ShapePath& path, double t, const Mat3& frame, const LiftOptions& options) {
    const std::size_t k = segment_index(path, t);
    const ShapeSegment& seg = path.segments()[k];
    const double tl = t - static_cast<double>(k);
    const ShapePoint p = seg.at(tl);
    const BodyShape b = body_shape(p, seg.tangent(tl));
    const Vec3 omega = lift_angular_velocity(seg, tl, frame, options);
    const Vec3 x1 = frame * b.rho;
    const Vec3 x2 = frame * b.sigma;
    return {JacobiPair(x1, x2), frame * b.drho + omega.cross(x1), frame * b.dsigma + omega.cross(x2)};
}

double plane_drift(const std::vector<FrameState>& states) {
    if (states.empty()) return 0.0;
    const Vec3 n0 = states.front().u3();
    double worst = 0.0;
    for (const FrameState& st : states) {
        const Vec3 n = st.u3();
        worst = std::max(worst, std::atan2(n0.cross(n).norm(), n0.dot(n)));
    }
    return worst;
}

double net_in_plane_rotation(const std::vector<FrameState>& states) {
    if (states.size() < 2) return 0.0;
    const Vec3 n0 = states.front().u3();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
        const Vec3 a = states[k].u1();
        const Vec3 b = states[k + 1].u1();
        total += std::atan2(n0.dot(a.cross(b)), a.dot(b));
    }
    return total;
}

}  // namespace holored
