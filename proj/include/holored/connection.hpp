#pragma once

#include <functional>
#include <vector>

#include "holored/kinematics.hpp"

namespace holored {

/// Rates (dr, ds, dphi) of a shape-space curve.
struct ShapeTangent {
    double dr = 0.0;
    double ds = 0.0;
    double dphi = 0.0;
};

/// One piece of a shape-space path, parametrized over [0, 1].
///
/// Analytic segments carry their own derivative. Polyline segments are
/// piecewise linear through their vertices (uniform parameter spacing); the
/// derivative on each piece is the centered difference about the piece
/// midpoint.
class ShapeSegment {
public:
    using PositionFn = std::function<ShapePoint(double)>;
    using TangentFn = std::function<ShapeTangent(double)>;

    static ShapeSegment analytic(PositionFn position, TangentFn tangent);
    /// Straight line in (r, s, phi) coordinates.
    static ShapeSegment line(const ShapePoint& from, const ShapePoint& to);
    /// Polyline through `vertices` (at least two).
    static ShapeSegment polyline(std::vector<ShapePoint> vertices);

    ShapePoint at(double t) const;
    ShapeTangent tangent(double t) const;

    bool is_polyline() const { return !vertices_.empty(); }
    const std::vector<ShapePoint>& vertices() const { return vertices_; }

private:
    ShapeSegment() = default;

    PositionFn position_;
    TangentFn tangent_;
    std::vector<ShapePoint> vertices_;
};

/// Ordered chain of segments; consecutive endpoints coincide to 1e-12.
class ShapePath {
public:
    explicit ShapePath(std::vector<ShapeSegment> segments);

    /// Closed rectangle in the (r, phi) plane at fixed s, traversed
    /// r: r0->r1 at phi0, phi: phi0->phi1 at r1, r: r1->r0 at phi1, phi: phi1->phi0 at r0.
    static ShapePath r_phi_rectangle(double s, double r0, double r1, double phi0, double phi1);
    /// Same loop shape in the (s, phi) plane at fixed r.
    static ShapePath s_phi_rectangle(double r, double s0, double s1, double phi0, double phi1);

    const std::vector<ShapeSegment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    ShapePoint start() const { return segments_.front().at(0.0); }
    ShapePoint end() const { return segments_.back().at(1.0); }
    bool closed(double tol = 1e-12) const;

    /// Concatenation (endpoints must match).
    ShapePath then(const ShapePath& next) const;
    /// Same curve traversed backwards.
    ShapePath reversed() const;

private:
    std::vector<ShapeSegment> segments_;
};

/// Gauge potential A_phi = s^2 / (r^2 + s^2) of the connection restricted to
/// the holonomy bundle.
double gauge_potential(const ShapePoint& p);

/// Fiber rate of the horizontal lift, dgamma/dt = -A_phi dphi/dt.
double horizontal_gamma_rate(const ShapePoint& p, double dphi_dt);

/// zeta = s^2 dphi + (r^2 + s^2) dgamma evaluated on a velocity.
double zeta(const ShapePoint& p, double dphi_dt, double dgamma_dt);

struct Curvature {
    double r_phi;  ///< dA_phi/dr
    double s_phi;  ///< dA_phi/ds
};

Curvature curvature(const ShapePoint& p);

inline constexpr int kDefaultQuadraturePoints = 64;

/// Fiber displacement -integral A_phi dphi of the horizontal lift of `path`.
/// Composite Simpson with `points_per_segment` subintervals (rounded up to
/// even) per segment, or per polyline piece.
double holonomy_of_path(const ShapePath& path, int points_per_segment = kDefaultQuadraturePoints);

/// Coordinate rectangle in shape space spanned by two of (r, s, phi).
enum class ShapeAxis { R, S, Phi };

struct ShapePatch {
    ShapePoint base;  ///< supplies the coordinate held fixed
    ShapeAxis u_axis;
    double u0, u1;
    ShapeAxis v_axis;
    double v0, v1;
};

/// Integral of the curvature two-form dA over the patch, oriented by (u, v).
/// Tensor-product Simpson with `points` subintervals per direction.
double curvature_flux(const ShapePatch& patch, int points = kDefaultQuadraturePoints);

/// A point of the lifted curve: shape plus body frame (columns u1, u2, u3)
/// with rvec = r u1 and svec = s cos(phi) u1 + s sin(phi) u2.
class FrameState {
public:
    /// Throws DomainError unless the frame is in SO(3) to 1e-10.
    FrameState(double t, const ShapePoint& shape, const Mat3& frame);

    double t() const { return t_; }
    const ShapePoint& shape() const { return shape_; }
    const Mat3& frame() const { return frame_; }
    Vec3 u1() const { return frame_.col(0); }
    Vec3 u2() const { return frame_.col(1); }
    Vec3 u3() const { return frame_.col(2); }

    JacobiPair jacobi() const;

private:
    double t_;
    ShapePoint shape_;
    Mat3 frame_;
};

struct LiftOptions {
    /// Extra spin about u1 added to the horizontal angular velocity. Nonzero
    /// values give a deliberately non-horizontal lift (negative control).
    double extra_u1_rate = 0.0;
};

/// Lifts `path` into the full Jacobi space so that the angular momentum
/// vanishes along it. Each segment takes unit time; the frame angular
/// velocity solves I(x) omega = -(shape part of J) and is integrated with
/// classical RK4 plus polar re-orthonormalization. Throws StepTooLarge if an
/// RK4 step drifts from orthogonality by more than 1e-8.
std::vector<FrameState> horizontal_lift_full(const ShapePath& path, const Mat3& initial_frame, double dt,
                                             const LiftOptions& options = {});

/// Jacobi velocities of the lifted curve at time t for the given frame.
FullState lifted_state(const ShapePath& path, double t, const Mat3& frame, const LiftOptions& options = {});

/// Max angle between u3(t) and u3(0).
double plane_drift(const std::vector<FrameState>& states);

/// Accumulated rotation of u1 about the initial u3, summed step by step (unwrapped).
double net_in_plane_rotation(const std::vector<FrameState>& states);

/// Closest rotation to `m` (polar factor).
Mat3 nearest_rotation(const Mat3& m);

}  // namespace holored
