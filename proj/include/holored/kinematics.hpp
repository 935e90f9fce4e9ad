#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "holored/errors.hpp"

namespace holored {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// |sin phi| below this is treated as a collinear (excluded) configuration.
inline constexpr double kCollinearTolerance = 1e-12;

class MassTriple {
public:
    MassTriple(double m1, double m2, double m3);

    double operator[](int i) const { return m_[static_cast<std::size_t>(i)]; }
    double total() const { return m_[0] + m_[1] + m_[2]; }

private:
    std::array<double, 3> m_;
};

/// Which pair the first Jacobi vector connects. The three choices are cyclic
/// relabelings of each other, so the map between any two of them is a
/// proper rotation of the (rvec, svec) pair.
enum class Clustering {
    Pair13_2,  ///< rvec ~ x1 - x3, svec ~ x2 - com(1,3)
    Pair12_3,  ///< rvec ~ x2 - x1, svec ~ x3 - com(1,2)
    Pair23_1,  ///< rvec ~ x3 - x2, svec ~ x1 - com(2,3)
};

/// Zero-based particle indices (i, j, k) with rvec ~ x_i - x_j and k the
/// third particle.
struct ClusterIndices {
    int i, j, k;
};

ClusterIndices cluster_indices(Clustering c);
std::string_view to_string(Clustering c);
/// Accepts "13+2", "(1,3)+2", "12+3", "23+1" and the cyclic spellings "21+3", "32+1".
Clustering parse_clustering(std::string_view text);

/// Two mass-weighted Jacobi vectors spanning a plane (a point of the
/// translation-reduced configuration space).
class JacobiPair {
public:
    /// Throws CollinearConfiguration if either vector vanishes or they are parallel.
    JacobiPair(const Vec3& rvec, const Vec3& svec);

    const Vec3& r() const { return r_; }
    const Vec3& s() const { return s_; }

private:
    Vec3 r_, s_;
};

/// Internal coordinates (r, s, phi) with r, s > 0 and 0 < phi < pi.
class ShapePoint {
public:
    /// Throws DomainError outside the open domain.
    ShapePoint(double r, double s, double phi);

    double r() const { return r_; }
    double s() const { return s_; }
    double phi() const { return phi_; }

private:
    double r_, s_, phi_;
};

/// Quadratic shape coordinates w1 = r^2 - s^2, w2 = 2rs cos phi, w3 = 2rs sin phi.
class WPoint {
public:
    /// Throws DomainError unless w3 > 0.
    WPoint(double w1, double w2, double w3);

    double w1() const { return w1_; }
    double w2() const { return w2_; }
    double w3() const { return w3_; }

private:
    double w1_, w2_, w3_;
};

/// Jacobi configuration with the time derivatives of both vectors.
struct FullState {
    JacobiPair config;
    Vec3 dr;
    Vec3 ds;
};

struct Positions {
    Vec3 x1, x2, x3;

    const Vec3& operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
    Vec3& operator[](int i) { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
};

double reduced_mass_pair(const MassTriple& m, Clustering c);
double reduced_mass_third(const MassTriple& m, Clustering c);

JacobiPair jacobi_from_positions(const MassTriple& m, const Positions& x, Clustering c);

/// Inverse of jacobi_from_positions with the center of mass placed at the origin.
Positions positions_from_jacobi(const MassTriple& m, const JacobiPair& pair, Clustering c);

ShapePoint shape_from_jacobi(const JacobiPair& pair);

WPoint w_from_shape(const ShapePoint& p);
ShapePoint shape_from_w(const WPoint& w);

/// Kinematic (democracy) rotation mixing the two Jacobi vectors.
JacobiPair democracy_rotate(const JacobiPair& pair, double theta);

/// Angle theta with democracy_rotate(jacobi(cA), theta) == jacobi(cB).
/// Throws NoSuchRotation when the residual exceeds 1e-10 (scaled by the
/// configuration size when that is larger than one).
double democracy_angle(const MassTriple& m, const Positions& x, Clustering a, Clustering b);

/// Max-norm mismatch between democracy_rotate(a, theta) and b.
double democracy_residual(const JacobiPair& a, const JacobiPair& b, double theta);

/// J = rvec x drvec + svec x dsvec.
Vec3 angular_momentum(const FullState& st);

/// Squared interatomic distance written as rr*r^2 + ss*s^2 + rs_cos*r*s*cos(phi).
struct QuadraticDistance {
    double rr = 0.0;
    double ss = 0.0;
    double rs_cos = 0.0;

    double value(const ShapePoint& p) const;
};

/// Distance coefficients for the pairs (1,2), (1,3), (2,3), in that order.
std::array<QuadraticDistance, 3> distance_coefficients(const MassTriple& m, Clustering c);

struct PairDistances {
    double d12, d13, d23;
};

PairDistances interatomic_distances(const MassTriple& m, Clustering c, const ShapePoint& p);

}  // namespace holored
