#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "holored/connection.hpp"
#include "holored/kinematics.hpp"
#include "holored/potentials.hpp"

namespace holored {

/// Point of the holonomy-reduced phase space T*Q. gamma is kept unwrapped.
struct ReducedState {
    double r = 1.0, s = 1.0, phi = 1.0, gamma = 0.0;
    double p_r = 0.0, p_s = 0.0, p_phi = 0.0, p_gamma = 0.0;

    ShapePoint shape() const { return {r, s, phi}; }
    std::array<double, 8> to_array() const { return {r, s, phi, gamma, p_r, p_s, p_phi, p_gamma}; }
    static ReducedState from_array(const std::array<double, 8>& y);
};

/// Point of the S^1-reduced system at momentum level mu = p_gamma.
struct ReducedStateMu {
    double r = 1.0, s = 1.0, phi = 1.0;
    double p_r = 0.0, p_s = 0.0, p_phi = 0.0;
    double mu = 0.0;

    ShapePoint shape() const { return {r, s, phi}; }
    std::array<double, 6> to_array() const { return {r, s, phi, p_r, p_s, p_phi}; }
    static ReducedStateMu from_array(const std::array<double, 6>& y, double mu);
};

using PhaseVelocity8 = std::array<double, 8>;
using PhaseVelocity6 = std::array<double, 6>;
using PhaseVelocity12 = std::array<double, 12>;

double hamiltonian(const ReducedState& st, const PotentialModel& v);
/// Hamiltonian at p_gamma = 0; throws DomainError if st.p_gamma != 0.
double zero_momentum_hamiltonian(const ReducedState& st, const PotentialModel& v);
/// H_mu: the reduced Hamiltonian with p_gamma := mu.
double hamiltonian_mu(const ReducedStateMu& st, const PotentialModel& v);

PhaseVelocity8 vector_field(const ReducedState& st, const PotentialModel& v);
PhaseVelocity6 vector_field_mu(const ReducedStateMu& st, const PotentialModel& v);

struct ReducedVelocity {
    double dr = 0.0, ds = 0.0, dphi = 0.0, dgamma = 0.0;
};

struct ReducedMomenta {
    double p_r = 0.0, p_s = 0.0, p_phi = 0.0, p_gamma = 0.0;
};

ReducedMomenta legendre_from_velocities(const ShapePoint& p, const ReducedVelocity& v);
ReducedVelocity velocities_from_momenta(const ShapePoint& p, const ReducedMomenta& m);

/// 1/2 dq^2(v, v) for the induced metric on the holonomy bundle, written as
/// dr^2 + ds^2 + r^2 s^2/(r^2+s^2) dphi^2 + zeta^2/(r^2+s^2).
double reduced_kinetic_energy(const ShapePoint& p, const ReducedVelocity& v);

/// Kaluza-Klein charge e = c * p_gamma.
double kk_charge(const ReducedState& st, double c_light = 1.0);

enum class Method { Rk4, ImplicitMidpoint };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

/// Time series of states with per-sample diagnostics. `momentum` holds
/// p_gamma (reduced runs), mu (mu runs) or J.u3 (full runs).
template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<double> energy;
    std::vector<double> momentum;
    std::vector<Vec3> angular_momentum;  ///< full-space runs only

    std::size_t size() const { return times.size(); }
};

/// Integration left the admissible domain; carries the samples computed so far.
template <class State>
class DomainExit : public DomainExitError {
public:
    DomainExit(const std::string& what, Trajectory<State> partial)
        : DomainExitError(what), partial_(std::move(partial)) {}

    const Trajectory<State>& partial() const { return partial_; }

private:
    Trajectory<State> partial_;
};

/// phi within this distance of {0, pi} ends an integration.
inline constexpr double kPhiMargin = 1e-6;
/// r or s below this ends an integration.
inline constexpr double kRadiusMargin = 1e-9;
inline constexpr double kMidpointTolerance = 1e-13;
inline constexpr int kMidpointMaxIterations = 50;

/// `stride` keeps every stride-th sample (plus the last one).
Trajectory<ReducedState> integrate(const ReducedState& initial, const PotentialModel& v, double dt, std::size_t n_steps,
                                   Method method = Method::Rk4, std::size_t stride = 1);
Trajectory<ReducedStateMu> integrate(const ReducedStateMu& initial, const PotentialModel& v, double dt,
                                     std::size_t n_steps, Method method = Method::Rk4, std::size_t stride = 1);

/// 1/2 (|drvec|^2 + |dsvec|^2) + V(shape).
double full_energy(const FullState& st, const PotentialModel& v);

/// Newtonian flow on the Jacobi space. Forces are central differences
/// (step 1e-6) of V o shape_from_jacobi over the six Cartesian components,
/// independent of the analytic gradients.
PhaseVelocity12 full_vector_field(const FullState& st, const PotentialModel& v);

std::array<double, 12> full_to_array(const FullState& st);
FullState full_from_array(const std::array<double, 12>& y);

Trajectory<FullState> integrate_full(const FullState& initial, const PotentialModel& v, double dt, std::size_t n_steps,
                                     Method method = Method::Rk4, std::size_t stride = 1);

/// Orthonormal in-plane basis (e1, e2) with e1 x e2 the unit normal.
struct PlaneBasis {
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();

    Vec3 normal() const { return e1.cross(e2); }
};

/// Places a reduced state into the plane: rvec at angle gamma from e1,
/// svec at angle gamma + phi.
FullState embed_in_plane(const ReducedState& st, const PlaneBasis& plane = {});

/// Reduced coordinates of a planar full state. gamma is measured from
/// `reference` (projected into the plane of motion); when `previous_gamma`
/// is given, gamma is unwrapped to the branch nearest to it. Throws
/// NonPlanarState if J is not parallel to rvec x svec within 1e-8.
ReducedState project_full_to_reduced(const FullState& st, const Vec3& reference = Vec3::UnitX(),
                                     std::optional<double> previous_gamma = std::nullopt);

}  // namespace holored
