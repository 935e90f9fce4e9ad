#include "holored/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace holored {

namespace {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& k) {
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
    return out;
}

template <std::size_t N, class F>
Vec<N> rk4_step(F&& f, const Vec<N>& y, double h) {
    const Vec<N> k1 = f(y);
    const Vec<N> k2 = f(axpy(y, 0.5 * h, k1));
    const Vec<N> k3 = f(axpy(y, 0.5 * h, k2));
    const Vec<N> k4 = f(axpy(y, h, k3));
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// y1 = y0 + h f((y0 + y1) / 2), solved by fixed-point iteration.
template <std::size_t N, class F>
Vec<N> midpoint_step(F&& f, const Vec<N>& y, double h) {
    Vec<N> next = axpy(y, h, f(y));
    for (int it = 0; it < kMidpointMaxIterations; ++it) {
        Vec<N> mid;
        for (std::size_t i = 0; i < N; ++i) mid[i] = 0.5 * (y[i] + next[i]);
        const Vec<N> candidate = axpy(y, h, f(mid));
        double change = 0.0;
        double size = 1.0;
        for (std::size_t i = 0; i < N; ++i) {
            change = std::max(change, std::abs(candidate[i] - next[i]));
            size = std::max(size, std::abs(candidate[i]));
        }
        next = candidate;
        if (change <= kMidpointTolerance * size) return next;
    }
    throw ConvergenceFailure(
        fmt::format("implicit midpoint did not converge in {} iterations (step {})", kMidpointMaxIterations, h));
}

bool shape_admissible(double r, double s, double phi) {
    return std::isfinite(r) && std::isfinite(s) && std::isfinite(phi) && r >= kRadiusMargin && s >= kRadiusMargin &&
           phi >= kPhiMargin && phi <= std::numbers::pi - kPhiMargin;
}

/// Shared fixed-step driver. `admissible(y)` returns an empty string when the
/// state is inside the domain, otherwise the reason for stopping.
template <class State, std::size_t N, class Rhs, class ToState, class Record, class Admissible>
Trajectory<State> drive(const Vec<N>& y0, Rhs&& rhs, ToState&& to_state, Record&& record, Admissible&& admissible,
                        double dt, std::size_t n_steps, Method method, std::size_t stride) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError(fmt::format("time step must be positive, got {}", dt));
    if (stride == 0) throw DomainError("sample stride must be at least 1");

    Trajectory<State> traj;
    const std::size_t expected = n_steps / stride + 2;
    traj.times.reserve(expected);
    traj.states.reserve(expected);

    if (auto why = admissible(y0); !why.empty()) throw DomainExit<State>(why, std::move(traj));
    Vec<N> y = y0;
    record(traj, 0.0, to_state(y));

    for (std::size_t n = 1; n <= n_steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        std::string why;
        try {
            y = method == Method::Rk4 ? rk4_step<N>(rhs, y, dt) : midpoint_step<N>(rhs, y, dt);
            why = admissible(y);
        } catch (const DomainError& e) {
            why = e.what();
        } catch (const CollinearConfiguration& e) {
            why = e.what();
        }
        if (!why.empty()) {
            throw DomainExit<State>(fmt::format("left the domain during step {} (t={}): {}", n, t, why),
                                    std::move(traj));
        }
        if (n % stride == 0 || n == n_steps) record(traj, t, to_state(y));
    }
    return traj;
}

}  // namespace

ReducedState ReducedState::from_array(const std::array<double, 8>& y) {
    return {y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]};
}

ReducedStateMu ReducedStateMu::from_array(const std::array<double, 6>& y, double mu) {
    return {y[0], y[1], y[2], y[3], y[4], y[5], mu};
}

double hamiltonian(const ReducedState& st, const PotentialModel& v) {
    const double ir2 = 1.0 / (st.r * st.r);
    const double is2 = 1.0 / (st.s * st.s);
    return 0.5 * st.p_r * st.p_r + 0.5 * st.p_s * st.p_s + 0.5 * (ir2 + is2) * st.p_phi * st.p_phi -
           ir2 * st.p_phi * st.p_gamma + 0.5 * ir2 * st.p_gamma * st.p_gamma + v.evaluate(st.shape());
}

double zero_momentum_hamiltonian(const ReducedState& st, const PotentialModel& v) {
    if (st.p_gamma != 0.0) throw DomainError("zero-momentum Hamiltonian requires p_gamma = 0");
    const double ir2 = 1.0 / (st.r * st.r);
    const double is2 = 1.0 / (st.s * st.s);
    return 0.5 * st.p_r * st.p_r + 0.5 * st.p_s * st.p_s + 0.5 * (ir2 + is2) * st.p_phi * st.p_phi +
           v.evaluate(st.shape());
}

double hamiltonian_mu(const ReducedStateMu& st, const PotentialModel& v) {
    return hamiltonian({st.r, st.s, st.phi, 0.0, st.p_r, st.p_s, st.p_phi, st.mu}, v);
}

PhaseVelocity8 vector_field(const ReducedState& st, const PotentialModel& v) {
    const ShapeGradient g = v.gradient(st.shape());
    const double ir2 = 1.0 / (st.r * st.r);
    const double is2 = 1.0 / (st.s * st.s);
    const double twist = st.p_gamma - st.p_phi;
    return {st.p_r,
            st.p_s,
            (ir2 + is2) * st.p_phi - ir2 * st.p_gamma,
            ir2 * twist,
            twist * twist * ir2 / st.r - g.dr,
            st.p_phi * st.p_phi * is2 / st.s - g.ds,
            -g.dphi,
            0.0};
}

PhaseVelocity6 vector_field_mu(const ReducedStateMu& st, const PotentialModel& v) {
    const PhaseVelocity8 f = vector_field({st.r, st.s, st.phi, 0.0, st.p_r, st.p_s, st.p_phi, st.mu}, v);
    return {f[0], f[1], f[2], f[4], f[5], f[6]};
}

ReducedMomenta legendre_from_velocities(const ShapePoint& p, const ReducedVelocity& v) {
    const double r2 = p.r() * p.r();
    const double s2 = p.s() * p.s();
    return {v.dr, v.ds, s2 * (v.dphi + v.dgamma), s2 * v.dphi + (r2 + s2) * v.dgamma};
}

ReducedVelocity velocities_from_momenta(const ShapePoint& p, const ReducedMomenta& m) {
    const double ir2 = 1.0 / (p.r() * p.r());
    const double is2 = 1.0 / (p.s() * p.s());
    return {m.p_r, m.p_s, (ir2 + is2) * m.p_phi - ir2 * m.p_gamma, ir2 * (m.p_gamma - m.p_phi)};
}

double reduced_kinetic_energy(const ShapePoint& p, const ReducedVelocity& v) {
    const double r2 = p.r() * p.r();
    const double s2 = p.s() * p.s();
    const double z = zeta(p, v.dphi, v.dgamma);
    return 0.5 * (v.dr * v.dr + v.ds * v.ds + r2 * s2 / (r2 + s2) * v.dphi * v.dphi + z * z / (r2 + s2));
}

double kk_charge(const ReducedState& st, double c_light) { return c_light * st.p_gamma; }

std::string_view to_string(Method m) { return m == Method::Rk4 ? "rk4" : "implicit_midpoint"; }

Method parse_method(std::string_view text) {
    if (text == "rk4") return Method::Rk4;
    if (text == "implicit_midpoint" || text == "midpoint") return Method::ImplicitMidpoint;
    throw DomainError(fmt::format("unknown integration method '{}'", text));
}

Trajectory<ReducedState> integrate(const ReducedState& initial, const PotentialModel& v, double dt, std::size_t n_steps,
                                   Method method, std::size_t stride) {
    auto rhs = [&v](const Vec<8>& y) { return vector_field(ReducedState::from_array(y), v); };
    auto record = [&v](Trajectory<ReducedState>& t, double time, const ReducedState& st) {
        t.times.push_back(time);
        t.states.push_back(st);
        t.energy.push_back(hamiltonian(st, v));
        t.momentum.push_back(st.p_gamma);
    };
    auto admissible = [](const Vec<8>& y) -> std::string {
        for (double x : y) {
            if (!std::isfinite(x)) return "non-finite state";
        }
        if (!shape_admissible(y[0], y[1], y[2])) {
            return fmt::format("shape (r={}, s={}, phi={}) outside the margins", y[0], y[1], y[2]);
        }
        return {};
    };
    return drive<ReducedState, 8>(initial.to_array(), rhs, ReducedState::from_array, record, admissible, dt, n_steps,
                                  method, stride);
}

Trajectory<ReducedStateMu> integrate(const ReducedStateMu& initial, const PotentialModel& v, double dt,
                                     std::size_t n_steps, Method method, std::size_t stride) {
    const double mu = initial.mu;
    auto rhs = [&v, mu](const Vec<6>& y) { return vector_field_mu(ReducedStateMu::from_array(y, mu), v); };
    auto to_state = [mu](const Vec<6>& y) { return ReducedStateMu::from_array(y, mu); };
    auto record = [&v](Trajectory<ReducedStateMu>& t, double time, const ReducedStateMu& st) {
        t.times.push_back(time);
        t.states.push_back(st);
        t.energy.push_back(hamiltonian_mu(st, v));
        t.momentum.push_back(st.mu);
    };
    auto admissible = [](const Vec<6>& y) -> std::string {
        for (double x : y) {
            if (!std::isfinite(x)) return "non-finite state";
        }
        if (!shape_admissible(y[0], y[1], y[2])) {
            return fmt::format("shape (r={}, s={}, phi={}) outside the margins", y[0], y[1], y[2]);
        }
        return {};
    };
    return drive<ReducedStateMu, 6>(initial.to_array(), rhs, to_state, record, admissible, dt, n_steps, method,
                                    stride);
}

double full_energy(const FullState& st, const PotentialModel& v) {
    return 0.5 * (st.dr.squaredNorm() + st.ds.squaredNorm()) + v.evaluate(shape_from_jacobi(st.config));
}

std::array<double, 12> full_to_array(const FullState& st) {
    const Vec3& r = st.config.r();
    const Vec3& s = st.config.s();
    return {r.x(), r.y(), r.z(), s.x(), s.y(), s.z(), st.dr.x(), st.dr.y(), st.dr.z(), st.ds.x(), st.ds.y(), st.ds.z()};
}

FullState full_from_array(const std::array<double, 12>& y) {
    return {JacobiPair(Vec3(y[0], y[1], y[2]), Vec3(y[3], y[4], y[5])), Vec3(y[6], y[7], y[8]),
            Vec3(y[9], y[10], y[11])};
}

PhaseVelocity12 full_vector_field(const FullState& st, const PotentialModel& v) {
    constexpr double h = 1e-6;
    std::array<double, 6> x = {st.config.r().x(), st.config.r().y(), st.config.r().z(),
                               st.config.s().x(), st.config.s().y(), st.config.s().z()};
    auto potential_at = [&v](const std::array<double, 6>& q) {
        return v.evaluate(shape_from_jacobi(JacobiPair(Vec3(q[0], q[1], q[2]), Vec3(q[3], q[4], q[5]))));
    };
    PhaseVelocity12 out{};
    out[0] = st.dr.x();
    out[1] = st.dr.y();
    out[2] = st.dr.z();
    out[3] = st.ds.x();
    out[4] = st.ds.y();
    out[5] = st.ds.z();
    for (std::size_t i = 0; i < 6; ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = potential_at(x);
        x[i] = keep - h;
        const double down = potential_at(x);
        x[i] = keep;
        out[6 + i] = -(up - down) / (2.0 * h);
    }
    return out;
}

Trajectory<FullState> integrate_full(const FullState& initial, const PotentialModel& v, double dt, std::size_t n_steps,
                                     Method method, std::size_t stride) {
    auto rhs = [&v](const Vec<12>& y) { return full_vector_field(full_from_array(y), v); };
    auto record = [&v](Trajectory<FullState>& t, double time, const FullState& st) {
        const Vec3 j = angular_momentum(st);
        t.times.push_back(time);
        t.states.push_back(st);
        t.energy.push_back(full_energy(st, v));
        t.momentum.push_back(j.dot(st.config.r().cross(st.config.s()).normalized()));
        t.angular_momentum.push_back(j);
    };
    auto admissible = [](const Vec<12>& y) -> std::string {
        for (double x : y) {
            if (!std::isfinite(x)) return "non-finite state";
        }
        const Vec3 r(y[0], y[1], y[2]);
        const Vec3 s(y[3], y[4], y[5]);
        const double rn = r.norm();
        const double sn = s.norm();
        if (rn < kRadiusMargin || sn < kRadiusMargin) return "Jacobi vector length below the margin";
        const double phi = std::atan2(r.cross(s).norm(), r.dot(s));
        if (!shape_admissible(rn, sn, phi)) return fmt::format("phi={} within the collinear margin", phi);
        return {};
    };
    return drive<FullState, 12>(full_to_array(initial), rhs, full_from_array, record, admissible, dt, n_steps, method,
                                stride);
}

FullState embed_in_plane(const ReducedState& st, const PlaneBasis& plane) {
    const ShapePoint p = st.shape();
    const ReducedVelocity vel = velocities_from_momenta(p, {st.p_r, st.p_s, st.p_phi, st.p_gamma});
    const double a = st.gamma;
    const double b = st.gamma + st.phi;
    const Vec3 ua = std::cos(a) * plane.e1 + std::sin(a) * plane.e2;
    const Vec3 ua_perp = -std::sin(a) * plane.e1 + std::cos(a) * plane.e2;
    const Vec3 ub = std::cos(b) * plane.e1 + std::sin(b) * plane.e2;
    const Vec3 ub_perp = -std::sin(b) * plane.e1 + std::cos(b) * plane.e2;
    return {JacobiPair(st.r * ua, st.s * ub), vel.dr * ua + st.r * vel.dgamma * ua_perp,
            vel.ds * ub + st.s * (vel.dgamma + vel.dphi) * ub_perp};
}

ReducedState project_full_to_reduced(const FullState& st, const Vec3& reference, std::optional<double> previous_gamma) {
    const Vec3& rv = st.config.r();
    const Vec3& sv = st.config.s();
    const Vec3 n = rv.cross(sv).normalized();
    const Vec3 j = angular_momentum(st);
    const double scale = std::max(1.0, rv.norm() * st.dr.norm() + sv.norm() * st.ds.norm());
    const double off_axis = (j - j.dot(n) * n).norm();
    if (off_axis > 1e-8 * scale) {
        throw NonPlanarState(fmt::format("angular momentum has an in-plane component {:.3e}", off_axis));
    }
    Vec3 e1 = reference - reference.dot(n) * n;
    if (e1.norm() < 1e-12) throw NonPlanarState("reference direction is normal to the plane of motion");
    e1.normalize();
    const Vec3 e2 = n.cross(e1);

    const ShapePoint p = shape_from_jacobi(st.config);
    double gamma = std::atan2(rv.dot(e2), rv.dot(e1));
    if (previous_gamma) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        gamma += two_pi * std::round((*previous_gamma - gamma) / two_pi);
    }
    // In-plane angular rates of each Jacobi vector.
    const double rate_r = n.dot(rv.cross(st.dr)) / rv.squaredNorm();
    const double rate_s = n.dot(sv.cross(st.ds)) / sv.squaredNorm();
    const ReducedVelocity vel{rv.dot(st.dr) / p.r(), sv.dot(st.ds) / p.s(), rate_s - rate_r, rate_r};
    const ReducedMomenta m = legendre_from_velocities(p, vel);
    return {p.r(), p.s(), p.phi(), gamma, m.p_r, m.p_s, m.p_phi, m.p_gamma};
}

}  // namespace holored
