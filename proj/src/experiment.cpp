#include "holored/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

namespace holored {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FullState full_from_cartesian(const ExperimentConfig& c) {
    const MassTriple& m = c.masses;
    const auto [i, j, k] = cluster_indices(c.clustering);
    const Positions& v = c.initial.velocities;
    const double mij = m[i] + m[j];
    const Vec3 dr = std::sqrt(reduced_mass_pair(m, c.clustering)) * (v[i] - v[j]);
    const Vec3 ds = std::sqrt(reduced_mass_third(m, c.clustering)) * (v[k] - (m[i] * v[i] + m[j] * v[j]) / mij);
    return {jacobi_from_positions(m, c.initial.positions, c.clustering), dr, ds};
}

ReducedState initial_reduced(const ExperimentConfig& c) {
    if (c.initial.kind == InitialKind::Reduced) return c.initial.reduced;
    try {
        return project_full_to_reduced(full_from_cartesian(c));
    } catch (const NonPlanarState& e) {
        throw ConfigError(fmt::format("cartesian initial state cannot be reduced: {}", e.what()));
    }
}

FullState initial_full(const ExperimentConfig& c) {
    if (c.initial.kind == InitialKind::Cartesian) return full_from_cartesian(c);
    return embed_in_plane(c.initial.reduced);
}

/// Sample indices 0, stride, 2 stride, ... plus the last one.
std::vector<std::size_t> thinned(std::size_t n, std::size_t stride) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; k += stride) out.push_back(k);
    if (n > 0 && out.back() != n - 1) out.push_back(n - 1);
    return out;
}

/// Runs `integrate_fn`; a domain exit yields the partial trajectory and a note.
template <class State, class F>
Trajectory<State> guarded(F&& integrate_fn, RunResult& result) {
    try {
        return integrate_fn();
    } catch (const DomainExit<State>& e) {
        result.status = RunStatus::DomainExit;
        result.notes.push_back(fmt::format("domain exit: {}", e.what()));
        return e.partial();
    }
}

template <class State>
void energy_summary(const Trajectory<State>& t, RunResult& result) {
    if (t.size() == 0) return;
    const double h0 = t.energy.front();
    double worst = 0.0, worst_momentum = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        worst = std::max(worst, std::abs(t.energy[k] - h0) / std::max(std::abs(h0), 1e-300));
        worst_momentum = std::max(worst_momentum, std::abs(t.momentum[k] - t.momentum.front()));
    }
    result.summary.push_back({"samples", static_cast<double>(t.size())});
    result.summary.push_back({"t_final", t.times.back()});
    result.summary.push_back({"energy_initial", h0});
    result.summary.push_back({"energy_final", t.energy.back()});
    result.summary.push_back({"max_rel_energy_error", worst});
    result.summary.push_back({"max_abs_momentum_change", worst_momentum});
}

void simulate_reduced(const ExperimentConfig& c, RunResult& result) {
    const PotentialPtr v = c.make_potential();
    const IntegratorConfig& ig = c.integrator;
    if (c.initial.kind == InitialKind::ReducedMu) {
        const auto t = guarded<ReducedStateMu>(
            [&] { return integrate(c.initial.reduced_mu, *v, ig.dt, ig.n_steps, ig.method); }, result);
        result.table.columns = {"t", "r", "s", "phi", "p_r", "p_s", "p_phi", "mu", "energy"};
        for (std::size_t k : thinned(t.size(), c.output.stride)) {
            const ReducedStateMu& st = t.states[k];
            result.table.rows.push_back({t.times[k], st.r, st.s, st.phi, st.p_r, st.p_s, st.p_phi, st.mu, t.energy[k]});
        }
        energy_summary(t, result);
        return;
    }
    const ReducedState init = initial_reduced(c);
    const auto t = guarded<ReducedState>([&] { return integrate(init, *v, ig.dt, ig.n_steps, ig.method); }, result);
    result.table.columns = {"t",   "r",   "s",     "phi",     "gamma", "gamma_mod_2pi",
                            "p_r", "p_s", "p_phi", "p_gamma", "energy"};
    for (std::size_t k : thinned(t.size(), c.output.stride)) {
        const ReducedState& st = t.states[k];
        double wrapped = std::fmod(st.gamma, kTwoPi);
        if (wrapped < 0.0) wrapped += kTwoPi;
        result.table.rows.push_back(
            {t.times[k], st.r, st.s, st.phi, st.gamma, wrapped, st.p_r, st.p_s, st.p_phi, st.p_gamma, t.energy[k]});
    }
    energy_summary(t, result);
    if (t.size() > 0) {
        result.summary.push_back({"gamma_change", t.states.back().gamma - t.states.front().gamma});
        result.summary.push_back({"kk_charge", kk_charge(t.states.front())});
    }
}

void simulate_full(const ExperimentConfig& c, RunResult& result) {
    const PotentialPtr v = c.make_potential();
    const IntegratorConfig& ig = c.integrator;
    const FullState init = initial_full(c);
    const auto t = guarded<FullState>([&] { return integrate_full(init, *v, ig.dt, ig.n_steps, ig.method); }, result);
    result.table.columns = {"t",      "r",      "s",      "phi",    "rvec_x", "rvec_y", "rvec_z", "svec_x",
                            "svec_y", "svec_z", "drvec_x", "drvec_y", "drvec_z", "dsvec_x", "dsvec_y", "dsvec_z",
                            "J_x",    "J_y",    "J_z",    "x1_x",   "x1_y",   "x1_z",   "x2_x",   "x2_y",
                            "x2_z",   "x3_x",   "x3_y",   "x3_z",   "energy"};
    for (std::size_t k : thinned(t.size(), c.output.stride)) {
        const FullState& st = t.states[k];
        const ShapePoint p = shape_from_jacobi(st.config);
        const Positions x = positions_from_jacobi(c.masses, st.config, c.clustering);
        const Vec3& j = t.angular_momentum[k];
        std::vector<double> row = {t.times[k], p.r(), p.s(), p.phi()};
        for (const Vec3* w : {&st.config.r(), &st.config.s(), &st.dr, &st.ds, &j, &x.x1, &x.x2, &x.x3}) {
            row.insert(row.end(), {w->x(), w->y(), w->z()});
        }
        row.push_back(t.energy[k]);
        result.table.rows.push_back(std::move(row));
    }
    energy_summary(t, result);
    if (t.size() > 0) {
        double drift = 0.0;
        for (const Vec3& j : t.angular_momentum) drift = std::max(drift, (j - t.angular_momentum.front()).norm());
        result.summary.push_back({"angular_momentum_norm", t.angular_momentum.front().norm()});
        result.summary.push_back({"max_abs_angular_momentum_change", drift});
    }
}

void frame_table(const std::vector<FrameState>& states, std::size_t stride, Table& table) {
    table.columns = {"t", "r", "s", "phi", "u1_x", "u1_y", "u1_z", "u2_x", "u2_y", "u2_z", "u3_x", "u3_y", "u3_z"};
    for (std::size_t k : thinned(states.size(), stride)) {
        const FrameState& f = states[k];
        std::vector<double> row = {f.t(), f.shape().r(), f.shape().s(), f.shape().phi()};
        for (int col = 0; col < 3; ++col) {
            for (int i = 0; i < 3; ++i) row.push_back(f.frame()(i, col));
        }
        table.rows.push_back(std::move(row));
    }
}

std::optional<ShapePatch> rectangle_patch(const LoopConfig& loop) {
    switch (loop.kind) {
    case LoopConfig::Kind::RPhiRectangle:
        return ShapePatch{ShapePoint(loop.lo, loop.fixed, loop.phi0), ShapeAxis::R, loop.lo, loop.hi, ShapeAxis::Phi,
                          loop.phi0, loop.phi1};
    case LoopConfig::Kind::SPhiRectangle:
        return ShapePatch{ShapePoint(loop.fixed, loop.lo, loop.phi0), ShapeAxis::S, loop.lo, loop.hi, ShapeAxis::Phi,
                          loop.phi0, loop.phi1};
    case LoopConfig::Kind::Segments: break;
    }
    return std::nullopt;
}

void holonomy(const ExperimentConfig& c, RunResult& result) {
    const ShapePath path = c.make_path();
    const int q = c.loop.quadrature_points;
    const double line = holonomy_of_path(path, q);
    result.summary.push_back({"holonomy_line_integral", line});
    result.summary.push_back({"quadrature_doubling_change", std::abs(holonomy_of_path(path, 2 * q) - line)});
    if (const auto patch = rectangle_patch(c.loop)) {
        const double flux = curvature_flux(*patch, q);
        result.summary.push_back({"holonomy_stokes", -flux});
        result.summary.push_back({"stokes_difference", std::abs(line + flux)});
    }
    const auto lift = horizontal_lift_full(path, Mat3::Identity(), c.loop.lift_dt);
    const double rotation = net_in_plane_rotation(lift);
    result.summary.push_back({"holonomy_frame_lift", rotation});
    result.summary.push_back({"frame_lift_difference", std::abs(rotation - line)});
    result.summary.push_back({"plane_drift", plane_drift(lift)});
    result.summary.push_back({"closed", path.closed() ? 1.0 : 0.0});
    frame_table(lift, c.output.stride, result.table);
}

double tilt(const Vec3& u, const Vec3& u0) { return std::atan2(u.cross(u0).norm(), u.dot(u0)); }

void lemma_check(const ExperimentConfig& c, RunResult& result) {
    constexpr double kHorizontalBound = 1e-8;
    constexpr double kControlBound = 1e-3;
    const ShapePath path = c.make_path();
    const auto horizontal = horizontal_lift_full(path, Mat3::Identity(), c.loop.lift_dt);
    const auto control = horizontal_lift_full(path, Mat3::Identity(), c.loop.lift_dt, {c.loop.control_rate});
    const double drift = plane_drift(horizontal);
    const double control_drift = plane_drift(control);
    result.summary.push_back({"plane_drift", drift});
    result.summary.push_back({"control_plane_drift", control_drift});
    const bool fixed = drift < kHorizontalBound;
    const bool detected = control_drift > kControlBound;
    result.notes.push_back(fmt::format("{}: horizontal lift keeps the plane fixed (drift < {:g})", fixed ? "PASS" : "FAIL",
                                       kHorizontalBound));
    result.notes.push_back(fmt::format("{}: non-horizontal control tilts the plane (drift > {:g})",
                                       detected ? "PASS" : "FAIL", kControlBound));
    if (!fixed || !detected) result.status = RunStatus::CheckFailed;

    result.table.columns = {"t", "r", "s", "phi", "tilt_horizontal", "tilt_control"};
    const Vec3 h0 = horizontal.front().u3();
    const Vec3 c0 = control.front().u3();
    for (std::size_t k : thinned(horizontal.size(), c.output.stride)) {
        const FrameState& f = horizontal[k];
        result.table.rows.push_back({f.t(), f.shape().r(), f.shape().s(), f.shape().phi(), tilt(f.u3(), h0),
                                     tilt(control[k].u3(), c0)});
    }
}

Positions random_triangle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        const Positions x{Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))};
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
            const Vec3 a = x[(k + 1) % 3] - x[k];
            const Vec3 b = x[(k + 2) % 3] - x[k];
            ok = a.norm() > 0.3 && b.norm() > 0.3 && std::atan2(a.cross(b).norm(), a.dot(b)) > 0.2;
        }
        if (ok) return x;
    }
}

struct DemocracyMeasure {
    double theta = 0.0;
    double residual = 0.0;
    double w3_difference = 0.0;
    double size_difference = 0.0;
    double w_rotation_error = 0.0;
    WPoint wa{0, 0, 1}, wb{0, 0, 1};
};

DemocracyMeasure measure_democracy(const MassTriple& m, const Positions& x, Clustering ca, Clustering cb) {
    const JacobiPair a = jacobi_from_positions(m, x, ca);
    const JacobiPair b = jacobi_from_positions(m, x, cb);
    DemocracyMeasure out;
    out.theta = democracy_angle(m, x, ca, cb);
    out.residual = democracy_residual(a, b, out.theta);
    out.wa = w_from_shape(shape_from_jacobi(a));
    out.wb = w_from_shape(shape_from_jacobi(b));
    out.w3_difference = std::abs(out.wa.w3() - out.wb.w3());
    out.size_difference =
        std::abs(a.r().squaredNorm() + a.s().squaredNorm() - b.r().squaredNorm() - b.s().squaredNorm());
    const double co = std::cos(2.0 * out.theta), si = std::sin(2.0 * out.theta);
    out.w_rotation_error = std::max(std::abs(co * out.wa.w1() - si * out.wa.w2() - out.wb.w1()),
                                    std::abs(si * out.wa.w1() + co * out.wa.w2() - out.wb.w2()));
    return out;
}

void democracy(const ExperimentConfig& c, const RunOptions& options, RunResult& result) {
    std::mt19937_64 rng(options.seed);
    const Positions x = c.democracy.random ? random_triangle(rng) : c.democracy.positions;
    DemocracyMeasure d;
    try {
        d = measure_democracy(c.masses, x, c.democracy.a, c.democracy.b);
    } catch (const NoSuchRotation& e) {
        result.status = RunStatus::CheckFailed;
        result.notes.push_back(fmt::format("FAIL: {}", e.what()));
        return;
    }
    result.summary = {{"theta", d.theta},
                      {"residual", d.residual},
                      {"w3_difference", d.w3_difference},
                      {"size_difference", d.size_difference},
                      {"w_rotation_error", d.w_rotation_error}};
    const bool ok = d.residual < 1e-10;
    result.notes.push_back(fmt::format("{}: rotation maps clustering {} onto {} (residual < 1e-10)", ok ? "PASS" : "FAIL",
                                       to_string(c.democracy.a), to_string(c.democracy.b)));
    if (!ok) result.status = RunStatus::CheckFailed;
    result.table.columns = {"x1_x", "x1_y", "x1_z", "x2_x", "x2_y", "x2_z", "x3_x", "x3_y", "x3_z", "theta",
                            "residual", "w1_a", "w2_a", "w3_a", "w1_b", "w2_b", "w3_b"};
    result.table.rows.push_back({x.x1.x(), x.x1.y(), x.x1.z(), x.x2.x(), x.x2.y(), x.x2.z(), x.x3.x(), x.x3.y(),
                                 x.x3.z(), d.theta, d.residual, d.wa.w1(), d.wa.w2(), d.wa.w3(), d.wb.w1(), d.wb.w2(),
                                 d.wb.w3()});
}

ReducedState random_reduced(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> radius(0.6, 1.8), angle(0.3, 2.8), fiber(-std::numbers::pi, std::numbers::pi),
        momentum(-1.0, 1.0);
    return {radius(rng),   radius(rng),   angle(rng),    fiber(rng),
            momentum(rng), momentum(rng), momentum(rng), momentum(rng)};
}

void checks(const ExperimentConfig& c, const RunOptions& options, RunResult& result) {
    const PotentialPtr v = c.make_potential();
    const ChecksConfig& ck = c.checks;
    std::mt19937_64 rng(options.seed);
    result.table.label_column = "check";
    result.table.columns = {"max_error", "tolerance", "passed"};
    auto record = [&](const std::string& name, double error, double tol) {
        const bool ok = error < tol;
        result.table.labels.push_back(name);
        result.table.rows.push_back({error, tol, ok ? 1.0 : 0.0});
        result.notes.push_back(fmt::format("{}: {} (max error {:.3e}, tolerance {:.1e})", ok ? "PASS" : "FAIL", name,
                                           error, tol));
        if (!ok) result.status = RunStatus::CheckFailed;
    };

    const GradientCheckReport grad = gradient_check(*v, ck.samples, ck.fd_step, ck.tol, options.seed);
    record("potential gradient", grad.max_rel_error, ck.tol);

    double field_error = 0.0;
    for (std::size_t n = 0; n < ck.samples; ++n) {
        const ReducedState st = random_reduced(rng);
        const PhaseVelocity8 g = vector_field(st, *v);
        auto y = st.to_array();
        auto derivative = [&](std::size_t i) {
            const double keep = y[i];
            y[i] = keep + ck.fd_step;
            const double up = hamiltonian(ReducedState::from_array(y), *v);
            y[i] = keep - ck.fd_step;
            const double down = hamiltonian(ReducedState::from_array(y), *v);
            y[i] = keep;
            return (up - down) / (2.0 * ck.fd_step);
        };
        for (std::size_t i = 0; i < 4; ++i) {
            const double dq = derivative(i + 4);
            const double dp = -derivative(i);
            field_error = std::max({field_error, std::abs(g[i] - dq) / std::max(1.0, std::abs(dq)),
                                    std::abs(g[i + 4] - dp) / std::max(1.0, std::abs(dp))});
        }
    }
    record("vector field vs dH", field_error, ck.tol);

    double legendre_error = 0.0;
    std::uniform_real_distribution<double> rate(-2.0, 2.0);
    for (std::size_t n = 0; n < ck.samples; ++n) {
        const ReducedState st = random_reduced(rng);
        const ShapePoint p = st.shape();
        const ReducedVelocity vel{rate(rng), rate(rng), rate(rng), rate(rng)};
        const ReducedMomenta m = legendre_from_velocities(p, vel);
        const double h = hamiltonian({p.r(), p.s(), p.phi(), st.gamma, m.p_r, m.p_s, m.p_phi, m.p_gamma}, *v);
        const double expected = reduced_kinetic_energy(p, vel) + v->evaluate(p);
        legendre_error = std::max(legendre_error, std::abs(h - expected) / std::max(1.0, std::abs(expected)));
    }
    record("legendre vs metric", legendre_error, 1e-12);

    double democracy_error = 0.0, invariant_error = 0.0;
    for (std::size_t n = 0; n < ck.samples; ++n) {
        const Positions x = random_triangle(rng);
        for (auto [a, b] : {std::pair{Clustering::Pair13_2, Clustering::Pair23_1},
                            {Clustering::Pair13_2, Clustering::Pair12_3}}) {
            try {
                const DemocracyMeasure d = measure_democracy(c.masses, x, a, b);
                democracy_error = std::max(democracy_error, d.residual);
                invariant_error = std::max({invariant_error, d.w3_difference, d.size_difference});
            } catch (const NoSuchRotation&) {
                democracy_error = INFINITY;
            }
        }
    }
    record("democracy residual", democracy_error, 1e-10);
    record("democracy invariants", invariant_error, 1e-12 * 64.0);

    if (const auto patch = rectangle_patch(c.loop)) {
        const ShapePath path = c.make_path();
        record("stokes", std::abs(holonomy_of_path(path, c.loop.quadrature_points) +
                                  curvature_flux(*patch, c.loop.quadrature_points)),
               ck.tol);
    }
}

std::string_view status_name(RunStatus s) {
    switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::ConfigError: return "config-error";
    case RunStatus::DomainExit: return "domain-exit";
    case RunStatus::CheckFailed: return "check-failed";
    }
    return "?";
}

}  // namespace

int Table::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
    RunResult result;
    switch (config.kind) {
    case ExperimentKind::Simulate: simulate_reduced(config, result); break;
    case ExperimentKind::SimulateFull: simulate_full(config, result); break;
    case ExperimentKind::Holonomy: holonomy(config, result); break;
    case ExperimentKind::LemmaCheck: lemma_check(config, result); break;
    case ExperimentKind::Democracy: democracy(config, options, result); break;
    case ExperimentKind::Checks: checks(config, options, result); break;
    }
    return result;
}

void write_table(std::ostream& out, const RunResult& result, const ExperimentConfig& config, OutputFormat format) {
    const Table& table = result.table;
    const bool labelled = !table.label_column.empty();
    if (format == OutputFormat::Json) {
        nlohmann::ordered_json doc;
        doc["experiment"] = std::string(to_string(config.kind));
        doc["config"] = resolved_text(config);
        doc["status"] = std::string(status_name(result.status));
        nlohmann::ordered_json summary = nlohmann::ordered_json::object();
        for (const SummaryItem& item : result.summary) summary[item.key] = item.value;
        doc["summary"] = summary;
        doc["notes"] = result.notes;
        doc["columns"] = table.columns;
        if (labelled) doc[table.label_column] = table.labels;
        doc["rows"] = table.rows;
        out << doc.dump(1) << '\n';
        return;
    }
    std::string text;
    std::size_t start = 0;
    const std::string resolved = resolved_text(config);
    while (start < resolved.size()) {
        const auto end = resolved.find('\n', start);
        text += "# " + resolved.substr(start, end - start) + '\n';
        start = end + 1;
    }
    if (labelled) text += table.label_column + ',';
    for (std::size_t i = 0; i < table.columns.size(); ++i) text += (i ? "," : "") + table.columns[i];
    text += '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (labelled) text += table.labels[r] + ',';
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) text += ',';
            fmt::format_to(std::back_inserter(text), "{:.17g}", row[i]);
        }
        text += '\n';
    }
    out << text;
}

void print_summary(std::ostream& out, const RunResult& result, const ExperimentConfig& config) {
    out << fmt::format("experiment: {}\n", to_string(config.kind));
    for (const SummaryItem& item : result.summary) out << fmt::format("{}: {:.17g}\n", item.key, item.value);
    for (const std::string& note : result.notes) out << note << '\n';
    out << fmt::format("status: {}\n", status_name(result.status));
}

double CompareReport::max_deviation() const {
    double worst = 0.0;
    for (const ColumnDeviation& d : deviations) worst = std::max(worst, d.max_abs);
    return worst;
}

CompareReport compare(const ExperimentConfig& a, const ExperimentConfig& b, double tolerance,
                      const RunOptions& options) {
    for (const ExperimentConfig* c : {&a, &b}) {
        if (c->kind != ExperimentKind::Simulate && c->kind != ExperimentKind::SimulateFull) {
            throw ConfigError(fmt::format("compare needs simulate or simulate-full runs, got {}", to_string(c->kind)));
        }
    }
    auto fa = std::async(std::launch::async, [&] { return run(a, options); });
    auto fb = std::async(std::launch::async, [&] { return run(b, options); });
    const RunResult ra = fa.get();
    const RunResult rb = fb.get();
    for (const RunResult* r : {&ra, &rb}) {
        if (r->status == RunStatus::DomainExit) {
            throw DomainExitError(r->notes.empty() ? std::string("domain exit") : r->notes.front());
        }
    }

    const Table& ta = ra.table;
    const Table& tb = rb.table;
    const int ti = ta.column("t");
    const int tj = tb.column("t");
    if (ta.rows.size() != tb.rows.size()) {
        throw MismatchedGrids(fmt::format("runs have {} and {} samples", ta.rows.size(), tb.rows.size()));
    }
    for (std::size_t k = 0; k < ta.rows.size(); ++k) {
        const double x = ta.rows[k][static_cast<std::size_t>(ti)];
        const double y = tb.rows[k][static_cast<std::size_t>(tj)];
        if (std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(x))) {
            throw MismatchedGrids(fmt::format("sample {} is at t={} in one run and t={} in the other", k, x, y));
        }
    }

    CompareReport report;
    report.samples = ta.rows.size();
    report.tolerance = tolerance;
    for (std::size_t i = 0; i < ta.columns.size(); ++i) {
        const std::string& name = ta.columns[i];
        if (name == "t" || name == "gamma_mod_2pi") continue;
        const int j = tb.column(name);
        if (j < 0) continue;
        ColumnDeviation d{name, 0.0};
        for (std::size_t k = 0; k < ta.rows.size(); ++k) {
            d.max_abs = std::max(d.max_abs, std::abs(ta.rows[k][i] - tb.rows[k][static_cast<std::size_t>(j)]));
        }
        report.deviations.push_back(d);
    }
    if (report.deviations.empty()) throw ConfigError("the two runs share no comparable columns");
    return report;
}

void print_compare(std::ostream& out, const CompareReport& report) {
    out << fmt::format("samples: {}\n", report.samples);
    for (const ColumnDeviation& d : report.deviations) out << fmt::format("max_dev {}: {:.17g}\n", d.column, d.max_abs);
    out << fmt::format("max_deviation: {:.17g}\n", report.max_deviation());
    out << fmt::format("tolerance: {:g}\n", report.tolerance);
    out << fmt::format("status: {}\n", report.passed() ? "pass" : "fail");
}

}  // namespace holored
