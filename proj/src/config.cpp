#include "holored/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace holored {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

const std::map<std::string, std::set<std::string>, std::less<>> kKeys = {
    {"experiment", {"kind"}},
    {"masses", {"m1", "m2", "m3", "clustering"}},
    {"potential", {"type", "reference", "stiffness", "all", "pair12", "pair13", "pair23"}},
    {"initial", {"kind", "r", "s", "phi", "gamma", "p_r", "p_s", "p_phi", "p_gamma", "mu", "x1", "x2", "x3", "v1", "v2",
                 "v3"}},
    {"integrator", {"method", "dt", "n_steps"}},
    {"output", {"path", "format", "stride"}},
    {"holonomy", {"loop", "segment", "quadrature_points", "lift_dt", "control_rate"}},
    {"democracy", {"clustering_a", "clustering_b", "positions", "x1", "x2", "x3"}},
    {"checks", {"samples", "fd_step", "tol"}},
};

class Reader {
public:
    Reader(std::string_view text, std::string_view source) : source_(source) {
        std::string section;
        int line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = std::min(text.find('\n', start), text.size());
            ++line_no;
            std::string_view line = text.substr(start, end - start);
            start = end + 1;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, fmt::format("malformed section header '{}'", line));
                section = std::string(trim(line.substr(1, line.size() - 2)));
                if (!kKeys.contains(section)) fail(line_no, fmt::format("unknown section [{}]", section));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(line_no, fmt::format("expected 'key = value', got '{}'", line));
            if (section.empty()) fail(line_no, "key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (!kKeys.at(section).contains(key)) fail(line_no, fmt::format("unknown key '{}' in [{}]", key, section));
            if (value.empty()) fail(line_no, fmt::format("empty value for '{}'", key));
            const std::string full = section + "." + key;
            if (full == "holonomy.segment") {
                segments_.push_back({value, line_no});
            } else if (!entries_.emplace(full, Entry{value, line_no}).second) {
                fail(line_no, fmt::format("duplicate key '{}' in [{}]", key, section));
            }
            if (end == text.size()) break;
        }
    }

    [[noreturn]] void fail(int line, const std::string& what) const {
        throw ConfigError(fmt::format("{}:{}: {}", source_, line, what));
    }

    const Entry* find(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    const std::vector<Entry>& segments() const { return segments_; }

    double number(const Entry& e, std::string_view text) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            fail(e.line, fmt::format("'{}' is not a finite number", text));
        }
        return v;
    }

    std::vector<double> numbers(const Entry& e, std::string_view text, std::size_t count) const {
        const auto parts = words(text);
        if (parts.size() != count) fail(e.line, fmt::format("expected {} numbers, got '{}'", count, text));
        std::vector<double> out;
        for (auto p : parts) out.push_back(number(e, p));
        return out;
    }

    void get(const std::string& key, double& out) const {
        if (const Entry* e = find(key)) out = number(*e, e->value);
    }

    void get(const std::string& key, std::size_t& out, std::size_t min) const {
        if (const Entry* e = find(key)) {
            std::size_t v = 0;
            const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
            if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
                fail(e->line, fmt::format("'{}' is not a non-negative integer", e->value));
            }
            if (v < min) fail(e->line, fmt::format("'{}' must be at least {}", key.substr(key.find('.') + 1), min));
            out = v;
        }
    }

    void get(const std::string& key, Vec3& out) const {
        if (const Entry* e = find(key)) {
            const auto v = numbers(*e, e->value, 3);
            out = Vec3(v[0], v[1], v[2]);
        }
    }

    /// Runs `build`, turning library validation errors into ConfigError at `line`.
    template <class F>
    auto guarded(int line, F&& build) const {
        try {
            return build();
        } catch (const Error& e) {
            fail(line, e.what());
        }
    }

    int line_of(const std::string& key) const {
        const Entry* e = find(key);
        return e ? e->line : 0;
    }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
    std::vector<Entry> segments_;
};

PairForm parse_pair_form(const Reader& in, const Entry& e) {
    const auto parts = words(e.value);
    const std::string_view name = parts.front();
    const std::string_view rest = trim(std::string_view(e.value).substr(name.size()));
    if (name == "none") {
        if (parts.size() != 1) in.fail(e.line, "'none' takes no parameters");
        return pair_form::None{};
    }
    if (name == "harmonic") {
        const auto v = in.numbers(e, rest, 2);
        return pair_form::Harmonic{v[0], v[1]};
    }
    if (name == "morse") {
        const auto v = in.numbers(e, rest, 3);
        return pair_form::Morse{v[0], v[1], v[2]};
    }
    if (name == "lj") {
        const auto v = in.numbers(e, rest, 2);
        return pair_form::LennardJones{v[0], v[1]};
    }
    in.fail(e.line, fmt::format("unknown pair form '{}' (expected morse, harmonic, lj or none)", name));
}

ShapePoint parse_shape(const Reader& in, const Entry& e, std::string_view text) {
    const auto v = in.numbers(e, text, 3);
    return in.guarded(e.line, [&] { return ShapePoint(v[0], v[1], v[2]); });
}

void read_potential(const Reader& in, ExperimentConfig& c) {
    PotentialConfig& p = c.potential;
    if (const Entry* e = in.find("potential.type")) {
        if (e->value == "zero") p.type = PotentialConfig::Type::Zero;
        else if (e->value == "shape-harmonic") p.type = PotentialConfig::Type::ShapeHarmonic;
        else if (e->value == "pairwise") p.type = PotentialConfig::Type::Pairwise;
        else in.fail(e->line, fmt::format("unknown potential type '{}'", e->value));
    }
    if (const Entry* e = in.find("potential.reference")) p.reference = parse_shape(in, *e, e->value);
    if (const Entry* e = in.find("potential.stiffness")) {
        const auto v = in.numbers(*e, e->value, 3);
        p.stiffness = {v[0], v[1], v[2]};
    }
    if (const Entry* e = in.find("potential.all")) p.pairs.fill(parse_pair_form(in, *e));
    const std::array<const char*, 3> names = {"potential.pair12", "potential.pair13", "potential.pair23"};
    for (std::size_t i = 0; i < 3; ++i) {
        if (const Entry* e = in.find(names[i])) p.pairs[i] = parse_pair_form(in, *e);
    }
    const int line = std::max(in.line_of("potential.type"), 1);
    in.guarded(line, [&] { return c.make_potential(); });
}

void read_initial(const Reader& in, ExperimentConfig& c) {
    InitialConfig& init = c.initial;
    if (const Entry* e = in.find("initial.kind")) {
        if (e->value == "reduced") init.kind = InitialKind::Reduced;
        else if (e->value == "reduced-mu") init.kind = InitialKind::ReducedMu;
        else if (e->value == "cartesian") init.kind = InitialKind::Cartesian;
        else in.fail(e->line, fmt::format("unknown initial kind '{}' (expected reduced, reduced-mu or cartesian)", e->value));
    }
    ReducedState& st = init.reduced;
    for (auto [key, slot] : {std::pair{"r", &st.r}, {"s", &st.s}, {"phi", &st.phi}, {"gamma", &st.gamma},
                             {"p_r", &st.p_r}, {"p_s", &st.p_s}, {"p_phi", &st.p_phi}, {"p_gamma", &st.p_gamma}}) {
        in.get(std::string("initial.") + key, *slot);
    }
    double mu = st.p_gamma;
    in.get("initial.mu", mu);
    init.reduced_mu = {st.r, st.s, st.phi, st.p_r, st.p_s, st.p_phi, mu};
    in.get("initial.x1", init.positions.x1);
    in.get("initial.x2", init.positions.x2);
    in.get("initial.x3", init.positions.x3);
    in.get("initial.v1", init.velocities.x1);
    in.get("initial.v2", init.velocities.x2);
    in.get("initial.v3", init.velocities.x3);

    int line = std::max(in.line_of("initial.kind"), 1);
    for (const char* k : {"initial.r", "initial.s", "initial.phi"}) line = std::max(line, in.line_of(k));
    auto misplaced = [&](std::initializer_list<const char*> keys, std::string_view kind) {
        for (const char* k : keys) {
            if (const Entry* e = in.find(std::string("initial.") + k)) {
                in.fail(e->line, fmt::format("'{}' does not apply to initial kind {}", k, kind));
            }
        }
    };
    switch (init.kind) {
    case InitialKind::Reduced:
        misplaced({"mu", "x1", "x2", "x3", "v1", "v2", "v3"}, "reduced");
        in.guarded(line, [&] { return st.shape(); });
        break;
    case InitialKind::ReducedMu:
        misplaced({"gamma", "p_gamma", "x1", "x2", "x3", "v1", "v2", "v3"}, "reduced-mu");
        in.guarded(line, [&] { return st.shape(); });
        break;
    case InitialKind::Cartesian:
        misplaced({"r", "s", "phi", "gamma", "p_r", "p_s", "p_phi", "p_gamma", "mu"}, "cartesian");
        in.guarded(line, [&] { return jacobi_from_positions(c.masses, init.positions, c.clustering); });
        break;
    }
}

void read_loop(const Reader& in, LoopConfig& loop) {
    if (const Entry* e = in.find("holonomy.loop")) {
        const auto parts = words(e->value);
        const std::string_view name = parts.front();
        if (name == "segments") {
            if (parts.size() != 1) in.fail(e->line, "'segments' takes no parameters");
            loop.kind = LoopConfig::Kind::Segments;
        } else if (name == "r-phi-rectangle" || name == "s-phi-rectangle") {
            loop.kind = name == "r-phi-rectangle" ? LoopConfig::Kind::RPhiRectangle : LoopConfig::Kind::SPhiRectangle;
            const auto v = in.numbers(*e, trim(std::string_view(e->value).substr(name.size())), 5);
            loop.fixed = v[0];
            loop.lo = v[1];
            loop.hi = v[2];
            loop.phi0 = v[3];
            loop.phi1 = v[4];
        } else {
            in.fail(e->line,
                    fmt::format("unknown loop '{}' (expected r-phi-rectangle, s-phi-rectangle or segments)", name));
        }
    }
    for (const Entry& e : in.segments()) {
        if (loop.kind != LoopConfig::Kind::Segments) in.fail(e.line, "'segment' requires 'loop = segments'");
        std::vector<ShapePoint> vertices;
        for (auto part : split(e.value, ';')) vertices.push_back(parse_shape(in, e, part));
        if (vertices.size() < 2) in.fail(e.line, "a segment needs at least two vertices separated by ';'");
        loop.segments.push_back(std::move(vertices));
    }
    if (loop.kind == LoopConfig::Kind::Segments && loop.segments.empty()) {
        in.fail(std::max(in.line_of("holonomy.loop"), 1), "'loop = segments' needs at least one 'segment'");
    }
    std::size_t points = static_cast<std::size_t>(loop.quadrature_points);
    in.get("holonomy.quadrature_points", points, 2);
    loop.quadrature_points = static_cast<int>(points);
    in.get("holonomy.lift_dt", loop.lift_dt);
    if (!(loop.lift_dt > 0.0)) in.fail(in.line_of("holonomy.lift_dt"), "lift_dt must be positive");
    in.get("holonomy.control_rate", loop.control_rate);
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::SimulateFull: return "simulate-full";
    case ExperimentKind::Holonomy: return "holonomy";
    case ExperimentKind::LemmaCheck: return "lemma-check";
    case ExperimentKind::Democracy: return "democracy";
    case ExperimentKind::Checks: return "checks";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
    for (ExperimentKind k : {ExperimentKind::Simulate, ExperimentKind::SimulateFull, ExperimentKind::Holonomy,
                             ExperimentKind::LemmaCheck, ExperimentKind::Democracy, ExperimentKind::Checks}) {
        if (text == to_string(k)) return k;
    }
    throw ConfigError(fmt::format("unknown experiment kind '{}'", text));
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ConfigError(fmt::format("unknown output format '{}' (expected csv or json)", text));
}

PotentialPtr ExperimentConfig::make_potential() const {
    switch (potential.type) {
    case PotentialConfig::Type::Zero: return make_zero_potential();
    case PotentialConfig::Type::ShapeHarmonic: return shape_harmonic(potential.reference, potential.stiffness);
    case PotentialConfig::Type::Pairwise: return pairwise_potential({potential.pairs, masses, clustering});
    }
    return make_zero_potential();
}

ShapePath ExperimentConfig::make_path() const {
    switch (loop.kind) {
    case LoopConfig::Kind::RPhiRectangle: return ShapePath::r_phi_rectangle(loop.fixed, loop.lo, loop.hi, loop.phi0, loop.phi1);
    case LoopConfig::Kind::SPhiRectangle: return ShapePath::s_phi_rectangle(loop.fixed, loop.lo, loop.hi, loop.phi0, loop.phi1);
    case LoopConfig::Kind::Segments: break;
    }
    std::vector<ShapeSegment> segments;
    for (const auto& v : loop.segments) {
        segments.push_back(v.size() == 2 ? ShapeSegment::line(v[0], v[1]) : ShapeSegment::polyline(v));
    }
    return ShapePath(std::move(segments));
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    const Reader in(text, source);
    ExperimentConfig c;

    if (const Entry* e = in.find("experiment.kind")) {
        c.kind = in.guarded(e->line, [&] { return parse_experiment_kind(e->value); });
    }

    double m[3] = {1.0, 1.0, 1.0};
    in.get("masses.m1", m[0]);
    in.get("masses.m2", m[1]);
    in.get("masses.m3", m[2]);
    c.masses = in.guarded(std::max(in.line_of("masses.m1"), 1), [&] { return MassTriple(m[0], m[1], m[2]); });
    if (const Entry* e = in.find("masses.clustering")) {
        c.clustering = in.guarded(e->line, [&] { return parse_clustering(e->value); });
    }

    read_potential(in, c);
    read_initial(in, c);

    if (const Entry* e = in.find("integrator.method")) {
        c.integrator.method = in.guarded(e->line, [&] { return parse_method(e->value); });
    }
    in.get("integrator.dt", c.integrator.dt);
    if (!(c.integrator.dt > 0.0)) in.fail(in.line_of("integrator.dt"), "dt must be positive");
    in.get("integrator.n_steps", c.integrator.n_steps, 0);

    if (const Entry* e = in.find("output.path")) c.output.path = e->value;
    if (const Entry* e = in.find("output.format")) {
        c.output.format = in.guarded(e->line, [&] { return parse_output_format(e->value); });
    }
    in.get("output.stride", c.output.stride, 1);

    read_loop(in, c.loop);
    in.guarded(std::max(in.line_of("holonomy.loop"), 1), [&] { return c.make_path(); });

    if (const Entry* e = in.find("democracy.clustering_a")) {
        c.democracy.a = in.guarded(e->line, [&] { return parse_clustering(e->value); });
    }
    if (const Entry* e = in.find("democracy.clustering_b")) {
        c.democracy.b = in.guarded(e->line, [&] { return parse_clustering(e->value); });
    }
    if (const Entry* e = in.find("democracy.positions")) {
        if (e->value == "random") c.democracy.random = true;
        else if (e->value == "given") c.democracy.random = false;
        else in.fail(e->line, fmt::format("positions must be 'random' or 'given', got '{}'", e->value));
    }
    in.get("democracy.x1", c.democracy.positions.x1);
    in.get("democracy.x2", c.democracy.positions.x2);
    in.get("democracy.x3", c.democracy.positions.x3);
    if (c.democracy.random && (in.find("democracy.x1") || in.find("democracy.x2") || in.find("democracy.x3"))) {
        in.fail(std::max(in.line_of("democracy.x1"), in.line_of("democracy.x2")),
                "democracy positions are given but 'positions = random'");
    }

    in.get("checks.samples", c.checks.samples, 1);
    in.get("checks.fd_step", c.checks.fd_step);
    in.get("checks.tol", c.checks.tol);
    if (!(c.checks.fd_step > 0.0) || !(c.checks.tol > 0.0)) {
        in.fail(std::max(in.line_of("checks.fd_step"), in.line_of("checks.tol")), "fd_step and tol must be positive");
    }

    if (c.kind == ExperimentKind::SimulateFull && c.initial.kind == InitialKind::ReducedMu) {
        in.fail(std::max(in.line_of("initial.kind"), 1), "simulate-full needs a reduced or cartesian initial state");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError(fmt::format("{}: cannot open file", path));
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str(), path);
}

namespace {

std::string vec_text(const Vec3& v) { return fmt::format("{:.17g} {:.17g} {:.17g}", v.x(), v.y(), v.z()); }

std::string shape_text(const ShapePoint& p) { return fmt::format("{:.17g} {:.17g} {:.17g}", p.r(), p.s(), p.phi()); }

}  // namespace

std::string resolved_text(const ExperimentConfig& c) {
    std::string out;
    auto line = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
    auto num = [](double v) { return fmt::format("{:.17g}", v); };

    out += "[experiment]\n";
    line("kind", std::string(to_string(c.kind)));

    out += "[masses]\n";
    line("m1", num(c.masses[0]));
    line("m2", num(c.masses[1]));
    line("m3", num(c.masses[2]));
    line("clustering", std::string(to_string(c.clustering)));

    out += "[potential]\n";
    switch (c.potential.type) {
    case PotentialConfig::Type::Zero: line("type", "zero"); break;
    case PotentialConfig::Type::ShapeHarmonic:
        line("type", "shape-harmonic");
        line("reference", shape_text(c.potential.reference));
        line("stiffness", fmt::format("{:.17g} {:.17g} {:.17g}", c.potential.stiffness[0], c.potential.stiffness[1],
                                      c.potential.stiffness[2]));
        break;
    case PotentialConfig::Type::Pairwise:
        line("type", "pairwise");
        line("pair12", describe_pair_form(c.potential.pairs[0]));
        line("pair13", describe_pair_form(c.potential.pairs[1]));
        line("pair23", describe_pair_form(c.potential.pairs[2]));
        break;
    }

    out += "[initial]\n";
    const ReducedState& st = c.initial.reduced;
    switch (c.initial.kind) {
    case InitialKind::Reduced:
        line("kind", "reduced");
        for (auto [k, v] : {std::pair{"r", st.r}, {"s", st.s}, {"phi", st.phi}, {"gamma", st.gamma}, {"p_r", st.p_r},
                            {"p_s", st.p_s}, {"p_phi", st.p_phi}, {"p_gamma", st.p_gamma}}) {
            line(k, num(v));
        }
        break;
    case InitialKind::ReducedMu:
        line("kind", "reduced-mu");
        for (auto [k, v] : {std::pair{"r", st.r}, {"s", st.s}, {"phi", st.phi}, {"p_r", st.p_r}, {"p_s", st.p_s},
                            {"p_phi", st.p_phi}, {"mu", c.initial.reduced_mu.mu}}) {
            line(k, num(v));
        }
        break;
    case InitialKind::Cartesian:
        line("kind", "cartesian");
        line("x1", vec_text(c.initial.positions.x1));
        line("x2", vec_text(c.initial.positions.x2));
        line("x3", vec_text(c.initial.positions.x3));
        line("v1", vec_text(c.initial.velocities.x1));
        line("v2", vec_text(c.initial.velocities.x2));
        line("v3", vec_text(c.initial.velocities.x3));
        break;
    }

    out += "[integrator]\n";
    line("method", std::string(to_string(c.integrator.method)));
    line("dt", num(c.integrator.dt));
    line("n_steps", std::to_string(c.integrator.n_steps));

    out += "[output]\n";
    if (!c.output.path.empty()) line("path", c.output.path);
    line("format", std::string(to_string(c.output.format)));
    line("stride", std::to_string(c.output.stride));

    out += "[holonomy]\n";
    switch (c.loop.kind) {
    case LoopConfig::Kind::RPhiRectangle:
    case LoopConfig::Kind::SPhiRectangle:
        line("loop", fmt::format("{} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}",
                                 c.loop.kind == LoopConfig::Kind::RPhiRectangle ? "r-phi-rectangle" : "s-phi-rectangle",
                                 c.loop.fixed, c.loop.lo, c.loop.hi, c.loop.phi0, c.loop.phi1));
        break;
    case LoopConfig::Kind::Segments:
        line("loop", "segments");
        for (const auto& seg : c.loop.segments) {
            std::string text;
            for (std::size_t i = 0; i < seg.size(); ++i) text += (i ? "; " : "") + shape_text(seg[i]);
            line("segment", text);
        }
        break;
    }
    line("quadrature_points", std::to_string(c.loop.quadrature_points));
    line("lift_dt", num(c.loop.lift_dt));
    line("control_rate", num(c.loop.control_rate));

    out += "[democracy]\n";
    line("clustering_a", std::string(to_string(c.democracy.a)));
    line("clustering_b", std::string(to_string(c.democracy.b)));
    line("positions", c.democracy.random ? "random" : "given");
    if (!c.democracy.random) {
        line("x1", vec_text(c.democracy.positions.x1));
        line("x2", vec_text(c.democracy.positions.x2));
        line("x3", vec_text(c.democracy.positions.x3));
    }

    out += "[checks]\n";
    line("samples", std::to_string(c.checks.samples));
    line("fd_step", num(c.checks.fd_step));
    line("tol", num(c.checks.tol));
    return out;
}

}  // namespace holored
