#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "holored/experiment.hpp"

using namespace holored;

namespace {

const char* kBenchmark = R"(
[potential]
type = pairwise
all = morse 1 1 1
[initial]
r = 1.2
s = 1.0
phi = 1.3
gamma = 0
p_r = 0.1
p_s = -0.2
p_phi = 0.3
p_gamma = 0.25
[integrator]
dt = 1e-3
n_steps = 10000
[output]
stride = 100
)";

double summary(const RunResult& r, std::string_view key) {
    for (const SummaryItem& item : r.summary) {
        if (item.key == key) return item.value;
    }
    FAIL("missing summary key " << key);
    return NAN;
}

std::string csv(const RunResult& r, const ExperimentConfig& c) {
    std::ostringstream out;
    write_table(out, r, c, OutputFormat::Csv);
    return out.str();
}

}  // namespace

TEST_CASE("simulate the Morse benchmark") {
    const ExperimentConfig c = parse_config(kBenchmark);
    const RunResult r = run(c);
    CHECK(r.status == RunStatus::Ok);
    CHECK(summary(r, "max_rel_energy_error") < 1e-8);
    CHECK(summary(r, "max_abs_momentum_change") < 1e-12);
    CHECK(r.table.rows.size() == 101);
    CHECK(r.table.rows.back()[0] == doctest::Approx(10.0));
    for (const char* col : {"t", "r", "s", "phi", "gamma", "gamma_mod_2pi", "p_r", "p_s", "p_phi", "p_gamma", "energy"}) {
        CHECK(r.table.column(col) >= 0);
    }

    SUBCASE("csv is self-describing and round-trip exact") {
        const std::string text = csv(r, c);
        CHECK(text.rfind("# [experiment]\n# kind = simulate\n", 0) == 0);
        CHECK(text.find("\nt,r,s,phi,gamma,gamma_mod_2pi,p_r,p_s,p_phi,p_gamma,energy\n") != std::string::npos);
        const std::string last_line = text.substr(text.rfind('\n', text.size() - 2) + 1);
        std::istringstream cells(last_line);
        std::string cell;
        for (std::size_t i = 0; std::getline(cells, cell, ','); ++i) {
            REQUIRE(std::stod(cell) == r.table.rows.back()[i]);
        }
    }
    SUBCASE("identical config gives bit-identical output") {
        CHECK(csv(run(parse_config(kBenchmark)), c) == csv(r, c));
    }
    SUBCASE("json output") {
        std::ostringstream out;
        write_table(out, r, c, OutputFormat::Json);
        const auto doc = nlohmann::json::parse(out.str());
        CHECK(doc["experiment"] == "simulate");
        CHECK(doc["rows"].size() == 101);
        CHECK(doc["summary"]["max_rel_energy_error"].get<double>() < 1e-8);
        CHECK(doc["rows"][100][0].get<double>() == r.table.rows.back()[0]);
    }
}

TEST_CASE("domain exit keeps the partial output") {
    const ExperimentConfig c = parse_config("[initial]\nr = 1\ns = 0.05\nphi = 1\np_s = -1\n[integrator]\ndt = 1e-2\n");
    const RunResult r = run(c);
    CHECK(r.status == RunStatus::DomainExit);
    CHECK(r.table.rows.size() >= 4);
    CHECK(r.table.rows.size() < 10);
    CHECK(!r.notes.empty());
}

TEST_CASE("holonomy of the rectangle loop") {
    const ExperimentConfig c = parse_config("[experiment]\nkind = holonomy\n[holonomy]\nlift_dt = 1e-3\n");
    const RunResult r = run(c);
    CHECK(r.status == RunStatus::Ok);
    CHECK(std::abs(summary(r, "holonomy_line_integral") - std::numbers::pi / 10) < 1e-7);
    CHECK(std::abs(summary(r, "holonomy_stokes") - std::numbers::pi / 10) < 1e-6);
    CHECK(std::abs(summary(r, "holonomy_frame_lift") - std::numbers::pi / 10) < 1e-6);
    CHECK(summary(r, "plane_drift") < 1e-8);
}

TEST_CASE("lemma check") {
    CHECK(run(parse_config("[holonomy]\nlift_dt = 1e-3\n[experiment]\nkind = lemma-check\n")).status == RunStatus::Ok);
    // A control spin too small to exceed the detection bound fails the check.
    const RunResult weak =
        run(parse_config("[holonomy]\nlift_dt = 1e-3\ncontrol_rate = 1e-6\n[experiment]\nkind = lemma-check\n"));
    CHECK(weak.status == RunStatus::CheckFailed);
}

TEST_CASE("democracy run") {
    const ExperimentConfig c = parse_config("[experiment]\nkind = democracy\n");
    const RunResult a = run(c, {7});
    CHECK(a.status == RunStatus::Ok);
    CHECK(summary(a, "residual") < 1e-10);
    CHECK(std::abs(std::abs(summary(a, "theta")) - 2 * std::numbers::pi / 3) < 1e-12);
    CHECK(run(c, {8}).table.rows[0][0] != a.table.rows[0][0]);
    CHECK(run(c, {7}).table.rows[0] == a.table.rows[0]);
}

TEST_CASE("checks run") {
    const ExperimentConfig c = parse_config(R"(
[experiment]
kind = checks
[masses]
m1 = 1
m2 = 2
m3 = 3
[potential]
type = pairwise
all = morse 1 1 1
)");
    const RunResult r = run(c, {3});
    CHECK(r.status == RunStatus::Ok);
    CHECK(r.table.labels.size() == r.table.rows.size());
    CHECK(csv(r, c).find("\ncheck,max_error,tolerance,passed\n") != std::string::npos);
}

TEST_CASE("compare") {
    SUBCASE("identical configs") {
        const ExperimentConfig c = parse_config(kBenchmark);
        const CompareReport rep = compare(c, c, 0.0);
        CHECK(rep.max_deviation() == 0.0);
        CHECK(rep.passed());
    }
    SUBCASE("reduced vs planar full-space run") {
        for (const char* pg : {"0", "0.25"}) {
            const std::string text = "[potential]\ntype = pairwise\nall = morse 1 1 1\n[initial]\nr = 1.2\ns = 1.0\n"
                                     "phi = 1.3\np_r = 0.1\np_s = -0.2\np_phi = 0.3\np_gamma = " +
                                     std::string(pg) + "\n[integrator]\ndt = 1e-4\nn_steps = 10000\n[output]\nstride = 50\n";
            ExperimentConfig a = parse_config(text);
            ExperimentConfig b = a;
            b.kind = ExperimentKind::SimulateFull;
            const CompareReport rep = compare(a, b, 1e-6);
            CHECK(rep.passed());
            CHECK(rep.deviations.size() == 4);  // r, s, phi, energy
        }
    }
    SUBCASE("8-dim vs 6-dim") {
        ExperimentConfig a = parse_config(kBenchmark);
        a.initial.reduced.p_gamma = 0.5;
        a.integrator.n_steps = 1000;
        ExperimentConfig b = a;
        b.initial.kind = InitialKind::ReducedMu;
        b.initial.reduced_mu = {1.2, 1.0, 1.3, 0.1, -0.2, 0.3, 0.5};
        const CompareReport rep = compare(a, b, 1e-10);
        CHECK(rep.passed());
        CHECK(rep.deviations.size() == 7);
    }
    SUBCASE("different grids") {
        const ExperimentConfig a = parse_config(kBenchmark);
        ExperimentConfig b = a;
        b.integrator.n_steps = 5000;
        CHECK_THROWS_AS(compare(a, b, 1.0), MismatchedGrids);
        b = a;
        b.integrator.dt = 2e-3;
        CHECK_THROWS_AS(compare(a, b, 1.0), MismatchedGrids);
    }
    SUBCASE("different dynamics fail the tolerance") {
        const ExperimentConfig a = parse_config(kBenchmark);
        ExperimentConfig b = a;
        b.initial.reduced.p_r = 0.11;
        CHECK_FALSE(compare(a, b, 1e-6).passed());
    }
    SUBCASE("only simulations can be compared") {
        const ExperimentConfig h = parse_config("[experiment]\nkind = holonomy\n");
        CHECK_THROWS_AS(compare(h, h, 1.0), ConfigError);
    }
}
