// Command-line front end: one subcommand per experiment kind, plus compare.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "holored/experiment.hpp"

using namespace holored;

namespace {

struct Flags {
    std::vector<std::string> configs;
    std::string out;
    std::string format;
    std::uint64_t seed = 1;
    double tol = 1e-6;
};

int run_one(ExperimentKind kind, const Flags& flags) {
    ExperimentConfig config = load_config(flags.configs.front());
    config.kind = kind;
    if (!flags.out.empty()) config.output.path = flags.out;
    if (!flags.format.empty()) config.output.format = parse_output_format(flags.format);

    const RunResult result = run(config, {flags.seed});
    if (!config.output.path.empty()) {
        std::ofstream file(config.output.path, std::ios::binary);
        if (!file) throw ConfigError(fmt::format("{}: cannot open for writing", config.output.path));
        write_table(file, result, config, config.output.format);
    }
    print_summary(std::cout, result, config);
    return static_cast<int>(result.status);
}

int run_compare(const Flags& flags) {
    if (flags.configs.size() != 2) throw ConfigError("compare needs exactly two --config files");
    const ExperimentConfig a = load_config(flags.configs[0]);
    const ExperimentConfig b = load_config(flags.configs[1]);
    const CompareReport report = compare(a, b, flags.tol, {flags.seed});
    print_compare(std::cout, report);
    return report.passed() ? 0 : static_cast<int>(RunStatus::CheckFailed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holonomy-reduced three-body dynamics and geometric checks"};
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::pair<ExperimentKind, std::string>> kinds = {
        {ExperimentKind::Simulate, "integrate the reduced (or S1-reduced) Hamiltonian system"},
        {ExperimentKind::SimulateFull, "integrate Newton's equations on the full Jacobi space"},
        {ExperimentKind::Holonomy, "holonomy of a shape loop by line integral, surface integral and frame lift"},
        {ExperimentKind::LemmaCheck, "fixed-plane check of the horizontal lift against a non-horizontal control"},
        {ExperimentKind::Democracy, "rotation angle between two Jacobi clusterings"},
        {ExperimentKind::Checks, "randomized consistency checks of the configured model"},
    };
    std::vector<std::pair<CLI::App*, ExperimentKind>> subcommands;
    for (const auto& [kind, help] : kinds) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(kind)), help);
        sub->add_option("--config", flags.configs, "experiment config file")->required()->expected(1);
        sub->add_option("--out", flags.out, "data file (overrides [output] path)");
        sub->add_option("--format", flags.format, "csv or json (overrides [output] format)")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", flags.seed, "seed for randomized runs");
        subcommands.emplace_back(sub, kind);
    }
    CLI::App* cmp = app.add_subcommand("compare", "run two simulations and compare their shared columns");
    cmp->add_option("--config", flags.configs, "config file (give twice)")->required()->expected(2);
    cmp->add_option("--tol", flags.tol, "maximum allowed absolute deviation");
    cmp->add_option("--seed", flags.seed, "seed for randomized runs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmp->parsed()) return run_compare(flags);
        for (const auto& [sub, kind] : subcommands) {
            if (sub->parsed()) return run_one(kind, flags);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return static_cast<int>(RunStatus::ConfigError);
    } catch (const MismatchedGrids& e) {
        std::cerr << "mismatched grids: " << e.what() << '\n';
        return static_cast<int>(RunStatus::CheckFailed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(RunStatus::DomainExit);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(RunStatus::ConfigError);
    }
    return static_cast<int>(RunStatus::ConfigError);
}
