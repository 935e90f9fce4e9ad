#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holored/config.hpp"

namespace holored {

/// Numeric output of a run. Rows optionally carry a text label written as
/// the first column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string label_column;
    std::vector<std::string> labels;

    /// Index of `name` in columns, or -1.
    int column(std::string_view name) const;
};

struct SummaryItem {
    std::string key;
    double value;
};

/// Process exit codes of the CLI.
enum class RunStatus : int { Ok = 0, ConfigError = 1, DomainExit = 2, CheckFailed = 3 };

struct RunResult {
    RunStatus status = RunStatus::Ok;
    Table table;
    std::vector<SummaryItem> summary;
    /// Free-form lines (check verdicts, the reason for a domain exit).
    std::vector<std::string> notes;
};

struct RunOptions {
    std::uint64_t seed = 1;
};

/// Executes the experiment without touching the filesystem. Domain exits
/// are reported through RunResult::status with the partial table; config
/// inconsistencies throw ConfigError.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

/// Data file with the resolved config as a `#` comment header (CSV) or a
/// "config" member (JSON). Numbers use 17 significant digits.
void write_table(std::ostream& out, const RunResult& result, const ExperimentConfig& config, OutputFormat format);

void print_summary(std::ostream& out, const RunResult& result, const ExperimentConfig& config);

struct ColumnDeviation {
    std::string column;
    double max_abs = 0.0;
};

struct CompareReport {
    std::size_t samples = 0;
    double tolerance = 0.0;
    std::vector<ColumnDeviation> deviations;  ///< columns present in both runs, except t

    double max_deviation() const;
    bool passed() const { return max_deviation() <= tolerance; }
};

/// Runs both simulations concurrently and compares the columns they share,
/// sample by sample. Throws MismatchedGrids if the time grids differ and
/// DomainExitError if either run leaves the domain.
CompareReport compare(const ExperimentConfig& a, const ExperimentConfig& b, double tolerance,
                      const RunOptions& options = {});

void print_compare(std::ostream& out, const CompareReport& report);

}  // namespace holored
