#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "holored/connection.hpp"
#include "holored/dynamics.hpp"
#include "holored/kinematics.hpp"
#include "holored/potentials.hpp"

namespace holored {

enum class ExperimentKind { Simulate, SimulateFull, Holonomy, LemmaCheck, Democracy, Checks };

std::string_view to_string(ExperimentKind k);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment_kind(std::string_view text);

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view text);

struct PotentialConfig {
    enum class Type { Zero, ShapeHarmonic, Pairwise };

    Type type = Type::Zero;
    ShapePoint reference{1.0, 1.0, 1.5707963267948966};
    std::array<double, 3> stiffness{1.0, 1.0, 1.0};
    /// Pairs (1,2), (1,3), (2,3).
    std::array<PairForm, 3> pairs{pair_form::None{}, pair_form::None{}, pair_form::None{}};
};

enum class InitialKind { Reduced, ReducedMu, Cartesian };

struct InitialConfig {
    InitialKind kind = InitialKind::Reduced;
    ReducedState reduced{};
    ReducedStateMu reduced_mu{};
    Positions positions{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)};
    Positions velocities{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
};

struct IntegratorConfig {
    Method method = Method::Rk4;
    double dt = 1e-3;
    std::size_t n_steps = 1000;
};

struct OutputConfig {
    std::string path;  ///< empty: no data file
    OutputFormat format = OutputFormat::Csv;
    std::size_t stride = 1;
};

/// Closed or open shape-space path for holonomy and lemma-check runs.
struct LoopConfig {
    enum class Kind { RPhiRectangle, SPhiRectangle, Segments };

    Kind kind = Kind::RPhiRectangle;
    /// Rectangle parameters: held coordinate, then the (lo, hi) ranges of the
    /// moving radius and of phi.
    double fixed = 1.0, lo = 1.0, hi = 2.0, phi0 = 1.0471975511965976, phi1 = 2.0943951023931953;
    /// Segments: two vertices give a line, more give a polyline.
    std::vector<std::vector<ShapePoint>> segments;
    int quadrature_points = kDefaultQuadraturePoints;
    double lift_dt = 1e-3;
    /// Spin rate of the non-horizontal negative control in lemma-check.
    double control_rate = 0.01;
};

struct DemocracyConfig {
    Clustering a = Clustering::Pair13_2;
    Clustering b = Clustering::Pair23_1;
    bool random = true;  ///< draw the configuration from the run seed
    Positions positions{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)};
};

struct ChecksConfig {
    std::size_t samples = 100;
    double fd_step = 1e-5;
    double tol = 1e-6;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Simulate;
    MassTriple masses{1.0, 1.0, 1.0};
    Clustering clustering = Clustering::Pair13_2;
    PotentialConfig potential;
    InitialConfig initial;
    IntegratorConfig integrator;
    OutputConfig output;
    LoopConfig loop;
    DemocracyConfig democracy;
    ChecksConfig checks;

    PotentialPtr make_potential() const;
    ShapePath make_path() const;
};

/// Parses the sectioned key-value format:
///
///     # comment
///     [section]
///     key = value
///
/// Sections: experiment, masses, potential, initial, integrator, output,
/// holonomy, democracy, checks. Errors are ConfigError with `source:line`.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Canonical text of every field (defaults included) that parses back to an
/// identical config.
std::string resolved_text(const ExperimentConfig& config);

}  // namespace holored
