#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "holored/kinematics.hpp"

namespace holored {

/// (dV/dr, dV/ds, dV/dphi).
struct ShapeGradient {
    double dr = 0.0;
    double ds = 0.0;
    double dphi = 0.0;
};

/// A rotationally invariant potential, i.e. a function on shape space.
class PotentialModel {
public:
    virtual ~PotentialModel() = default;

    virtual double evaluate(const ShapePoint& p) const = 0;
    virtual ShapeGradient gradient(const ShapePoint& p) const = 0;
    /// One-line human readable description, used in output headers.
    virtual std::string describe() const = 0;
};

using PotentialPtr = std::shared_ptr<const PotentialModel>;

class ZeroPotential final : public PotentialModel {
public:
    double evaluate(const ShapePoint&) const override { return 0.0; }
    ShapeGradient gradient(const ShapePoint&) const override { return {}; }
    std::string describe() const override { return "zero"; }
};

/// V = 1/2 k_r (r-r0)^2 + 1/2 k_s (s-s0)^2 + 1/2 k_phi (phi-phi0)^2.
class ShapeHarmonic final : public PotentialModel {
public:
    ShapeHarmonic(const ShapePoint& reference, const std::array<double, 3>& stiffness);

    double evaluate(const ShapePoint& p) const override;
    ShapeGradient gradient(const ShapePoint& p) const override;
    std::string describe() const override;

private:
    ShapePoint ref_;
    std::array<double, 3> k_;
};

namespace pair_form {

/// v(d) = 1/2 k (d - d0)^2
struct Harmonic {
    double k, d0;
};
/// v(d) = D (1 - exp(-a (d - d0)))^2
struct Morse {
    double D, a, d0;
};
/// v(d) = 4 eps ((sigma/d)^12 - (sigma/d)^6)
struct LennardJones {
    double epsilon, sigma;
};
/// No interaction for this pair.
struct None {};

}  // namespace pair_form

using PairForm = std::variant<pair_form::None, pair_form::Harmonic, pair_form::Morse, pair_form::LennardJones>;

/// Value and first derivative of a pair form at distance d.
std::pair<double, double> evaluate_pair_form(const PairForm& form, double d);
std::string describe_pair_form(const PairForm& form);

struct PairwiseSpec {
    /// Pair forms for (1,2), (1,3), (2,3), in that order.
    std::array<PairForm, 3> pairs;
    MassTriple masses;
    Clustering clustering = Clustering::Pair13_2;
};

/// Sum of pair forms over the interatomic distances implied by the Jacobi
/// construction. Throws PotentialDomainError on invalid parameters.
class PairwisePotential final : public PotentialModel {
public:
    explicit PairwisePotential(PairwiseSpec spec);

    double evaluate(const ShapePoint& p) const override;
    ShapeGradient gradient(const ShapePoint& p) const override;
    std::string describe() const override;

    const PairwiseSpec& spec() const { return spec_; }

private:
    PairwiseSpec spec_;
    std::array<QuadraticDistance, 3> coeffs_;
};

PotentialPtr make_zero_potential();
PotentialPtr shape_harmonic(const ShapePoint& reference, const std::array<double, 3>& stiffness);
PotentialPtr pairwise_potential(PairwiseSpec spec);

/// Box of shapes sampled by gradient_check.
struct ShapeBox {
    double r_min = 0.6, r_max = 1.8;
    double s_min = 0.6, s_max = 1.8;
    double phi_min = 0.3, phi_max = 2.8;
};

struct GradientCheckReport {
    std::size_t samples = 0;
    /// Largest |analytic - central difference| over components, divided by
    /// max(1, max-norm of the difference gradient).
    double max_rel_error = 0.0;
    std::vector<ShapePoint> failures;

    bool passed() const { return failures.empty(); }
};

/// Compares analytic gradients with central differences at random shapes.
/// Failures are collected in the report, never thrown.
GradientCheckReport gradient_check(const PotentialModel& v, std::size_t samples, double step, double tol,
                                   std::uint64_t seed = 1, const ShapeBox& box = {});

}  // namespace holored
