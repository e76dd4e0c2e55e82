#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gossip/error.hpp"

namespace gossip {

/// Outcome of the assumption checks on a persuasion function.
struct AssumptionReport {
    bool nondecreasing = false;
    bool concave = false;
    /// φ′(0) < φ(0).
    bool slope_below_value_at_zero = false;

    bool standard() const noexcept { return nondecreasing && concave; }
    bool strong() const noexcept { return standard() && slope_below_value_at_zero; }

    /// First grid point where a standard check failed.
    std::optional<double> witness;
    std::string message;
};

/// Persuasion function φ : [0, 1] -> [0, 1].
///
/// Textual forms (round-trip through to_string):
///   "linear"                 φ(z) = z
///   "constant:c"             φ(z) = c
///   "poly:a0,a1,..."         φ(z) = a0 + a1 z + ...
///   "table:z0:v0,z1:v1,..."  piecewise-linear through the points
/// A custom evaluator can be wrapped as well; it has no textual form.
class PersuasionFunction {
public:
    enum class Kind { linear, constant, polynomial, tabulated, custom };

    static PersuasionFunction linear();
    static PersuasionFunction constant(double c);
    static PersuasionFunction polynomial(std::vector<double> coefficients);
    static PersuasionFunction tabulated(std::vector<double> grid, std::vector<double> values);
    static PersuasionFunction custom(std::string name, std::function<double(double)> fn);

    /// Throws invalid_argument on a malformed spec.
    static PersuasionFunction parse(const std::string& spec);

    double operator()(double z) const;

    Kind kind() const noexcept { return kind_; }
    std::string to_string() const;

    const std::vector<double>& coefficients() const noexcept { return coefficients_; }

private:
    Kind kind_ = Kind::linear;
    std::vector<double> coefficients_; // polynomial; constant stores c here
    std::vector<double> grid_;
    std::vector<double> values_;
    std::function<double(double)> fn_;
    std::string name_;
};

inline constexpr std::size_t kDefaultValidationGrid = 1001;
inline constexpr double kSignTolerance = 1e-8;

/// Checks monotonicity, concavity and φ′(0) < φ(0) on a uniform grid of
/// grid_size points using finite differences with step 1 / (grid_size - 1).
/// Throws assumption_error when φ leaves [0, 1] on the grid.
AssumptionReport validate_assumptions(const PersuasionFunction& phi, std::size_t grid_size = kDefaultValidationGrid);

/// φ evaluated outside [0, 1].
class assumption_error : public error {
public:
    assumption_error(const std::string& what, double witness) : error(what), witness_(witness) {}
    double witness() const noexcept { return witness_; }

private:
    double witness_;
};

} // namespace gossip
