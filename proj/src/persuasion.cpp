#include "gossip/persuasion.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace gossip {

namespace {

double parse_number(std::string_view text, const std::string& spec)
{
    std::string s(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(value))
        throw invalid_argument(fmt::format("persuasion spec \"{}\": bad number \"{}\"", spec, s));
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

// Shortest decimal form that reads back to the same double.
std::string format_number(double x)
{
    return fmt::format("{}", x);
}

} // namespace

PersuasionFunction PersuasionFunction::linear()
{
    return PersuasionFunction{};
}

PersuasionFunction PersuasionFunction::constant(double c)
{
    if (!(c >= 0.0 && c <= 1.0))
        throw invalid_argument("constant persuasion must lie in [0, 1]");
    PersuasionFunction phi;
    phi.kind_ = Kind::constant;
    phi.coefficients_ = {c};
    return phi;
}

PersuasionFunction PersuasionFunction::polynomial(std::vector<double> coefficients)
{
    if (coefficients.empty())
        throw invalid_argument("polynomial persuasion needs at least one coefficient");
    PersuasionFunction phi;
    phi.kind_ = Kind::polynomial;
    phi.coefficients_ = std::move(coefficients);
    return phi;
}

PersuasionFunction PersuasionFunction::tabulated(std::vector<double> grid, std::vector<double> values)
{
    if (grid.size() < 2 || grid.size() != values.size())
        throw invalid_argument("tabulated persuasion needs >= 2 points and matching sizes");
    if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw invalid_argument("tabulated persuasion grid must be strictly increasing");
    if (grid.front() != 0.0 || grid.back() != 1.0)
        throw invalid_argument("tabulated persuasion grid must span [0, 1]");
    PersuasionFunction phi;
    phi.kind_ = Kind::tabulated;
    phi.grid_ = std::move(grid);
    phi.values_ = std::move(values);
    return phi;
}

PersuasionFunction PersuasionFunction::custom(std::string name, std::function<double(double)> fn)
{
    PersuasionFunction phi;
    phi.kind_ = Kind::custom;
    phi.name_ = std::move(name);
    phi.fn_ = std::move(fn);
    return phi;
}

PersuasionFunction PersuasionFunction::parse(const std::string& spec)
{
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string_view body = colon == std::string::npos ? std::string_view{} : std::string_view(spec).substr(colon + 1);

    if (head == "linear" && colon == std::string::npos)
        return linear();
    if (head == "constant" && colon != std::string::npos)
        return constant(parse_number(body, spec));
    if (head == "poly" && colon != std::string::npos) {
        std::vector<double> coefficients;
        for (auto part : split(body, ','))
            coefficients.push_back(parse_number(part, spec));
        return polynomial(std::move(coefficients));
    }
    if (head == "table" && colon != std::string::npos) {
        std::vector<double> grid, values;
        for (auto point : split(body, ',')) {
            auto zv = split(point, ':');
            if (zv.size() != 2)
                throw invalid_argument(fmt::format("persuasion spec \"{}\": table entries are z:v", spec));
            grid.push_back(parse_number(zv[0], spec));
            values.push_back(parse_number(zv[1], spec));
        }
        return tabulated(std::move(grid), std::move(values));
    }
    throw invalid_argument(fmt::format(
        "unknown persuasion spec \"{}\" (expected linear, constant:c, poly:a0,a1,..., table:z:v,...)", spec));
}

double PersuasionFunction::operator()(double z) const
{
    switch (kind_) {
    case Kind::linear:
        return z;
    case Kind::constant:
        return coefficients_[0];
    case Kind::polynomial: {
        double acc = 0.0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }
    case Kind::tabulated: {
        if (z <= grid_.front())
            return values_.front();
        if (z >= grid_.back())
            return values_.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), z) - grid_.begin());
        const std::size_t lo = hi - 1;
        const double t = (z - grid_[lo]) / (grid_[hi] - grid_[lo]);
        return values_[lo] + t * (values_[hi] - values_[lo]);
    }
    case Kind::custom:
        return fn_(z);
    }
    return 0.0;
}

std::string PersuasionFunction::to_string() const
{
    switch (kind_) {
    case Kind::linear:
        return "linear";
    case Kind::constant:
        return "constant:" + format_number(coefficients_[0]);
    case Kind::polynomial: {
        std::string s = "poly:";
        for (std::size_t i = 0; i < coefficients_.size(); ++i)
            s += (i ? "," : "") + format_number(coefficients_[i]);
        return s;
    }
    case Kind::tabulated: {
        std::string s = "table:";
        for (std::size_t i = 0; i < grid_.size(); ++i)
            s += (i ? "," : "") + format_number(grid_[i]) + ":" + format_number(values_[i]);
        return s;
    }
    case Kind::custom:
        return "custom:" + name_;
    }
    return {};
}

AssumptionReport validate_assumptions(const PersuasionFunction& phi, std::size_t grid_size)
{
    if (grid_size < 3)
        throw invalid_argument("validate_assumptions: grid_size must be >= 3");

    const double h = 1.0 / static_cast<double>(grid_size - 1);
    std::vector<double> f(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double z = static_cast<double>(i) * h;
        f[i] = phi(z);
        if (!(f[i] >= 0.0 && f[i] <= 1.0))
            throw assumption_error(fmt::format("phi({}) = {} lies outside [0, 1]", z, f[i]), z);
    }

    AssumptionReport report;
    report.nondecreasing = true;
    report.concave = true;
    for (std::size_t i = 0; i < grid_size && report.standard(); ++i) {
        const double z = static_cast<double>(i) * h;
        // central differences inside, one-sided at the ends
        double slope;
        if (i == 0)
            slope = (f[1] - f[0]) / h;
        else if (i + 1 == grid_size)
            slope = (f[i] - f[i - 1]) / h;
        else
            slope = (f[i + 1] - f[i - 1]) / (2 * h);
        if (slope < -kSignTolerance) {
            report.nondecreasing = false;
            report.witness = z;
            report.message = fmt::format("phi decreases at z = {} (slope {})", z, slope);
            break;
        }
        if (i > 0 && i + 1 < grid_size) {
            const double curvature = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
            if (curvature > kSignTolerance) {
                report.concave = false;
                report.witness = z;
                report.message = fmt::format("phi is not concave at z = {} (second difference {})", z, curvature);
                break;
            }
        }
    }
    const double slope0 = (f[1] - f[0]) / h;
    report.slope_below_value_at_zero = slope0 < f[0];
    if (report.standard() && !report.slope_below_value_at_zero)
        report.message = fmt::format("phi'(0) = {} is not below phi(0) = {}", slope0, f[0]);
    return report;
}

} // namespace gossip
