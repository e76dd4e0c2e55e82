#include <bit>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "gossip/graph.hpp"

namespace gossip {

namespace {

// y = A x with (Ax)_v = sum_{w in N_v} x_w.
void multiply(const Graph& g, const std::vector<double>& x, std::vector<double>& y)
{
    for (node_t v = 0; v < g.node_count(); ++v) {
        double s = 0.0;
        for (node_t w : g.neighbors(v))
            s += x[w];
        y[v] = s;
    }
}

double norm2(const std::vector<double>& x)
{
    double s = 0.0;
    for (double xi : x)
        s += xi * xi;
    return std::sqrt(s);
}

} // namespace

SpectralRadius spectral_radius(const Graph& g, double tolerance, std::size_t max_iterations)
{
    const std::size_t n = g.node_count();
    SpectralRadius out;
    if (n == 0)
        return out;

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> av(n);
    for (std::size_t it = 0; it <= max_iterations; ++it) {
        multiply(g, v, av);
        const double lambda = norm2(av); // |Av| / |v| with |v| = 1
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = av[i] - lambda * v[i];
            r += d * d;
        }
        out.value = lambda;
        out.residual = std::sqrt(r);
        out.iterations = it;
        if (out.residual <= tolerance) {
            out.converged = true;
            break;
        }
        if (lambda == 0.0)
            break;
        // v <- (A + I) v / |(A + I) v|
        for (std::size_t i = 0; i < n; ++i)
            av[i] += v[i];
        const double s = norm2(av);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = av[i] / s;
    }
    return out;
}

Rational make_rational(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t d = std::gcd(num, den);
    return d == 0 ? Rational{0, 1} : Rational{num / d, den / d};
}

CheegerResult cheeger_exact(const Graph& g)
{
    const std::size_t n = g.node_count();
    if (n > kCheegerMaxNodes)
        throw size_cap_error(fmt::format("cheeger_exact: N = {} exceeds the brute-force cap of {}", n, kCheegerMaxNodes));
    if (n < 2)
        throw invalid_argument("cheeger_exact: needs at least two nodes");

    std::vector<std::uint32_t> out_mask(n, 0), in_mask(n, 0);
    for (node_t v = 0; v < n; ++v) {
        for (node_t w : g.neighbors(v)) {
            if (v == w)
                continue;
            out_mask[v] |= 1u << w;
            in_mask[w] |= 1u << v;
        }
    }

    // Gray-code walk over all 2^n subsets; step i toggles bit ctz(i).
    std::uint32_t subset = 0;
    std::int64_t cut = 0;
    bool have_best = false;
    Rational best{0, 1};
    std::uint32_t best_subset = 0;
    const std::uint64_t steps = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < steps; ++i) {
        const int x = std::countr_zero(i);
        const std::uint32_t bit = 1u << x;
        if (subset & bit) {
            subset &= ~bit;
            cut -= std::popcount(out_mask[x] & ~subset);
            cut += std::popcount(in_mask[x] & subset);
        } else {
            cut -= std::popcount(in_mask[x] & subset);
            subset |= bit;
            cut += std::popcount(out_mask[x] & ~subset);
        }
        const std::int64_t size = std::popcount(subset);
        if (size == 0 || static_cast<std::size_t>(size) == n)
            continue;
        const std::int64_t smaller = std::min<std::int64_t>(size, static_cast<std::int64_t>(n) - size);
        const Rational ratio{cut, smaller};
        if (!have_best || ratio < best) {
            best = ratio;
            best_subset = subset;
            have_best = true;
        }
    }

    CheegerResult result;
    result.gamma = make_rational(best.num, best.den);
    for (node_t v = 0; v < n; ++v)
        if (best_subset & (1u << v))
            result.subset.push_back(v);
    return result;
}

std::optional<double> GraphMetrics::gamma() const
{
    if (cheeger)
        return cheeger->value();
    if (family && family->e2 > 0.0)
        return avg_degree / family->e2;
    return std::nullopt;
}

bool GraphMetrics::inequalities_hold(double tolerance) const
{
    const double rho = spectral.value;
    const double delta = static_cast<double>(max_degree);
    bool ok = rho <= delta + tolerance && avg_degree <= delta + tolerance;
    if (auto gm = gamma())
        ok = ok && *gm <= rho + tolerance && *gm <= avg_degree + tolerance;
    return ok;
}

GraphMetrics compute_metrics(const Graph& g, std::optional<ExpansiveParams> family)
{
    GraphMetrics m;
    m.avg_degree = g.avg_degree();
    m.max_degree = g.max_degree();
    m.spectral = spectral_radius(g);
    if (g.node_count() >= 2 && g.node_count() <= kCheegerMaxNodes)
        m.cheeger = cheeger_exact(g).gamma;
    m.family = family;
    return m;
}

} // namespace gossip
