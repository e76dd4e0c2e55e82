#include "gossip/birthdeath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace gossip {

BirthDeathChain::BirthDeathChain(std::vector<double> birth, std::vector<double> death, std::string label)
    : birth_(std::move(birth)), death_(std::move(death)), label_(std::move(label))
{
    if (birth_.size() < 2 || birth_.size() != death_.size())
        throw invalid_argument("birth-death chain needs matching rate tables over at least {0, 1}");
    for (std::size_t k = 0; k < birth_.size(); ++k) {
        if (!(std::isfinite(birth_[k]) && birth_[k] >= 0.0 && std::isfinite(death_[k]) && death_[k] >= 0.0))
            throw invalid_argument(fmt::format("birth-death chain: bad rates at k = {}", k));
    }
    if (birth_.back() != 0.0 || death_.front() != 0.0)
        throw invalid_argument("birth-death chain must not leave [0, 1]");
}

double BirthDeathChain::max_total_rate() const
{
    double m = 0.0;
    for (std::size_t k = 0; k < birth_.size(); ++k)
        m = std::max(m, birth_[k] + death_[k]);
    return m;
}

namespace {

// λ⁺(k) = N rate z(1-z)φ(z), λ⁻(k) = N z
BirthDeathChain meanfield_with_rate(std::size_t n, double rate, const PersuasionFunction& phi, std::string label)
{
    if (n == 0)
        throw invalid_argument("chain size must be >= 1");
    std::vector<double> birth(n + 1), death(n + 1);
    const double nn = static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
        const double z = static_cast<double>(k) / nn;
        birth[k] = nn * rate * z * (1.0 - z) * phi(z);
        death[k] = nn * z;
    }
    return BirthDeathChain(std::move(birth), std::move(death), std::move(label));
}

} // namespace

BirthDeathChain rates_meanfield(std::size_t n, double beta, const PersuasionFunction& phi)
{
    if (!(beta >= 0.0))
        throw invalid_argument("rates_meanfield: beta must be >= 0");
    return meanfield_with_rate(n, beta, phi, "meanfield");
}

BirthDeathChain rates_lower(std::size_t n, double beta, const PersuasionFunction& phi, double gamma, double avg_degree)
{
    if (!(beta >= 0.0) || !(gamma >= 0.0) || !(avg_degree > 0.0))
        throw invalid_argument("rates_lower: need beta >= 0, gamma >= 0, avg_degree > 0");
    if (gamma > avg_degree)
        throw invalid_argument(fmt::format("rates_lower: gamma = {} exceeds the average degree {}", gamma, avg_degree));
    // γ = d̄ gives the ratio 1.0 exactly, hence the mean-field table bit for bit
    return meanfield_with_rate(n, beta * (gamma / avg_degree), phi, "lower");
}

BirthDeathChain rates_upper(std::size_t n, double beta, const PersuasionFunction& phi, double max_degree,
                            double avg_degree)
{
    if (!(beta >= 0.0) || !(avg_degree > 0.0))
        throw invalid_argument("rates_upper: need beta >= 0, avg_degree > 0");
    if (max_degree < avg_degree)
        throw invalid_argument(fmt::format("rates_upper: max degree {} is below the average degree {}", max_degree, avg_degree));
    if (n == 0)
        throw invalid_argument("chain size must be >= 1");
    const double nn = static_cast<double>(n);
    const double rate = (max_degree / avg_degree) * beta;
    std::vector<double> birth(n + 1), death(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double z = static_cast<double>(k) / nn;
        birth[k] = nn * rate * z * phi(z);
        death[k] = nn * z;
    }
    birth[n] = 0.0; // the lattice ends at 1
    return BirthDeathChain(std::move(birth), std::move(death), "upper");
}

Trajectory simulate_bd(const BirthDeathChain& chain, std::size_t k0, const ChainSimulationOptions& options)
{
    const std::size_t n = chain.size();
    if (k0 > n)
        throw invalid_argument(fmt::format("simulate_bd: start state {} outside [0, {}]", k0, n));
    if (!(options.horizon > 0.0))
        throw invalid_argument("simulate_bd: horizon must be > 0");

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const double inv_n = 1.0 / static_cast<double>(n);
    rng_t engine(options.seed);
    TrajectoryRecorder recorder(options.horizon, options.sampling, options.seed);

    std::size_t k = k0;
    double t = 0.0;
    recorder.start(static_cast<double>(k) * inv_n, nan);
    while (true) {
        if (k == 0) {
            recorder.absorb(t, nan);
            break;
        }
        const double up = chain.birth(k), down = chain.death(k);
        const double total = up + down;
        if (total <= 0.0)
            break; // frozen
        const double next = t + exponential(engine, total);
        recorder.advance(next, static_cast<double>(k) * inv_n, nan);
        if (next > options.horizon)
            break;
        t = next;
        if (uniform01(engine) * total < up)
            ++k;
        else
            --k;
        recorder.event(t, static_cast<double>(k) * inv_n, nan);
    }
    return recorder.finish(static_cast<double>(k) * inv_n, nan);
}

std::size_t run_until_exit(const BirthDeathChain& chain, std::size_t k, std::size_t lower, std::size_t upper,
                           rng_t& engine)
{
    if (!(lower <= k && k <= upper && upper <= chain.size()))
        throw invalid_argument("run_until_exit: need lower <= k <= upper <= N");
    while (k != lower && k != upper) {
        const double up = chain.birth(k), down = chain.death(k);
        if (up + down <= 0.0)
            throw inapplicable_error(fmt::format("run_until_exit: chain is frozen at k = {}", k));
        if (uniform01(engine) * (up + down) < up)
            ++k;
        else
            --k;
    }
    return k;
}

double hitting_prob(const BirthDeathChain& chain, std::size_t k, std::size_t target)
{
    if (!(k <= target && target <= chain.size()))
        throw invalid_argument(fmt::format("hitting_prob: need 0 <= k <= M <= N, got k = {}, M = {}", k, target));
    if (k == target)
        return 1.0;
    if (k == 0)
        return 0.0;
    for (std::size_t i = 1; i < target; ++i)
        if (chain.birth(i) <= 0.0)
            throw inapplicable_error(fmt::format("hitting_prob: birth rate vanishes at k = {} < M = {}", i, target));

    // e_k = S(k) / S(M), S(j) = sum_{i<j} π_i, π_i = prod_{l=1..i} λ⁻(l)/λ⁺(l)
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> log_pi(target);
    log_pi[0] = 0.0;
    for (std::size_t i = 1; i < target; ++i) {
        const double down = chain.death(i);
        log_pi[i] = down > 0.0 && log_pi[i - 1] != neg_inf ? log_pi[i - 1] + std::log(down) - std::log(chain.birth(i)) : neg_inf;
    }
    auto log_sum = [&](std::size_t count) {
        const double m = *std::max_element(log_pi.begin(), log_pi.begin() + static_cast<std::ptrdiff_t>(count));
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i)
            s += std::exp(log_pi[i] - m);
        return m + std::log(s);
    };
    return std::exp(log_sum(k) - log_sum(target));
}

} // namespace gossip
