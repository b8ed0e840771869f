#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>

namespace lmsim {

// splitmix64; used only to turn (master seed, stream label) into
// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// One independently seeded generator per named stream. Every process in a
// simulation draws from its own stream, so adding or removing a process
// never perturbs the draws seen by the others, and replications with
// distinct master seeds are independent.
class RngStream {
public:
    RngStream() = default;
    RngStream(std::uint64_t master_seed, std::string_view label)
        : engine_(splitmix64(master_seed ^ splitmix64(fnv1a64(label)))) {}

    double uniform() { // [0, 1)
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    // Uniform integer on [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<int>(mean)(engine_);
    }
    double gamma(double shape, double scale) {
        return std::gamma_distribution<double>(shape, scale)(engine_);
    }
    // Pareto with minimum x_m and shape a, truncated above at `cap`
    // (inverse CDF of the truncated law, so no rejection loop).
    double truncated_pareto(double x_m, double shape, double cap) {
        double u = uniform();
        double tail_at_cap = std::pow(x_m / cap, shape); // P(X > cap) untruncated
        double x = x_m * std::pow(1.0 - u * (1.0 - tail_at_cap), -1.0 / shape);
        return x < cap ? x : cap;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_{0};
};

// Lazily creates streams by label; creation order does not affect the
// draws, only the label and master seed do.
class RngStreamSet {
public:
    explicit RngStreamSet(std::uint64_t master_seed = 0) : master_seed_(master_seed) {}

    RngStream& stream(const std::string& label) {
        auto it = streams_.find(label);
        if (it == streams_.end())
            it = streams_.emplace(label, RngStream(master_seed_, label)).first;
        return it->second;
    }

    std::uint64_t master_seed() const { return master_seed_; }

private:
    std::uint64_t master_seed_ = 0;
    std::map<std::string, RngStream> streams_;
};

} // namespace lmsim
