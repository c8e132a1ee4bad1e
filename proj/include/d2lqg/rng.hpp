#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace d2lqg::rng {

inline constexpr const char* kGeneratorId = "splitmix64/box-muller-v1";

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based substream keyed by (seed, trial, stage): every draw is a pure
// function of the key and the draw index, so trials can run on any thread
// layout with bit-identical results.
class SubStream {
  public:
    SubStream(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

    // k-th uniform draw in [0, 1) at the given stage.
    double uniform(std::uint64_t stage, std::uint32_t k) const {
        std::uint64_t s = seed_;
        (void)detail::splitmix64(s);
        s ^= 0xd1342543de82ef95ULL * (trial_ + 1);
        (void)detail::splitmix64(s);
        s ^= 0xaf251af3b0f025b5ULL * (stage + 1);
        (void)detail::splitmix64(s);
        s ^= 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1);
        const std::uint64_t bits = detail::splitmix64(s);
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    // k-th standard normal draw at the given stage (Box-Muller).
    double normal(std::uint64_t stage, std::uint32_t k) const {
        const double u1 = uniform(stage, 2 * k);
        const double u2 = uniform(stage, 2 * k + 1);
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    Eigen::VectorXd normals(std::uint64_t stage, int n) const {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = normal(stage, static_cast<std::uint32_t>(i));
        return v;
    }

    // Uniform draws on [0, bound_i] componentwise; a zero bound gives exactly 0.
    Eigen::VectorXd uniforms(std::uint64_t stage, const Eigen::VectorXd& bounds) const {
        Eigen::VectorXd v(bounds.size());
        for (int i = 0; i < bounds.size(); ++i) {
            v(i) = bounds(i) * uniform(stage, static_cast<std::uint32_t>(i));
        }
        return v;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t trial_;
};

}  // namespace d2lqg::rng
