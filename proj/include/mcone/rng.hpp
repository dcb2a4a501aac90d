#ifndef MCONE_RNG_HPP
#define MCONE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "mcone/errors.hpp"

namespace mcone {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. All sampling in the library goes through
/// this wrapper so that results depend only on the seed, not on the
/// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent child stream; derivation depends only on the original
    /// seed and the stream index, never on how far this stream advanced.
    Rng split(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ (0xd1342543de82ef95ULL * (stream + 1))));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [0, n). Rejection keeps it exactly uniform.
    int uniform_int(int n) {
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t bound = ~std::uint64_t{0} - ~std::uint64_t{0} % un;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= bound);
        return static_cast<int>(x % un);
    }

    double exponential(double mean) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -mean * std::log(u);
    }

    /// Standard normal via Box-Muller (one value per call, no cache, so
    /// the stream position stays easy to reason about).
    double normal01() {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Fisher-Yates shuffle of [0, n) stored into `out`.
    template <typename Vec>
    void shuffle_indices(Vec& out, int n) {
        out.resize(n);
        for (int i = 0; i < n; ++i) out[i] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = uniform_int(i + 1);
            std::swap(out[i], out[j]);
        }
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

/// One-dimensional law for the diagonal component of admissible vectors.
struct DiagonalLaw {
    enum class Kind { Exponential, HalfNormal, PointMass };

    Kind kind = Kind::Exponential;
    double param = 1.0; // mean for Exponential, sigma for HalfNormal, value for PointMass

    static DiagonalLaw exponential(double mean) { return {Kind::Exponential, mean}; }
    static DiagonalLaw half_normal(double sigma) { return {Kind::HalfNormal, sigma}; }
    static DiagonalLaw point_mass(double value) { return {Kind::PointMass, value}; }

    /// True when every open subinterval of (0, inf) has positive mass.
    bool full_support() const { return kind != Kind::PointMass; }

    double mean() const {
        switch (kind) {
            case Kind::Exponential: return param;
            case Kind::HalfNormal: return param * 0.7978845608028654; // sigma*sqrt(2/pi)
            case Kind::PointMass: return param;
        }
        return param;
    }

    double sample(Rng& rng) const {
        switch (kind) {
            case Kind::Exponential: return rng.exponential(param);
            case Kind::HalfNormal: return std::abs(param * rng.normal01());
            case Kind::PointMass: return param;
        }
        return param;
    }

    double cdf(double x) const {
        if (x <= 0) return 0.0;
        switch (kind) {
            case Kind::Exponential: return 1.0 - std::exp(-x / param);
            case Kind::HalfNormal: return std::erf(x / (param * 1.4142135623730951));
            case Kind::PointMass: return x >= param ? 1.0 : 0.0;
        }
        return 0.0;
    }

    /// Parses "exp:1.0", "halfnormal:2.0" or "point:0.5".
    static DiagonalLaw parse(const std::string& text);
    std::string to_string() const;
};

} // namespace mcone

#endif
