#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "fbtransfer/params.hpp"

namespace fbtransfer::test {

inline SystemConfig canonical_config() { return SystemConfig{}; }

inline DerivedParams canonical_params() { return derive(canonical_config()); }

// Fixture with a small absolute cooperativity so feedback gains stay modest
// across the full G/C scan range.
inline DerivedParams small_c_params(double cooperativity = 10.0) {
    return derive(with_cooperativity(canonical_config(), cooperativity));
}

inline DerivedParams ratio_params(double c_over_nth) {
    return derive(with_cooperativity_ratio(canonical_config(), c_over_nth));
}

inline bool close_rel(double value, double reference, double rel_tol) {
    return std::abs(value - reference) <= rel_tol * std::abs(reference);
}

inline bool close_abs(double value, double reference, double abs_tol) {
    return std::abs(value - reference) <= abs_tol;
}

// Deterministic uniform generator for randomized property checks; decoupled
// from the library RNG so property fixtures stay stable across refactors.
class PropertyRng {
  public:
    explicit PropertyRng(std::uint64_t seed) : state_(seed) {}

    double uniform(double lo, double hi) {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z = z ^ (z >> 31);
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

  private:
    std::uint64_t state_;
};

}  // namespace fbtransfer::test
