#pragma once

namespace fbtransfer {

inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double hbar = 1.054571817e-34;      // J*s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr const char* code_version = "1.0.0";

}  // namespace fbtransfer
