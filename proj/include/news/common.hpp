#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace news {

/// Cardinal travel directions of the NEWS decomposition. The numeric order
/// is the storage order of every per-direction array in the library.
enum class Cardinal : std::uint8_t { N = 0, E = 1, W = 2, S = 3 };

inline constexpr std::array<Cardinal, 4> kCardinals{Cardinal::N, Cardinal::E, Cardinal::W,
                                                    Cardinal::S};

constexpr std::size_t index(Cardinal c) { return static_cast<std::size_t>(c); }

constexpr char cardinal_name(Cardinal c) {
  constexpr std::array<char, 4> names{'N', 'E', 'W', 'S'};
  return names[index(c)];
}

template <class T>
using PerCardinal = std::array<T, 4>;

/// Turning quantities between cardinal directions, indexed [from][to].
using CardinalMatrix = std::array<std::array<double, 4>, 4>;

/// Jam spacing per vehicle and lane in meters.
inline constexpr double kJamSpacing = 6.0;

inline constexpr double kDefaultGamma = 1.0 / 3.0;
inline constexpr double kDefaultEpsilon = 1e-8;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Positivity or boundedness violation during time stepping.
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace news
