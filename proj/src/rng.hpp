#pragma once

#include <cstdint>
#include <initializer_list>

namespace genbayes {

/// splitmix64 finalizer. Doubles as the hash for seed-stream derivation.
std::uint64_t mix64(std::uint64_t z);

/// Derives a child seed from a master seed and a path of stream coordinates,
/// e.g. (dof, n, replicate, stream id). The rule is
///
///   s <- master; for each v in path: s <- mix64(s ^ (v + 0x9e3779b97f4a7c15))
///
/// Distinct paths give independent streams, so a worker pool can draw from
/// per-task generators without any coordination and the schedule never
/// changes the numbers.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Stream tags used when deriving per-task seeds.
enum class Stream : std::uint64_t {
  Dataset = 1,
  Chain = 2,
  RiskMc = 3,
  Probe = 4,
};

/// xoshiro256++ generator seeded through splitmix64.
///
/// Gaussian draws use the polar method with a cached spare, so draw order is
/// fully deterministic for a given seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform on (0, 1); never returns 0, safe under log().
  double uniform_pos();

  /// Standard normal.
  double normal();

  /// Gamma(shape, 1) for shape >= 1, Marsaglia-Tsang squeeze.
  double gamma(double shape);

private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace genbayes
