#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace genbayes {

// Error taxonomy. The C API and the CLI translate these into status and
// exit codes; everything else just lets them propagate.

/// A caller violated an operation's stated precondition.
class ContractError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Configuration file or key is malformed, unknown, or missing.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Design matrix is singular; the caller decides whether to resample.
class SingularDesignError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A state the implementation is supposed to make unreachable.
class InternalError : public std::logic_error {
  using std::logic_error::logic_error;
};

/// Shortest representation that round-trips the exact double, always with a
/// '.' decimal separator regardless of locale.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long> parse_long(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

std::string_view trim(std::string_view s);

/// Runs body(0..count-1) on `workers` threads (0 = hardware concurrency).
/// Tasks are claimed from a shared counter; the body must only write
/// task-owned state, so results do not depend on the schedule.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

unsigned resolve_workers(unsigned requested);

/// Current time as e.g. 2024-05-01T12:30:05Z.
std::string iso8601_utc_now();

/// Warning to stderr, prefixed with the tool name.
void warn(const std::string& msg);

}  // namespace genbayes
