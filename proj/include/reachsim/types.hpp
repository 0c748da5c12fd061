#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reachsim {

using RouterId = std::uint32_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: topology files, scenario configs, generator specs.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or parameter values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A topology that violates an operation's precondition (e.g. disconnected).
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Exact link/path cost stored as an integer count of 1/1000 units.
///
/// Costs double as simulated milliseconds under the cost-as-delay model,
/// so one cost unit is one millisecond and one tick is a microsecond.
class Cost {
public:
    static constexpr std::int64_t kScale = 1000;

    constexpr Cost() = default;

    static constexpr Cost from_units(std::int64_t units) { return Cost(units); }
    static constexpr Cost whole(std::int64_t value) { return Cost(value * kScale); }
    static constexpr Cost max() { return Cost(std::numeric_limits<std::int64_t>::max() / 4); }

    /// Parses a nonnegative decimal with at most three fractional digits.
    static Cost parse(std::string_view text);

    constexpr std::int64_t units() const { return units_; }
    constexpr double value() const { return static_cast<double>(units_) / kScale; }

    /// Shortest decimal spelling that parses back to the same value.
    std::string str() const;

    constexpr Cost operator+(Cost other) const { return Cost(units_ + other.units_); }
    constexpr Cost operator-(Cost other) const { return Cost(units_ - other.units_); }
    constexpr Cost& operator+=(Cost other) {
        units_ += other.units_;
        return *this;
    }
    constexpr Cost operator*(std::int64_t k) const { return Cost(units_ * k); }

    constexpr auto operator<=>(const Cost&) const = default;

private:
    constexpr explicit Cost(std::int64_t units) : units_(units) {}
    std::int64_t units_ = 0;
};

/// Simulated time in microsecond ticks (1 ms == Cost::kScale ticks).
using Ticks = std::int64_t;

constexpr Ticks to_ticks(Cost c) { return c.units(); }
inline Ticks ms_to_ticks(double ms) { return static_cast<Ticks>(ms * Cost::kScale + 0.5); }
constexpr double ticks_to_ms(Ticks t) { return static_cast<double>(t) / Cost::kScale; }

}  // namespace reachsim
