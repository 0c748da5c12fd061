#pragma once

#include "reachsim/tables.hpp"
#include "reachsim/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reachsim {

inline constexpr double kDefaultCoverageEps = 1e-3;

/// Router sequence visited by one packet, source first.
using Trace = std::vector<std::size_t>;

// ---------------------------------------------------------------------------
// Coverage

/// valid[i] is true when interface i of `r` is the first hop of some
/// loop-free path r -> d: the peer is d itself, or d is reachable from the
/// peer without passing through r.
std::vector<bool> valid_first_hops(const Topology& t, std::size_t r, std::size_t d);

struct Coverage {
    std::size_t covered = 0;
    std::size_t total = 0;  // valid first hops over all (router, destination) pairs
    double fraction() const { return total == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(total); }
};

/// Counts valid first hops whose table probability is at least `eps`.
/// Throws ConfigError unless eps is in (0, 1].
Coverage reachability_coverage(const ProbTable& tables, const Topology& t, double eps = kDefaultCoverageEps);

// ---------------------------------------------------------------------------
// Split ratios

struct SplitRatio {
    std::size_t group_a = 0;
    std::size_t group_b = 0;

    bool defined() const { return group_a > 0 && group_b > 0; }
    /// a / b; nullopt unless both groups are nonempty.
    std::optional<double> ratio() const;
    /// a / (a + b); nullopt when nothing was counted.
    std::optional<double> fraction_a() const;
    SplitRatio operator+(const SplitRatio& o) const { return {group_a + o.group_a, group_b + o.group_b}; }
    bool operator==(const SplitRatio&) const = default;
};

SplitRatio split_ratio(std::span<const Trace> traces, const std::function<bool(const Trace&)>& in_group_a);

/// The one-hop trace [src, dst].
bool is_direct(const Trace& trace, std::size_t src, std::size_t dst);

// ---------------------------------------------------------------------------
// Loops

struct LoopStats {
    std::size_t packets_with_loop = 0;
    std::size_t loop_events = 0;
    double mean_extra_hops = 0.0;  // over packets with a loop
    std::size_t max_loop_length = 0;
    bool operator==(const LoopStats&) const = default;
};

/// Walks each trace; revisiting a router closes a loop whose length is the
/// number of hops since the earlier visit. Loops are erased as they close so
/// nested revisits are counted once. Extra hops are the trace hops beyond its
/// loop-erased path.
LoopStats loop_statistics(std::span<const Trace> traces);

/// Fraction of traces that made more than `hops` hops.
double survival_fraction(std::span<const Trace> traces, std::size_t hops);

// ---------------------------------------------------------------------------
// Convergence

struct TableSnapshot {
    Ticks time = 0;
    ProbTable table;
};

/// Largest L1 distance between corresponding rows.
double max_row_l1(const ProbTable& a, const ProbTable& b);

/// Time of the first snapshot from which every later step changes the tables
/// by less than `delta` (max row-wise L1) and at least `window` steps follow.
/// nullopt: not converged. Throws ConfigError for fewer than two snapshots.
std::optional<Ticks> convergence_time(std::span<const TableSnapshot> history, double delta, std::size_t window);

// ---------------------------------------------------------------------------
// Delays

struct Percentiles {
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    bool operator==(const Percentiles&) const = default;
};

/// Nearest-rank percentiles; the input is sorted in place.
Percentiles percentiles(std::vector<double>& samples);

// ---------------------------------------------------------------------------
// Reports

struct MessageCounts {
    std::uint64_t data_hops = 0;
    std::uint64_t ant_hops = 0;
    std::uint64_t backward_ant_hops = 0;
    std::uint64_t q_estimates = 0;
    std::uint64_t dv_entries = 0;
    std::uint64_t pv_entries = 0;
    std::uint64_t lsa_originated = 0;
    std::uint64_t lsa_flood_traversals = 0;
    std::uint64_t negative_signals = 0;
    std::uint64_t negative_rejected = 0;
    std::uint64_t rounds = 0;
    bool operator==(const MessageCounts&) const = default;
};

struct Discards {
    std::uint64_t ants_budget = 0;
    std::uint64_t ants_cycle = 0;
    std::uint64_t ants_negative = 0;
    std::uint64_t ants_dead_link = 0;
    std::uint64_t packets_ttl = 0;
    std::uint64_t packets_no_route = 0;
    std::uint64_t packets_dead_link = 0;
    bool operator==(const Discards&) const = default;
};

struct MetricsReport {
    std::string protocol;
    std::uint64_t seed = 0;
    double duration_ms = 0.0;
    std::uint64_t events = 0;
    std::string event_log_hash;

    Coverage coverage;
    std::vector<std::pair<double, double>> coverage_curve;  // (ms, fraction)
    std::optional<double> convergence_time_ms;

    std::uint64_t packets_generated = 0;
    std::uint64_t packets_delivered = 0;
    std::uint64_t packets_dropped = 0;
    std::uint64_t packets_in_flight = 0;
    std::uint64_t ants_generated = 0;
    std::uint64_t ants_delivered = 0;
    std::uint64_t ants_in_flight = 0;

    MessageCounts messages;
    Discards discards;
    LoopStats loops;
    std::map<std::string, SplitRatio> splits;  // key "src->dst" in router ids
    std::map<RouterId, Percentiles> delay_ms;  // by destination

    // Table entries that crossed the coverage floor between the first and
    // last snapshot.
    std::uint64_t work_added = 0;
    std::uint64_t work_culled = 0;

    bool operator==(const MetricsReport&) const = default;
};

std::string to_json(const MetricsReport& r);

/// Header plus one row; columns in csv_columns() order.
std::string to_csv(const MetricsReport& r);
const std::vector<std::string>& csv_columns();

}  // namespace reachsim
