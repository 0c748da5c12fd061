#pragma once

#include "reachsim/rng.hpp"
#include "reachsim/tables.hpp"
#include "reachsim/topology.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string_view>
#include <tuple>
#include <vector>

namespace reachsim {

// ---------------------------------------------------------------------------
// Update rules

/// q + eta * ((neighbor_best + zeta) - q). Throws ConfigError unless eta is in (0, 1].
double q_update(double q, double neighbor_best, double zeta, double eta);

/// Reinforces entry k of a probability row in place:
///   p_k <- (p_k + delta) / (1 + delta),  p_j <- p_j / (1 + delta).
template <class Derived>
void reinforce(Eigen::MatrixBase<Derived>& row, Eigen::Index k, double delta) {
    if (k < 0 || k >= row.size()) throw ConfigError("reinforced interface out of range");
    if (!(delta >= 0.0)) throw ConfigError("reinforcement must be nonnegative");
    const double old = row(k);
    row /= 1.0 + delta;
    // The reinforced entry takes whatever mass the others gave up.
    row(k) = 0.0;
    row(k) = std::max(old, 1.0 - row.sum());
}

ProbRow ant_prob_update(const ProbRow& row, std::size_t k, double delta);

/// Zeroes entry k and renormalizes the rest; nullopt when no mass would remain.
std::optional<ProbRow> zero_and_renormalize(const ProbRow& row, std::size_t k);

/// Reinforcement magnitude: delta = gain / f(c).
struct CostFunction {
    enum class Kind { identity, affine, power };
    Kind kind = Kind::affine;
    double a = 1.0;      // affine slope
    double b = 1.0;      // affine offset
    double gamma = 1.0;  // power exponent
    double gain = 1.0;

    double f(double c) const;
    double delta(Cost c) const;

    /// "identity", "affine:a,b", "power:gamma".
    static CostFunction parse(std::string_view text, double gain = 1.0);
};

// ---------------------------------------------------------------------------
// Ants

enum class AntMode { uniform, regular };

struct StackEntry {
    std::size_t node = 0;
    Cost cost;  // accumulated on arrival at `node`
    std::size_t port = 0;  // interface chosen at `node`
};

struct Ant {
    std::size_t source = 0;
    std::size_t destination = 0;
    Cost cost;
    AntMode mode = AntMode::uniform;
    /// Forward-credit ant: no updates on the way out; a backward ant retraces
    /// the stack from the destination.
    bool forward_credit = false;
    /// Keep the stack even for backward-learning ants (negative reinforcement).
    bool record_path = false;
    std::vector<StackEntry> stack;
    std::size_t hop_budget = 1;
};

struct ReinforcementUpdate {
    std::size_t router = 0;
    std::size_t row_dest = 0;
    std::size_t port = 0;
    double delta = 0.0;
    double p_after = 0.0;
};

enum class AntAction { forward, delivered, discarded_budget, discarded_cycle };

struct AntStep {
    std::optional<ReinforcementUpdate> update;
    AntAction action = AntAction::forward;
    std::size_t port = 0;  // set when action == forward
};

struct AntParams {
    CostFunction cost_fn;
    /// Regular ants sample the destination row after (true) or before the
    /// backward-learning update made at the same router.
    bool regular_row_after_update = true;
};

/// Handles an ant at `node`. `arrival_port` is the interface it came in on
/// (nullopt at its source). Backward-learning ants add the arrival link's
/// cost in the node->sender direction, reinforce the row for their source on
/// the arrival interface, then move on; forward-credit ants only extend
/// their stack and are dropped on revisiting a router.
AntStep process_forward_ant(const Topology& t, ProbTable& table, std::size_t node, Ant& ant,
                            std::optional<std::size_t> arrival_port, Rng& rng, const AntParams& params);

struct BackwardPlan {
    std::vector<ReinforcementUpdate> updates;  // destination side first
    bool discarded = false;                    // forward path revisited a router
};

/// Updates a backward ant applies while retracing `ant.stack` from its
/// destination: each stacked router reinforces the interface the forward ant
/// chose, with delta computed from the remaining cost to the destination.
/// Throws ConfigError for a stack whose hops do not follow links.
BackwardPlan plan_backward_ant(const Topology& t, const Ant& ant, const CostFunction& cost_fn);

/// Applies one planned update, filling in p_after.
void apply_update(ProbTable& table, ReinforcementUpdate& update);

/// plan_backward_ant followed by apply_update for every step.
BackwardPlan process_backward_ant(const Topology& t, ProbTable& table, const Ant& ant, const CostFunction& cost_fn);

// ---------------------------------------------------------------------------
// Negative reinforcement

enum class NegQualifier { destination_only, source_destination, source_destination_incoming_link };

NegQualifier parse_neg_qualifier(std::string_view text);
std::string_view to_string(NegQualifier q);

struct NegativeSignal {
    std::size_t router = 0;       // router told to stop using `port`
    std::size_t port = 0;
    std::size_t destination = 0;
    std::size_t source = 0;
    std::optional<std::size_t> incoming_port;  // nullopt: the traffic originated at `router`
};

/// Looks for a negative-reinforcement condition when `ant` arrives at
/// `node`: the node is already on the ant's path (a loop closed), or it is a
/// leaf that is not the destination. The signal targets the previous router
/// and the interface it used. Requires the ant to carry its stack.
std::optional<NegativeSignal> detect_negative_signal(const Topology& t, const Ant& ant, std::size_t node);

/// Negative masks layered over destination-keyed probability rows. The
/// qualifier level decides how much of (destination, source, incoming link)
/// keys a mask.
class QualifiedTable {
public:
    static constexpr std::size_t kAny = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t kOrigin = kAny - 1;

    using Key = std::tuple<std::size_t, std::size_t, std::size_t>;  // destination, source, incoming

    QualifiedTable(NegQualifier level, std::size_t routers) : level_(level), masks_(routers) {}

    NegQualifier level() const { return level_; }
    Key key(std::size_t destination, std::size_t source, std::optional<std::size_t> incoming) const;

    /// Base row for the destination with masked interfaces removed and the
    /// remainder renormalized. A row without any mask is returned unchanged.
    ProbRow row(const ProbTable& base, std::size_t router, std::size_t destination, std::size_t source,
                std::optional<std::size_t> incoming) const;

    const std::map<Key, std::vector<bool>>& masks(std::size_t router) const { return masks_.at(router); }
    std::map<Key, std::vector<bool>>& masks(std::size_t router) { return masks_.at(router); }

private:
    NegQualifier level_;
    std::vector<std::map<Key, std::vector<bool>>> masks_;
};

struct NegativeOutcome {
    bool applied = false;  // false: the signal would have emptied the row and was rejected
    ProbRow row;           // qualified row after the signal
};

NegativeOutcome negative_reinforce(QualifiedTable& table, const ProbTable& base, const NegativeSignal& signal);

/// Oracle: does `signal.port` at `signal.router` start the remainder of some
/// loop-free path to the destination that is consistent with what the
/// qualifier level keys on? True means zeroing it is a false negative.
bool is_false_negative(const Topology& t, const NegativeSignal& signal, NegQualifier level);

}  // namespace reachsim
