#pragma once

#include "reachsim/rng.hpp"
#include "reachsim/topology.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reachsim {

/// Probability (or preference) vector over a router's interfaces.
using ProbRow = Eigen::VectorXd;

inline constexpr double kRowTolerance = 1e-9;

enum class ForwardPolicy { argmax, proportional, uniform, deflection };

ForwardPolicy parse_forward_policy(std::string_view text);
std::string_view to_string(ForwardPolicy p);

// ---------------------------------------------------------------------------
// Deterministic tables

struct DetEntry {
    std::size_t port = 0;
    Cost cost;
    bool operator==(const DetEntry&) const = default;
};

/// Next-hop table of one router, indexed by destination.
struct DetTable {
    std::vector<std::optional<DetEntry>> entries;

    explicit DetTable(std::size_t routers = 0) : entries(routers) {}
    const std::optional<DetEntry>& at(std::size_t dst) const { return entries.at(dst); }
    bool operator==(const DetTable&) const = default;
};

using DetTables = std::vector<DetTable>;

// ---------------------------------------------------------------------------
// Probabilistic tables

/// Per-router, per-destination probability rows. The row a router keeps for
/// itself is empty.
class ProbTable {
public:
    ProbTable() = default;
    explicit ProbTable(std::size_t routers) : rows_(routers, std::vector<ProbRow>(routers)) {}

    /// Every row of every router exactly uniform over its interfaces.
    static ProbTable uniform(const Topology& t);

    std::size_t routers() const { return rows_.size(); }
    ProbRow& row(std::size_t r, std::size_t d) { return rows_.at(r).at(d); }
    const ProbRow& row(std::size_t r, std::size_t d) const { return rows_.at(r).at(d); }
    std::vector<ProbRow>& rows(std::size_t r) { return rows_.at(r); }
    const std::vector<ProbRow>& rows(std::size_t r) const { return rows_.at(r); }

    bool operator==(const ProbTable& other) const;

private:
    std::vector<std::vector<ProbRow>> rows_;
};

/// Rows for router `r`, uniform (1/deg) for every other destination.
/// Throws TopologyError when r has no interfaces.
std::vector<ProbRow> init_uniform(const Topology& t, std::size_t r);

/// One-hot rows from next-hop entries; destinations without an entry get
/// an all-zero row.
ProbTable to_prob_table(const Topology& t, const DetTables& tables);

/// True when entries are nonnegative and sum to 1 within kRowTolerance.
bool row_is_normalized(const ProbRow& row);

/// Picks an interface from `row`, never returning an excluded index.
///
///  - argmax: lowest-index maximal entry
///  - proportional: sampled by the row renormalized over allowed entries
///    (uniform over allowed entries when they all carry zero mass)
///  - uniform: equal chance over allowed entries
///  - deflection: the unrestricted argmax if it is allowed, otherwise uniform
///    over allowed entries; `exclude` then names the busy links
///
/// Throws ConfigError when every interface is excluded.
std::size_t choose_interface(const ProbRow& row, ForwardPolicy policy, Rng& rng,
                             std::span<const std::size_t> exclude = {});

/// Ratio derivation: entry i becomes q_i / sum(q).
template <class Derived>
ProbRow prob_from_q(const Eigen::MatrixBase<Derived>& q_row) {
    if (q_row.size() == 0 || (q_row.array() < 0.0).any()) throw ConfigError("prob_from_q needs nonnegative values");
    const double total = q_row.sum();
    if (!(total > 0.0)) throw ConfigError("prob_from_q of an all-zero row");
    return q_row.template cast<double>() / total;
}

// ---------------------------------------------------------------------------
// Q-routing and path-vector tables

/// Per-router, per-destination Q estimates, one value per interface.
class QTable {
public:
    QTable() = default;
    /// Every (destination, interface) entry set to `initial`.
    QTable(const Topology& t, double initial);

    double& at(std::size_t r, std::size_t d, std::size_t port) { return q_.at(r).at(d)(port); }
    double at(std::size_t r, std::size_t d, std::size_t port) const { return q_.at(r).at(d)(port); }
    const Eigen::VectorXd& row(std::size_t r, std::size_t d) const { return q_.at(r).at(d); }
    std::size_t routers() const { return q_.size(); }

private:
    std::vector<std::vector<Eigen::VectorXd>> q_;
};

struct PathVector {
    std::vector<std::size_t> routers;  // owner first, destination last
    Cost cost;
    bool operator==(const PathVector&) const = default;
};

/// Per-router, per-destination candidate paths, best first.
struct PathVectorTable {
    std::vector<std::vector<std::vector<PathVector>>> paths;  // [router][destination]

    explicit PathVectorTable(std::size_t routers = 0)
        : paths(routers, std::vector<std::vector<PathVector>>(routers)) {}

    const PathVector* best(std::size_t r, std::size_t d) const {
        const auto& list = paths.at(r).at(d);
        return list.empty() ? nullptr : &list.front();
    }
    bool operator==(const PathVectorTable&) const = default;
};

/// Cost order with lexicographic router-id tie-break.
bool path_vector_less(const Topology& t, const PathVector& a, const PathVector& b);

// ---------------------------------------------------------------------------
// Dumps

/// One line per (router, destination): `r=<id> d=<id> p=[v0,v1,...]`,
/// values with 6 decimals.
std::string dump_table(const Topology& t, const ProbTable& table);

}  // namespace reachsim
