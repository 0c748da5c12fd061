#include "reachsim/tables.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace reachsim {

ForwardPolicy parse_forward_policy(std::string_view text) {
    if (text == "argmax") return ForwardPolicy::argmax;
    if (text == "proportional") return ForwardPolicy::proportional;
    if (text == "uniform") return ForwardPolicy::uniform;
    if (text == "deflection") return ForwardPolicy::deflection;
    throw ConfigError("unknown forward policy '" + std::string(text) + "'");
}

std::string_view to_string(ForwardPolicy p) {
    switch (p) {
        case ForwardPolicy::argmax: return "argmax";
        case ForwardPolicy::proportional: return "proportional";
        case ForwardPolicy::uniform: return "uniform";
        case ForwardPolicy::deflection: return "deflection";
    }
    return "?";
}

std::vector<ProbRow> init_uniform(const Topology& t, std::size_t r) {
    const std::size_t deg = t.ports(r).size();
    if (deg == 0) throw TopologyError("router " + std::to_string(t.id(r)) + " has no interfaces");
    std::vector<ProbRow> rows(t.size());
    for (std::size_t d = 0; d < t.size(); ++d) {
        if (d != r) rows[d] = ProbRow::Constant(static_cast<Eigen::Index>(deg), 1.0 / static_cast<double>(deg));
    }
    return rows;
}

ProbTable ProbTable::uniform(const Topology& t) {
    ProbTable table(t.size());
    if (t.size() == 1) return table;
    for (std::size_t r = 0; r < t.size(); ++r) table.rows_[r] = init_uniform(t, r);
    return table;
}

bool ProbTable::operator==(const ProbTable& other) const {
    if (rows_.size() != other.rows_.size()) return false;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (std::size_t d = 0; d < rows_[r].size(); ++d) {
            const ProbRow& a = rows_[r][d];
            const ProbRow& b = other.rows_[r][d];
            if (a.size() != b.size() || a != b) return false;
        }
    }
    return true;
}

ProbTable to_prob_table(const Topology& t, const DetTables& tables) {
    ProbTable out(t.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
        const auto deg = static_cast<Eigen::Index>(t.ports(r).size());
        for (std::size_t d = 0; d < t.size(); ++d) {
            if (d == r) continue;
            ProbRow row = ProbRow::Zero(deg);
            if (const auto& e = tables.at(r).at(d)) row(static_cast<Eigen::Index>(e->port)) = 1.0;
            out.row(r, d) = std::move(row);
        }
    }
    return out;
}

bool row_is_normalized(const ProbRow& row) {
    return row.size() > 0 && (row.array() >= 0.0).all() && std::abs(row.sum() - 1.0) <= kRowTolerance;
}

std::size_t choose_interface(const ProbRow& row, ForwardPolicy policy, Rng& rng,
                             std::span<const std::size_t> exclude) {
    const auto n = static_cast<std::size_t>(row.size());
    std::vector<bool> allowed(n, true);
    for (std::size_t e : exclude) {
        if (e < n) allowed[e] = false;
    }
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < n; ++i) {
        if (allowed[i]) open.push_back(i);
    }
    if (open.empty()) throw ConfigError("choose_interface: every interface is excluded");

    auto lowest_max = [&](bool restricted) {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < n; ++i) {
            if (restricted && !allowed[i]) continue;
            if (!best || row(static_cast<Eigen::Index>(i)) > row(static_cast<Eigen::Index>(*best))) best = i;
        }
        return *best;
    };

    switch (policy) {
        case ForwardPolicy::argmax: return lowest_max(true);
        case ForwardPolicy::uniform: return open[rng.below(open.size())];
        case ForwardPolicy::deflection: {
            const std::size_t best = lowest_max(false);
            return allowed[best] ? best : open[rng.below(open.size())];
        }
        case ForwardPolicy::proportional: {
            double mass = 0.0;
            for (std::size_t i : open) mass += row(static_cast<Eigen::Index>(i));
            if (!(mass > 0.0)) return open[rng.below(open.size())];
            const double target = rng.uniform() * mass;
            double acc = 0.0;
            for (std::size_t i : open) {
                acc += row(static_cast<Eigen::Index>(i));
                if (target < acc) return i;
            }
            // Rounding can leave target == mass; fall back to the last entry with mass.
            for (auto it = open.rbegin(); it != open.rend(); ++it) {
                if (row(static_cast<Eigen::Index>(*it)) > 0.0) return *it;
            }
            return open.back();
        }
    }
    return open.front();
}

QTable::QTable(const Topology& t, double initial) : q_(t.size()) {
    for (std::size_t r = 0; r < t.size(); ++r) {
        q_[r].assign(t.size(), Eigen::VectorXd::Constant(static_cast<Eigen::Index>(t.ports(r).size()), initial));
        q_[r][r].resize(0);
    }
}

bool path_vector_less(const Topology& t, const PathVector& a, const PathVector& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return std::lexicographical_compare(a.routers.begin(), a.routers.end(), b.routers.begin(), b.routers.end(),
                                        [&t](std::size_t x, std::size_t y) { return t.id(x) < t.id(y); });
}

std::string dump_table(const Topology& t, const ProbTable& table) {
    std::ostringstream out;
    char buf[32];
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t d = 0; d < t.size(); ++d) {
            if (d == r) continue;
            out << "r=" << t.id(r) << " d=" << t.id(d) << " p=[";
            const ProbRow& row = table.row(r, d);
            for (Eigen::Index i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.6f", row(i));
                out << (i ? "," : "") << buf;
            }
            out << "]\n";
        }
    }
    return out.str();
}

}  // namespace reachsim
