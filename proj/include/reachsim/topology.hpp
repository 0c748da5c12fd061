#pragma once

#include "reachsim/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace reachsim {

/// A bidirectional link pair. Each end owns a named interface; the two
/// directions carry independent costs.
struct Link {
    RouterId a = 0;
    std::string a_iface;
    RouterId b = 0;
    std::string b_iface;
    Cost cost_ab;
    Cost cost_ba;

    bool operator==(const Link&) const = default;
};

/// One outgoing interface as seen from its owning router.
struct Port {
    std::string name;
    std::size_t peer = 0;       // dense index of the router on the other end
    std::size_t peer_port = 0;  // index of the matching interface at the peer
    std::size_t link = 0;       // index into Topology::links()
    Cost cost_out;              // owner -> peer
    Cost cost_in;               // peer -> owner
};

/// Directed multigraph of routers.
///
/// Routers are addressed two ways: by their external RouterId (as written in
/// topology files) and by a dense index in declaration order. Every algorithm
/// in the library works on dense indices; ids appear only at I/O boundaries.
/// Interfaces are addressed by their position in the owning router's port list.
///
/// Links can be taken down and routers deactivated so that scenarios can
/// remove a router mid-run without renumbering ports.
class Topology {
public:
    std::size_t add_router(RouterId id);
    void add_link(RouterId a, std::string a_iface, RouterId b, std::string b_iface, Cost cost_ab,
                  Cost cost_ba);

    std::size_t size() const { return ids_.size(); }
    std::size_t link_count() const { return links_.size(); }
    bool empty() const { return ids_.empty(); }

    RouterId id(std::size_t node) const { return ids_.at(node); }
    std::optional<std::size_t> find(RouterId id) const;
    /// Dense index for `id`; throws TopologyError for unknown ids.
    std::size_t index(RouterId id) const;

    std::span<const Port> ports(std::size_t node) const { return ports_.at(node); }
    const Port& port(std::size_t node, std::size_t p) const { return ports_.at(node).at(p); }
    std::optional<std::size_t> find_port(std::size_t node, std::string_view name) const;
    std::span<const Link> links() const { return links_; }

    bool active(std::size_t node) const { return active_.at(node); }
    bool link_up(std::size_t link) const { return up_.at(link); }
    bool port_up(std::size_t node, std::size_t p) const { return up_[ports_[node][p].link]; }
    /// Number of usable interfaces at `node`.
    std::size_t degree(std::size_t node) const;

    void set_link_cost(std::size_t link, Cost cost_ab, Cost cost_ba);
    /// Deactivates `node` and takes all of its links down.
    void remove_router(std::size_t node);

    /// Link costs, ids and interface names; up/active state is runtime only.
    bool operator==(const Topology& other) const;

private:
    std::vector<RouterId> ids_;
    std::unordered_map<RouterId, std::size_t> index_;
    std::vector<std::vector<Port>> ports_;
    std::vector<Link> links_;
    std::vector<bool> up_;
    std::vector<bool> active_;
};

/// Parses the line-oriented topology format:
///   node <id>
///   link <a>:<ifa> <b>:<ifb> <cost_ab> <cost_ba>
/// with `#` starting a comment. Errors carry the offending line number.
Topology load_topology(std::string_view text);
Topology load_topology_file(const std::string& path);
std::string emit_topology(const Topology& t);

/// A loop-free path: hops are (router, outgoing port) pairs in dense indices.
struct Hop {
    std::size_t node = 0;
    std::size_t port = 0;
    auto operator<=>(const Hop&) const = default;
};

struct Path {
    std::vector<Hop> hops;
    std::size_t terminal = 0;
    Cost total_cost;

    std::vector<std::size_t> routers() const;
    bool operator==(const Path&) const = default;
};

struct PathEnumeration {
    std::vector<Path> paths;
    bool truncated = false;
};

/// Every simple directed path src -> dst over up links, in lexicographic
/// order of (router id, port index) hop sequences. src == dst yields the
/// single empty path.
PathEnumeration enumerate_loop_free_paths(const Topology& t, std::size_t src, std::size_t dst,
                                          std::optional<std::size_t> max_paths = std::nullopt);

/// Min-hop distances from `src` over up links; unreachable entries are nullopt.
std::vector<std::optional<std::size_t>> hop_distances(const Topology& t, std::size_t src);

bool is_connected(const Topology& t);

/// Max over ordered pairs of active routers of the min-hop distance.
/// Throws TopologyError when some pair is unreachable.
std::size_t diameter(const Topology& t);

}  // namespace reachsim
