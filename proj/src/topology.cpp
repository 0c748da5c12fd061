#include "reachsim/topology.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

namespace reachsim {

Cost Cost::parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty cost");
    if (text.front() == '-') throw ParseError("negative cost '" + std::string(text) + "'");
    const auto dot = text.find('.');
    const std::string_view whole_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    auto all_digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    if (whole_part.empty() || !all_digits(whole_part) || !all_digits(frac_part) ||
        (dot != std::string_view::npos && frac_part.empty())) {
        throw ParseError("malformed cost '" + std::string(text) + "'");
    }
    if (frac_part.size() > 3) {
        throw ParseError("cost '" + std::string(text) + "' has more than 3 fractional digits");
    }
    std::int64_t whole = 0;
    const auto [ptr, ec] = std::from_chars(whole_part.data(), whole_part.data() + whole_part.size(), whole);
    if (ec != std::errc{} || whole > Cost::max().units() / kScale) {
        throw ParseError("cost '" + std::string(text) + "' out of range");
    }
    std::int64_t frac = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        frac = frac * 10 + (i < frac_part.size() ? frac_part[i] - '0' : 0);
    }
    return Cost(whole * kScale + frac);
}

std::string Cost::str() const {
    std::string out = std::to_string(units_ / kScale);
    std::int64_t frac = units_ % kScale;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 3 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    return out;
}

std::size_t Topology::add_router(RouterId id) {
    if (index_.contains(id)) throw TopologyError("duplicate router " + std::to_string(id));
    index_.emplace(id, ids_.size());
    ids_.push_back(id);
    ports_.emplace_back();
    active_.push_back(true);
    return ids_.size() - 1;
}

void Topology::add_link(RouterId a, std::string a_iface, RouterId b, std::string b_iface, Cost cost_ab,
                        Cost cost_ba) {
    if (a == b) throw TopologyError("self-loop link at router " + std::to_string(a));
    if (cost_ab < Cost{} || cost_ba < Cost{}) throw TopologyError("negative link cost");
    const std::size_t ia = index(a);
    const std::size_t ib = index(b);
    if (find_port(ia, a_iface)) {
        throw TopologyError("duplicate interface " + a_iface + " at router " + std::to_string(a));
    }
    if (find_port(ib, b_iface)) {
        throw TopologyError("duplicate interface " + b_iface + " at router " + std::to_string(b));
    }
    const std::size_t link = links_.size();
    const std::size_t pa = ports_[ia].size();
    const std::size_t pb = ports_[ib].size();
    ports_[ia].push_back(Port{a_iface, ib, pb, link, cost_ab, cost_ba});
    ports_[ib].push_back(Port{b_iface, ia, pa, link, cost_ba, cost_ab});
    links_.push_back(Link{a, std::move(a_iface), b, std::move(b_iface), cost_ab, cost_ba});
    up_.push_back(true);
}

std::optional<std::size_t> Topology::find(RouterId id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Topology::index(RouterId id) const {
    const auto found = find(id);
    if (!found) throw TopologyError("unknown router " + std::to_string(id));
    return *found;
}

std::optional<std::size_t> Topology::find_port(std::size_t node, std::string_view name) const {
    const auto& ps = ports_.at(node);
    for (std::size_t p = 0; p < ps.size(); ++p) {
        if (ps[p].name == name) return p;
    }
    return std::nullopt;
}

std::size_t Topology::degree(std::size_t node) const {
    std::size_t n = 0;
    for (const Port& p : ports_.at(node)) n += up_[p.link] ? 1 : 0;
    return n;
}

void Topology::set_link_cost(std::size_t link, Cost cost_ab, Cost cost_ba) {
    if (cost_ab < Cost{} || cost_ba < Cost{}) throw TopologyError("negative link cost");
    Link& l = links_.at(link);
    l.cost_ab = cost_ab;
    l.cost_ba = cost_ba;
    const std::size_t ia = index(l.a);
    for (Port& p : ports_[ia]) {
        if (p.link != link) continue;
        p.cost_out = cost_ab;
        p.cost_in = cost_ba;
        Port& q = ports_[p.peer][p.peer_port];
        q.cost_out = cost_ba;
        q.cost_in = cost_ab;
    }
}

void Topology::remove_router(std::size_t node) {
    active_.at(node) = false;
    for (const Port& p : ports_[node]) up_[p.link] = false;
}

bool Topology::operator==(const Topology& other) const {
    return ids_ == other.ids_ && links_ == other.links_;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

RouterId parse_router_id(std::string_view tok) {
    RouterId id = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("bad router id '" + std::string(tok) + "'");
    }
    return id;
}

std::pair<RouterId, std::string> parse_endpoint(std::string_view tok) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("endpoint '" + std::string(tok) + "' is not <id>:<iface>");
    }
    const std::string_view iface = tok.substr(colon + 1);
    if (iface.empty() ||
        !std::all_of(iface.begin(), iface.end(), [](unsigned char c) { return std::isalnum(c) != 0; })) {
        throw ParseError("interface name '" + std::string(iface) + "' is not alphanumeric");
    }
    return {parse_router_id(tok.substr(0, colon)), std::string(iface)};
}

}  // namespace

Topology load_topology(std::string_view text) {
    Topology t;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        try {
            if (tok[0] == "node") {
                if (tok.size() != 2) throw ParseError("expected 'node <id>'");
                t.add_router(parse_router_id(tok[1]));
            } else if (tok[0] == "link") {
                if (tok.size() != 5) throw ParseError("expected 'link <a>:<ifa> <b>:<ifb> <cost_ab> <cost_ba>'");
                auto [a, ifa] = parse_endpoint(tok[1]);
                auto [b, ifb] = parse_endpoint(tok[2]);
                if (a == b) throw TopologyError("self-loop link at router " + std::to_string(a));
                t.add_link(a, std::move(ifa), b, std::move(ifb), Cost::parse(tok[3]), Cost::parse(tok[4]));
            } else {
                throw ParseError("unknown directive '" + std::string(tok[0]) + "'");
            }
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (t.empty()) throw ParseError("topology declares no routers");
    return t;
}

Topology load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open topology file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_topology(buf.str());
}

std::string emit_topology(const Topology& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.size(); ++i) out << "node " << t.id(i) << '\n';
    for (const Link& l : t.links()) {
        out << "link " << l.a << ':' << l.a_iface << ' ' << l.b << ':' << l.b_iface << ' ' << l.cost_ab.str() << ' '
            << l.cost_ba.str() << '\n';
    }
    return out.str();
}

std::vector<std::size_t> Path::routers() const {
    std::vector<std::size_t> out;
    out.reserve(hops.size() + 1);
    for (const Hop& h : hops) out.push_back(h.node);
    out.push_back(terminal);
    return out;
}

namespace {

struct PathSearch {
    const Topology& t;
    std::size_t dst;
    std::optional<std::size_t> limit;
    std::vector<bool> on_path;
    Path current;
    PathEnumeration result;

    void visit(std::size_t u) {
        if (result.truncated) return;
        if (u == dst) {
            if (limit && result.paths.size() >= *limit) {
                result.truncated = true;
                return;
            }
            current.terminal = u;
            result.paths.push_back(current);
            return;
        }
        const auto ports = t.ports(u);
        for (std::size_t p = 0; p < ports.size(); ++p) {
            const Port& port = ports[p];
            if (!t.link_up(port.link) || on_path[port.peer]) continue;
            on_path[port.peer] = true;
            current.hops.push_back(Hop{u, p});
            current.total_cost += port.cost_out;
            visit(port.peer);
            current.total_cost = current.total_cost - port.cost_out;
            current.hops.pop_back();
            on_path[port.peer] = false;
        }
    }
};

}  // namespace

PathEnumeration enumerate_loop_free_paths(const Topology& t, std::size_t src, std::size_t dst,
                                          std::optional<std::size_t> max_paths) {
    if (src >= t.size() || dst >= t.size()) throw TopologyError("router index out of range");
    PathSearch search{t, dst, max_paths, std::vector<bool>(t.size(), false), Path{}, PathEnumeration{}};
    if (!t.active(src) || !t.active(dst)) return {};
    search.on_path[src] = true;
    search.visit(src);
    return std::move(search.result);
}

std::vector<std::optional<std::size_t>> hop_distances(const Topology& t, std::size_t src) {
    std::vector<std::optional<std::size_t>> dist(t.size());
    if (!t.active(src)) return dist;
    std::deque<std::size_t> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (const Port& p : t.ports(u)) {
            if (!t.link_up(p.link) || dist[p.peer]) continue;
            dist[p.peer] = *dist[u] + 1;
            queue.push_back(p.peer);
        }
    }
    return dist;
}

bool is_connected(const Topology& t) {
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.active(i)) {
            first = i;
            break;
        }
    }
    if (!first) return false;
    const auto dist = hop_distances(t, *first);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.active(i) && !dist[i]) return false;
    }
    return true;
}

std::size_t diameter(const Topology& t) {
    std::size_t best = 0;
    for (std::size_t s = 0; s < t.size(); ++s) {
        if (!t.active(s)) continue;
        const auto dist = hop_distances(t, s);
        for (std::size_t d = 0; d < t.size(); ++d) {
            if (!t.active(d)) continue;
            if (!dist[d]) throw TopologyError("diameter undefined: topology is disconnected");
            best = std::max(best, *dist[d]);
        }
    }
    return best;
}

}  // namespace reachsim
