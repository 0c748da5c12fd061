#pragma once

#include "reachsim/topology.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace reachsim {

namespace gen {

struct LinearChain {
    std::size_t n = 1;
};
struct Ring {
    std::size_t n = 3;
};
struct Complete {
    std::size_t n = 1;
};
/// Direct A-B link plus a looped alternative region built from
/// `sections` velcro sections, each contributing `section_cost` to the
/// cheapest A->B traversal of the region.
struct Velcro {
    Cost direct_cost = Cost::whole(10);
    std::size_t sections = 1;
    Cost section_cost = Cost::whole(10);
};
enum class NegReinfVariant { left, middle, right };
struct NegReinf {
    NegReinfVariant variant = NegReinfVariant::left;
};
struct RandomConnected {
    std::size_t n = 2;
    double edge_prob = 0.5;
    std::int64_t cost_lo = 1;
    std::int64_t cost_hi = 1;
    std::uint64_t seed = 0;
};

}  // namespace gen

using GeneratorSpec =
    std::variant<gen::LinearChain, gen::Ring, gen::Complete, gen::Velcro, gen::NegReinf, gen::RandomConnected>;

/// Builds the topology described by `spec`. Output is a pure function of
/// the spec. Router ids are 0..n-1.
Topology generate(const GeneratorSpec& spec);

/// Parses "kind:args", e.g. "linear_chain:4", "velcro:10,5,2",
/// "random_connected:8,0.4,1,4,7", "neg_reinf_middle".
GeneratorSpec parse_generator_spec(std::string_view text);

/// Router names used by the hand-built topologies.
namespace velcro_nodes {
inline constexpr std::size_t A = 0;
inline constexpr std::size_t B = 1;
}  // namespace velcro_nodes

namespace neg_nodes {
inline constexpr std::size_t A = 0;
inline constexpr std::size_t B = 1;
inline constexpr std::size_t C = 2;
inline constexpr std::size_t D = 3;
inline constexpr std::size_t E = 4;
}  // namespace neg_nodes

}  // namespace reachsim
