#include "reachsim/config.hpp"
#include "reachsim/generators.hpp"
#include "reachsim/metrics.hpp"
#include "reachsim/sim.hpp"
#include "reachsim/topology.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace reachsim;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::optional<std::uint64_t>& seed, const std::string& out_dir) {
    KeyValues kv = read_config_file(config_path);
    for (const std::string& o : overrides) {
        auto [k, v] = parse_override(o);
        kv[k] = v;
    }
    if (seed) {
        kv["seed"] = std::to_string(*seed);
    } else if (!kv.count("seed")) {
        if (const char* env = std::getenv("REACHSIM_SEED")) kv["seed"] = env;
    }
    const fs::path base = fs::path(config_path).parent_path();
    const ScenarioConfig cfg = build_config(kv, base.empty() ? "." : base.string());
    Topology topology = load_scenario_topology(cfg);

    Engine engine(cfg, std::move(topology));
    engine.run();
    const MetricsReport report = engine.report();

    const fs::path out(out_dir);
    fs::create_directories(out);
    write_file(out / "report.csv", to_csv(report));
    write_file(out / "report.json", to_json(report));
    write_file(out / "tables.dump", dump_table(engine.topology(), engine.effective_table()));
    write_file(out / "event_log.hash", report.event_log_hash + "\n");
    if (cfg.trace_updates) write_file(out / "updates.csv", engine.update_trace_csv());
    std::cout << "event_log_hash " << report.event_log_hash << "\n";
    return 0;
}

RouterId parse_id(const std::string& text) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty() || v > UINT32_MAX) throw ConfigError("bad router id '" + text + "'");
    return static_cast<RouterId>(v);
}

int cmd_oracle(const std::string& topo_path, const std::string& src, const std::string& dst) {
    const Topology t = load_topology_file(topo_path);
    const auto s = t.find(parse_id(src));
    const auto d = t.find(parse_id(dst));
    if (!s) throw ConfigError("unknown router " + src);
    if (!d) throw ConfigError("unknown router " + dst);
    const PathEnumeration e = enumerate_loop_free_paths(t, *s, *d);
    std::cout << e.paths.size() << (e.paths.size() == 1 ? " path\n" : " paths\n");
    for (const Path& p : e.paths) {
        std::cout << "cost=" << p.total_cost.str() << " path=";
        const auto routers = p.routers();
        for (std::size_t i = 0; i < routers.size(); ++i) std::cout << (i ? "," : "") << t.id(routers[i]);
        std::cout << " via=";
        for (std::size_t i = 0; i < p.hops.size(); ++i) {
            std::cout << (i ? "," : "") << t.port(p.hops[i].node, p.hops[i].port).name;
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_gen(const std::string& spec, const std::string& out_path) {
    const Topology t = generate(parse_generator_spec(spec));
    const fs::path out(out_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_file(out, emit_topology(t));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reachability routing simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "run a scenario and write its report");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--set", overrides, "override a config key (key=value)");
    run->add_option("--seed", seed, "random seed (beats config and REACHSIM_SEED)");
    run->add_option("--out", out_dir, "output directory")->required();

    std::string topo_path, src, dst;
    auto* oracle = app.add_subcommand("oracle", "list every loop-free path between two routers");
    oracle->add_option("topology", topo_path)->required();
    oracle->add_option("src", src)->required();
    oracle->add_option("dst", dst)->required();

    std::string spec, gen_out;
    auto* gen = app.add_subcommand("gen", "write a generated topology");
    gen->add_option("spec", spec, "e.g. linear_chain:4, velcro:10,5,2")->required();
    gen->add_option("--out", gen_out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) return cmd_run(config_path, overrides, seed, out_dir);
        if (*oracle) return cmd_oracle(topo_path, src, dst);
        if (*gen) return cmd_gen(spec, gen_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
