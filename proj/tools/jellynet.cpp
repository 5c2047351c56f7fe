// jellynet command-line front end. Exit codes: 0 ok, 1 usage or invalid
// parameters, 2 runtime failure.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jellynet/expand.hpp"
#include "jellynet/experiments.hpp"
#include "jellynet/flow.hpp"
#include "jellynet/io.hpp"
#include "jellynet/metrics.hpp"
#include "jellynet/rng.hpp"
#include "jellynet/route.hpp"
#include "jellynet/topo.hpp"

using namespace jellynet;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);) out.push_back(item);
    return out;
}

std::vector<int> ints(const std::string& s, std::size_t count, const char* what) {
    const auto parts = split(s, ',');
    if (parts.size() != count)
        throw InvalidArgument(std::string(what) + " expects " + std::to_string(count) + " comma-separated values");
    std::vector<int> out;
    for (const auto& p : parts) {
        std::size_t used = 0;
        const int v = std::stoi(p, &used);
        if (used != p.size()) throw InvalidArgument(std::string("not an integer: ") + p);
        out.push_back(v);
    }
    return out;
}

std::vector<double> reals(const std::string& s) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(std::stod(p));
    return out;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty())
        std::cout << text;
    else
        io::write_file(out, text);
}

int max_degree(const Topology& t) {
    int r = 0;
    for (SwitchId s = 0; s < t.switch_count(); ++s) r = std::max(r, t.degree(s));
    return r;
}

std::string summary(const Topology& t) {
    return "switches=" + std::to_string(t.switch_count()) + " servers=" + std::to_string(t.server_count()) +
           " links=" + std::to_string(t.link_count()) + " degree=" + std::to_string(max_degree(t));
}

route::Mode parse_mode(const std::string& m) {
    if (m == "ecmp") return route::Mode::ecmp;
    if (m == "ksp") return route::Mode::ksp;
    throw InvalidArgument("mode must be ecmp or ksp");
}

std::string solution_row(const std::string& param, std::uint64_t seed, const flow::FlowSolution& s) {
    const bool any = s.mean_flow() > 0.0;
    return param + ",0," + std::to_string(seed) + "," + format_real(s.lambda) + "," + format_real(s.mean_flow()) + "," +
           format_real(s.min_flow()) + "," + (any ? format_real(flow::jain_index(s.per_flow)) : "0") + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jellyfish data-center topology toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "build a topology and write it in text format");
    std::string g_rrg, g_swdc, g_layered, g_import, g_out;
    int g_fat = 0, g_ports = 0, g_servers = 0;
    std::uint64_t g_seed = 1;
    auto* family = gen->add_option_group("family");
    family->add_option("--rrg", g_rrg, "N,k,r");
    family->add_option("--fat-tree", g_fat, "port count kp");
    family->add_option("--swdc", g_swdc, "ring|torus2d|hex3d,N,degree,servers");
    family->add_option("--layered", g_layered, "C,M,k,r_local,r_global,servers");
    family->add_option("--import", g_import, "edge list or topology file");
    family->require_option(1);
    gen->add_option("--ports", g_ports, "ports per switch for --import (default: max degree + servers)");
    gen->add_option("--servers", g_servers, "servers per switch for --import");
    gen->add_option("--seed", g_seed, "construction seed");
    gen->add_option("--out", g_out, "output file (default stdout)");

    // metrics
    auto* met = app.add_subcommand("metrics", "path lengths and analytic bounds");
    std::string m_topo, m_paths = "switch", m_out;
    bool m_bounds = false;
    met->add_option("topology", m_topo)->required();
    met->add_option("--paths,--level", m_paths, "switch or server")->check(CLI::IsMember({"switch", "server"}));
    met->add_flag("--bounds", m_bounds, "print bisection and diameter bounds instead");
    met->add_option("--out", m_out);

    // solve
    auto* sol = app.add_subcommand("solve", "throughput under one random permutation");
    std::string s_topo, s_mode = "any", s_out;
    std::uint64_t s_perm = 1;
    double s_eps = 0.05;
    int s_limit = 8;
    bool s_flows = false;
    sol->add_option("topology", s_topo)->required();
    sol->add_option("--perm-seed", s_perm);
    sol->add_option("--eps", s_eps);
    sol->add_option("--mode", s_mode, "any, ecmp or ksp")->check(CLI::IsMember({"any", "ecmp", "ksp"}));
    sol->add_option("--limit", s_limit);
    sol->add_flag("--flows", s_flows, "per-server rows instead of the summary row");
    sol->add_option("--out", s_out);

    // routes
    auto* rts = app.add_subcommand("routes", "path sets and per-link path counts");
    std::string r_topo, r_mode = "ecmp", r_out;
    int r_limit = 8, r_src = -1, r_dst = -1;
    std::uint64_t r_perm = 1, r_threshold = 2;
    bool r_hist = false;
    rts->add_option("topology", r_topo)->required();
    rts->add_flag("--hist", r_hist, "ranked per-link path counts under a random permutation");
    rts->add_option("--mode", r_mode)->check(CLI::IsMember({"ecmp", "ksp"}));
    rts->add_option("--limit", r_limit);
    rts->add_option("--perm-seed", r_perm);
    rts->add_option("--threshold", r_threshold, "report the fraction of links with at most this many paths");
    rts->add_option("--src", r_src);
    rts->add_option("--dst", r_dst);
    rts->add_option("--out", r_out);

    // expand
    auto* exp = app.add_subcommand("expand", "add racks or switches");
    std::string e_topo, e_out, e_log;
    int e_racks = 0, e_switches = 0, e_ports = 0, e_servers = -1;
    std::uint64_t e_seed = 1;
    exp->add_option("topology", e_topo)->required();
    exp->add_option("--racks", e_racks);
    exp->add_option("--switches", e_switches);
    exp->add_option("--ports", e_ports, "ports of each new switch (default: switch 0's)");
    exp->add_option("--servers", e_servers, "servers per new rack (default: switch 0's)");
    exp->add_option("--seed", e_seed);
    exp->add_option("--out", e_out);
    exp->add_option("--log", e_log, "write the rewiring log here");

    // fail
    auto* fl = app.add_subcommand("fail", "random link failures");
    std::string f_topo, f_out, f_fractions;
    double f_fraction = 0.0, f_eps = 0.05;
    int f_trials = 10;
    std::uint64_t f_seed = 1;
    fl->add_option("topology", f_topo)->required();
    fl->add_option("--fraction", f_fraction, "fail this fraction and write the topology");
    fl->add_option("--fractions", f_fractions, "comma list: report throughput per fraction instead");
    fl->add_option("--trials", f_trials);
    fl->add_option("--eps", f_eps);
    fl->add_option("--seed", f_seed);
    fl->add_option("--out", f_out);

    // experiment
    auto* ex = app.add_subcommand("experiment", "named figure reproductions");
    std::string x_name, x_out;
    experiments::Options xo;
    xo.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    experiments::Fig3cConfig c3;
    experiments::Fig5Config c5;
    experiments::Fig7Config c7;
    experiments::Fig10Config c10;
    experiments::Fig11Config c11;
    experiments::DdgConfig cd;
    experiments::SwdcConfig cs;
    std::string x_fractions, x_locals;
    int x_ports = 0, x_servers = -1, x_switches = 0, x_degree = 0, x_limit = 0;
    ex->add_option("name", x_name)->required();
    ex->add_option("--seed", xo.seed, "topology seed");
    ex->add_option("--traffic-seed", xo.traffic_seed);
    ex->add_option("--trials", xo.trials);
    ex->add_option("--eps", xo.eps);
    ex->add_option("--jobs", xo.jobs, "worker threads (default: hardware threads)");
    ex->add_option("--out", x_out);
    ex->add_option("--min-ports", c3.min_ports);
    ex->add_option("--max-ports", c3.max_ports);
    ex->add_option("--start", c5.start);
    ex->add_option("--step", c5.step);
    ex->add_option("--end", c5.end);
    ex->add_option("--containers", c11.containers);
    ex->add_option("--per-container", c11.per_container);
    ex->add_option("--local-fractions", x_locals);
    ex->add_option("--fractions", x_fractions);
    ex->add_option("--import", cd.imports);
    ex->add_option("--hex-switches", cs.hex_switches);
    ex->add_option("--ports", x_ports);
    ex->add_option("--servers", x_servers);
    ex->add_option("--switches", x_switches);
    ex->add_option("--degree", x_degree);
    ex->add_option("--limit", x_limit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            Topology t = [&] {
                if (!g_rrg.empty()) {
                    const auto v = ints(g_rrg, 3, "--rrg");
                    return topo::build_rrg(v[0], v[1], v[2], g_seed);
                }
                if (g_fat) return topo::build_fat_tree(g_fat);
                if (!g_swdc.empty()) {
                    const auto parts = split(g_swdc, ',');
                    if (parts.size() != 4) throw InvalidArgument("--swdc expects variant,N,degree,servers");
                    const auto v = ints(parts[1] + "," + parts[2] + "," + parts[3], 3, "--swdc");
                    topo::Lattice lattice;
                    if (parts[0] == "ring")
                        lattice = topo::Lattice::ring;
                    else if (parts[0] == "torus2d")
                        lattice = topo::Lattice::torus2d;
                    else if (parts[0] == "hex3d")
                        lattice = topo::Lattice::hex3d;
                    else
                        throw InvalidArgument("swdc variant must be ring, torus2d or hex3d");
                    return topo::build_swdc(lattice, v[0], v[1], v[2], g_seed);
                }
                if (!g_layered.empty()) {
                    const auto v = ints(g_layered, 6, "--layered");
                    return topo::build_layered_rrg(v[0], v[1], v[2], v[3], v[4], v[5], g_seed);
                }
                const auto text = io::read_file(g_import);
                int ports = g_ports;
                if (ports <= 0) ports = max_degree(io::parse_edge_list(text, 1 << 20, g_servers)) + g_servers;
                return io::parse_edge_list(text, ports, g_servers);
            }();
            if (g_out.empty()) {
                std::cout << io::serialize(t);
                std::cerr << summary(t) << '\n';
            } else {
                io::write_topology(g_out, t);
                std::cout << summary(t) << '\n';
            }
        } else if (met->parsed()) {
            const auto t = io::read_topology(m_topo);
            if (m_bounds) {
                const int r = max_degree(t);
                const int k = t.switch_count() > 0 ? t.ports(0) : 0;
                std::ostringstream out;
                out << "metric,value\n";
                out << "bisection_lower_bound," << format_real(metrics::bisection_lower_bound(t.switch_count(), r)) << '\n';
                if (k > r)
                    out << "normalized_bisection_lower_bound,"
                        << format_real(metrics::normalized_bisection_lower_bound(t.switch_count(), k, r)) << '\n';
                if (r >= 3) {
                    out << "diameter_upper_bound," << metrics::diameter_upper_bound(t.switch_count(), r) << '\n';
                    out << "server_diameter_upper_bound," << metrics::server_diameter_upper_bound(t.switch_count(), r)
                        << '\n';
                }
                emit(out.str(), m_out);
            } else {
                const auto level = m_paths == "server" ? metrics::Level::server_level : metrics::Level::switch_level;
                emit(metrics::distribution_csv(metrics::path_lengths(t, level)), m_out);
            }
        } else if (sol->parsed()) {
            const auto t = io::read_topology(s_topo);
            const auto tm = flow::random_permutation(t.server_count(), s_perm);
            const auto s = s_mode == "any" ? flow::max_concurrent_flow(t, tm, s_eps)
                                           : flow::restricted_flow(t, tm, parse_mode(s_mode), s_limit, s_eps);
            std::string text;
            if (s_flows) {
                text = "server,dst,fraction\n";
                for (ServerId i = 0; i < tm.servers; ++i)
                    text += std::to_string(i) + "," + std::to_string(tm.dst[static_cast<std::size_t>(i)]) + "," +
                            format_real(s.per_flow[static_cast<std::size_t>(i)]) + "\n";
            } else {
                const std::string param = s_mode == "any" ? "any" : s_mode + "_" + std::to_string(s_limit);
                text = "param,trial,seed,lambda,mean_flow,min_flow,jain\n" + solution_row(param, s_perm, s);
            }
            emit(text, s_out);
            std::cerr << "network_lambda=" << format_real(s.network_lambda) << " upper_bound="
                      << format_real(s.upper_bound) << " iterations=" << s.iterations << '\n';
        } else if (rts->parsed()) {
            const auto t = io::read_topology(r_topo);
            const auto mode = parse_mode(r_mode);
            if (r_hist) {
                const auto tm = flow::random_permutation(t.server_count(), r_perm);
                const auto flows = flow::switch_flows(t, tm);
                const auto counts = route::link_path_counts(t, flows, mode, r_limit);
                emit(route::rank_csv(counts), r_out);
                std::cerr << "fraction_at_most_" << r_threshold << '='
                          << format_real(route::fraction_at_most(counts, r_threshold)) << '\n';
            } else {
                if (r_src < 0 || r_dst < 0) throw InvalidArgument("routes needs --hist or --src and --dst");
                const auto set = route::paths_for(t, r_src, r_dst, mode, r_limit);
                std::string text = "rank,hops,path\n";
                for (std::size_t i = 0; i < set.paths.size(); ++i) {
                    text += std::to_string(i) + "," + std::to_string(set.paths[i].size() - 1) + ",";
                    for (std::size_t j = 0; j < set.paths[i].size(); ++j)
                        text += (j ? " " : "") + std::to_string(set.paths[i][j]);
                    text += "\n";
                }
                emit(text, r_out);
            }
        } else if (exp->parsed()) {
            auto t = io::read_topology(e_topo);
            if (e_racks < 0 || e_switches < 0 || e_racks + e_switches == 0)
                throw InvalidArgument("expand needs --racks or --switches");
            const int ports = e_ports > 0 ? e_ports : t.ports(0);
            const int servers = e_servers >= 0 ? e_servers : t.servers(0);
            std::vector<expand::ExpansionStep> steps;
            std::uint64_t counter = 0;
            for (int i = 0; i < e_racks; ++i) {
                auto x = expand::add_rack(t, ports, servers, derive_seed(e_seed, 0, counter++));
                t = std::move(x.topology);
                steps.push_back(std::move(x.step));
            }
            for (int i = 0; i < e_switches; ++i) {
                auto x = expand::add_switch(t, ports, derive_seed(e_seed, 0, counter++));
                t = std::move(x.topology);
                steps.push_back(std::move(x.step));
            }
            if (!e_log.empty()) io::write_file(e_log, expand::serialize_log(steps));
            if (e_out.empty()) {
                std::cout << io::serialize(t);
                std::cerr << summary(t) << '\n';
            } else {
                io::write_topology(e_out, t);
                std::cout << summary(t) << '\n';
            }
        } else if (fl->parsed()) {
            const auto t = io::read_topology(f_topo);
            if (!f_fractions.empty()) {
                const auto fractions = reals(f_fractions);
                const auto report = flow::throughput_vs_failures(t, fractions, f_trials, f_eps, f_seed);
                emit(report.csv(), f_out);
                std::cerr << "wall_time=" << format_real(report.wall_time_seconds, 2) << "s\n";
            } else {
                const auto failed = expand::fail_links(t, f_fraction, f_seed);
                if (f_out.empty())
                    std::cout << io::serialize(failed);
                else
                    io::write_topology(f_out, failed);
                std::cerr << summary(failed) << '\n';
            }
        } else if (ex->parsed()) {
            ExperimentReport report;
            if (x_name == "legup") throw InvalidArgument("experiment legup is reserved and not implemented");
            if (x_name == "fig3c") {
                report = experiments::fig3c(c3, xo);
            } else if (x_name == "fig5") {
                if (x_ports) c5.ports = x_ports;
                if (x_servers >= 0) c5.servers = x_servers;
                report = experiments::fig5(c5, xo);
            } else if (x_name == "fig7") {
                if (x_switches) c7.switches = x_switches;
                if (x_ports) c7.ports = x_ports;
                if (x_servers >= 0) c7.servers = x_servers;
                if (x_limit) c7.limit = x_limit;
                report = experiments::fig7(c7, xo);
            } else if (x_name == "fig10") {
                if (x_ports) c10.ports = x_ports;
                if (x_servers >= 0) c10.servers = x_servers;
                if (!x_fractions.empty()) c10.fractions = reals(x_fractions);
                report = experiments::fig10(c10, xo);
            } else if (x_name == "fig11") {
                if (x_ports) c11.ports = x_ports;
                if (x_servers >= 0) c11.servers = x_servers;
                if (x_degree) c11.degree = x_degree;
                if (!x_locals.empty()) c11.local_fractions = reals(x_locals);
                report = experiments::fig11(c11, xo);
            } else if (x_name == "ddg") {
                if (x_ports) cd.ports = x_ports;
                if (x_servers >= 0) cd.servers = x_servers;
                report = experiments::ddg(cd, xo);
            } else if (x_name == "swdc") {
                if (x_switches) cs.switches = x_switches;
                if (x_servers >= 0) cs.servers = x_servers;
                if (x_degree) cs.degree = x_degree;
                report = experiments::swdc(cs, xo);
            } else {
                throw InvalidArgument("unknown experiment " + x_name);
            }
            emit(report.csv(), x_out);
            std::cerr << "wall_time=" << format_real(report.wall_time_seconds, 2) << "s\n";
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
