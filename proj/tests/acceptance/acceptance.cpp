// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero if any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "jellynet/experiments.hpp"
#include "jellynet/expand.hpp"
#include "jellynet/flow.hpp"
#include "jellynet/metrics.hpp"
#include "jellynet/rng.hpp"
#include "jellynet/route.hpp"
#include "jellynet/topo.hpp"
#include "server_oracle.hpp"

using namespace jellynet;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Mean of column `col` over rows where `key` equals `value` (and `topology` matches when given).
double mean_where(const ExperimentReport& r, const std::string& col, const std::string& key, const std::string& value,
                  const std::string& topology = "") {
    const auto k = r.column(key);
    const auto tcol = topology.empty() ? 0 : r.column("topology");
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (r.rows[i][k] != value) continue;
        if (!topology.empty() && r.rows[i][tcol] != topology) continue;
        sum += r.number(i, col);
        ++n;
    }
    if (n == 0) throw std::runtime_error("no rows for " + key + "=" + value);
    return sum / n;
}

std::vector<std::string> distinct(const ExperimentReport& r, const std::string& key) {
    std::vector<std::string> out;
    const auto k = r.column(key);
    for (const auto& row : r.rows)
        if (std::find(out.begin(), out.end(), row[k]) == out.end()) out.push_back(row[k]);
    return out;
}

Result ac1() {
    Result res;
    for (int kp : {4, 6, 8, 10, 12, 14}) {
        const auto t = topo::build_fat_tree(kp);
        const bool ok = t.server_count() == kp * kp * kp / 4 && t.switch_count() == 5 * kp * kp / 4 &&
                        t.link_count() == static_cast<std::size_t>(kp * kp * kp / 2);
        res.pass = res.pass && ok;
        res.detail += fmt("kp=%d:%d/%d/%zu ", kp, t.server_count(), t.switch_count(), t.link_count());
    }
    return res;
}

Result ac2() {
    // The 686-server Jellyfish uses the fat-tree(14) equipment: 245 switches
    // of 14 ports. RRG(98,14,7) is reported alongside for reference.
    Result res;
    const auto specs = flow::spread_servers(245, 14, 686);
    const auto degrees = flow::network_degrees(specs);
    double worst = 1.0, small = 1.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto t = topo::build_random_graph(specs, degrees, seed);
        worst = std::min(worst, metrics::path_lengths(t, metrics::Level::server_level).fraction_below(6));
        const auto r98 = topo::build_rrg(98, 14, 7, seed);
        small = std::min(small, metrics::path_lengths(r98, metrics::Level::server_level).fraction_below(6));
    }
    const double ft = metrics::path_lengths(topo::build_fat_tree(14), metrics::Level::server_level).fraction_below(6);
    res.pass = worst >= 0.995 && std::abs(ft - 0.075) <= 0.005;
    res.detail = fmt("same-gear jellyfish min over 10 seeds=%.3f%% (need >=99.5%%) fat_tree=%.3f%% (need 7.5+-0.5);"
                     " RRG(98,14,7) min=%.3f%%",
                     100 * worst, 100 * ft, 100 * small);
    return res;
}

Result ac3() {
    Result res;
    std::string parts;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto d = metrics::path_lengths(topo::build_rrg(3200, 48, 36, seed), metrics::Level::switch_level);
        res.pass = res.pass && d.mean < 2.7 && d.diameter <= 4;
        parts += fmt("seed%llu mean=%.4f diam=%d ", static_cast<unsigned long long>(seed), d.mean, d.diameter);
    }
    res.detail = parts + "(need mean<2.7, diam<=4)";
    return res;
}

Result ac4(int jobs) {
    experiments::Options o;
    o.trials = 1;
    o.eps = 0.02;
    o.jobs = jobs;
    const auto r = experiments::fig3c({10, 10}, o);
    const double jelly = r.number(0, "jellyfish_servers");
    const double fat = r.number(0, "fat_tree_servers");
    Result res;
    res.pass = fat == 250 && jelly >= 1.10 * fat;
    res.detail = fmt("fat_tree=%g jellyfish=%g ratio=%.3f (need >=1.10)", fat, jelly, jelly / fat);
    return res;
}

Result ac5(int jobs) {
    experiments::Options o;
    o.trials = 5;
    o.jobs = jobs;
    const auto r = experiments::fig7({}, o);
    const double ecmp = mean_where(r, "fraction_at_most_threshold", "param", "ecmp_8");
    const double ksp = mean_where(r, "fraction_at_most_threshold", "param", "ksp_8");
    Result res;
    res.pass = std::abs(ecmp - 0.55) <= 0.10 && std::abs(ksp - 0.06) <= 0.04;
    res.detail = fmt("links with <=2 paths: ecmp_8=%.2f%% (need 55+-10) ksp_8=%.2f%% (need 6+-4)", 100 * ecmp,
                     100 * ksp);
    return res;
}

Result ac6(int jobs) {
    experiments::Options o;
    o.trials = 10;
    o.eps = 0.05;
    o.jobs = jobs;
    const auto r = experiments::fig10({}, o);
    Result res;
    const auto fractions = distinct(r, "param");
    const double base = mean_where(r, "mean_flow", "param", fractions.front(), "jellyfish");
    const double worst = mean_where(r, "mean_flow", "param", fractions.back(), "jellyfish");
    const double drop = 1.0 - worst / base;
    res.pass = std::stod(fractions.back()) >= 0.15 && drop < 0.16;
    res.detail = fmt("drop at %s=%.2f%% (need <16%%);", fractions.back().c_str(), 100 * drop);
    for (const auto& f : fractions) {
        const double j = mean_where(r, "mean_flow", "param", f, "jellyfish");
        const double ft = mean_where(r, "mean_flow", "param", f, "fat_tree");
        if (std::stod(f) >= 0.06 - 1e-9) res.pass = res.pass && j >= ft;
        res.detail += fmt(" f=%s jf=%.4f ft=%.4f", f.c_str(), j, ft);
    }
    return res;
}

Result ac7(int jobs) {
    experiments::Options o;
    o.trials = 10;
    o.eps = 0.02;
    o.jobs = jobs;
    experiments::Fig11Config c;
    c.local_fractions = {0.5, 0.6};
    const auto r = experiments::fig11(c, o);
    const double base = mean_where(r, "baseline_mean_flow", "param", "0.5000");
    const double l50 = 1.0 - mean_where(r, "mean_flow", "param", "0.5000") / base;
    const double l60 = 1.0 - mean_where(r, "mean_flow", "param", "0.6000") / base;
    Result res;
    res.pass = l50 < 0.03 && l60 < 0.06;
    res.detail = fmt("baseline=%.4f loss at 50%%=%.2f%% (need <3) at 60%%=%.2f%% (need <6)", base, 100 * l50, 100 * l60);
    return res;
}

Result ac8(int jobs) {
    experiments::Options o;
    o.trials = 10;
    o.eps = 0.02;
    o.jobs = jobs;
    const auto r = experiments::fig5({}, o);
    Result res;
    double worst_flow = 0.0, worst_path = 0.0;
    for (const auto& n : distinct(r, "param")) {
        const double fi = mean_where(r, "incremental_mean_flow", "param", n);
        const double fs = mean_where(r, "scratch_mean_flow", "param", n);
        const double pi = mean_where(r, "incremental_path", "param", n);
        const double ps = mean_where(r, "scratch_path", "param", n);
        worst_flow = std::max(worst_flow, std::abs(fi - fs) / fs);
        worst_path = std::max(worst_path, std::abs(pi - ps) / ps);
        res.detail += fmt("n=%s flow %.4f/%.4f path %.4f/%.4f; ", n.c_str(), fi, fs, pi, ps);
    }
    res.pass = worst_flow <= 0.02 && worst_path <= 0.02;
    res.detail = fmt("max diff flow=%.2f%% path=%.2f%% (need <=2); ", 100 * worst_flow, 100 * worst_path) + res.detail;
    return res;
}

Result ac9() {
    const double eps = 0.02;
    Rng rng(2011);
    Result res;
    int instances = 0, below_one = 0;
    double worst = 1.0;
    for (; instances < 24; ++instances) {
        const int n = 4 + static_cast<int>(rng.below(9));
        const int r = n == 4 ? 2 : 2 + static_cast<int>(rng.below(2));
        const int servers = 1 + static_cast<int>(rng.below(2));
        const auto t = topo::build_rrg(n, r + servers, r, rng.next());
        const auto tm = flow::random_permutation(t.server_count(), rng.next());
        const double exact = oracle::server_lambda(t, tm);
        const double got = flow::max_concurrent_flow(t, tm, eps).lambda;
        const bool ok = got >= (1.0 - eps) * exact - 1e-12 && got <= exact * (1.0 + 1e-9);
        if (!ok) res.detail += fmt("[n=%d r=%d exact=%.6f got=%.6f] ", n, r, exact, got);
        res.pass = res.pass && ok;
        if (exact < 1.0 - 1e-9) ++below_one;
        if (exact > 0) worst = std::min(worst, got / exact);
    }
    res.detail += fmt("%d instances (%d with lambda<1), worst ratio %.4f (need >=%.2f)", instances, below_one, worst,
                      1.0 - eps);
    return res;
}

Result ac10() {
    Result res;
    std::map<std::string, int> failures;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) ++failures[what];
    };
    Rng rng(10);
    for (int c = 0; c < 100; ++c) {
        const int n = 5 + static_cast<int>(rng.below(80));
        const int r = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n - 3, 8))));
        const int k = r + 1 + static_cast<int>(rng.below(4));
        const auto seed = rng.next();
        const auto t = topo::build_rrg(n, k, r, seed);

        // rrg: degrees, one short switch at most, simple, connected, deterministic
        int short_switches = 0;
        bool degrees = true;
        for (SwitchId s = 0; s < n; ++s) {
            degrees = degrees && (t.degree(s) == r || t.degree(s) == r - 1) && t.servers(s) == k - r;
            if (t.degree(s) == r - 1) ++short_switches;
        }
        std::set<std::pair<SwitchId, SwitchId>> seen;
        bool simple = true;
        for (const auto& l : t.links()) simple = simple && l.a != l.b && seen.insert({l.a, l.b}).second;
        expect(degrees && short_switches <= 1, "rrg degree");
        expect(simple, "rrg simple");
        expect(t.is_connected(), "rrg connected");
        expect(t == topo::build_rrg(n, k, r, seed), "rrg determinism");

        // expansion keeps old switches untouched and replays exactly
        const auto e = expand::add_rack(t, k, k - r, rng.next());
        bool kept = true;
        for (SwitchId s = 0; s < n; ++s)
            kept = kept && e.topology.degree(s) == t.degree(s) && e.topology.servers(s) == t.servers(s);
        expect(kept, "expansion degree preservation");
        expect(e.step.links_added.size() == 2 * e.step.links_removed.size(), "expansion link accounting");
        expect(expand::apply(t, e.step) == e.topology, "expansion replay");

        // bounds and distributions
        const auto d = metrics::path_lengths(t, metrics::Level::switch_level);
        std::uint64_t total = 0;
        double weighted = 0.0;
        for (const auto& [h, cnt] : d.histogram) {
            total += cnt;
            weighted += static_cast<double>(h) * static_cast<double>(cnt);
        }
        expect(total == d.pair_count && std::abs(weighted / static_cast<double>(total) - d.mean) < 1e-9,
               "histogram consistency");
        expect(d.diameter <= metrics::diameter_upper_bound(n, r), "diameter bound");
        const auto a = rng.index(n);
        const auto da = metrics::bfs_distances(t, a);
        bool symmetric = true;
        for (SwitchId b = 0; b < n; ++b)
            symmetric = symmetric && metrics::bfs_distances(t, b)[static_cast<std::size_t>(a)] == da[static_cast<std::size_t>(b)];
        expect(symmetric, "distance symmetry");

        // routing invariants
        auto b = rng.index(n - 1);
        if (b >= a) ++b;
        const auto ksp = route::k_shortest_paths(t, a, b, 8);
        bool sorted = true;
        for (std::size_t i = 0; i < ksp.paths.size(); ++i) {
            sorted = sorted && route::valid_path(t, ksp.paths[i], a, b);
            if (i) sorted = sorted && ksp.paths[i - 1].size() <= ksp.paths[i].size();
        }
        expect(sorted, "ksp ordering and validity");
        expect(route::k_shortest_paths(t, a, b, 1).paths.front() == route::ecmp_paths(t, a, b, 1).paths.front() &&
                   static_cast<int>(ksp.paths.front().size()) - 1 == da[static_cast<std::size_t>(b)],
               "ksp k=1 equals ecmp");
    }

    // r-connectivity: 100 sampled pairs across 20-switch-or-larger graphs
    int connected = 0;
    for (int c = 0; c < 100; ++c) {
        const int n = 20 + static_cast<int>(rng.below(60));
        const int r = 3 + static_cast<int>(rng.below(6));
        const auto t = topo::build_rrg(n, r + 2, r, rng.next());
        const auto a = rng.index(n);
        auto b = rng.index(n - 1);
        if (b >= a) ++b;
        // A short switch caps the cut at r - 1; compare against the endpoint degrees.
        const int want = std::min({r, t.degree(a), t.degree(b)});
        if (metrics::edge_connectivity(t, a, b) == want) ++connected;
    }
    expect(connected >= 95, "r-connectivity");

    // layered graphs: local degree exact, global degree r_global or one less
    for (int c = 0; c < 100; ++c) {
        const int C = 2 + static_cast<int>(rng.below(5));
        const int M = 2 * (3 + static_cast<int>(rng.below(6)));
        const int rl = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(M - 2, 4))));
        const int rg = 1 + static_cast<int>(rng.below(3));
        const auto t = topo::build_layered_rrg(C, M, rl + rg + 1, rl, rg, 1, rng.next());
        const auto container = topo::container_assignment(t);
        bool ok = true;
        for (SwitchId s = 0; s < t.switch_count(); ++s) {
            int local = 0, global = 0;
            for (auto v : t.neighbors(s))
                (container[static_cast<std::size_t>(v)] == container[static_cast<std::size_t>(s)] ? local : global)++;
            ok = ok && local == rl && (global == rg || global == rg - 1);
        }
        expect(ok, "layered degrees");
    }

    // bisection bound monotone in r, fat-tree stats agree with the built graph
    for (int n : {50, 100, 1000}) {
        bool mono = true;
        for (int r = 3; r < 64; ++r)
            mono = mono && metrics::bisection_lower_bound(n, r + 1) > metrics::bisection_lower_bound(n, r);
        expect(mono, "bisection monotone");
    }
    for (int kp = 4; kp <= 16; kp += 2) {
        const auto t = topo::build_fat_tree(kp);
        std::int64_t degrees = 0;
        for (SwitchId s = 0; s < t.switch_count(); ++s) degrees += t.degree(s);
        expect(metrics::fat_tree_stats(kp).switch_links == degrees / 2, "fat-tree stats");
    }

    res.pass = failures.empty();
    if (failures.empty()) res.detail = "all property groups held over 100 randomized cases each";
    for (const auto& [what, n] : failures) res.detail += fmt("%s failed %d times; ", what.c_str(), n);
    return res;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jellynet acceptance checks"};
    std::vector<int> only;
    int jobs = 1;
    app.add_option("--only", only, "criterion numbers to run (default: all)")->check(CLI::Range(1, 10));
    app.add_option("--jobs", jobs, "worker threads for experiment criteria")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    if (only.empty())
        for (int i = 1; i <= 10; ++i) only.push_back(i);

    const std::map<int, std::pair<const char*, std::function<Result()>>> criteria{
        {1, {"fat-tree closed forms", ac1}},
        {2, {"server path lengths", ac2}},
        {3, {"switch path lengths at 3200 switches", ac3}},
        {4, {"full-capacity servers with 10-port gear", [&] { return ac4(jobs); }}},
        {5, {"ecmp vs k-shortest path diversity", [&] { return ac5(jobs); }}},
        {6, {"throughput under link failures", [&] { return ac6(jobs); }}},
        {7, {"localized two-layer throughput", [&] { return ac7(jobs); }}},
        {8, {"incremental vs from-scratch growth", [&] { return ac8(jobs); }}},
        {9, {"solver vs exact LP", ac9}},
        {10, {"structural properties", ac10}},
    };

    bool all = true;
    for (int id : only) {
        const auto& [name, run] = criteria.at(id);
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("AC%d %s: %s | %s | %.1fs\n", id, r.pass ? "PASS" : "FAIL", name, r.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
