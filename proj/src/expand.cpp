#include "jellynet/expand.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "jellynet/io.hpp"
#include "jellynet/rng.hpp"
#include "link_graph.hpp"

namespace jellynet::expand {

namespace {

Expansion grow(const Topology& t, StepKind kind, int ports, int servers, std::uint64_t seed) {
    if (ports < 0 || servers < 0 || servers > ports) throw InvalidArgument("invalid ports/servers for new switch");
    const int network_ports = ports - servers;
    if (network_ports < 2)
        throw InvalidArgument("new switch needs at least two network ports or it would be disconnected");

    detail::LinkGraph g(t);
    const SwitchId u = g.add_switch();
    Rng rng(seed);
    ExpansionStep step{kind, u, ports, servers, {}, {}};

    const std::size_t budget = 100 * std::max<std::size_t>(g.link_count(), 1);
    std::size_t misses = 0;
    int free = network_ports;
    while (free >= 2) {
        if (g.link_count() == 0) throw RuntimeError("no links to rewire");
        auto idx = rng.index(g.link_count());
        Link l = g.link(idx);
        if (g.adjacent(u, l.a) || g.adjacent(u, l.b)) {
            if (++misses < budget) continue;
            std::vector<std::size_t> eligible;
            for (std::size_t i = 0; i < g.link_count(); ++i)
                if (!g.adjacent(u, g.link(i).a) && !g.adjacent(u, g.link(i).b)) eligible.push_back(i);
            if (eligible.empty())
                throw RuntimeError("no eligible link to rewire: topology too small or dense for the new switch");
            idx = eligible[rng.index(eligible.size())];
            l = g.link(idx);
        }
        g.remove_at(idx);
        g.add(u, l.a);
        g.add(u, l.b);
        step.links_removed.push_back(l);
        step.links_added.push_back(Link::make(u, l.a));
        step.links_added.push_back(Link::make(u, l.b));
        free -= 2;
        misses = 0;
    }

    std::vector<SwitchSpec> specs(t.switches().begin(), t.switches().end());
    specs.push_back({ports, servers});
    Topology out(t.kind(), std::move(specs), g.links(), t.seed(), t.metadata(), t.rng_id());
    return {std::move(out), std::move(step)};
}

std::string_view kind_name(StepKind k) { return k == StepKind::add_rack ? "add_rack" : "add_switch"; }

}  // namespace

Expansion add_rack(const Topology& t, int ports, int servers, std::uint64_t seed) {
    return grow(t, StepKind::add_rack, ports, servers, seed);
}

Expansion add_switch(const Topology& t, int ports, std::uint64_t seed) {
    return grow(t, StepKind::add_switch, ports, 0, seed);
}

Topology apply(const Topology& t, const ExpansionStep& step) {
    if (step.new_switch != t.switch_count())
        throw InvalidArgument("expansion step expects switch " + std::to_string(step.new_switch) +
                              " to be the next id, topology has " + std::to_string(t.switch_count()));
    if (step.links_added.size() != 2 * step.links_removed.size())
        throw InvalidArgument("expansion step must add two links per removed link");
    detail::LinkGraph g(t);
    g.add_switch();
    for (const auto& l : step.links_removed) g.remove(l.a, l.b);
    for (const auto& l : step.links_added) {
        if (l.a != step.new_switch && l.b != step.new_switch)
            throw InvalidArgument("added link does not touch the new switch");
        if (g.adjacent(l.a, l.b)) throw InvalidArgument("expansion step adds a duplicate link");
        g.add(l.a, l.b);
    }
    std::vector<SwitchSpec> specs(t.switches().begin(), t.switches().end());
    specs.push_back({step.new_switch_ports, step.new_switch_servers});
    return Topology(t.kind(), std::move(specs), g.links(), t.seed(), t.metadata(), t.rng_id());
}

Topology fail_links(const Topology& t, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("failure fraction must lie in [0, 1]");
    const auto total = t.link_count();
    const auto failed = static_cast<std::size_t>(fraction * static_cast<double>(total));
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    // Partial Fisher-Yates: the first `failed` entries are the failed links.
    for (std::size_t i = 0; i < failed; ++i) {
        const auto j = i + rng.index(total - i);
        std::swap(order[i], order[j]);
    }
    std::vector<char> down(total, 0);
    for (std::size_t i = 0; i < failed; ++i) down[order[i]] = 1;
    std::vector<Link> kept;
    kept.reserve(total - failed);
    for (std::size_t i = 0; i < total; ++i)
        if (!down[i]) kept.push_back(t.links()[i]);
    return t.with_links(std::move(kept));
}

std::string serialize_step(const ExpansionStep& step) {
    std::ostringstream out;
    out << "step " << kind_name(step.kind) << " switch " << step.new_switch << " ports " << step.new_switch_ports
        << " servers " << step.new_switch_servers << '\n';
    for (std::size_t i = 0; i < step.links_removed.size(); ++i) {
        const auto& r = step.links_removed[i];
        out << "remove " << r.a << ' ' << r.b << '\n';
        for (std::size_t j = 2 * i; j < 2 * i + 2 && j < step.links_added.size(); ++j) {
            const auto& a = step.links_added[j];
            const SwitchId other = a.a == step.new_switch ? a.b : a.a;
            out << "add " << step.new_switch << ' ' << other << '\n';
        }
    }
    return out.str();
}

std::string serialize_log(const std::vector<ExpansionStep>& steps) {
    std::string out = std::string(kExpansionMagic) + " 1\n";
    for (const auto& s : steps) out += serialize_step(s);
    return out;
}

std::vector<ExpansionStep> parse_log(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t number = 0;
    bool header = false;
    std::vector<ExpansionStep> steps;
    auto to_int = [&](const std::string& tok) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw io::ParseError(number, "expected an integer, got '" + tok + "'");
        return v;
    };
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string w; ls >> w;) tok.push_back(w);
        if (tok.empty() || tok[0].starts_with("#")) continue;
        if (!header) {
            if (tok.size() != 2 || tok[0] != kExpansionMagic) throw io::ParseError(number, "missing expansion header");
            if (tok[1] != "1") throw io::ParseError(number, "unsupported expansion log version " + tok[1]);
            header = true;
            continue;
        }
        if (tok[0] == "step") {
            if (tok.size() != 8 || tok[2] != "switch" || tok[4] != "ports" || tok[6] != "servers")
                throw io::ParseError(number, "expected 'step <kind> switch <u> ports <k> servers <s>'");
            ExpansionStep s;
            if (tok[1] == "add_rack") s.kind = StepKind::add_rack;
            else if (tok[1] == "add_switch") s.kind = StepKind::add_switch;
            else throw io::ParseError(number, "unknown step kind '" + tok[1] + "'");
            s.new_switch = to_int(tok[3]);
            s.new_switch_ports = to_int(tok[5]);
            s.new_switch_servers = to_int(tok[7]);
            steps.push_back(std::move(s));
            continue;
        }
        if (steps.empty()) throw io::ParseError(number, "link line before any step");
        if (tok.size() != 3) throw io::ParseError(number, "expected '<remove|add> <a> <b>'");
        const Link l = Link::make(to_int(tok[1]), to_int(tok[2]));
        if (tok[0] == "remove") steps.back().links_removed.push_back(l);
        else if (tok[0] == "add") steps.back().links_added.push_back(l);
        else throw io::ParseError(number, "unknown log line '" + tok[0] + "'");
    }
    if (!header) throw io::ParseError(0, "empty expansion log");
    return steps;
}

}  // namespace jellynet::expand
