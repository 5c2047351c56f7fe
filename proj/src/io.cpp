#include "jellynet/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace jellynet::io {

namespace {

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        const auto end = text.find('\n');
        auto line = text.substr(0, end);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back({number, line});
        if (end == std::string_view::npos) break;
        text.remove_prefix(end + 1);
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool blank(std::string_view line) { return tokens(line).empty(); }

template <typename Int>
Int number(const Line& line, std::string_view token) {
    Int value{};
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line.number, "expected an integer, got '" + std::string(token) + "'");
    return value;
}

void expect(const Line& line, const std::vector<std::string_view>& tok, std::size_t count,
            std::string_view keyword) {
    if (tok.size() != count || tok[0] != keyword)
        throw ParseError(line.number, "expected '" + std::string(keyword) + "' line, got '" +
                                          std::string(line.text) + "'");
}

}  // namespace

std::string serialize(const Topology& t) {
    std::ostringstream out;
    out << kTopologyMagic << ' ' << kTopologyVersion << '\n';
    out << "kind " << to_string(t.kind()) << " seed " << t.seed() << " rng " << t.rng_id() << '\n';
    for (const auto& [key, value] : t.metadata()) out << "#@ " << key << ' ' << value << '\n';
    out << "switches " << t.switch_count() << '\n';
    for (SwitchId s = 0; s < t.switch_count(); ++s)
        out << "switch " << s << " ports " << t.ports(s) << " servers " << t.servers(s) << '\n';
    for (const auto& l : t.links()) out << "link " << l.a << ' ' << l.b << '\n';
    return out.str();
}

Topology deserialize(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t i = 0;
    Metadata meta;
    auto next = [&]() -> const Line* {
        while (i < lines.size()) {
            const auto& line = lines[i++];
            if (line.text.starts_with("#@")) {
                const auto tok = tokens(line.text.substr(2));
                if (tok.empty()) throw ParseError(line.number, "empty metadata line");
                std::string value;
                if (tok.size() > 1) {
                    const auto start = static_cast<std::size_t>(tok[1].data() - line.text.data());
                    value = std::string(line.text.substr(start));
                }
                meta.emplace_back(std::string(tok[0]), std::move(value));
                continue;
            }
            if (line.text.starts_with("#") || blank(line.text)) continue;
            return &line;
        }
        return nullptr;
    };

    const Line* line = next();
    if (!line) throw ParseError(0, "empty topology");
    auto tok = tokens(line->text);
    if (tok.size() != 2 || tok[0] != kTopologyMagic)
        throw ParseError(line->number, "missing '" + std::string(kTopologyMagic) + "' header");
    if (number<int>(*line, tok[1]) != kTopologyVersion)
        throw ParseError(line->number, "unsupported topology version " + std::string(tok[1]));

    line = next();
    if (!line) throw ParseError(0, "missing kind line");
    tok = tokens(line->text);
    if (tok.size() != 6 || tok[0] != "kind" || tok[2] != "seed" || tok[4] != "rng")
        throw ParseError(line->number, "expected 'kind <tag> seed <u64> rng <id>'");
    const auto kind = parse_kind(tok[1]);
    if (!kind) throw ParseError(line->number, "unknown topology kind '" + std::string(tok[1]) + "'");
    const auto seed = number<std::uint64_t>(*line, tok[3]);
    const std::string rng_id(tok[5]);

    line = next();
    if (!line) throw ParseError(0, "missing switches line");
    tok = tokens(line->text);
    expect(*line, tok, 2, "switches");
    const auto count = number<SwitchId>(*line, tok[1]);
    if (count < 0) throw ParseError(line->number, "negative switch count");

    std::vector<SwitchSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (SwitchId s = 0; s < count; ++s) {
        line = next();
        if (!line) throw ParseError(0, "expected " + std::to_string(count) + " switch lines");
        tok = tokens(line->text);
        if (tok.size() != 6 || tok[0] != "switch" || tok[2] != "ports" || tok[4] != "servers")
            throw ParseError(line->number, "expected 'switch <id> ports <k> servers <s>'");
        if (number<SwitchId>(*line, tok[1]) != s)
            throw ParseError(line->number, "switch ids must be 0..S-1 ascending");
        specs.push_back({number<int>(*line, tok[3]), number<int>(*line, tok[5])});
    }

    std::vector<Link> links;
    std::size_t first_link_line = 0;
    while ((line = next())) {
        tok = tokens(line->text);
        expect(*line, tok, 3, "link");
        const auto a = number<SwitchId>(*line, tok[1]);
        const auto b = number<SwitchId>(*line, tok[2]);
        if (a >= b) throw ParseError(line->number, "link endpoints must satisfy a < b");
        if (!links.empty() && !(links.back() < Link{a, b}))
            throw ParseError(line->number, "links must be sorted and unique");
        if (!first_link_line) first_link_line = line->number;
        links.push_back({a, b});
    }
    try {
        return Topology(*kind, std::move(specs), std::move(links), seed, std::move(meta), rng_id);
    } catch (const InvalidArgument& e) {
        throw ParseError(first_link_line, e.what());
    }
}

Topology read_topology(const std::filesystem::path& path) { return deserialize(read_file(path)); }

void write_topology(const std::filesystem::path& path, const Topology& t) { write_file(path, serialize(t)); }

Topology parse_edge_list(std::string_view text, int ports, int servers_per_switch) {
    if (ports < 0 || servers_per_switch < 0 || servers_per_switch > ports)
        throw InvalidArgument("invalid ports/servers for imported graph");

    std::vector<Link> links;
    SwitchId nodes = 0;
    bool explicit_nodes = false;
    std::size_t first_line = 0;
    for (const auto& line : split_lines(text)) {
        if (line.text.starts_with("#") || blank(line.text)) continue;
        const auto tok = tokens(line.text);
        if (tok[0] == kTopologyMagic) {
            const auto t = deserialize(text);
            std::vector<SwitchSpec> specs(static_cast<std::size_t>(t.switch_count()),
                                          SwitchSpec{ports, servers_per_switch});
            try {
                return Topology(TopologyKind::imported, std::move(specs),
                                std::vector<Link>(t.links().begin(), t.links().end()), t.seed());
            } catch (const InvalidArgument& e) {
                throw ParseError(0, e.what());
            }
        }
        if (tok[0] == "nodes") {
            if (tok.size() != 2 || !links.empty() || explicit_nodes)
                throw ParseError(line.number, "'nodes <N>' must be a single leading line");
            nodes = number<SwitchId>(line, tok[1]);
            explicit_nodes = true;
            continue;
        }
        if (tok.size() != 2) throw ParseError(line.number, "expected 'a b'");
        const auto a = number<SwitchId>(line, tok[0]);
        const auto b = number<SwitchId>(line, tok[1]);
        if (a < 0 || b < 0) throw ParseError(line.number, "negative switch id");
        if (a == b) throw ParseError(line.number, "self-loop on switch " + std::to_string(a));
        if (explicit_nodes && std::max(a, b) >= nodes)
            throw ParseError(line.number, "switch id beyond declared node count");
        if (!first_line) first_line = line.number;
        if (!explicit_nodes) nodes = std::max(nodes, std::max(a, b) + 1);
        links.push_back(Link::make(a, b));
    }
    std::vector<SwitchSpec> specs(static_cast<std::size_t>(nodes), SwitchSpec{ports, servers_per_switch});
    try {
        return Topology(TopologyKind::imported, std::move(specs), std::move(links), 0);
    } catch (const InvalidArgument& e) {
        throw ParseError(first_line, e.what());
    }
}

Topology load_edge_list(const std::filesystem::path& path, int ports, int servers_per_switch) {
    return parse_edge_list(read_file(path), ports, servers_per_switch);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out << content;
    if (!out) throw RuntimeError("write failed for " + path.string());
}

}  // namespace jellynet::io
