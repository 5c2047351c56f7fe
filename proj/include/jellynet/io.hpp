#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "jellynet/topology.hpp"

namespace jellynet::io {

/// Malformed input; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline constexpr std::string_view kTopologyMagic = "jellynet-topology";
inline constexpr int kTopologyVersion = 1;

/// Topology text format, version 1:
///
///     jellynet-topology 1
///     kind <tag> seed <u64> rng <id>
///     #@ <key> <value>            (zero or more metadata lines)
///     switches <S>
///     switch <id> ports <k> servers <s>     (S lines, ids ascending)
///     link <a> <b>                          (a < b, sorted)
///
/// Other lines starting with '#' are comments. Output is byte-deterministic.
std::string serialize(const Topology& t);
Topology deserialize(std::string_view text);

Topology read_topology(const std::filesystem::path& path);
void write_topology(const std::filesystem::path& path, const Topology& t);

/// Imports an externally supplied graph. Accepts the topology format (its
/// links are kept, ports and servers are replaced) or a bare edge list of
/// `a b` lines with 0-based ids and an optional leading `nodes <N>` line.
/// Every switch gets `ports` ports and `servers_per_switch` servers.
Topology parse_edge_list(std::string_view text, int ports, int servers_per_switch);
Topology load_edge_list(const std::filesystem::path& path, int ports, int servers_per_switch);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace jellynet::io
