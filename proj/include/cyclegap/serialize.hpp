#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "cyclegap/instances.hpp"
#include "cyclegap/protocols.hpp"
#include "cyclegap/reductions.hpp"
#include "cyclegap/stream_harness.hpp"

namespace cyclegap {

// nlohmann::json keeps object keys in a std::map, so dumps are sorted and
// byte-stable for equal inputs.
using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.0";

/// Embedded in every artifact.
struct Provenance {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string construction;
};

Json to_json(const Provenance& p);

Json to_json(const OmcInstance& inst, const Provenance& p);
OmcInstance omc_from_json(const Json& j);

Json to_json(const FmtInstance& inst, const Provenance& p);
FmtInstance fmt_from_json(const Json& j);

Json to_json(const EdgeStream& s);
EdgeStream stream_from_json(const Json& j);

Json to_json(const ProblemInstance& inst, const Provenance& p);
ProblemInstance problem_from_json(const Json& j);

Json to_json(const RunReport& r);
Json to_json(const GapVerdict& v);
Json to_json(const ProtocolStats& s);

/// Cycle profile as {"length": count}, e.g. {"8": 9}.
Json profile_json(const std::vector<std::size_t>& sorted_lengths);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

/// Write to a sibling temp file, then rename over `path`.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace cyclegap
