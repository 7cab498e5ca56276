#pragma once

/// @file json_io.hpp
/// Canonical JSON documents: model, probability table, directives, partition
/// query and event tree. Every document carries a "format" tag; unknown
/// versions are rejected with a ParseError naming the offending path.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "etma/event_tree.hpp"
#include "etma/model.hpp"
#include "etma/partition.hpp"
#include "etma/reduction.hpp"

namespace etma {

using Json = nlohmann::json;

inline constexpr std::string_view kModelFormat = "etma-model/1";
inline constexpr std::string_view kProbsFormat = "etma-probs/1";
inline constexpr std::string_view kTreeFormat = "etma-tree/1";
inline constexpr std::string_view kDirectivesFormat = "etma-directives/1";
inline constexpr std::string_view kPartitionFormat = "etma-partition/1";

Json parse_json_text(std::string_view text);
Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
/// Two-space indented, newline-terminated.
std::string dump(const Json& doc);

SystemModel model_from_json(const Json& doc);
Json to_json(const SystemModel& model);
/// FNV-1a 64 of the canonical model document, as 16 hex digits.
std::string model_hash(const SystemModel& model);

ProbabilityTable table_from_json(const Json& doc);
Json to_json(const ProbabilityTable& table);

/// Accepts {"format", "directives": [...]} or a bare array.
std::vector<ReductionDirective> directives_from_json(const Json& doc);
Json to_json(std::span<const ReductionDirective> directives);

/// Events may be {"component","state"} objects or "C=S" / "C_S" strings;
/// strings are resolved against `model`. Index values may be integers or
/// range strings such as "5-10".
PartitionQuery partition_from_json(const Json& doc, const SystemModel& model);
Json to_json(const PartitionQuery& query);

/// "CB1_F" or "CB1=F" resolved against the model.
StateLabel parse_event(std::string_view text, const SystemModel& model);

/// A tree together with the directive sets that produced it from the
/// complete tree of its model (one entry per reduction pass).
struct TreeDocument {
  EventTree tree;
  std::vector<std::vector<ReductionDirective>> reductions;
};

TreeDocument tree_from_json(const Json& doc);
Json to_json(const TreeDocument& doc);

}  // namespace etma
