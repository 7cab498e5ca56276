#include "etma/partition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <string>

#include "etma/error.hpp"

namespace etma {

namespace {

std::size_t parse_index(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError("", "invalid path index '" + std::string(text) + "' in '" +
                             std::string(whole) + "'");
  }
  return value;
}

bool contains(const Path& path, const StateLabel& event) {
  return std::any_of(path.events.begin(), path.events.end(), [&](const StateLabel& e) {
    return e.component == event.component && e.state == event.state;
  });
}

}  // namespace

std::vector<std::size_t> parse_index_ranges(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  std::set<std::size_t> indices;
  std::string_view rest = compact;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) throw ParseError("", "empty item in index list '" + std::string(text) + "'");
    const std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) {
      indices.insert(parse_index(item, text));
      continue;
    }
    const std::size_t first = parse_index(item.substr(0, dash), text);
    const std::size_t last = parse_index(item.substr(dash + 1), text);
    if (last < first) {
      throw ParseError("", "descending range '" + std::string(item) + "'");
    }
    for (std::size_t i = first; i <= last; ++i) indices.insert(i);
  }
  return {indices.begin(), indices.end()};
}

std::string format_index_set(std::span<const std::size_t> indices) {
  std::string text = "{";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) text += ',';
    text += std::to_string(indices[i]);
  }
  return text + "}";
}

PartitionResult partition(std::span<const Path> paths, const PartitionQuery& query) {
  std::vector<bool> chosen(paths.size(), false);
  switch (query.mode) {
    case PartitionQuery::Mode::kIndices:
      for (std::size_t index : query.indices) {
        if (index >= paths.size()) {
          throw ValidationError("path index " + std::to_string(index) +
                                " out of range (" + std::to_string(paths.size()) +
                                " paths)");
        }
        chosen[index] = true;
      }
      break;
    case PartitionQuery::Mode::kContainsAll:
    case PartitionQuery::Mode::kContainsAny: {
      const bool all = query.mode == PartitionQuery::Mode::kContainsAll;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        auto hit = [&](const StateLabel& e) { return contains(paths[i], e); };
        chosen[i] = all ? std::all_of(query.events.begin(), query.events.end(), hit)
                        : std::any_of(query.events.begin(), query.events.end(), hit);
      }
      break;
    }
  }
  PartitionResult result;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    (chosen[i] ? result.selected : result.complement).push_back(i);
  }
  return result;
}

PartitionResult partition(const EventTree& tree, const PartitionQuery& query) {
  for (const StateLabel& event : query.events) {
    if (!tree.model().resolves(event)) {
      throw NotFoundError("unknown event " + compact_label(event));
    }
  }
  const std::vector<Path> paths = enumerate_paths(tree);
  return partition(paths, query);
}

double path_probability(const Path& path, const ProbabilityTable& table) {
  double p = 1.0;
  for (const StateLabel& event : path.events) p *= table.at(event.component, event.state);
  return p;
}

PartitionProbability partition_probability(std::span<const Path> paths,
                                           const PartitionResult& result,
                                           const ProbabilityTable& table) {
  auto sum = [&](const std::vector<std::size_t>& indices) {
    double total = 0.0;
    for (std::size_t index : indices) {
      if (index >= paths.size()) {
        throw ValidationError("path index " + std::to_string(index) + " out of range");
      }
      total += path_probability(paths[index], table);
    }
    return total;
  };
  std::vector<std::size_t> selected = result.selected;
  std::vector<std::size_t> complement = result.complement;
  std::sort(selected.begin(), selected.end());
  std::sort(complement.begin(), complement.end());
  return {sum(selected), sum(complement)};
}

double total_probability(std::span<const Path> paths, const ProbabilityTable& table) {
  double total = 0.0;
  for (const Path& path : paths) total += path_probability(path, table);
  return total;
}

}  // namespace etma
