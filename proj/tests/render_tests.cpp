#include <string>

#include <gtest/gtest.h>

#include "dot_parser.hpp"
#include "etma/error.hpp"
#include "etma/partition.hpp"
#include "etma/render.hpp"
#include "test_support.hpp"

namespace etma::test {
namespace {

EventTree reduced_trip() {
  return apply_reduction(generate_complete(trip_model()), trip_directives());
}

TEST(ToDot, ReducedTripCircuitParsesWithElevenLeaves) {
  const std::string dot = to_dot(reduced_trip());
  const DotGraph graph = DotParser(dot).parse();
  EXPECT_EQ(graph.name, "trip_circuit");
  EXPECT_EQ(graph.leaf_count(), 11u);
  EXPECT_NE(dot.find("rankdir=LR;"), std::string::npos);
  EXPECT_EQ(graph.nodes.at("n0").at("label"), "CT");
}

TEST(ToDot, CompleteTripCircuitHas64Leaves) {
  EXPECT_EQ(DotParser(to_dot(generate_complete(trip_model()))).parse().leaf_count(), 64u);
}

TEST(ToDot, SingleComponentTree) {
  const SystemModel model{"one", {{"X", {"O", "F"}, std::nullopt}}};
  const DotGraph graph = DotParser(to_dot(generate_complete(model))).parse();
  EXPECT_EQ(graph.nodes.size(), 3u);
  EXPECT_EQ(graph.leaf_count(), 2u);
  ASSERT_EQ(graph.edges.size(), 2u);
  EXPECT_EQ(graph.edges[0].attrs.at("label"), "O");
  EXPECT_EQ(graph.edges[1].attrs.at("label"), "F");
  EXPECT_EQ(graph.nodes.at("n1").at("label"), "Path_0");
  EXPECT_EQ(graph.nodes.at("n1").at("tooltip"), "[X_O]");
}

TEST(ToDot, IsAPureFunction) {
  EXPECT_EQ(to_dot(reduced_trip()), to_dot(reduced_trip()));
}

TEST(ToDot, ProbabilityLabelsNeedATable) {
  RenderOptions options;
  options.include_probabilities = true;
  EXPECT_THROW(to_dot(reduced_trip(), options), ValidationError);
  options.table = trip_table();
  options.label_style = LabelStyle::kFull;
  const std::string dot = to_dot(reduced_trip(), options);
  EXPECT_NE(dot.find("label=\"Path_10\\nP = 0.03\""), std::string::npos) << dot;
  EXPECT_NE(dot.find("tooltip=\"[CT=F]\""), std::string::npos);
  EXPECT_EQ(DotParser(dot).parse().leaf_count(), 11u);
}

TEST(PathsReport, MatchesPrintedListing) {
  const auto paths = enumerate_paths(reduced_trip());
  const std::string report = paths_report(paths);
  EXPECT_EQ(report, golden_text("trip_reduced.txt"));
  EXPECT_EQ(report.substr(report.rfind("Path_")), "Path_10 = [CT_F]\n");
  EXPECT_EQ(paths_report(std::vector<Path>{}), "");
  EXPECT_EQ(paths_report(enumerate_paths(generate_complete(abc_model()))),
            golden_text("abc_complete.txt"));
}

TEST(PathsReport, OptionalProbabilityColumn) {
  const auto paths = enumerate_paths(reduced_trip());
  RenderOptions options;
  options.include_probabilities = true;
  options.table = trip_table();
  const std::string report = paths_report(paths, options);
  EXPECT_NE(report.find("Path_10 = [CT_F]  P = 0.03\n"), std::string::npos) << report;
  options.label_style = LabelStyle::kFull;
  options.include_probabilities = false;
  EXPECT_NE(paths_report(paths, options).find("Path_9 = [CT=O, R=F]\n"), std::string::npos);
}

TEST(Histogram, StepFourResults) {
  const auto paths = enumerate_paths(reduced_trip());
  const ProbabilityTable table = trip_table();
  auto p = [&](std::vector<std::size_t> indices) {
    return partition_probability(paths, partition(paths, PartitionQuery::Indices(indices)), table)
        .selected;
  };
  const std::vector<LabeledResult> results{
      {"Both CB1 and CB2 Fail", p({3, 5, 7, 8, 9, 10})},
      {"Both CB1 and CB2 Operate", p({0})},
      {"CB1 Only Fails", p({2, 3, 5, 6, 7, 8, 9, 10})},
      {"CB1 Only Operates", p({0, 1, 4})},
      {"CB2 Only Fails", p({1, 3, 4, 5, 7, 8, 9, 10})},
      {"CB2 Only Operates", p({0, 2, 6})}};
  const std::string csv = histogram_data(results);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t end; (end = csv.find("\r\n", start)) != std::string::npos; start = end + 2) {
    lines.push_back(csv.substr(start, end - start));
  }
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "label,probability_percent");
  const std::string first = lines[1].substr(lines[1].find(',') + 1);
  EXPECT_EQ(lines[1].substr(0, lines[1].find(',')), "Both CB1 and CB2 Fail");
  EXPECT_NEAR(std::stod(first), 5.3899608064, 1e-10);
  EXPECT_EQ(std::stod(first), results[0].probability * 100.0);
}

TEST(Histogram, HeaderOnlyAndQuoting) {
  EXPECT_EQ(histogram_data({}), "label,probability_percent\r\n");
  const std::vector<LabeledResult> results{{"a, \"b\"", 0.5}};
  EXPECT_EQ(histogram_data(results), "label,probability_percent\r\n\"a, \"\"b\"\"\",50\r\n");
}

TEST(Formatting, PercentAndShortest) {
  EXPECT_EQ(format_percent(0.053899608064), "5.389960806400000");
  EXPECT_EQ(format_shortest(0.03), "0.03");
  EXPECT_EQ(format_shortest(1.0), "1");
}

}  // namespace
}  // namespace etma::test
