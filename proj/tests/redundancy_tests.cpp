#include <gtest/gtest.h>

#include "etma/error.hpp"
#include "etma/partition.hpp"
#include "etma/redundancy.hpp"
#include "etma/render.hpp"
#include "test_support.hpp"

namespace etma::test {
namespace {

using Indices = std::vector<std::size_t>;

class DuplicateCurrentTransformer : public ::testing::Test {
 protected:
  DuplicateCurrentTransformer()
      : result_(add_parallel_redundancy(trip_model(), trip_directives(), "CT", trip_table())),
        tree_(apply_reduction(generate_complete(result_.model), result_.directives)),
        paths_(enumerate_paths(tree_)) {}

  double selected(const std::string& partition_name) {
    const PartitionQuery query = partition_fixture(partition_name, result_.model);
    return partition_probability(paths_, partition(paths_, query), *result_.table).selected;
  }

  RedundancyResult result_;
  EventTree tree_;
  std::vector<Path> paths_;
};

TEST_F(DuplicateCurrentTransformer, ModelGainsAParallelCopy) {
  std::vector<std::string> ids;
  for (const auto& c : result_.model.components) ids.push_back(c.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"CT_1", "CT_2", "R", "TC1", "TC2", "CB1", "CB2"}));
  EXPECT_EQ(result_.model.components[1].states, (std::vector<std::string>{"O", "F"}));
  EXPECT_EQ(result_.model.components[1].failure_rate, 0.06);
  EXPECT_EQ(generate_complete(result_.model).leaf_count(), 128u);
}

TEST_F(DuplicateCurrentTransformer, DirectivesAreExpandedOverStatePairs) {
  // CT_F -> one pair, each CT_O directive -> three pairs; the both-fail
  // truncation coincides with the rewritten CT_F directive.
  EXPECT_EQ(result_.directives.size(), 13u);
  EXPECT_EQ(result_.directives.front(),
            (ReductionDirective{{ev("CT_1", "F"), ev("CT_2", "F")}, {}}));
  EXPECT_EQ(result_.directives[1],
            (ReductionDirective{{ev("CT_1", "O"), ev("CT_2", "O"), ev("R", "F")}, {}}));
}

TEST_F(DuplicateCurrentTransformer, TableCopiesProbabilities) {
  const ProbabilityTable& table = *result_.table;
  EXPECT_FALSE(table.find("CT", "O"));
  EXPECT_EQ(table.at("CT_1", "F"), 0.03);
  EXPECT_EQ(table.at("CT_2", "O"), 0.97);
  EXPECT_TRUE(validate_probabilities(result_.model, table).empty());
}

TEST_F(DuplicateCurrentTransformer, ReducedOutcomeSpace) {
  ASSERT_EQ(paths_.size(), 31u);
  EXPECT_EQ(paths_report(paths_), golden_text("trip_redundant.txt"));
}

TEST_F(DuplicateCurrentTransformer, EventProbabilities) {
  EXPECT_NEAR(selected("trip_redundant.both_cbs_operate.partition.json"), 0.84902595950592,
              1e-12);
  EXPECT_NEAR(selected("trip_redundant.cb1_fails.partition.json"), 0.0882453184, 1e-12);
  EXPECT_NEAR(selected("trip_redundant.cb1_operates.partition.json"), 0.9117546816, 1e-12);
  EXPECT_NEAR(selected("trip_redundant.cb2_fails.partition.json"), 0.0882453184, 1e-12);
  EXPECT_NEAR(selected("trip_redundant.cb2_operates.partition.json"), 0.9117546816, 1e-12);
  // Exact rational value 622963777/24414062500.
  EXPECT_NEAR(selected("trip_redundant.both_cbs_fail.partition.json"), 0.02551659630592,
              1e-12);
  EXPECT_NEAR(total_probability(paths_, *result_.table), 1.0, 1e-12);
}

TEST(ParallelRedundancy, NonLeadingComponent) {
  const RedundancyResult result =
      add_parallel_redundancy(trip_model(), trip_directives(), "R", trip_table());
  const EventTree tree = apply_reduction(generate_complete(result.model), result.directives);
  const auto paths = enumerate_paths(tree);
  // CT_F, both relays failed, and nine continuations for each of the three
  // working relay pairs.
  EXPECT_EQ(paths.size(), 29u);
  EXPECT_NEAR(total_probability(paths, *result.table), 1.0, 1e-12);
  // R is not the first component, so no bare truncation is added.
  EXPECT_EQ(result.directives.size(), 11u);
}

TEST(ParallelRedundancy, RetainListIsRewritten) {
  const SystemModel model{"m",
                          {{"X", {"O", "F"}, std::nullopt},
                           {"Y", {"O", "F"}, std::nullopt},
                           {"Z", {"O", "F"}, std::nullopt}}};
  const std::vector<ReductionDirective> directives{{{ev("X", "O")}, {"Z"}}};
  const RedundancyResult result = add_parallel_redundancy(model, directives, "Z");
  ASSERT_EQ(result.directives.size(), 1u);
  EXPECT_EQ(result.directives[0].retain, (std::vector<std::string>{"Z_1", "Z_2"}));
  EXPECT_FALSE(result.table.has_value());
  EXPECT_EQ(apply_reduction(generate_complete(result.model), result.directives).leaf_count(),
            4u + 8u);
}

TEST(ParallelRedundancy, Preconditions) {
  EXPECT_THROW(add_parallel_redundancy(trip_model(), trip_directives(), "XX"), NotFoundError);
  EXPECT_THROW(add_parallel_redundancy(abc_model(), {}, "A"), UnsupportedError);
  SystemModel clash = trip_model();
  clash.components.push_back({"CB2_1", {"O", "F"}, std::nullopt});
  EXPECT_THROW(add_parallel_redundancy(clash, {}, "CB2"), ValidationError);
}

}  // namespace
}  // namespace etma::test
