#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "macc/model.hpp"
#include "macc/schemes.hpp"

using namespace macc;

namespace {

/// Blocks every user still needs, filled with real library content.
Needs needs_for(const BaseScheme& scheme, const InstanceParams& params, const Library& library,
                const DemandVector& demands) {
  const PartitionSpec partition = scheme.partition(params);
  Needs needs;
  for (int user = 1; user <= params.num_nodes; ++user) {
    const int want = demands[static_cast<std::size_t>(user - 1)];
    for (const NodeSet& label : blocked_sets(user, partition, params))
      needs[user].push_back(NeedBlock{label, library.subfile(want, partition.at(label))});
  }
  return needs;
}

std::vector<std::vector<std::pair<int, NodeSet>>> recipes_of(const std::vector<Packet>& packets) {
  std::vector<std::vector<std::pair<int, NodeSet>>> out;
  for (const Packet& p : packets) out.push_back(p.recipe);
  return out;
}

}  // namespace

TEST_CASE("uncached scheme broadcasts one unicast block per user") {
  const auto scheme = uncached_scheme();
  const InstanceParams params{3, 2, 3, 6};
  CHECK(scheme->memory_ratio(params) == Fraction(0));
  const PartitionSpec partition = scheme->partition(params);
  CHECK(partition.parts().size() == 1);
  CHECK(partition.contains({}));
  for (int node = 1; node <= 3; ++node) CHECK(scheme->place(params).at(node).empty());

  Rng rng(3);
  const Library library = Library::random(3, 6, rng);
  const auto packets = scheme->deliver(params, needs_for(*scheme, params, library, {2, 2, 1}));
  REQUIRE(packets.size() == 3);
  long long payload = 0;
  for (const Packet& p : packets) payload += static_cast<long long>(p.payload.size());
  CHECK(payload == 3 * 6);  // load of k files
  CHECK(packets[0].recipe == std::vector<std::pair<int, NodeSet>>{{1, {}}});
  CHECK(packets[0].payload == library.file(2));
  CHECK(packets[2].payload == library.file(1));
}

TEST_CASE("singleton scheme places part i at node i") {
  const auto scheme = singleton_scheme();
  const InstanceParams params{4, 2, 3, 8};
  CHECK(scheme->memory_ratio(params) == Fraction(3, 4));  // n/k files
  const auto placed = scheme->place(params);
  for (int node = 1; node <= 4; ++node) {
    REQUIRE(placed.at(node).size() == 1);
    CHECK(placed.at(node)[0] == NodeSet{node});
  }
  CHECK_THROWS_AS(singleton_scheme()->partition(InstanceParams{4, 2, 3, 6}), ConfigError);
}

TEST_CASE("singleton delivery covers the running example in one packet") {
  const auto scheme = singleton_scheme();
  const InstanceParams params{3, 2, 3, 3};
  Rng rng(5);
  const Library library = Library::random(3, 3, rng);
  const auto packets = scheme->deliver(params, needs_for(*scheme, params, library, {1, 2, 3}));
  REQUIRE(packets.size() == 1);
  CHECK(packets[0].recipe ==
        std::vector<std::pair<int, NodeSet>>{{1, {3}}, {2, {1}}, {3, {2}}});
  const PartitionSpec partition = scheme->partition(params);
  BitVector expect = library.subfile(1, partition.at({3}));
  expect ^= library.subfile(2, partition.at({1}));
  expect ^= library.subfile(3, partition.at({2}));
  CHECK(packets[0].payload == expect);
}

TEST_CASE("singleton delivery at full window coverage sends nothing") {
  const auto scheme = singleton_scheme();
  const InstanceParams params{2, 2, 2, 4};
  Rng rng(5);
  const Library library = Library::random(2, 4, rng);
  CHECK(scheme->deliver(params, needs_for(*scheme, params, library, {2, 1})).empty());
}

TEST_CASE("singleton greedy cover at four nodes is the frozen five packets") {
  const auto scheme = singleton_scheme();
  const InstanceParams params{4, 2, 2, 4};
  Rng rng(9);
  const Library library = Library::random(2, 4, rng);
  const auto packets = scheme->deliver(params, needs_for(*scheme, params, library, {1, 1, 2, 2}));
  using Recipe = std::vector<std::pair<int, NodeSet>>;
  const std::vector<Recipe> expect{
      Recipe{{1, {3}}, {2, {1}}}, Recipe{{1, {4}}, {3, {1}}}, Recipe{{2, {4}}, {3, {2}}},
      Recipe{{4, {2}}},           Recipe{{4, {3}}},
  };
  CHECK(recipes_of(packets) == expect);
  long long payload = 0;
  for (const Packet& p : packets) payload += static_cast<long long>(p.payload.size());
  CHECK(Fraction(payload, params.file_bits) == Fraction(5, 4));
}

TEST_CASE("delivery rejects a block its own window already covers") {
  const auto scheme = singleton_scheme();
  const InstanceParams params{3, 2, 3, 3};
  Needs bogus;
  bogus[1].push_back(NeedBlock{{1}, BitVector(1)});  // node 1 is in user 1's window
  CHECK_THROWS_AS(scheme->deliver(params, bogus), std::invalid_argument);
}

TEST_CASE("stripe scheme needs both divisibility constraints") {
  const auto scheme = stripe_scheme();
  const InstanceParams params{4, 2, 3, 8};
  CHECK(scheme->memory_ratio(params) == Fraction(3, 2));  // n/l files
  const PartitionSpec partition = scheme->partition(params);
  CHECK(partition.parts().size() == 2);
  CHECK(partition.at({1, 3}).length == 4);
  CHECK(partition.at({2, 4}).length == 4);
  const auto placed = scheme->place(params);
  CHECK(placed.at(1) == std::vector<NodeSet>{{1, 3}});
  CHECK(placed.at(2) == std::vector<NodeSet>{{2, 4}});
  CHECK(placed.at(3) == std::vector<NodeSet>{{1, 3}});
  CHECK(placed.at(4) == std::vector<NodeSet>{{2, 4}});

  // every window reaches every part, so nothing is ever needed
  Rng rng(2);
  const Library library = Library::random(3, 8, rng);
  CHECK(scheme->deliver(params, needs_for(*scheme, params, library, {1, 2, 3, 1})).empty());

  CHECK_THROWS_AS(stripe_scheme()->partition(InstanceParams{5, 3, 3, 15}), ConfigError);
  CHECK_THROWS_AS(stripe_scheme()->partition(InstanceParams{4, 2, 3, 7}), ConfigError);
}

TEST_CASE("scheme factory knows its three names") {
  CHECK(make_scheme("uncached")->name() == "uncached");
  CHECK(make_scheme("singleton")->name() == "singleton");
  CHECK(make_scheme("stripe")->name() == "stripe");
  CHECK_THROWS_AS(make_scheme("solomon"), ConfigError);
}

TEST_CASE("requirement checks pass for the shipped schemes") {
  for (const char* name : {"uncached", "singleton", "stripe"}) {
    const auto scheme = make_scheme(name);
    const InstanceParams params{6, 3, 4, 12};
    const RequirementReport r1 = check_requirement1(*scheme, params);
    CHECK(r1.pass);
    const RequirementReport r2 = check_requirement2(*scheme, params);
    CHECK(r2.pass);
  }
}

TEST_CASE("fixture audit catches a window caching one part twice") {
  std::istringstream text("node 1: {1}\nnode 2: {1}\n");
  const PlacementFixture fixture = PlacementFixture::parse(text);
  const InstanceParams params{2, 2, 2, 2};
  const RequirementReport report = check_requirement1(fixture, params);
  REQUIRE_FALSE(report.pass);
  CHECK(report.window_user == 1);
  CHECK(report.label == NodeSet{1});
  CHECK(report.node_a == 1);
  CHECK(report.node_b == 2);
  CHECK_FALSE(report.detail.empty());
}

TEST_CASE("fixture audit catches file-dependent placement") {
  std::istringstream text("node 1 file 1: {1}\nnode 1 file 2: {2}\n");
  const PlacementFixture fixture = PlacementFixture::parse(text);
  const RequirementReport report = check_requirement2(fixture, 2);
  REQUIRE_FALSE(report.pass);
  CHECK(report.node == 1);
  CHECK(report.file_a == 1);
  CHECK(report.file_b == 2);
  CHECK_FALSE(report.detail.empty());
}

TEST_CASE("fixture audit accepts a clean placement") {
  std::istringstream text("# comment\n\nnode 1: {1}\nnode 2: {2}\nnode 3: {3}\n");
  const PlacementFixture fixture = PlacementFixture::parse(text);
  const InstanceParams params{3, 2, 2, 3};
  CHECK(check_requirement1(fixture, params).pass);
  CHECK(check_requirement2(fixture, 2).pass);
}

TEST_CASE("fixture parsing rejects malformed input") {
  std::istringstream dup("node 1: {1}\nnode 1: {2}\n");
  CHECK_THROWS_AS(PlacementFixture::parse(dup), ConfigError);
  std::istringstream mixed("node 1: {1}\nnode 2 file 1: {2}\n");
  CHECK_THROWS_AS(PlacementFixture::parse(mixed), ConfigError);
  std::istringstream garbage("node one: {1}\n");
  CHECK_THROWS_AS(PlacementFixture::parse(garbage), ConfigError);
  CHECK_THROWS_AS(PlacementFixture::load("/nonexistent/fixture.txt"), ConfigError);
}
