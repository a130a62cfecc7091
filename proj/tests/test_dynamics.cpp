#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bnctrl/dynamics.hpp"
#include "bnctrl/model.hpp"
#include "bnctrl/oracle.hpp"

using namespace bnctrl;

namespace {

const char* kExample1 =
    "x1 = x2\n"
    "x2 = x1\n"
    "x3 = x2 & x3\n";

State st(const char* bits) { return State::from_string(bits); }

std::vector<std::string> strings_of(const StateSet& set) {
  return set.to_strings();
}

StateSet set_of(int width, std::initializer_list<const char*> states) {
  StateSet out(width);
  for (const char* s : states) out.insert(State::from_string(s));
  return out;
}

std::vector<std::vector<uint32_t>> attractor_codes(
    const std::vector<Attractor>& attractors) {
  std::vector<std::vector<uint32_t>> out;
  for (const Attractor& a : attractors) {
    std::vector<uint32_t> codes;
    a.states.for_each([&](uint32_t c) { codes.push_back(c); });
    out.push_back(std::move(codes));
  }
  return out;
}

}  // namespace

TEST_CASE("successors of the running example") {
  BooleanNetwork net = parse_network(kExample1);
  CHECK(strings_of(successors(net, st("101"))) ==
        std::vector<std::string>{"001", "100", "111"});
  CHECK(strings_of(successors(net, st("000"))) ==
        std::vector<std::string>{"000"});

  ControlledNetwork held = restrict_network(net, Control{{}, {0}});
  CHECK(strings_of(successors(held, st("100"))) ==
        std::vector<std::string>{"100", "110"});
  CHECK_THROWS_AS(successors(held, st("000")), std::invalid_argument);
}

TEST_CASE("reach closes over the successor relation") {
  BooleanNetwork net = parse_network(kExample1);
  CHECK(strings_of(reach(net, st("011"))) ==
        std::vector<std::string>{"000", "001", "011", "111"});
  CHECK(strings_of(reach(net, st("110"))) == std::vector<std::string>{"110"});
  CHECK(strings_of(reach(net, st("000"))) == std::vector<std::string>{"000"});
}

TEST_CASE("attractors of the running example") {
  BooleanNetwork net = parse_network(kExample1);
  auto found = attractors(net);
  REQUIRE(found.size() == 3);
  CHECK(strings_of(found[0].states) == std::vector<std::string>{"000"});
  CHECK(strings_of(found[1].states) == std::vector<std::string>{"110"});
  CHECK(strings_of(found[2].states) == std::vector<std::string>{"111"});
  CHECK(found[0].id == 0);
  CHECK(found[2].id == 2);
}

TEST_CASE("a negated self-loop oscillates, stable nodes stay put") {
  BooleanNetwork osc = parse_network("a = !a\n");
  auto cyclic = attractors(osc);
  REQUIRE(cyclic.size() == 1);
  CHECK(strings_of(cyclic[0].states) == std::vector<std::string>{"0", "1"});
  // the only attractor attracts everything
  CHECK(weak_basin(osc, cyclic[0]) == StateSet::full(1));

  auto frozen = attractors(parse_network("a = a\nb = b\n"));
  REQUIRE(frozen.size() == 4);
  for (const auto& a : frozen) CHECK(a.states.size() == 1);
}

TEST_CASE("weak basins match the worked example") {
  BooleanNetwork net = parse_network(kExample1);
  auto found = attractors(net);
  CHECK(strings_of(weak_basin(net, found[1])) ==
        std::vector<std::string>{"010", "100", "101", "110"});
  CHECK(strings_of(weak_basin(net, found[2])) ==
        std::vector<std::string>{"011", "101", "111"});
  CHECK(strings_of(weak_basin(net, found[0])) ==
        std::vector<std::string>{"000", "001", "010", "011", "100", "101"});
}

TEST_CASE("strong basins match brute force") {
  BooleanNetwork net = parse_network(kExample1);
  auto found = attractors(net);
  CHECK(strings_of(strong_basin(net, found[0])) ==
        std::vector<std::string>{"000", "001"});
  CHECK(strings_of(strong_basin(net, found[1])) ==
        std::vector<std::string>{"110"});
  CHECK(strings_of(strong_basin(net, found[2])) ==
        std::vector<std::string>{"111"});
}

TEST_CASE("restricted strong basin follows the controlled system") {
  BooleanNetwork net = parse_network(kExample1);

  StateSet target = set_of(3, {"110"});
  CHECK(strings_of(strong_basin_restricted(net, Control{{}, {0}}, target)) ==
        std::vector<std::string>{"100", "110"});

  // The whole restricted space is closed, so it is its own strong basin.
  ControlledNetwork held = restrict_network(net, Control{{}, {2}});
  StateSet space(3);
  for (uint32_t code = 0; code < 8; ++code) {
    if (held.in_space(code)) space.insert(code);
  }
  CHECK(strong_basin_restricted(net, Control{{}, {2}}, space) == space);

  StateSet empty(3);
  CHECK_THROWS_AS(strong_basin_restricted(net, Control{{}, {2}}, empty),
                  std::invalid_argument);
}

TEST_CASE("state-space bound is enforced") {
  std::string text;
  for (int i = 0; i < 30; ++i) {
    text += "n" + std::to_string(i) + " = 1\n";
  }
  BooleanNetwork wide = parse_network(text);
  CHECK_THROWS_AS(attractors(wide), BoundError);
  CHECK_THROWS_AS(attractors(parse_network("a = 1\nb = a\n"), 1), BoundError);
}

TEST_CASE("dynamics invariants on random networks") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 40; ++round) {
    oracle::RandomNetworkOptions gen;
    gen.nodes = 3 + round % 6;
    gen.seed = rng();
    BooleanNetwork net = oracle::random_network(gen);
    int n = net.node_count();
    auto found = attractors(net);
    REQUIRE(!found.empty());

    StateSet weak_union(n);
    StateSet strong_union(n);
    for (const Attractor& a : found) {
      // every attractor state reaches exactly the attractor
      a.states.for_each([&](uint32_t code) {
        CHECK(reach(net, State(code, n)) == a.states);
      });

      StateSet weak = weak_basin(net, a);
      StateSet strong = strong_basin(net, a);
      CHECK(a.states.is_subset_of(strong));
      CHECK(strong.is_subset_of(weak));
      CHECK_FALSE(strong_union.intersects(strong));  // pairwise disjoint
      strong_union |= strong;
      weak_union |= weak;
    }
    CHECK(weak_union == StateSet::full(n));  // every state reaches somewhere

    // determinism: a second run reproduces ids and basin sets
    auto again = attractors(net);
    REQUIRE(again.size() == found.size());
    for (size_t i = 0; i < found.size(); ++i) {
      CHECK(again[i].states == found[i].states);
      CHECK(weak_basin(net, again[i]) == weak_basin(net, found[i]));
    }
  }
}

TEST_CASE("controlled successors stay inside the restricted space") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 30; ++round) {
    oracle::RandomNetworkOptions gen;
    gen.nodes = 3 + round % 5;
    gen.seed = rng();
    BooleanNetwork net = oracle::random_network(gen);
    uint32_t limit = (1u << gen.nodes) - 1;
    State base(static_cast<uint32_t>(rng()) & limit, gen.nodes);
    std::vector<NodeId> nodes;
    for (NodeId i = 0; i < gen.nodes; ++i) {
      if (rng() % 3 == 0) nodes.push_back(i);
    }
    ControlledNetwork cn = restrict_network(net, flips_for(base, nodes));
    for (uint32_t code = 0; code <= limit; ++code) {
      if (!cn.in_space(code)) continue;
      successors(cn, State(code, gen.nodes)).for_each([&](uint32_t succ) {
        CHECK(cn.in_space(succ));
      });
    }
  }
}

TEST_CASE("SCC attractors equal the definition-level oracle") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 40; ++round) {
    oracle::RandomNetworkOptions gen;
    gen.nodes = 3 + round % 6;
    gen.seed = rng();
    BooleanNetwork net = oracle::random_network(gen);
    auto engine = attractor_codes(attractors(net));
    auto naive = oracle::analyze(net);
    REQUIRE(engine.size() == naive.attractors.size());
    for (size_t i = 0; i < engine.size(); ++i) {
      CHECK(engine[i] == naive.attractors[i]);
    }
  }
}
