#include <random>

#include "crl/basis_analysis.hpp"
#include "crl/catalog.hpp"
#include "crl/errors.hpp"
#include "crl/random_instances.hpp"
#include "doctest.h"

using namespace crl;
namespace cat = crl::catalog;

TEST_CASE("pool rank of the three-agent example is 2") {
  auto target = cat::rank_example();
  auto pool = cat::constant_and_parity_pool();
  auto r = rank_over_pool(target, pool);
  CHECK(r.rank == 2);
  CHECK(r.exhausted);
  CHECK(r.witness_indices == std::vector<std::size_t>{0, 1});
  CHECK(r.refuted_sizes == std::vector<std::size_t>{1});
  CHECK(check_uniform_generates(r.witness_basis, target).holds);
}

TEST_CASE("rank of a singleton contained in the pool is 1") {
  auto pool = cat::constant_and_parity_pool();
  std::vector<FsmAgent> target{pool[2]};
  auto r = rank_over_pool(target, pool);
  CHECK(r.rank == 1);
  CHECK(r.witness_indices == std::vector<std::size_t>{2});
}

TEST_CASE("the four-agent set has two distinct minimal bases") {
  auto target = cat::two_minimal_bases_example();
  auto pool = cat::constant_and_parity_pool();
  auto forward = rank_over_pool(target, pool);
  std::vector<FsmAgent> reversed(pool.rbegin(), pool.rend());
  auto backward = rank_over_pool(target, reversed);
  CHECK(forward.rank == 2);
  CHECK(backward.rank == 2);
  CHECK(forward.witness_basis[0].name() == "beta0");
  CHECK(forward.witness_basis[1].name() == "beta1");
  CHECK(backward.witness_basis[0].name() == "beta3");
  CHECK(backward.witness_basis[1].name() == "beta2");
  CHECK(is_minimal_over_pool(forward.witness_basis, pool));
  CHECK(is_minimal_over_pool(backward.witness_basis, pool));
}

TEST_CASE("no generating subset is a precondition error") {
  auto pool = cat::constant_and_parity_pool();
  std::vector<FsmAgent> small{pool[0]};
  auto iface = cat::binary_interface();
  std::vector<FsmAgent> target{FsmAgent::constant(iface, ActionDistribution::uniform(2))};
  CHECK_THROWS_AS(rank_over_pool(target, small), PreconditionError);
}

TEST_CASE("minimality") {
  auto pool = cat::constant_and_parity_pool();
  std::vector<FsmAgent> constants{pool[0], pool[1]};
  CHECK(is_minimal_over_pool(constants, pool));
  std::vector<FsmAgent> doubled{pool[0], FsmAgent(pool[0]).set_name("copy")};
  CHECK_FALSE(is_minimal_over_pool(doubled, pool));
  CHECK(duplicate_pairs(doubled).size() == 1);
  // The parity pair: every singleton from the pool is refuted (exhaustive size-1 check).
  std::vector<FsmAgent> parities{pool[2], pool[3]};
  for (const auto& single : pool) {
    std::vector<FsmAgent> s{single};
    CHECK_FALSE(check_uniform_generates(s, parities).holds);
  }
  CHECK(is_minimal_over_pool(parities, pool));
}

TEST_CASE("fragment universality") {
  auto iface = Interface::numbered(2, 2);
  std::vector<ActionDistribution> point_masses{ActionDistribution::point_mass(2, 0),
                                               ActionDistribution::point_mass(2, 1)};
  auto memoryless = cat::memoryless_agents(iface, point_masses);
  CHECK(memoryless.size() == 8);
  CHECK(is_universal_fragment(memoryless, iface, point_masses).holds);

  std::vector<FsmAgent> only_a0{FsmAgent::constant(iface, 0)};
  auto v = is_universal_fragment(only_a0, iface, point_masses);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->empty());

  std::vector<FsmAgent> constants{FsmAgent::constant(iface, 0), FsmAgent::constant(iface, 1)};
  CHECK(is_universal_fragment(constants, iface, point_masses, 2).holds);
  for (std::size_t drop = 0; drop < 2; ++drop) {
    std::vector<FsmAgent> one{constants[1 - drop]};
    CHECK_FALSE(is_universal_fragment(one, iface, point_masses, 2).holds);
  }
  // A uniform menu entry is not covered by deterministic members.
  auto menu = default_menu(2);
  CHECK_FALSE(is_universal_fragment(memoryless, iface, menu).holds);
}

TEST_CASE("orthogonal and parallel bases") {
  auto pool = cat::constant_and_parity_pool();
  std::vector<FsmAgent> c0{pool[0]}, c1{pool[1]}, constants{pool[0], pool[1]},
      parities{pool[2], pool[3]};
  auto orth = are_orthogonal(c0, c1);
  CHECK(orth.holds);
  REQUIRE(orth.witness);
  CHECK(orth.witness->empty());
  std::vector<FsmAgent> sharing{pool[0], pool[2]};
  CHECK_FALSE(are_orthogonal(constants, sharing).holds);
  // A fragment-universal basis shares an output with anything.
  CHECK_FALSE(are_orthogonal(constants, parities).holds);
  CHECK_FALSE(are_orthogonal(constants, c1).holds);

  CHECK(are_parallel(constants, constants).holds);
  CHECK(are_parallel(constants, parities).holds);
  CHECK_FALSE(are_parallel(c0, c1).holds);
}

TEST_CASE("basis properties on random bases") {
  std::size_t parallel = 0;
  std::mt19937_64 rng(17);
  auto iface = Interface::numbered(2, 2);
  auto menu = default_menu(2);
  std::vector<ActionDistribution> point_masses{menu[0], menu[1]};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<FsmAgent> b1{random_agent(iface, 2, rng, menu), random_agent(iface, 2, rng, menu)};
    std::vector<FsmAgent> b2{random_agent(iface, 2, rng, menu)};
    if (trial % 3 == 0) b2.push_back(b1[0]);
    if (trial % 4 == 1) b2 = {b1[1], b1[0], random_agent(iface, 1, rng, menu)};
    if (are_orthogonal(b1, b2).holds) {
      // Orthogonal bases share no member.
      for (const auto& x : b1)
        for (const auto& y : b2) CHECK_FALSE(behaviorally_equal(x, y).holds);
    }
    if (are_parallel(b1, b2).holds) {
      ++parallel;
      std::vector<FsmAgent> pool = b1;
      pool.insert(pool.end(), b2.begin(), b2.end());
      CHECK(rank_over_pool(b1, pool).rank == rank_over_pool(b2, pool).rank);
      CHECK(is_universal_fragment(b1, iface, point_masses).holds ==
            is_universal_fragment(b2, iface, point_masses).holds);
    }
  }
  CHECK(parallel > 5);
}
