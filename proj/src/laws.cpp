#include "crl/laws.hpp"

#include <algorithm>
#include <random>

#include "crl/operators.hpp"
#include "crl/random_instances.hpp"

namespace crl {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<FsmAgent> draw_subset(const std::vector<FsmAgent>& pool, std::size_t max_size,
                                  std::mt19937_64& rng) {
  std::size_t size = 1 + pick(rng, max_size);
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  std::vector<FsmAgent> out;
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

std::string names(const std::vector<FsmAgent>& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) s += (i ? "," : "") + set[i].name();
  return s + "}";
}

std::string witness_text(const Verdict& v, const Interface& iface) {
  return v.witness ? to_string(*v.witness, iface) : "-";
}

struct Tally {
  std::vector<LawReport> reports;
  void record(std::size_t law, bool premise, bool conclusion, const std::string& detail) {
    auto& r = reports[law];
    if (!premise) return;
    ++r.premised;
    if (!conclusion) {
      ++r.violations;
      if (!r.first_violation) r.first_violation = detail;
    }
  }
};

}  // namespace

std::vector<LawReport> fuzz_operator_laws(const FuzzOptions& options) {
  enum {
    kTransitive,
    kUniformTransitive,
    kUniformImpliesEnv,
    kSuperset,
    kComplement,
    kAlwaysSometimes,
    kMembership,
    kPigeonhole
  };
  Tally tally;
  for (const char* law : {"generates is transitive",
                          "uniform generation is transitive",
                          "uniform generation implies generation in each environment",
                          "enlarging a generating basis keeps it generating",
                          "exactly one of sometimes/never reaches holds",
                          "always reaches implies sometimes reaches",
                          "a basis member always reaches its basis",
                          "more distinct agents than learning rules cannot be generated"}) {
    tally.reports.push_back(LawReport{law, 0, 0, std::nullopt});
  }

  std::mt19937_64 rng(options.seed);
  for (std::size_t inst = 0; inst < options.instances; ++inst) {
    auto iface = Interface::numbered(2, 1 + pick(rng, 2));
    auto menu = default_menu(iface.num_actions());
    std::vector<FsmAgent> pool;
    for (std::size_t i = 0; i < 5; ++i) {
      pool.push_back(random_agent(iface, options.max_agent_states, rng, menu,
                                  "i" + std::to_string(inst) + "p" + std::to_string(i)));
    }
    auto env = random_environment(iface, options.max_env_states, rng);
    auto l1 = draw_subset(pool, 3, rng);
    auto l2 = draw_subset(pool, 2, rng);
    auto l3 = draw_subset(pool, 2, rng);
    const std::string where = "instance " + std::to_string(inst) + ": ";

    auto g12 = check_generates(l1, l2, env);
    auto g23 = check_generates(l2, l3, env);
    auto g13 = check_generates(l1, l3, env);
    tally.record(kTransitive, g12.holds && g23.holds, g13.holds,
                 where + names(l1) + " => " + names(l2) + " => " + names(l3) +
                     " but not " + names(l1) + " => " + names(l3) + " (witness " +
                     witness_text(g13, iface) + ")");

    auto u12 = check_uniform_generates(l1, l2);
    auto u23 = check_uniform_generates(l2, l3);
    auto u13 = check_uniform_generates(l1, l3);
    tally.record(kUniformTransitive, u12.holds && u23.holds, u13.holds,
                 where + names(l1) + " |= " + names(l2) + " |= " + names(l3));

    if (u12.holds) {
      bool all = true;
      for (int e = 0; e < 3 && all; ++e) {
        auto other = random_environment(iface, options.max_env_states, rng);
        all = check_generates(l1, l2, other).holds;
      }
      tally.record(kUniformImpliesEnv, true, all, where + names(l1) + " |= " + names(l2));
    }

    auto bigger = l1;
    for (const auto& a : l3) bigger.push_back(a);
    tally.record(kSuperset, g12.holds, check_generates(bigger, l2, env).holds,
                 where + names(bigger) + " fails on " + names(l2));

    for (const auto& lambda : l2) {
      auto some = check_reaches(lambda, l1, env, Modality::sometimes);
      auto never = check_reaches(lambda, l1, env, Modality::never);
      auto always = check_reaches(lambda, l1, env, Modality::always);
      tally.record(kComplement, true, some.holds != never.holds,
                   where + lambda.name() + " vs " + names(l1));
      tally.record(kAlwaysSometimes, always.holds, some.holds,
                   where + lambda.name() + " vs " + names(l1));
    }
    for (const auto& member : l1) {
      tally.record(kMembership, true, check_reaches(member, l1, env, Modality::always).holds,
                   where + member.name() + " in " + names(l1));
    }

    // Pigeonhole: three pairwise distinct agents against two rules.
    std::vector<FsmAgent> distinct;
    for (const auto& a : pool) {
      bool fresh = true;
      for (const auto& d : distinct) fresh = fresh && !behaviorally_equal(a, d).holds;
      if (fresh) distinct.push_back(a);
      if (distinct.size() == 3) break;
    }
    if (distinct.size() == 3) {
      std::vector<LearningRuleFsm> rules{random_rule(iface, 2, l1.size(), rng),
                                         random_rule(iface, 2, l1.size(), rng)};
      auto v = check_sigma_generates(l1, rules, distinct, nullptr, true);
      tally.record(kPigeonhole, true, !v.holds, where + names(distinct) + " from two rules");
    }
  }
  return tally.reports;
}

}  // namespace crl
