#include "doctest.h"

#include <set>

#include "bipart/error.hpp"
#include "bipart/protocols.hpp"
#include "bipart/verifier.hpp"
#include "oracles/recursive_enum.hpp"

using namespace bipart;

namespace {

std::set<oracle::Config> named(const ProtocolSpec& p, const ReachabilityGraph& rg) {
  std::set<oracle::Config> out;
  for (const auto& c : rg.configs) {
    oracle::Config o;
    for (auto s : c.agents) o.agents.push_back(p.agent_state_name(s));
    if (c.bs) o.bs = p.bs_state_name(*c.bs);
    out.insert(o);
  }
  return out;
}

oracle::Instance instance_of(const CommGraph& g, oracle::Rules agent_rules, oracle::Rules bs_rules = {}) {
  return {g.n_agents(), g.edges(), g.bs_edges(), std::move(agent_rules), std::move(bs_rules)};
}

ProtocolSpec null_protocol() { return ProtocolSpec("null", {"x"}, {Color::Red}, 0); }

// nobs_asym4 with rule 2 changed to (r^w, b^w) -> (r, b), mirror included.
ProtocolSpec mutated_asym4() {
  using namespace asym4;
  auto p = nobs_asym4();
  p.set_agent_rule_mirrored(kRedToken, kBlueToken, {kRed, kBlue});
  return p;
}

}  // namespace

TEST_CASE("reachable: examples") {
  using namespace asym4;
  const auto p4 = nobs_asym4();
  const auto rg = reachable(p4, build(GraphKind::Line, 2));
  CHECK(rg.size() == 3);
  CHECK(rg.find({{kRedToken, kRedToken}, std::nullopt}));
  CHECK(rg.find({{kRed, kBlue}, std::nullopt}));
  CHECK(rg.find({{kBlue, kRed}, std::nullopt}));
  CHECK(rg.successors[rg.initials[0]].size() == 2);

  for (const auto& p : {nobs_asym4(), nobs_sym5()}) {
    const auto single = reachable(p, build(GraphKind::Line, 1));
    CHECK(single.size() == 1);
    CHECK(single.configs[0] == initial_configuration(p, build(GraphKind::Line, 1)));
  }

  // Each base-station start reaches its own two configurations.
  const auto p3 = bs_global3();
  const auto g1 = build(GraphKind::Line, 1, 0, std::vector<std::size_t>{0});
  const auto rg3 = reachable(p3, g1);
  CHECK(rg3.initials.size() == 2);
  CHECK(rg3.size() == 4);
  for (auto start : rg3.initials) CHECK(reachable_from(rg3, start).size() == 2);
  CHECK(named(p3, rg3) == oracle::enumerate(instance_of(g1, {}, oracle::global3_bs_rules()), "initial",
                                            {"b_red", "b_blue"}));
}

TEST_CASE("reachable: state cap") {
  VerifyOptions tight;
  tight.state_cap = 1000;
  try {
    reachable(nobs_sym5(), build(GraphKind::Ring, 5), tight);
    FAIL("cap not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StateSpaceTooLarge);
  }
  CHECK_NOTHROW(reachable(nobs_sym5(), build(GraphKind::Ring, 4), tight));
}

TEST_CASE("property: successor map is complete and exact") {
  for (const char* name : {"bs-global3", "bs-weak3p1:3", "nobs-asym4", "nobs-sym5"}) {
    const auto p = protocol_by_name(name);
    const auto g = p.uses_bs() ? build(GraphKind::Ring, 3, 0, std::vector<std::size_t>{0})
                               : build(GraphKind::Ring, 4);
    const auto rg = reachable(p, g);
    for (std::uint32_t v = 0; v < rg.size(); ++v) {
      std::set<std::pair<std::uint32_t, Interaction>> edges;
      for (const auto& e : rg.successors[v]) edges.insert({e.target, e.via});
      std::size_t non_null = 0;
      for (const auto& i : g.ordered_pairs()) {
        const auto next = apply(p, g, rg.configs[v], i);
        const auto idx = rg.find(next);
        REQUIRE(idx);
        if (next != rg.configs[v]) {
          ++non_null;
          CHECK(edges.count({*idx, i}) == 1);
        }
      }
      CHECK(edges.size() == non_null);
    }
  }
}

TEST_CASE("property: reachable agrees with the recursive enumerator") {
  const auto asym = nobs_asym4();
  const auto sym = nobs_sym5();
  const auto g3 = bs_global3();
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& g : enumerate_connected(n, false)) {
      CHECK(named(asym, reachable(asym, g)) == oracle::enumerate(instance_of(g, oracle::asym4_rules()), "rw", {}));
      CHECK(named(sym, reachable(sym, g)) == oracle::enumerate(instance_of(g, oracle::sym5_rules()), "rw0", {}));
    }
    for (const auto& g : enumerate_connected(n, true)) {
      CHECK(named(g3, reachable(g3, g)) ==
            oracle::enumerate(instance_of(g, oracle::global3_agent_rules(), oracle::global3_bs_rules()), "initial",
                              {"b_red", "b_blue"}));
    }
  }
}

TEST_CASE("is_stable: examples") {
  using namespace asym4;
  const auto p = nobs_asym4();
  const auto rg = reachable(p, build(GraphKind::Line, 2));
  const auto rb = *rg.find({{kRed, kBlue}, std::nullopt});
  const auto cert = is_stable(rg, rb, p);
  REQUIRE(cert);
  CHECK(cert->partition == std::vector<Color>{Color::Red, Color::Blue});
  CHECK(cert->balanced);
  CHECK_FALSE(is_stable(rg, rg.initials[0], p));

  const auto null = null_protocol();
  const auto rg_null = reachable(null, build(GraphKind::Line, 2));
  CHECK_FALSE(is_stable(rg_null, 0, null));
}

TEST_CASE("verify_global: examples") {
  for (std::size_t n = 3; n <= 4; ++n) {
    for (const auto& g : enumerate_connected(n, false)) CHECK(verify_global(nobs_asym4(), g).solves);
  }
  CHECK(verify_global(nobs_sym5(), build(GraphKind::Ring, 3)).solves);
  CHECK(verify_global(nobs_asym4(), build(GraphKind::Line, 2)).solves);
  // Symmetric protocols cannot split two agents.
  CHECK_FALSE(verify_global(nobs_sym5(), build(GraphKind::Line, 2)).solves);

  const auto null = null_protocol();
  const auto rg = reachable(null, build(GraphKind::Line, 2));
  const auto verdict = verify_global(rg, null);
  CHECK_FALSE(verdict.solves);
  REQUIRE(verdict.witness);
  CHECK(*verdict.witness == rg.initials[0]);
}

TEST_CASE("property: stability by closure agrees with the SCC mask route") {
  for (const char* name : {"bs-global3", "bs-weak3p1:3", "bs-weak-mod:4", "nobs-asym4", "nobs-sym5"}) {
    const auto p = protocol_by_name(name);
    for (std::size_t n = 2; n <= 3; ++n) {
      for (const auto& g : enumerate_connected(n, p.uses_bs())) {
        const auto rg = reachable(p, g);
        const auto masks = stable_configurations(rg, p);
        for (std::uint32_t v = 0; v < rg.size(); ++v) {
          const auto cert = is_stable(rg, v, p);
          REQUIRE(bool(cert) == bool(masks[v]));
          if (cert) {
            const long diff = long(cert->red) - long(cert->blue);
            CHECK(diff >= -1);
            CHECK(diff <= 1);
          }
        }
      }
    }
  }
}

TEST_CASE("reachable_agent_state_count: examples") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& g : enumerate_connected(n, false)) {
      CHECK(reachable_agent_state_count(reachable(nobs_asym4(), g)) <= 4);
    }
  }
  CHECK(reachable_agent_state_count(reachable(nobs_sym5(), build(GraphKind::Ring, 3))) <= 5);
  const auto line3 = build(GraphKind::Line, 3, 0, std::vector<std::size_t>{0});
  CHECK(reachable_agent_state_count(reachable(bs_weak_3p1(4), line3)) <= 13);
}

TEST_CASE("predicates: examples") {
  const auto ring3 = build(GraphKind::Ring, 3);
  const auto p4 = nobs_asym4();
  CHECK(check_predicate(reachable(p4, ring3), p4, ring3, Predicate::Lem9).holds);

  const auto pw = bs_weak_3p1(3);
  const auto line3 = build(GraphKind::Line, 3, 0, std::vector<std::size_t>{0});
  CHECK(check_predicate(reachable(pw, line3), pw, line3, Predicate::Lem6).holds);

  // On three agents rule 1 leaves a single token, so the mutated rule 2 needs
  // four agents to fire at all.
  const auto mutant = mutated_asym4();
  CHECK(check_predicate(reachable(mutant, ring3), mutant, ring3, Predicate::Lem9).holds);
  const auto ring4 = build(GraphKind::Ring, 4);
  const auto result = check_predicate(reachable(mutant, ring4), mutant, ring4, Predicate::Lem9);
  CHECK_FALSE(result.holds);
  REQUIRE(result.counterexample);
  const auto& bad = *result.counterexample;
  const auto n_r = std::count(bad.agents.begin(), bad.agents.end(), asym4::kRed);
  const auto n_b = std::count(bad.agents.begin(), bad.agents.end(), asym4::kBlue);
  const auto n_bw = std::count(bad.agents.begin(), bad.agents.end(), asym4::kBlueToken);
  CHECK(n_r != n_b + 2 * n_bw);
}

TEST_CASE("predicates: applicability and parsing") {
  for (auto pred : all_predicates()) CHECK(parse_predicate(to_string(pred)) == pred);
  CHECK_THROWS_AS(parse_predicate("LEM7"), Error);
  const auto ring3 = build(GraphKind::Ring, 3);
  const auto p4 = nobs_asym4();
  const auto rg = reachable(p4, ring3);
  CHECK_FALSE(is_applicable(Predicate::Lem1, p4));
  try {
    check_predicate(rg, p4, ring3, Predicate::Lem1);
    FAIL("inapplicable predicate accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InapplicablePredicate);
  }
  CHECK_FALSE(is_applicable(Predicate::Cor12, p4));
  CHECK(is_applicable(Predicate::Cor12, nobs_sym5()));
  CHECK(is_applicable(Predicate::MonoIni, bs_global3()));
  CHECK_FALSE(is_applicable(Predicate::Lem4, bs_weak_mod_l(3)));
}

TEST_CASE("property: universal predicates hold on full reachable sets") {
  for (const char* name : {"bs-weak3p1:3", "bs-weak-mod:3"}) {
    const auto p = protocol_by_name(name);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& g : enumerate_connected(n, true)) {
        if (p.family() == Family::BsWeakModL && violates_mod_l_condition(g, p.param())) continue;
        const auto rg = reachable(p, g);
        for (auto pred : all_predicates()) {
          if (!is_applicable(pred, p)) continue;
          const auto r = check_predicate(rg, p, g, pred);
          INFO(name, " ", to_string(pred), " ", r.detail);
          CHECK(r.holds);
        }
      }
    }
  }
  for (const auto& p : {nobs_asym4(), nobs_sym5(), bs_global3()}) {
    // Two agents cannot be split by the symmetric protocol, so its eventual
    // predicates start at three.
    for (std::size_t n = p.family() == Family::NobsSym5 ? 3 : 2; n <= 4; ++n) {
      for (const auto& g : enumerate_connected(n, p.uses_bs())) {
        const auto rg = reachable(p, g);
        for (auto pred : all_predicates()) {
          if (!is_applicable(pred, p)) continue;
          const auto r = check_predicate(rg, p, g, pred);
          INFO(p.name(), " ", to_string(pred), " ", r.detail);
          CHECK(r.holds);
        }
      }
    }
  }
}

TEST_CASE("counters") {
  const auto p4 = nobs_asym4();
  const Configuration c{{asym4::kRedToken, asym4::kRed, asym4::kBlueToken}, std::nullopt};
  CHECK(count_tokens(p4, c) == 2);
  CHECK_THROWS_AS(count_ini(p4, c), Error);
  const auto p3 = bs_global3();
  CHECK(count_ini(p3, {{global3::kInitial, global3::kRed}, global3::kBsRed}) == 1);
  CHECK_THROWS_AS(count_tokens(p3, {{global3::kInitial}, global3::kBsRed}), Error);
}
