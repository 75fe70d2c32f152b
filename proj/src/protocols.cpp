#include "bipart/protocols.hpp"

#include <charconv>

#include "bipart/error.hpp"

namespace bipart {

ProtocolSpec bs_global3() {
  using namespace global3;
  ProtocolSpec p("bs-global3", {"initial", "red", "blue"}, {Color::Red, Color::Red, Color::Blue},
                 kInitial, {"b_red", "b_blue"});
  p.set_family(Family::BsGlobal3);
  p.set_bs_agent_rule(kBsRed, kInitial, {kBsBlue, kRed});
  p.set_bs_agent_rule(kBsBlue, kInitial, {kBsRed, kBlue});
  p.set_agent_bs_rule(kInitial, kBsRed, {kRed, kBsBlue});
  p.set_agent_bs_rule(kInitial, kBsBlue, {kBlue, kBsRed});
  p.set_agent_rule_mirrored(kBlue, kInitial, {kInitial, kBlue});
  p.set_agent_rule_mirrored(kRed, kInitial, {kInitial, kRed});
  p.validate();
  return p;
}

StateId bs_weak_id(BsWeakState s) {
  if (s.depth == 0) return 0;
  return static_cast<StateId>(1 + 3 * (s.depth - 1) + static_cast<int>(s.color));
}

BsWeakState bs_weak_state(StateId id) {
  if (id == 0) return {};
  const int k = id - 1;
  return {static_cast<BsColor>(k % 3), k / 3 + 1};
}

namespace {

const char* color_name(BsColor c) {
  switch (c) {
    case BsColor::Ini: return "ini";
    case BsColor::R: return "r";
    case BsColor::B: return "b";
  }
  return "?";
}

// Depth rules shared by the two depth protocols. `next` is the depth a
// neighbor of a depth-d agent adopts; `before` is the strict order used to
// move `ini` toward the base station. Depth 0 is unset and incomparable.
struct DepthRules {
  int max_depth;
  bool cyclic;

  int next(int d) const {
    if (cyclic) return d % max_depth + 1;
    return d + 1 > max_depth ? max_depth : d + 1;
  }
  bool before(int a, int b) const {
    if (a == 0 || b == 0) return false;
    if (cyclic) return b == a % max_depth + 1;
    return a < b;
  }
};

// One base-station meeting, in listing order: assign a color to a depth-1
// `ini` agent, then give an undepthed agent depth 1.
std::pair<StateId, BsWeakState> meet_base_station(StateId next_color, BsWeakState x) {
  if (x.color == BsColor::Ini && x.depth == 1) {
    x.color = next_color == kNextRed ? BsColor::R : BsColor::B;
    next_color = next_color == kNextRed ? kNextBlue : kNextRed;
  }
  if (x.depth == 0) x.depth = 1;
  return {next_color, x};
}

std::pair<BsWeakState, BsWeakState> meet_agents(const DepthRules& rules, BsWeakState x, BsWeakState y) {
  if (y.depth != 0 && x.depth == 0) {
    x.depth = rules.next(y.depth);
  } else if (x.depth != 0 && y.depth == 0) {
    y.depth = rules.next(x.depth);
  }
  if (rules.before(x.depth, y.depth) && y.color == BsColor::Ini) {
    y.color = x.color;
    x.color = BsColor::Ini;
  }
  if (rules.before(y.depth, x.depth) && x.color == BsColor::Ini) {
    x.color = y.color;
    y.color = BsColor::Ini;
  }
  return {x, y};
}

ProtocolSpec depth_protocol(std::string name, DepthRules rules) {
  std::vector<std::string> names{"ini:-"};
  std::vector<Color> colors{Color::Red};
  for (int d = 1; d <= rules.max_depth; ++d) {
    for (BsColor c : {BsColor::Ini, BsColor::R, BsColor::B}) {
      names.push_back(std::string(color_name(c)) + ":" + std::to_string(d));
      colors.push_back(c == BsColor::B ? Color::Blue : Color::Red);
    }
  }
  ProtocolSpec p(std::move(name), std::move(names), std::move(colors), 0, {"r", "b"});
  const auto qa = static_cast<StateId>(p.agent_state_count());

  for (StateId a = 0; a < qa; ++a) {
    for (StateId b = 0; b < qa; ++b) {
      auto [x, y] = meet_agents(rules, bs_weak_state(a), bs_weak_state(b));
      p.set_agent_rule(a, b, {bs_weak_id(x), bs_weak_id(y)});
    }
    for (StateId rb : {kNextRed, kNextBlue}) {
      auto [rb2, x] = meet_base_station(rb, bs_weak_state(a));
      p.set_bs_agent_rule(rb, a, {rb2, bs_weak_id(x)});
      p.set_agent_bs_rule(a, rb, {bs_weak_id(x), rb2});
    }
  }
  p.validate();
  return p;
}

}  // namespace

ProtocolSpec bs_weak_3p1(int max_agents) {
  if (max_agents < 1) throw Error(ErrorCode::InvalidSize, "P must be at least 1");
  auto p = depth_protocol("bs-weak3p1:" + std::to_string(max_agents), {max_agents, false});
  p.set_family(Family::BsWeak, max_agents);
  return p;
}

ProtocolSpec bs_weak_mod_l(int l) {
  if (l < 3) throw Error(ErrorCode::InvalidModulus, "l must be at least 3");
  auto p = depth_protocol("bs-weak-mod:" + std::to_string(l), {l, true});
  p.set_family(Family::BsWeakModL, l);
  return p;
}

ProtocolSpec nobs_asym4() {
  using namespace asym4;
  ProtocolSpec p("nobs-asym4", {"rw", "bw", "r", "b"},
                 {Color::Red, Color::Blue, Color::Red, Color::Blue}, kRedToken);
  p.set_family(Family::NobsAsym4);
  p.set_agent_rule(kRedToken, kRedToken, {kRed, kBlue});
  p.set_agent_rule_mirrored(kRedToken, kBlueToken, {kBlue, kBlue});
  p.set_agent_rule_mirrored(kRedToken, kRed, {kRed, kRedToken});
  p.set_agent_rule_mirrored(kBlueToken, kBlue, {kBlue, kBlueToken});
  p.set_agent_rule_mirrored(kRedToken, kBlue, {kRed, kBlueToken});
  p.set_agent_rule_mirrored(kBlueToken, kRed, {kBlue, kRedToken});
  p.validate();
  return p;
}

ProtocolSpec nobs_sym5() {
  using namespace sym5;
  ProtocolSpec p("nobs-sym5", {"rw0", "rw1", "bw", "r", "b"},
                 {Color::Red, Color::Red, Color::Blue, Color::Red, Color::Blue}, kRedToken0);
  p.set_family(Family::NobsSym5);
  p.set_agent_rule_mirrored(kRedToken0, kRedToken0, {kRedToken1, kRedToken1});
  p.set_agent_rule_mirrored(kRedToken1, kRedToken1, {kRedToken0, kRedToken0});
  p.set_agent_rule_mirrored(kRedToken0, kRedToken1, {kRed, kBlue});
  p.set_agent_rule_mirrored(kRedToken0, kRed, {kRed, kRedToken0});
  p.set_agent_rule_mirrored(kRedToken1, kRed, {kRed, kRedToken0});
  p.set_agent_rule_mirrored(kBlueToken, kBlue, {kBlue, kBlueToken});
  p.set_agent_rule_mirrored(kRedToken0, kBlue, {kRed, kBlueToken});
  p.set_agent_rule_mirrored(kRedToken1, kBlue, {kRed, kBlueToken});
  p.set_agent_rule_mirrored(kBlueToken, kRed, {kBlue, kRedToken0});
  p.set_agent_rule_mirrored(kRedToken0, kBlueToken, {kBlue, kBlue});
  p.set_agent_rule_mirrored(kRedToken1, kBlueToken, {kBlue, kBlue});
  p.validate();
  return p;
}

namespace {

int parse_param(const std::string& name, std::size_t colon) {
  const std::string digits = name.substr(colon + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::Parse, "bad protocol parameter in '" + name + "'");
  }
  return value;
}

}  // namespace

ProtocolSpec protocol_by_name(const std::string& name) {
  if (name == "bs-global3") return bs_global3();
  if (name == "nobs-asym4") return nobs_asym4();
  if (name == "nobs-sym5") return nobs_sym5();
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string head = name.substr(0, colon);
    if (head == "bs-weak3p1") return bs_weak_3p1(parse_param(name, colon));
    if (head == "bs-weak-mod") return bs_weak_mod_l(parse_param(name, colon));
  }
  throw Error(ErrorCode::Parse, "unknown protocol '" + name + "'");
}

std::size_t advertised_state_bound(const ProtocolSpec& p) {
  switch (p.family()) {
    case Family::BsGlobal3: return 3;
    case Family::BsWeak:
    case Family::BsWeakModL: return 3 * static_cast<std::size_t>(p.param()) + 1;
    case Family::NobsAsym4: return 4;
    case Family::NobsSym5: return 5;
    case Family::Custom: break;
  }
  return p.agent_state_count();
}

ProtocolSpec delete_rule(const ProtocolSpec& p, StateId initiator, StateId responder) {
  ProtocolSpec out = p;
  out.set_agent_rule(initiator, responder, {initiator, responder});
  out.set_agent_rule(responder, initiator, {responder, initiator});
  return out;
}

}  // namespace bipart
