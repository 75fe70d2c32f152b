#include "bipart/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bipart/counterexamples.hpp"
#include "bipart/error.hpp"
#include "bipart/json_io.hpp"
#include "bipart/protocols.hpp"
#include "bipart/verifier.hpp"

namespace bipart::cli {

using nlohmann::json;

namespace {

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::Parse, "bad " + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

GraphSpec parse_graph_spec(const std::string& text) {
  GraphSpec spec;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::Parse, "graph spec needs 'kind:n', got '" + text + "'");
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (head == "file") {
    if (rest.empty()) throw Error(ErrorCode::Parse, "file: needs a path");
    spec.path = rest;
    return spec;
  }
  static const std::pair<const char*, GraphKind> kinds[] = {{"complete", GraphKind::Complete},
                                                             {"ring", GraphKind::Ring},
                                                             {"line", GraphKind::Line},
                                                             {"star", GraphKind::Star},
                                                             {"random", GraphKind::RandomConnected}};
  for (const auto& [name, kind] : kinds) {
    if (head != name) continue;
    spec.kind = kind;
    const auto parts = split(rest, ':');
    if (kind == GraphKind::RandomConnected) {
      if (parts.size() != 2) throw Error(ErrorCode::Parse, "random graphs need 'random:n:seed'");
      spec.seed = parse_uint(parts[1], "graph seed");
    } else if (parts.size() != 1) {
      throw Error(ErrorCode::Parse, "unexpected field in graph spec '" + text + "'");
    }
    spec.n = parse_uint(parts.empty() ? std::string() : parts[0], "graph size");
    return spec;
  }
  throw Error(ErrorCode::Parse, "unknown graph kind '" + head + "'");
}

std::string format(const GraphSpec& spec) {
  if (!spec.kind) return "file:" + spec.path;
  std::string out = to_string(*spec.kind) + ":" + std::to_string(spec.n);
  if (*spec.kind == GraphKind::RandomConnected) out += ":" + std::to_string(spec.seed);
  return out;
}

std::optional<std::vector<std::size_t>> parse_bs_spec(const std::string& text) {
  if (text == "none") return std::nullopt;
  const std::string prefix = "attach:";
  if (text.rfind(prefix, 0) != 0) throw Error(ErrorCode::Parse, "bs spec must be 'none' or 'attach:i,j,...'");
  std::vector<std::size_t> attach;
  for (const auto& part : split(text.substr(prefix.size()), ',')) {
    attach.push_back(parse_uint(part, "attach index"));
  }
  if (attach.empty()) throw Error(ErrorCode::InvalidBsAttachment, "attach list is empty");
  return attach;
}

std::string format_bs_spec(const std::optional<std::vector<std::size_t>>& attach) {
  if (!attach) return "none";
  std::string out = "attach:";
  for (std::size_t i = 0; i < attach->size(); ++i) {
    if (i) out += ',';
    out += std::to_string((*attach)[i]);
  }
  return out;
}

CommGraph make_graph(const GraphSpec& spec, const std::optional<std::vector<std::size_t>>& attach) {
  if (!spec.kind) {
    CommGraph g = parse_graph_text(read_file(spec.path));
    if (!attach) return g;
    return CommGraph(g.n_agents(), g.edges(), attach);
  }
  return build(*spec.kind, spec.n, spec.seed, attach);
}

SchedulerSpec parse_scheduler_spec(const std::string& text) {
  if (text == "random") return {ScheduleKind::UniformRandom, {}};
  if (text == "roundrobin") return {ScheduleKind::RoundRobin, {}};
  if (text.rfind("script:", 0) == 0 && text.size() > 7) return {ScheduleKind::Scripted, text.substr(7)};
  throw Error(ErrorCode::Parse, "scheduler must be random, roundrobin or script:PATH");
}

std::string format(const SchedulerSpec& spec) {
  switch (spec.kind) {
    case ScheduleKind::UniformRandom: return "random";
    case ScheduleKind::RoundRobin: return "roundrobin";
    case ScheduleKind::Scripted: return "script:" + spec.script_path;
    case ScheduleKind::Adaptive: break;
  }
  throw Error(ErrorCode::Parse, "adaptive schedules have no command-line form");
}

StopSpec parse_stop_spec(const std::string& text) {
  if (text == "silent") return {StopCondition::Kind::Silent, 0, {}};
  if (text == "window") return {StopCondition::Kind::Window, 0, {}};
  if (text.rfind("window:", 0) == 0) {
    return {StopCondition::Kind::Window, parse_uint(text.substr(7), "window"), {}};
  }
  if (text == "predicate:no-ini" || text == "predicate:tokens-le-1") {
    return {StopCondition::Kind::Predicate, 0, text.substr(10)};
  }
  throw Error(ErrorCode::Parse, "stop must be silent, window[:W], predicate:no-ini or predicate:tokens-le-1");
}

std::string format(const StopSpec& spec) {
  switch (spec.kind) {
    case StopCondition::Kind::Silent: return "silent";
    case StopCondition::Kind::Window: return spec.window ? "window:" + std::to_string(spec.window) : "window";
    case StopCondition::Kind::Predicate: return "predicate:" + spec.predicate;
    case StopCondition::Kind::BudgetOnly: break;
  }
  throw Error(ErrorCode::Parse, "budget-only stop has no command-line form");
}

namespace {

struct RawRun {
  std::string protocol, graph, bs = "none", scheduler = "random", stop = "silent", out, format = "table",
                                bs_start;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1'000'000;
};

void add_run_options(CLI::App& app, RawRun& raw) {
  app.add_option("--protocol", raw.protocol, "bs-global3 | bs-weak3p1:P | bs-weak-mod:l | nobs-asym4 | nobs-sym5")
      ->required();
  app.add_option("--graph", raw.graph, "ring:N | line:N | complete:N | star:N | random:N:SEED | file:PATH")
      ->required();
  app.add_option("--bs", raw.bs, "none | attach:i,j,...");
  app.add_option("--scheduler", raw.scheduler, "random | roundrobin | script:PATH");
  app.add_option("--seed", raw.seed, "schedule seed");
  app.add_option("--max-steps", raw.max_steps, "step budget");
  app.add_option("--stop", raw.stop, "silent | window[:W] | predicate:no-ini | predicate:tokens-le-1");
  app.add_option("--out", raw.out, "write the JSON Lines trace here");
  app.add_option("--format", raw.format, "table | json")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--bs-start", raw.bs_start, "base-station start state (default: first)");
}

RunConfig resolve(const RawRun& raw) {
  RunConfig config;
  config.protocol = raw.protocol;
  config.graph = parse_graph_spec(raw.graph);
  config.bs = parse_bs_spec(raw.bs);
  config.scheduler = parse_scheduler_spec(raw.scheduler);
  config.seed = raw.seed;
  config.max_steps = raw.max_steps;
  config.stop = parse_stop_spec(raw.stop);
  config.out = raw.out;
  config.format = raw.format;
  return config;
}

void parse_into(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
}

StopCondition make_stop(const StopSpec& spec, const ProtocolSpec& p) {
  switch (spec.kind) {
    case StopCondition::Kind::Silent: return StopCondition::silent();
    case StopCondition::Kind::Window: return StopCondition::color_window(spec.window);
    case StopCondition::Kind::BudgetOnly: return StopCondition::budget_only();
    case StopCondition::Kind::Predicate:
      if (spec.predicate == "no-ini") {
        count_ini(p, Configuration{{p.agent_init()}, std::nullopt});  // throws when inapplicable
        return StopCondition::when("no-ini", [&p](const Configuration& c) { return count_ini(p, c) == 0; });
      }
      count_tokens(p, Configuration{{p.agent_init()}, std::nullopt});
      return StopCondition::when("tokens-le-1", [&p](const Configuration& c) { return count_tokens(p, c) <= 1; });
  }
  return StopCondition::silent();
}

Schedule make_schedule(const RunConfig& config) {
  switch (config.scheduler.kind) {
    case ScheduleKind::RoundRobin: return Schedule::round_robin(config.seed);
    case ScheduleKind::Scripted: {
      std::ifstream in(config.scheduler.script_path);
      if (!in) throw Error(ErrorCode::Parse, "cannot open script '" + config.scheduler.script_path + "'");
      return Schedule::scripted(read_script_jsonl(in));
    }
    default: return Schedule::uniform_random(config.seed);
  }
}

void print_table(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
}

void emit_json(std::ostream& out, const json& j, const std::string& path) {
  out << j.dump(2) << '\n';
  if (!path.empty()) {
    std::ofstream file(path);
    if (!file) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
    file << j.dump(2) << '\n';
  }
}

int cmd_run(const RunConfig& config, const std::string& bs_start, std::ostream& out) {
  const ProtocolSpec p = protocol_by_name(config.protocol);
  const CommGraph g = make_graph(config.graph, config.bs);
  std::optional<StateId> start_bs;
  if (!bs_start.empty()) {
    start_bs = p.find_bs_state(bs_start);
    if (!start_bs) throw Error(ErrorCode::Parse, "unknown base-station state '" + bs_start + "'");
  }
  Schedule sched = make_schedule(config);
  const StopCondition stop = make_stop(config.stop, p);
  const ExecutionTrace trace = run(p, g, sched, config.max_steps, stop, initial_configuration(p, g, start_bs));

  if (!config.out.empty()) {
    std::ofstream file(config.out);
    if (!file) throw Error(ErrorCode::Parse, "cannot write '" + config.out + "'");
    write_trace_jsonl(file, p, {p.name(), format(config.graph), config.seed, sched.describe()}, trace);
  }
  const auto counts = color_counts(p, trace.final);
  if (config.format == "json") {
    json j = {{"protocol", p.name()},
              {"graph", format(config.graph)},
              {"bs", format_bs_spec(config.bs)},
              {"schedule", sched.describe()},
              {"seed", config.seed},
              {"steps", trace.steps.size()},
              {"stop_reason", to_string(trace.stop_reason)},
              {"heuristic", trace.heuristic},
              {"red", counts.red},
              {"blue", counts.blue},
              {"imbalance", counts.imbalance()},
              {"final", to_json(p, trace.final)}};
    out << j.dump(2) << '\n';
  } else {
    print_table(out, {{"protocol", p.name()},
                      {"graph", format(config.graph) + " bs=" + format_bs_spec(config.bs)},
                      {"schedule", sched.describe() + " seed=" + std::to_string(config.seed)},
                      {"steps", std::to_string(trace.steps.size())},
                      {"stop", to_string(trace.stop_reason) + (trace.heuristic ? " (heuristic)" : "")},
                      {"red", std::to_string(counts.red)},
                      {"blue", std::to_string(counts.blue)},
                      {"imbalance", std::to_string(counts.imbalance())},
                      {"final", format_configuration(p, trace.final)}});
  }
  return kExitOk;
}

std::vector<Predicate> parse_predicate_list(const std::string& text) {
  std::vector<Predicate> preds;
  if (text.empty()) return preds;
  for (const auto& part : split(text, ',')) preds.push_back(parse_predicate(part));
  return preds;
}

int cmd_verify(const std::string& protocol, const std::string& graph, const std::string& bs, const std::string& preds,
               std::uint64_t cap, bool skip_global, const std::string& out_path, std::ostream& out) {
  const ProtocolSpec p = protocol_by_name(protocol);
  const CommGraph g = make_graph(parse_graph_spec(graph), parse_bs_spec(bs));
  const auto requested = parse_predicate_list(preds);
  for (auto pred : requested) {
    if (!is_applicable(pred, p)) {
      throw Error(ErrorCode::InapplicablePredicate, to_string(pred) + " does not apply to " + p.name());
    }
  }
  const ReachabilityGraph rg = reachable(p, g, {cap});
  bool all_hold = true;
  json report = {{"protocol", p.name()},
                 {"graph", format(parse_graph_spec(graph))},
                 {"bs", format_bs_spec(parse_bs_spec(bs))},
                 {"configs", rg.size()},
                 {"state_count", reachable_agent_state_count(rg)},
                 {"state_bound", advertised_state_bound(p)}};
  if (!skip_global) {
    const auto verdict = verify_global(rg, p);
    report["stable_count"] = verdict.stable_count;
    report["solves"] = verdict.solves;
    report["witness"] = verdict.witness ? to_json(p, rg.configs[*verdict.witness]) : json(nullptr);
    all_hold &= verdict.solves;
  }
  json pred_json = json::object();
  for (auto pred : requested) {
    const auto r = check_predicate(rg, p, g, pred);
    pred_json[to_string(pred)] = {{"holds", r.holds},
                                  {"counterexample", r.counterexample ? to_json(p, *r.counterexample) : json(nullptr)},
                                  {"detail", r.detail}};
    all_hold &= r.holds;
  }
  report["predicates"] = pred_json;
  emit_json(out, report, out_path);
  return all_hold ? kExitOk : kExitViolated;
}

int cmd_states(const std::string& protocol, const std::string& graph, const std::string& bs, std::uint64_t cap,
               std::ostream& out) {
  const ProtocolSpec p = protocol_by_name(protocol);
  const CommGraph g = make_graph(parse_graph_spec(graph), parse_bs_spec(bs));
  const auto rg = reachable(p, g, {cap});
  const auto count = reachable_agent_state_count(rg);
  const auto bound = advertised_state_bound(p);
  print_table(out, {{"protocol", p.name()},
                    {"configs", std::to_string(rg.size())},
                    {"agent states reached", std::to_string(count)},
                    {"bound", std::to_string(bound)},
                    {"within bound", count <= bound ? "yes" : "no"}});
  return count <= bound ? kExitOk : kExitViolated;
}

json doubled_report_json(const ProtocolSpec& p, const DoubledTraceReport& r) {
  return {{"base_steps", r.base_trace.steps.size()},
          {"doubled_steps", r.doubled_trace.steps.size()},
          {"equivalence_held_through", r.equivalence_held_through},
          {"first_violation", r.first_violation ? json(*r.first_violation) : json(nullptr)},
          {"base_imbalance", r.base_imbalance},
          {"final_imbalance", r.final_imbalance},
          {"base_final", to_json(p, r.base_trace.final)},
          {"doubled_final", to_json(p, r.doubled_trace.final)}};
}

}  // namespace

std::string format(const RunConfig& config) {
  std::string out = "--protocol " + config.protocol + " --graph " + format(config.graph) + " --bs " +
                    format_bs_spec(config.bs) + " --scheduler " + format(config.scheduler) + " --seed " +
                    std::to_string(config.seed) + " --max-steps " + std::to_string(config.max_steps) + " --stop " +
                    format(config.stop) + " --format " + config.format;
  if (!config.out.empty()) out += " --out " + config.out;
  return out;
}

RunConfig parse_run_config(const std::vector<std::string>& args) {
  CLI::App app("run");
  RawRun raw;
  add_run_options(app, raw);
  try {
    parse_into(app, args);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return resolve(raw);
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Population-protocol uniform bipartition toolkit", "bipart");
  app.require_subcommand(1);

  RawRun run_raw;
  auto* run_cmd = app.add_subcommand("run", "simulate a protocol and emit a trace summary");
  add_run_options(*run_cmd, run_raw);

  std::string v_protocol, v_graph, v_bs = "none", v_preds, v_out;
  std::uint64_t v_cap = VerifyOptions{}.state_cap;
  bool v_skip_global = false;
  auto* verify_cmd = app.add_subcommand("verify", "model-check global-fairness correctness and predicates");
  verify_cmd->add_option("--protocol", v_protocol)->required();
  verify_cmd->add_option("--graph", v_graph)->required();
  verify_cmd->add_option("--bs", v_bs);
  verify_cmd->add_option("--pred", v_preds, "comma-separated predicate ids, e.g. LEM1,LEM9");
  verify_cmd->add_option("--cap", v_cap, "state-space cap");
  verify_cmd->add_flag("--no-global", v_skip_global, "skip the global-fairness check");
  verify_cmd->add_option("--out", v_out, "also write the JSON report here");

  std::string s_protocol, s_graph, s_bs = "none";
  std::uint64_t s_cap = VerifyOptions{}.state_cap;
  auto* states_cmd = app.add_subcommand("states", "count reachable agent states against the advertised bound");
  states_cmd->add_option("--protocol", s_protocol)->required();
  states_cmd->add_option("--graph", s_graph)->required();
  states_cmd->add_option("--bs", s_bs);
  states_cmd->add_option("--cap", s_cap);

  std::string c_mode, c_protocol = "nobs-asym4", c_graph = "ring:3", c_out;
  std::size_t c_periods = 10, c_alpha = 0, c_beta = 1, c_steps = 50, c_settle = 600;
  std::uint64_t c_seed = 0;
  auto* cx_cmd = app.add_subcommand("counterexample", "run an impossibility construction");
  cx_cmd->add_option("mode", c_mode, "starve | double-bridge | ring-double")
      ->required()
      ->check(CLI::IsMember({"starve", "double-bridge", "ring-double"}));
  cx_cmd->add_option("--periods", c_periods, "starve: schedule periods");
  cx_cmd->add_option("--protocol", c_protocol);
  cx_cmd->add_option("--graph", c_graph, "double-bridge: base graph");
  cx_cmd->add_option("--alpha", c_alpha);
  cx_cmd->add_option("--beta", c_beta);
  cx_cmd->add_option("--steps", c_steps, "double-bridge: base trace length");
  cx_cmd->add_option("--settle", c_settle, "ring-double: base steps");
  cx_cmd->add_option("--seed", c_seed);
  cx_cmd->add_option("--out", c_out);

  std::string g_graph, g_bs = "none", g_out;
  auto* graph_cmd = app.add_subcommand("graph", "emit a graph in the text format");
  graph_cmd->add_option("--graph", g_graph)->required();
  graph_cmd->add_option("--bs", g_bs);
  graph_cmd->add_option("--out", g_out);

  try {
    parse_into(app, args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(resolve(run_raw), run_raw.bs_start, out);
    if (verify_cmd->parsed()) return cmd_verify(v_protocol, v_graph, v_bs, v_preds, v_cap, v_skip_global, v_out, out);
    if (states_cmd->parsed()) return cmd_states(s_protocol, s_graph, s_bs, s_cap, out);
    if (graph_cmd->parsed()) {
      const std::string text = to_text(make_graph(parse_graph_spec(g_graph), parse_bs_spec(g_bs)));
      out << text;
      if (!g_out.empty()) {
        std::ofstream file(g_out);
        if (!file) throw Error(ErrorCode::Parse, "cannot write '" + g_out + "'");
        file << text;
      }
      return kExitOk;
    }
    if (cx_cmd->parsed()) {
      if (c_mode == "starve") {
        const auto r = starvation_run(c_periods);
        json j = {{"mode", "starve"},
                  {"periods", r.periods},
                  {"steps", r.trace.steps.size()},
                  {"undo_steps", r.undo_steps},
                  {"pair_counts", r.pair_counts},
                  {"victim_still_initial", r.victim_still_initial},
                  {"pairs_covered_per_period", r.pairs_covered_per_period}};
        emit_json(out, j, c_out);
        return r.victim_still_initial && r.pairs_covered_per_period ? kExitOk : kExitViolated;
      }
      const ProtocolSpec p = protocol_by_name(c_protocol);
      DoubledTraceReport r;
      json j;
      if (c_mode == "double-bridge") {
        const CommGraph g = make_graph(parse_graph_spec(c_graph), std::nullopt);
        Schedule sched = Schedule::uniform_random(c_seed);
        const auto base = run(p, g, sched, c_steps, StopCondition::budget_only());
        r = replay_double_bridge(p, g, base, c_alpha, c_beta);
        j = doubled_report_json(p, r);
        j["mode"] = "double-bridge";
        j["graph"] = c_graph;
      } else {
        r = ring_doubling_demo(p, c_seed, c_settle);
        j = doubled_report_json(p, r);
        j["mode"] = "ring-double";
      }
      j["protocol"] = p.name();
      emit_json(out, j, c_out);
      const bool ok = !r.first_violation && r.final_imbalance == 2 * r.base_imbalance;
      return ok ? kExitOk : kExitViolated;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::StateSpaceTooLarge ? kExitTooLarge : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bipart::cli
