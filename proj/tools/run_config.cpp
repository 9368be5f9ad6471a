#include "run_config.hpp"

#include <algorithm>
#include <charconv>

#include "gltower/errors.hpp"
#include "gltower/orbit_lemma.hpp"

namespace gltower::cli {

namespace {

std::uint64_t parse_number(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end) throw DomainError("bad seed '" + s + "'");
  return v;
}

Corner parse_corner(const std::string& s) {
  if (s == "upper-left") return Corner::kUpperLeft;
  if (s == "lower-right") return Corner::kLowerRight;
  throw DomainError("corner must be upper-left or lower-right, got '" + s + "'");
}

finite::AfSign parse_sign(const std::string& s) {
  if (s == "negated") return finite::AfSign::kNegated;
  if (s == "plus") return finite::AfSign::kPlus;
  throw DomainError("sign must be negated or plus, got '" + s + "'");
}

finite::FiniteLimits limits_of(const RunConfig& cfg) {
  finite::FiniteLimits l;
  l.enumeration.max_candidates = cfg.limit;
  return l;
}

RunResult with_pass(Json j, const char* key) {
  const bool ok = j[key].get<bool>();
  return {std::move(j), ok ? 0 : 1};
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    const std::size_t dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number(item));
    } else {
      const std::uint64_t lo = parse_number(item.substr(0, dots));
      const std::uint64_t hi = parse_number(item.substr(dots + 2));
      if (hi < lo) throw DomainError("empty seed range '" + item + "'");
      if (hi - lo >= 100000) throw DomainError("seed range '" + item + "' is too long");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
    start = comma + 1;
  }
  return out;
}

void validate(const RunConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw DomainError("unknown command '" + cfg.command + "'");
  if (cfg.command == "scan") {
    if (cfg.max_n <= 0) throw DomainError("--max-n must be positive");
    return;
  }
  if (cfg.n1 <= 0 || cfg.n2 <= 0) throw DomainError("n1 and n2 must be positive");
  if (cfg.q == 0) throw DomainError("--q must be positive");
  if (cfg.limit == 0) throw DomainError("--limit must be positive");
  if (cfg.chi < 0) throw DomainError("--chi must be 0 or 1");
  if (cfg.command.starts_with("finite-") && cfg.seeds.empty()) throw DomainError("--seeds is required");
}

RunResult run_command(const RunConfig& cfg) {
  validate(cfg);
  const std::string& c = cfg.command;

  if (c == "chain") return {to_json(euclid_chain(cfg.n1, cfg.n2)), 0};
  if (c == "partition") return with_pass(partition_json(euclid_chain(cfg.n1, cfg.n2)), "pass");

  if (c == "tower") {
    TowerOptions opts;
    if (!cfg.corner.empty()) opts.corner = parse_corner(cfg.corner);
    euclid_chain(cfg.n1, cfg.n2);
    return with_pass(tower_json(build_tower_unchecked(cfg.n1, cfg.n2, opts)), "pass");
  }

  if (c == "verify-lemma") {
    const Json j = to_json(verify_lemma(cfg.n1, cfg.n2));
    return {j, j["verdict"].get<bool>() ? 0 : 1};
  }
  if (c == "scan") return with_pass(scan_json(cfg.max_n, scan_verify(cfg.max_n)), "all_verdicts");

  const auto limits = limits_of(cfg);
  const finite::FiniteSetting s = finite::make_setting(cfg.n1, cfg.n2, cfg.q, limits);

  if (c == "finite-prop1") return with_pass(prop1_json(s, cfg.seeds, finite::prop1_battery(s, cfg.seeds)), "pass");

  finite::UnfoldOptions opts;
  opts.chi = cfg.chi;
  opts.sign = parse_sign(cfg.sign);
  if (!cfg.corner.empty()) opts.corner = parse_corner(cfg.corner);
  try {
    return with_pass(unfold_json(s, cfg.seeds, cfg.chi, finite::unfolding_battery(s, cfg.seeds, opts, limits)), "pass");
  } catch (const IntegrandNotInvariant& e) {
    // A failed invariance spot check is a failed assertion, not a usage error.
    Json j;
    j["check"] = "finite-unfold";
    j["pair"] = Json::array({s.n1, s.n2});
    j["q"] = s.q;
    j["chi"] = cfg.chi;
    j["seeds"] = cfg.seeds;
    j["lhs"] = Json::array();
    j["rhs"] = Json::array();
    j["ratio"] = nullptr;
    j["pass"] = false;
    j["details"] = {{"sign", cfg.sign}, {"diagnostic", e.what()}};
    return {j, 1};
  }
}

std::string render(const Json& j, bool pretty) { return j.dump(pretty ? 2 : -1) + "\n"; }

}  // namespace gltower::cli
