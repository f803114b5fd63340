#include "efx/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace efx {

namespace {

[[noreturn]] void bad_line(int line_no, const std::string& what) {
  throw InputError("line " + std::to_string(line_no) + ": " + what);
}

// getline that tolerates trailing '\r' and reports whether a line existed.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

long long parse_int(const std::string& token, int line_no,
                    const std::string& what) {
  std::size_t used = 0;
  long long parsed = 0;
  try {
    parsed = std::stoll(token, &used);
  } catch (const std::exception&) {
    bad_line(line_no, "expected " + what + ", got \"" + token + "\"");
  }
  if (used != token.size()) {
    bad_line(line_no, "trailing junk in " + what + " \"" + token + "\"");
  }
  return parsed;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream stream(line);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != "efx-instance-v1") {
    throw InputError("line 1: expected header \"efx-instance-v1\"");
  }
  if (!next_line(in, line)) bad_line(2, "missing \"<n> <m>\" counts");
  const std::vector<std::string> counts = split_tokens(line);
  if (counts.size() != 2) bad_line(2, "expected exactly \"<n> <m>\"");
  const long long n = parse_int(counts[0], 2, "agent count");
  const long long m = parse_int(counts[1], 2, "good count");
  if (n < 1 || n > 1'000'000) bad_line(2, "agent count out of range");
  if (m < 0 || m > 1'000'000) bad_line(2, "good count out of range");

  std::vector<std::vector<GoodEntry>> valuation(static_cast<std::size_t>(m));
  for (long long g = 0; g < m; ++g) {
    const int line_no = static_cast<int>(g) + 3;
    if (!next_line(in, line)) bad_line(line_no, "missing good line");
    const std::vector<std::string> tokens = split_tokens(line);
    if (tokens.size() < 2 || tokens.size() > 3) {
      bad_line(line_no, "expected \"<good> <agent>:<value> [<agent>:<value>]\"");
    }
    if (parse_int(tokens[0], line_no, "good id") != g) {
      bad_line(line_no, "good ids must run 0.." + std::to_string(m - 1) +
                            " in order");
    }
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::size_t colon = tokens[t].find(':');
      if (colon == std::string::npos) {
        bad_line(line_no, "entry \"" + tokens[t] + "\" lacks a ':'");
      }
      const long long agent =
          parse_int(tokens[t].substr(0, colon), line_no, "agent id");
      const long long value =
          parse_int(tokens[t].substr(colon + 1), line_no, "value");
      if (value < 1) bad_line(line_no, "values must be positive");
      valuation[static_cast<std::size_t>(g)].push_back(
          GoodEntry{static_cast<AgentId>(agent), static_cast<Value>(value)});
    }
  }
  if (next_line(in, line) && !split_tokens(line).empty()) {
    bad_line(static_cast<int>(m) + 3, "unexpected extra content");
  }
  return Instance(static_cast<int>(n), std::move(valuation));
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "efx-instance-v1\n"
      << inst.agent_count() << ' ' << inst.good_count() << '\n';
  for (GoodId g = 0; g < inst.good_count(); ++g) {
    out << g;
    for (const GoodEntry& e : inst.entries(g)) {
      out << ' ' << e.agent << ':' << e.value;
    }
    out << '\n';
  }
}

std::map<AgentId, Bundle> parse_allocation(std::istream& in,
                                           const Instance& inst) {
  std::string line;
  if (!next_line(in, line) || line != "efx-allocation-v1") {
    throw InputError("line 1: expected header \"efx-allocation-v1\"");
  }
  if (!next_line(in, line)) bad_line(2, "missing \"<n> <m>\" counts");
  const std::vector<std::string> counts = split_tokens(line);
  if (counts.size() != 2) bad_line(2, "expected exactly \"<n> <m>\"");
  if (parse_int(counts[0], 2, "agent count") != inst.agent_count() ||
      parse_int(counts[1], 2, "good count") != inst.good_count()) {
    bad_line(2, "allocation counts do not match the instance");
  }

  std::map<AgentId, Bundle> allocation;
  for (int a = 0; a < inst.agent_count(); ++a) {
    const int line_no = a + 3;
    if (!next_line(in, line)) bad_line(line_no, "missing agent line");
    const std::vector<std::string> tokens = split_tokens(line);
    if (tokens.empty()) bad_line(line_no, "expected \"<agent> [<good> ...]\"");
    if (parse_int(tokens[0], line_no, "agent id") != a) {
      bad_line(line_no, "agent ids must run 0.." +
                            std::to_string(inst.agent_count() - 1) +
                            " in order");
    }
    std::vector<GoodId> goods;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const long long g = parse_int(tokens[t], line_no, "good id");
      if (g < 0 || g >= inst.good_count()) {
        bad_line(line_no, "good id " + std::to_string(g) + " out of range");
      }
      goods.push_back(static_cast<GoodId>(g));
    }
    try {
      allocation.emplace(static_cast<AgentId>(a), Bundle{std::move(goods)});
    } catch (const EngineError&) {
      bad_line(line_no, "duplicate good in one bundle");
    }
  }
  if (next_line(in, line) && !split_tokens(line).empty()) {
    bad_line(inst.agent_count() + 3, "unexpected extra content");
  }
  return allocation;
}

void write_allocation(std::ostream& out, const Instance& inst,
                      const std::map<AgentId, Bundle>& allocation) {
  out << "efx-allocation-v1\n"
      << inst.agent_count() << ' ' << inst.good_count() << '\n';
  for (int a = 0; a < inst.agent_count(); ++a) {
    out << a;
    const auto it = allocation.find(static_cast<AgentId>(a));
    if (it != allocation.end()) {
      for (GoodId g : it->second) out << ' ' << g;
    }
    out << '\n';
  }
}

std::string location_token(const Location& loc) {
  switch (loc.place) {
    case Place::kPool: return "pool";
    case Place::kRemaining: return "r" + std::to_string(loc.agent);
    case Place::kFinal: return "f" + std::to_string(loc.agent);
  }
  return "?";
}

std::string trace_header_line(const Instance& inst) {
  nlohmann::json j;
  j["format"] = "efx-trace-v1";
  j["agents"] = inst.agent_count();
  j["goods"] = inst.good_count();
  return j.dump();
}

std::string trace_event_line(const RuleEvent& event, bool checked) {
  nlohmann::json j;
  j["rule"] = rule_name(event.rule);
  j["actors"] = event.actors;
  nlohmann::json moved = nlohmann::json::array();
  for (const GoodMove& move : event.moved) {
    moved.push_back({{"good", move.good},
                     {"from", location_token(move.from)},
                     {"to", location_token(move.to)}});
  }
  j["moved"] = std::move(moved);
  j["welfare_before"] = event.welfare_before;
  j["welfare_after"] = event.welfare_after;
  j["remaining_before"] = event.remaining_before;
  j["remaining_after"] = event.remaining_after;
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(event.state_digest));
  j["digest"] = digest;
  if (checked) j["checks"] = "ok";
  return j.dump();
}

// --------------------------------------------------------------------------

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over master + index; the standard finalizer spreads nearby
  // master/index pairs across the full 64-bit space.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Instance generate(const GenConfig& cfg) {
  if (cfg.agents < 1) throw InputError("generator needs at least one agent");
  if (cfg.goods < 0) throw InputError("generator good count is negative");
  if (cfg.value_max < 1) throw InputError("generator value_max must be >= 1");
  if (!(cfg.share_prob >= 0.0 && cfg.share_prob <= 1.0)) {
    throw InputError("generator share_prob must lie in [0, 1]");
  }
  if (cfg.q_cap && *cfg.q_cap < 1) {
    throw InputError("generator q_cap must be >= 1");
  }
  if (static_cast<Value>(cfg.goods) * 2 * cfg.value_max > kMaxTotalValue) {
    throw InputError("generator config exceeds the total value ceiling");
  }

  std::mt19937_64 rng(cfg.seed);
  // share_prob is applied through an integer threshold on 53 fresh bits so
  // the decision is reproducible across platforms.
  const std::uint64_t share_threshold = static_cast<std::uint64_t>(
      std::llround(cfg.share_prob * 9007199254740992.0));  // * 2^53

  const int n = cfg.agents;
  std::map<std::pair<AgentId, AgentId>, int> copies;  // per relevant set
  std::vector<std::vector<GoodEntry>> valuation(
      static_cast<std::size_t>(cfg.goods));
  for (int g = 0; g < cfg.goods; ++g) {
    AgentId first = 0;
    AgentId second = -1;  // -1: single-agent good
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      first = static_cast<AgentId>(rng() % static_cast<std::uint64_t>(n));
      second = -1;
      if (n > 1 && (rng() >> 11) < share_threshold) {
        do {
          second = static_cast<AgentId>(rng() % static_cast<std::uint64_t>(n));
        } while (second == first);
      }
      std::pair<AgentId, AgentId> key{first, second};
      if (second != -1 && second < first) key = {second, first};
      if (!cfg.q_cap || copies[key] < *cfg.q_cap) {
        ++copies[key];
        placed = true;
      }
    }
    if (!placed) {
      throw InputError("generator could not respect q_cap after 1000 tries");
    }
    std::vector<GoodEntry>& entries = valuation[static_cast<std::size_t>(g)];
    if (second != -1 && second < first) std::swap(first, second);
    entries.push_back(GoodEntry{first, 1 + rng() % cfg.value_max});
    if (second != -1) {
      entries.push_back(GoodEntry{second, 1 + rng() % cfg.value_max});
    }
  }
  return Instance(n, std::move(valuation));
}

}  // namespace efx
