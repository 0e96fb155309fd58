#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnotsynth/baselines.hpp"
#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/dacsynth.hpp"
#include "cnotsynth/greedy.hpp"

namespace cnot {

struct unknown_method_error : std::runtime_error {
  explicit unknown_method_error(const std::string& tag)
      : std::runtime_error("unknown method '" + tag + "'") {}
};

/// Method tags: gaussian | kutin | dacsynth | dacsynth-tiled:<k> |
/// greedy:<cost> | lu+greedy:<cost>[:sparse]  with <cost> one of
/// h_sum, H_sum, h_prod, H_prod.
inline std::vector<std::string> parse_method_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    std::string tag = csv.substr(pos, comma - pos);
    if (!tag.empty()) out.push_back(tag);
    pos = comma + 1;
  }
  return out;
}

inline std::vector<std::string> default_methods() {
  return {"gaussian",      "kutin",          "dacsynth",       "dacsynth-tiled:4",
          "greedy:H_sum",  "greedy:h_prod",  "greedy:H_prod",
          "lu+greedy:H_sum", "lu+greedy:H_prod"};
}

inline CostKind parse_cost_kind(const std::string& name) {
  if (name == "h_sum") return CostKind::h_sum;
  if (name == "H_sum") return CostKind::H_sum;
  if (name == "h_prod") return CostKind::h_prod;
  if (name == "H_prod") return CostKind::H_prod;
  throw unknown_method_error("greedy:" + name);
}

/// Run one synthesis method; greedy failures come back as nullopt.
inline std::optional<SynthesisResult> run_method(const std::string& tag, const BitMatrix& a,
                                                 std::uint64_t seed) {
  if (tag == "gaussian") return gaussian_synth(a);
  if (tag == "kutin") return kutin_synth(a);
  if (tag == "dacsynth") return dacsynth_greedy(a);
  if (tag.rfind("dacsynth-tiled:", 0) == 0 || tag.rfind("tiled:", 0) == 0) {
    std::size_t k = std::stoul(tag.substr(tag.find(':') + 1));
    return dacsynth_tiled(a, k);
  }
  if (tag.rfind("greedy:", 0) == 0) {
    GreedyConfig cfg;
    cfg.cost = parse_cost_kind(tag.substr(7));
    cfg.seed = seed;
    GreedyOutcome out = greedy_synth(a, cfg);
    if (!out.ok()) return std::nullopt;
    out.result->method = tag;
    return out.result;
  }
  if (tag.rfind("lu+greedy:", 0) == 0) {
    std::string rest = tag.substr(10);
    GreedyConfig cfg;
    cfg.seed = seed;
    cfg.use_lu = true;
    std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      if (rest.substr(colon + 1) != "sparse") throw unknown_method_error(tag);
      cfg.lu_strategy = LuStrategy::sparse;
      rest = rest.substr(0, colon);
    }
    cfg.cost = parse_cost_kind(rest);
    GreedyOutcome out = lu_greedy_synth(a, cfg);
    if (!out.ok()) return std::nullopt;
    out.result->method = tag;
    return out.result;
  }
  throw unknown_method_error(tag);
}

struct MethodRun {
  std::string tag;
  std::optional<SynthesisResult> result;
};

struct PortfolioResult {
  std::optional<SynthesisResult> best;
  std::vector<MethodRun> runs;
};

/// Run every method, verify each result by simulation, keep the minimum
/// depth (ties: fewer CNOTs, then method order). A verification failure is a
/// bug in the synthesizer, not a recoverable condition.
inline PortfolioResult run_portfolio(const std::vector<std::string>& methods,
                                     const BitMatrix& a, std::uint64_t seed) {
  PortfolioResult out;
  for (const std::string& tag : methods) {
    MethodRun run{tag, run_method(tag, a, seed)};
    if (run.result) {
      if (!run.result->implements(a))
        throw std::logic_error("method '" + tag + "' failed output verification");
      if (!out.best || run.result->depth < out.best->depth ||
          (run.result->depth == out.best->depth &&
           run.result->cnot_count < out.best->cnot_count))
        out.best = run.result;
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace cnot
