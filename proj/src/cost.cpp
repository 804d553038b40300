#include "rgather/cost.hpp"

#include <algorithm>
#include <cmath>

#include "rgather/error.hpp"

namespace rgather {

const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::sort: return "sort";
    case Primitive::map: return "map";
    case Primitive::broadcast: return "broadcast";
    case Primitive::explore: return "explore";
    case Primitive::mis_run: return "mis_run";
  }
  return "unknown";
}

CostModel make_cost_model(std::int64_t n, double delta) {
  if (n < 1) throw InvalidInput("cost model requires n >= 1");
  if (delta <= 0.0 || delta >= 1.0) throw InvalidInput("delta must lie in (0,1)");
  CostModel m;
  m.delta = delta;
  m.n = n;
  m.local_memory_words = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(n), delta))));
  const double lg = std::log2(static_cast<double>(n) + 1.0) + 2.0;
  m.total_space_words = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(128.0 * (static_cast<double>(n) + 1.0) * lg * lg));
  return m;
}

namespace {

std::int64_t mis_round_formula(const StepDescriptor& s) {
  const double n = static_cast<double>(std::max<std::int64_t>(s.n, 3));
  const double gamma = std::max(s.gamma, 1e-6);
  const double phases = std::ceil(std::log(static_cast<double>(s.delta_k) + 2.0) /
                                  std::sqrt(gamma * std::log(n)));
  const double per_phase =
      static_cast<double>(std::max<std::int64_t>(s.k, 1)) + std::max(0.0, std::log(gamma * std::log(n)));
  const double tail = std::max(0.0, std::log(std::log(n)));
  return static_cast<std::int64_t>(std::ceil(phases * per_phase + tail));
}

}  // namespace

Charge account(const StepDescriptor& step) {
  Charge c;
  c.primitive = step.primitive;
  c.label = step.label;
  switch (step.primitive) {
    case Primitive::sort:
    case Primitive::map:
    case Primitive::broadcast:
      c.rounds = 1;
      c.space_words = step.items;
      break;
    case Primitive::explore:
      c.rounds = std::max<std::int64_t>(step.k, 0);
      c.space_words = step.items * (step.j + 1);
      break;
    case Primitive::mis_run:
      c.rounds = mis_round_formula(step);
      c.space_words = step.items;
      break;
  }
  return c;
}

CostReport summarize(const CostLog& log, const CostModel& model) {
  CostReport rep;
  std::map<std::int64_t, std::map<int, std::int64_t>> lane_rounds;
  for (const Charge& c : log.snapshot()) {
    if (c.group == 0)
      rep.rounds += c.rounds;
    else
      lane_rounds[c.group][c.lane] += c.rounds;
    rep.peak_space_words = std::max(rep.peak_space_words, c.space_words);
    PrimitiveTotals& t = rep.by_primitive[primitive_name(c.primitive)];
    ++t.count;
    t.rounds += c.rounds;
    t.space_total += c.space_words;
    t.space_peak = std::max(t.space_peak, c.space_words);
    if (c.space_words > model.total_space_words) {
      rep.violations.push_back(c.label + ": " + std::to_string(c.space_words) +
                               " words exceed the total-space budget of " +
                               std::to_string(model.total_space_words));
    }
  }
  for (const auto& [group, lanes] : lane_rounds) {
    std::int64_t deepest = 0;
    for (const auto& [lane, subtotal] : lanes) deepest = std::max(deepest, subtotal);
    rep.rounds += deepest;
  }
  return rep;
}

}  // namespace rgather
