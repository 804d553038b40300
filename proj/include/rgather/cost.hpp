#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace rgather {

// Cost accounting, not emulation: pipelines run single-process but emit one
// charge per declared communication barrier, and the report tallies rounds
// and peak space against the model's budgets. Charges from lanes of one
// group share their barriers, so the round tally takes a group's deepest
// lane instead of summing. Formula constants default to 1, so reports are
// comparable across runs rather than absolutely meaningful.

enum class Primitive { sort, map, broadcast, explore, mis_run };

const char* primitive_name(Primitive p);

struct Charge {
  Primitive primitive = Primitive::map;
  std::string label;
  std::int64_t rounds = 0;
  std::int64_t space_words = 0;
  std::int64_t group = 0;  // parallel phase id; 0 = ordinary sequential step
  int lane = -1;           // position within the group; lanes run simultaneously
};

/// Append-only charge log; emitters may run concurrently.
class CostLog {
 public:
  void add(Charge c) {
    std::lock_guard<std::mutex> lock(mu_);
    charges_.push_back(std::move(c));
  }
  std::vector<Charge> snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return charges_;
  }

  /// Fresh id for a phase whose lanes execute simultaneously.
  std::int64_t open_group() {
    std::lock_guard<std::mutex> lock(mu_);
    return next_group_++;
  }

  /// Appends another log's charges stamped as one lane of the given group.
  /// A lane stays sequential inside itself; across lanes the report charges
  /// only the deepest one.
  void absorb(const CostLog& other, std::int64_t group, int lane) {
    std::vector<Charge> moved = other.snapshot();
    std::lock_guard<std::mutex> lock(mu_);
    for (Charge& c : moved) {
      c.group = group;
      c.lane = lane;
      charges_.push_back(std::move(c));
    }
  }

 private:
  mutable std::mutex mu_;
  std::vector<Charge> charges_;
  std::int64_t next_group_ = 1;
};

struct CostModel {
  double delta = 0.25;                 // local-memory exponent: one machine holds n^delta words
  std::int64_t n = 1;                  // problem size the budgets refer to
  std::int64_t local_memory_words = 1;
  std::int64_t total_space_words = 1;
};

/// Budgets: local memory n^delta; total space a generous polylog envelope
/// over the near-linear claims. The total budget is a tripwire for
/// accidental quadratic blowups, not a tight bound.
CostModel make_cost_model(std::int64_t n, double delta = 0.25);

struct StepDescriptor {
  Primitive primitive = Primitive::map;
  std::string label;
  std::int64_t items = 0;    // input size in words
  std::int64_t k = 0;        // hop count (explore) or exploration depth (mis_run)
  std::int64_t j = 0;        // exploration truncation J
  std::int64_t delta_k = 0;  // max k-hop degree, mis_run only
  double gamma = 0.25;       // memory exponent entering the mis_run round formula
  std::int64_t n = 0;        // instance size entering the mis_run round formula
};

/// Deterministic charge table: sort/map/broadcast are 1 round with linear
/// space; explore is k rounds and items*(j+1) words; mis_run uses the
/// round formula ceil(ln(delta_k+2)/sqrt(gamma*ln n))*(k+ln(gamma*ln n))+ln ln n
/// with unit constants.
Charge account(const StepDescriptor& step);

struct PrimitiveTotals {
  std::int64_t count = 0;
  std::int64_t rounds = 0;
  std::int64_t space_total = 0;
  std::int64_t space_peak = 0;
};

struct CostReport {
  std::int64_t rounds = 0;           // group-0 charges plus each group's deepest lane
  std::int64_t peak_space_words = 0; // max over charges
  std::map<std::string, PrimitiveTotals> by_primitive;  // raw tallies; every lane counts
  std::vector<std::string> violations;  // charges that broke the total-space budget
};

CostReport summarize(const CostLog& log, const CostModel& model);

}  // namespace rgather
