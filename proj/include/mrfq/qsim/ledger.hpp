#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "mrfq/errors.hpp"

namespace mrfq::qsim {

// Tallies of the operations the cost claims are stated in. Counters only
// ever increase; per-phase breakdowns let the scaling report separate the
// QRAM-build, Sparsitron, counting and search contributions.
class QueryLedger {
 public:
  struct Counters {
    std::uint64_t qram_queries = 0;
    std::uint64_t sample_oracle_queries = 0;
    std::uint64_t grover_iterations = 0;
    double sparsitron_cost_units = 0.0;
    double qram_build_units = 0.0;

    Counters& operator+=(const Counters& rhs) {
      qram_queries += rhs.qram_queries;
      sample_oracle_queries += rhs.sample_oracle_queries;
      grover_iterations += rhs.grover_iterations;
      sparsitron_cost_units += rhs.sparsitron_cost_units;
      qram_build_units += rhs.qram_build_units;
      return *this;
    }
  };

  void add_qram_queries(const std::string& phase, std::uint64_t k) {
    total_.qram_queries += k;
    phases_[phase].qram_queries += k;
  }
  void add_sample_queries(const std::string& phase, std::uint64_t k) {
    total_.sample_oracle_queries += k;
    phases_[phase].sample_oracle_queries += k;
  }
  void add_grover_iterations(const std::string& phase, std::uint64_t k) {
    total_.grover_iterations += k;
    phases_[phase].grover_iterations += k;
  }
  void add_sparsitron_units(const std::string& phase, double units) {
    if (units < 0) throw SimError("ledger units must be nonnegative");
    total_.sparsitron_cost_units += units;
    phases_[phase].sparsitron_cost_units += units;
  }
  void add_qram_build_units(const std::string& phase, double units) {
    if (units < 0) throw SimError("ledger units must be nonnegative");
    total_.qram_build_units += units;
    phases_[phase].qram_build_units += units;
  }

  const Counters& total() const { return total_; }
  const std::map<std::string, Counters>& phases() const { return phases_; }

  Counters phase(const std::string& name) const {
    auto it = phases_.find(name);
    return it == phases_.end() ? Counters{} : it->second;
  }

  nlohmann::json to_json() const {
    auto counters_json = [](const Counters& c) {
      return nlohmann::json{{"qram_queries", c.qram_queries},
                            {"sample_oracle_queries", c.sample_oracle_queries},
                            {"grover_iterations", c.grover_iterations},
                            {"sparsitron_cost_units", c.sparsitron_cost_units},
                            {"qram_build_units", c.qram_build_units}};
    };
    nlohmann::json j;
    j["total"] = counters_json(total_);
    for (const auto& [name, c] : phases_) j["phases"][name] = counters_json(c);
    return j;
  }

 private:
  Counters total_;
  std::map<std::string, Counters> phases_;
};

}  // namespace mrfq::qsim
