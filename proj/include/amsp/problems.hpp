#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "amsp/instance.hpp"
#include "amsp/scenario_tree.hpp"

namespace amsp {

/// Seeded generator with platform-independent transforms.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard). Uniforms use
/// the top 53 bits of one draw; normals use Box-Muller on two uniforms, one normal per call.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  /// U[0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal(double mean, double sd);

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------------------
// Stochastic uncapacitated lot-sizing

/// Per-node parameters; vectors indexed by node - 1, source-indexed rows of length I.
struct LotSizingData {
  int num_sources = 1;
  std::vector<std::vector<double>> setup_cost;       // alpha[n-1][i]
  std::vector<std::vector<double>> production_cost;  // beta[n-1][i]
  std::vector<double> holding_cost;                  // h[n-1]
  std::vector<double> demand;                        // d[n-1]
};

/// alpha ~ U(100,250), beta ~ U(0,5), h ~ U(0,5), d ~ U(0, 100 I), drawn node by node in
/// breadth-first order.
LotSizingData sample_lotsizing(const ScenarioTree& tree, int num_sources, std::uint64_t seed);

/// M_n: largest cumulative demand from n to any leaf of its subtree.
std::vector<double> lotsizing_big_m(const ScenarioTree& tree, const std::vector<double>& demand);

/// State x_i (setup, binary); stage y_0..y_{I-1} (production) and s (inventory, index I).
/// Rows: s_{a(n)} + sum_i y_in - s_n = d_n and y_in <= M_n x_in.
AmspInstance build_lotsizing(const ScenarioTree& tree, const LotSizingData& data, int mu = 0);

AmspInstance gen_lotsizing(const ScenarioTree& tree, int num_sources, std::uint64_t seed,
                           int mu = 0);

// ---------------------------------------------------------------------------------------
// Generation expansion planning

struct GeneratorType {
  std::string name;
  double capacity_mw = 0.0;           // nominal capacity per unit
  double capital_per_kw = 0.0;        // base year
  double fixed_om_per_kw_year = 0.0;
  double variable_om_per_mwh = 0.0;   // base year
  double capital_growth = 0.0;        // yearly relative change, e.g. -0.10
  double variable_growth = 0.0;       // applies to variable O&M and fuel
  bool uses_fuel = false;
  double cf_mean = 1.0;
  double cf_sd = 0.0;                 // 0: capacity factor fixed at cf_mean
};

struct GepOptions {
  std::vector<GeneratorType> generators = default_generators();
  double root_demand_mw = 1000.0;
  std::vector<double> subperiod_weights = {0.9, 1.1, 1.3, 1.5};
  std::vector<double> subperiod_shares = {0.55, 0.40, 0.0495, 0.0005};
  double hours_per_year = 8760.0;
  double growth_mean = 0.05;
  double growth_sd = 0.05;
  double interest_rate = 0.05;
  double fuel_per_mwh = 40.0;
  double unserved_penalty = 10000.0;  // $/MWh
  int build_limit = 20;               // units per type per node; also the NAC big-M
  /// Units per type at the start; empty means combined-cycle only, enough nominal
  /// capacity to cover the root demand.
  std::vector<int> initial_units;

  static std::vector<GeneratorType> default_generators();
  /// Throws ParameterError on negative costs, bad shares or mismatched lengths.
  void validate() const;
  std::vector<int> resolved_initial_units() const;
};

/// Sampled uncertainty: demand[n-1][k] (MW) and capacity_factor[n-1][i][k] in [0,1].
struct GepData {
  std::vector<std::vector<double>> demand;
  std::vector<std::vector<std::vector<double>>> capacity_factor;
  int clamped_samples = 0;
};

/// Scenario sampling: root demand w_k d_1; child demand (1 + lambda_nk) d_{a(n),k} with
/// lambda_nk ~ N(growth_mean, growth_sd); capacity factors N(cf_mean, cf_sd) per (i, n, k),
/// clamped to [0, 1].
GepData sample_gep(const ScenarioTree& tree, const GepOptions& options, std::uint64_t seed);

/// State x_i: units of type i built at the node (integer, 0..build_limit).
/// Stage variables: generation y_{ik} (MW, index i*K + k) then unserved u_k (index I*K + k).
/// Rows per (i, k): y_ik <= cap_i l_ink (x0_i + sum_{m in P(n)} x_im).
/// Rows per k: sum_i y_ik + u_k >= d_nk.
/// Costs are discounted to the first year; table costs per kW are scaled to per MW.
AmspInstance build_gep(const ScenarioTree& tree, const GepOptions& options, const GepData& data,
                       int mu = 0);

AmspInstance gen_gep(const ScenarioTree& tree, std::uint64_t seed, const GepOptions& options = {},
                     int mu = 0);

}  // namespace amsp
