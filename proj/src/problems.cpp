#include "amsp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "amsp/errors.hpp"

namespace amsp {

double Prng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Prng::normal(double mean, double sd) {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sd * z;
}

// ---------------------------------------------------------------------------------------

LotSizingData sample_lotsizing(const ScenarioTree& tree, int num_sources, std::uint64_t seed) {
  if (num_sources < 1) throw ParameterError("lot-sizing needs at least one source");
  Prng rng(seed);
  LotSizingData d;
  d.num_sources = num_sources;
  const auto N = static_cast<std::size_t>(tree.num_nodes());
  d.setup_cost.resize(N);
  d.production_cost.resize(N);
  d.holding_cost.resize(N);
  d.demand.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    for (int i = 0; i < num_sources; ++i) {
      d.setup_cost[n].push_back(rng.uniform(100.0, 250.0));
      d.production_cost[n].push_back(rng.uniform(0.0, 5.0));
    }
    d.holding_cost[n] = rng.uniform(0.0, 5.0);
    d.demand[n] = rng.uniform(0.0, 100.0 * num_sources);
  }
  return d;
}

std::vector<double> lotsizing_big_m(const ScenarioTree& tree, const std::vector<double>& demand) {
  std::vector<double> m(demand.size(), 0.0);
  for (NodeId n = tree.num_nodes(); n >= 1; --n) {
    double tail = 0.0;
    if (tree.stage(n) < tree.num_stages()) {
      for (NodeId c : tree.children(n)) tail = std::max(tail, m[static_cast<std::size_t>(c - 1)]);
    }
    m[static_cast<std::size_t>(n - 1)] = demand[static_cast<std::size_t>(n - 1)] + tail;
  }
  return m;
}

AmspInstance build_lotsizing(const ScenarioTree& tree, const LotSizingData& data, int mu) {
  const int I = data.num_sources;
  const auto N = static_cast<std::size_t>(tree.num_nodes());
  if (I < 1 || data.setup_cost.size() != N || data.production_cost.size() != N ||
      data.holding_cost.size() != N || data.demand.size() != N) {
    throw ParameterError("lot-sizing data does not match the tree");
  }
  const std::vector<double> big_m = lotsizing_big_m(tree, data.demand);

  AmspInstance inst;
  inst.name = "lotsizing";
  inst.tree = tree;
  inst.mu = mu;
  for (int i = 0; i < I; ++i) {
    StateVarSpec x;
    x.name = "setup" + std::to_string(i + 1);
    x.lower = 0.0;
    x.upper = 1.0;
    x.integer = true;
    x.big_m = 1.0;
    inst.state_vars.push_back(x);
  }
  for (int i = 0; i < I; ++i) inst.stage_vars.push_back({"prod" + std::to_string(i + 1)});
  inst.stage_vars.push_back({"inventory"});

  inst.nodes.resize(N);
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    const std::vector<double>& alpha = data.setup_cost[k];
    const std::vector<double>& beta = data.production_cost[k];
    if (std::ssize(alpha) != I || std::ssize(beta) != I) {
      throw ParameterError("lot-sizing cost rows must have one entry per source");
    }
    if (data.demand[k] < 0.0 || data.holding_cost[k] < 0.0 ||
        std::any_of(alpha.begin(), alpha.end(), [](double v) { return v < 0.0; }) ||
        std::any_of(beta.begin(), beta.end(), [](double v) { return v < 0.0; })) {
      throw ParameterError("lot-sizing costs and demands must be non-negative");
    }
    NodeData& nd = inst.node(n);
    nd.state_cost = alpha;
    nd.stage_cost = beta;
    nd.stage_cost.push_back(data.holding_cost[k]);

    NodeRow balance{"balance", {}, RowSense::eq, data.demand[k]};
    if (n != 1) balance.terms.push_back({tree.parent(n), VarBlock::stage, I, 1.0});
    for (int i = 0; i < I; ++i) balance.terms.push_back({n, VarBlock::stage, i, 1.0});
    balance.terms.push_back({n, VarBlock::stage, I, -1.0});
    nd.rows.push_back(std::move(balance));
    for (int i = 0; i < I; ++i) {
      nd.rows.push_back({"setup",
                         {{n, VarBlock::stage, i, 1.0}, {n, VarBlock::state, i, -big_m[k]}},
                         RowSense::leq,
                         0.0});
    }
  }
  inst.validate();
  return inst;
}

AmspInstance gen_lotsizing(const ScenarioTree& tree, int num_sources, std::uint64_t seed,
                           int mu) {
  AmspInstance inst = build_lotsizing(tree, sample_lotsizing(tree, num_sources, seed), mu);
  inst.name = "lotsizing-seed" + std::to_string(seed);
  return inst;
}

// ---------------------------------------------------------------------------------------

std::vector<GeneratorType> GepOptions::default_generators() {
  return {
      {"combined-cycle", 418.0, 1084.0, 14.1, 2.6, 0.0, 0.10, true, 1.0, 0.0},
      {"combined-cycle-ccs", 377.0, 2481.0, 27.6, 5.8, -0.05, 0.10, true, 1.0, 0.0},
      {"onshore-wind", 200.0, 1265.0, 26.4, 0.0, -0.10, 0.0, false, 0.30, 0.10},
      {"offshore-wind", 400.0, 4375.0, 110.0, 0.0, -0.10, 0.0, false, 0.60, 0.05},
      {"solar-pv", 150.0, 1313.0, 15.3, 0.0, -0.10, 0.0, false, 0.20, 0.10},
  };
}

void GepOptions::validate() const {
  if (generators.empty()) throw ParameterError("GEP needs at least one generator type");
  for (const GeneratorType& g : generators) {
    if (g.capacity_mw <= 0.0) throw ParameterError("generator capacity must be positive");
    if (g.capital_per_kw < 0.0 || g.fixed_om_per_kw_year < 0.0 || g.variable_om_per_mwh < 0.0) {
      throw ParameterError("generator costs must be non-negative");
    }
    if (g.capital_growth <= -1.0 || g.variable_growth <= -1.0) {
      throw ParameterError("yearly cost change must exceed -100%");
    }
    if (g.cf_sd < 0.0 || g.cf_mean < 0.0 || g.cf_mean > 1.0) {
      throw ParameterError("capacity factor mean must lie in [0,1] with sd >= 0");
    }
  }
  if (subperiod_weights.empty() || subperiod_weights.size() != subperiod_shares.size()) {
    throw ParameterError("subperiod weights and shares must be non-empty and equally long");
  }
  if (std::any_of(subperiod_weights.begin(), subperiod_weights.end(),
                  [](double w) { return w < 0.0; }) ||
      std::any_of(subperiod_shares.begin(), subperiod_shares.end(),
                  [](double s) { return s < 0.0; })) {
    throw ParameterError("subperiod weights and shares must be non-negative");
  }
  const double share_sum = std::accumulate(subperiod_shares.begin(), subperiod_shares.end(), 0.0);
  if (std::abs(share_sum - 1.0) > 1e-9) throw ParameterError("subperiod shares must sum to 1");
  if (root_demand_mw < 0.0 || hours_per_year <= 0.0 || growth_sd < 0.0 || interest_rate <= -1.0 ||
      fuel_per_mwh < 0.0 || unserved_penalty < 0.0) {
    throw ParameterError("invalid GEP scalar parameter");
  }
  if (build_limit < 0) throw ParameterError("build limit must be non-negative");
  if (!initial_units.empty()) {
    if (initial_units.size() != generators.size()) {
      throw ParameterError("initial units need one entry per generator type");
    }
    if (std::any_of(initial_units.begin(), initial_units.end(), [](int u) { return u < 0; })) {
      throw ParameterError("initial units must be non-negative");
    }
  }
}

std::vector<int> GepOptions::resolved_initial_units() const {
  if (!initial_units.empty()) return initial_units;
  std::vector<int> units(generators.size(), 0);
  units[0] = static_cast<int>(std::ceil(root_demand_mw / generators[0].capacity_mw));
  return units;
}

GepData sample_gep(const ScenarioTree& tree, const GepOptions& options, std::uint64_t seed) {
  options.validate();
  Prng rng(seed);
  const std::size_t I = options.generators.size();
  const std::size_t K = options.subperiod_weights.size();
  const auto N = static_cast<std::size_t>(tree.num_nodes());
  GepData d;
  d.demand.assign(N, std::vector<double>(K, 0.0));
  d.capacity_factor.assign(N, std::vector<std::vector<double>>(I, std::vector<double>(K, 0.0)));

  auto draw_cf = [&](std::size_t n, std::size_t i, std::size_t k) {
    const GeneratorType& g = options.generators[i];
    double v = g.cf_sd > 0.0 ? rng.normal(g.cf_mean, g.cf_sd) : g.cf_mean;
    if (v < 0.0 || v > 1.0) {
      ++d.clamped_samples;
      v = std::clamp(v, 0.0, 1.0);
    }
    d.capacity_factor[n][i][k] = v;
  };

  for (std::size_t k = 0; k < K; ++k) d.demand[0][k] = options.subperiod_weights[k] * options.root_demand_mw;
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t k = 0; k < K; ++k) draw_cf(0, i, k);
  }
  for (NodeId n = 2; n <= tree.num_nodes(); ++n) {
    const auto a = static_cast<std::size_t>(tree.parent(n) - 1);
    const auto c = static_cast<std::size_t>(n - 1);
    for (std::size_t k = 0; k < K; ++k) {
      const double growth = rng.normal(options.growth_mean, options.growth_sd);
      d.demand[c][k] = (1.0 + growth) * d.demand[a][k];
      for (std::size_t i = 0; i < I; ++i) draw_cf(c, i, k);
    }
  }
  return d;
}

AmspInstance build_gep(const ScenarioTree& tree, const GepOptions& options, const GepData& data,
                       int mu) {
  options.validate();
  const int I = static_cast<int>(options.generators.size());
  const int K = static_cast<int>(options.subperiod_weights.size());
  const int T = tree.num_stages();
  const auto N = static_cast<std::size_t>(tree.num_nodes());
  if (data.demand.size() != N || data.capacity_factor.size() != N) {
    throw ParameterError("GEP data does not match the tree");
  }
  const std::vector<int> x0 = options.resolved_initial_units();
  constexpr double kw_per_mw = 1000.0;
  const double g = options.interest_rate;

  AmspInstance inst;
  inst.name = "gep";
  inst.tree = tree;
  inst.mu = mu;
  for (const GeneratorType& gen : options.generators) {
    StateVarSpec x;
    x.name = "build-" + gen.name;
    x.lower = 0.0;
    x.upper = options.build_limit;
    x.integer = true;
    x.big_m = options.build_limit;
    inst.state_vars.push_back(x);
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      inst.stage_vars.push_back(
          {"gen-" + options.generators[static_cast<std::size_t>(i)].name + "-k" +
           std::to_string(k + 1)});
    }
  }
  for (int k = 0; k < K; ++k) inst.stage_vars.push_back({"unserved-k" + std::to_string(k + 1)});

  inst.nodes.resize(N);
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    const auto c = static_cast<std::size_t>(n - 1);
    const Stage t = tree.stage(n);
    const double discount = std::pow(1.0 + g, -(t - 1));
    const std::vector<NodeId> path = tree.path_to_root(n);
    NodeData& nd = inst.node(n);
    nd.stage_cost.assign(static_cast<std::size_t>(I * K + K), 0.0);

    for (int i = 0; i < I; ++i) {
      const GeneratorType& gen = options.generators[static_cast<std::size_t>(i)];
      const double capital = gen.capital_per_kw * std::pow(1.0 + gen.capital_growth, t - 1);
      double fixed_om = 0.0;
      for (int s = t; s <= T; ++s) fixed_om += gen.fixed_om_per_kw_year / std::pow(1.0 + g, s - t);
      nd.state_cost.push_back(discount * (capital + fixed_om) * kw_per_mw * gen.capacity_mw);

      const double escalation = std::pow(1.0 + gen.variable_growth, t - 1);
      const double energy_cost =
          (gen.variable_om_per_mwh + (gen.uses_fuel ? options.fuel_per_mwh : 0.0)) * escalation;
      for (int k = 0; k < K; ++k) {
        const double hours = options.subperiod_shares[static_cast<std::size_t>(k)] *
                             options.hours_per_year;
        nd.stage_cost[static_cast<std::size_t>(i * K + k)] = discount * energy_cost * hours;

        const double cap =
            gen.capacity_mw * data.capacity_factor[c][static_cast<std::size_t>(i)]
                                                  [static_cast<std::size_t>(k)];
        NodeRow row{"capacity", {{n, VarBlock::stage, i * K + k, 1.0}}, RowSense::leq,
                    cap * x0[static_cast<std::size_t>(i)]};
        for (NodeId m : path) row.terms.push_back({m, VarBlock::state, i, -cap});
        nd.rows.push_back(std::move(row));
      }
    }
    for (int k = 0; k < K; ++k) {
      const double hours = options.subperiod_shares[static_cast<std::size_t>(k)] *
                           options.hours_per_year;
      nd.stage_cost[static_cast<std::size_t>(I * K + k)] =
          discount * options.unserved_penalty * hours;
      NodeRow row{"demand", {}, RowSense::geq, data.demand[c][static_cast<std::size_t>(k)]};
      for (int i = 0; i < I; ++i) row.terms.push_back({n, VarBlock::stage, i * K + k, 1.0});
      row.terms.push_back({n, VarBlock::stage, I * K + k, 1.0});
      nd.rows.push_back(std::move(row));
    }
  }
  inst.validate();
  return inst;
}

AmspInstance gen_gep(const ScenarioTree& tree, std::uint64_t seed, const GepOptions& options,
                     int mu) {
  AmspInstance inst = build_gep(tree, options, sample_gep(tree, options, seed), mu);
  inst.name = "gep-seed" + std::to_string(seed);
  return inst;
}

}  // namespace amsp
