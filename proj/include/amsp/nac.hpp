#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "amsp/scenario_tree.hpp"

namespace amsp {

/// Which non-anticipativity constraints are generated.
enum class NacRegime {
  full,       ///< every node pair of every subtree, both directions
  prop5,      ///< cyclic consecutive pairs of every subtree
  prop56,     ///< cyclic pairs linked only at their last common ancestor stage
  reduced,    ///< prop56 restricted to the mu-dependent ancestor window
};

std::string_view to_string(NacRegime regime);
/// Accepts "full", "prop5", "prop5+6", "prop5+6+7" and "reduced" (alias of prop5+6+7).
NacRegime parse_nac_regime(std::string_view text);

enum class NacDirection { geq, leq };

/// One linear non-anticipativity inequality for state component `state`:
///
///   geq:  x[state, left] >= x[state, right] - big_m * (r[state, stage] - r[state, ancestor_stage])
///   leq:  x[state, left] <= x[state, right] + big_m * (r[state, stage] - r[state, ancestor_stage])
struct NacConstraint {
  int state = 0;  // 0-based state component
  NodeId left = 0;
  NodeId right = 0;
  Stage stage = 0;
  Stage ancestor_stage = 0;
  NacDirection direction = NacDirection::geq;
  double big_m = 1.0;
};

struct NacSet {
  NacRegime regime = NacRegime::reduced;
  std::vector<NacConstraint> constraints;

  std::size_t size() const { return constraints.size(); }
};

/// Ancestor stages t_a whose NACs survive for constraint stage t' under revision budget mu:
/// {max(1, t' - (T - mu) + 1), ..., t' - 1}. Returned as a half-open [first, last) pair.
struct StageWindow {
  Stage first = 1;
  Stage last = 1;  // exclusive
  bool contains(Stage t) const { return t >= first && t < last; }
  bool empty() const { return first >= last; }
};
StageWindow ancestor_window(int num_stages, int mu, Stage t_prime);

/// Per-(t_a, t') constraint counts for a single state component (I = 1).
class NacCountMatrix {
 public:
  explicit NacCountMatrix(int num_stages);
  int num_stages() const { return num_stages_; }
  std::uint64_t at(Stage ancestor_stage, Stage t_prime) const;
  void set(Stage ancestor_stage, Stage t_prime, std::uint64_t value);
  /// Sum of all cells; throws ParameterError on 64-bit overflow.
  std::uint64_t total() const;

 private:
  int num_stages_;
  std::vector<std::uint64_t> cells_;
};

/// Closed-form cell counts. Cells are nonzero only for t_a < t'. A degenerate chain
/// (B = 1) has no distinct node pairs and therefore no constraints.
NacCountMatrix count_cells(int num_stages, int branching, NacRegime regime, int mu);

/// Total count for `num_states` state components (closed form, overflow-checked).
std::uint64_t count_total(int num_stages, int branching, NacRegime regime, int mu,
                          int num_states);

/// Enumerates constraints. `big_m` has one entry per state component.
NacSet generate_nacs(const ScenarioTree& tree, NacRegime regime, int mu,
                     std::span<const double> big_m);
inline NacSet generate_full_nacs(const ScenarioTree& tree, int mu, std::span<const double> big_m) {
  return generate_nacs(tree, NacRegime::full, mu, big_m);
}
inline NacSet generate_reduced_nacs(const ScenarioTree& tree, int mu,
                                    std::span<const double> big_m) {
  return generate_nacs(tree, NacRegime::reduced, mu, big_m);
}

/// Per-cell counts of an enumerated set (single state component 0).
NacCountMatrix tally(const NacSet& set, int num_stages);

}  // namespace amsp
