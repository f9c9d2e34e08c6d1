#include "amsp/nac.hpp"

#include <algorithm>
#include <string>

#include "amsp/errors.hpp"

namespace amsp {
namespace {

void check_mu(int num_stages, int mu) {
  if (mu < 0 || mu > num_stages - 1) {
    throw ParameterError("revision budget mu=" + std::to_string(mu) + " outside [0, " +
                         std::to_string(num_stages - 1) + "]");
  }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ParameterError("NAC count overflows 64 bits");
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int k = 0; k < exp; ++k) out = checked_mul(out, base);
  return out;
}

void push(NacSet& set, int state, NodeId left, NodeId right, Stage t_prime, Stage t_a,
          NacDirection dir, double big_m) {
  set.constraints.push_back({state, left, right, t_prime, t_a, dir, big_m});
}

}  // namespace

std::string_view to_string(NacRegime regime) {
  switch (regime) {
    case NacRegime::full:
      return "full";
    case NacRegime::prop5:
      return "prop5";
    case NacRegime::prop56:
      return "prop5+6";
    case NacRegime::reduced:
      return "prop5+6+7";
  }
  return "?";
}

NacRegime parse_nac_regime(std::string_view text) {
  if (text == "full") return NacRegime::full;
  if (text == "prop5") return NacRegime::prop5;
  if (text == "prop5+6" || text == "prop56") return NacRegime::prop56;
  if (text == "prop5+6+7" || text == "prop567" || text == "reduced") return NacRegime::reduced;
  throw ParameterError("unknown NAC regime '" + std::string(text) + "'");
}

StageWindow ancestor_window(int num_stages, int mu, Stage t_prime) {
  return {std::max(1, t_prime - (num_stages - mu) + 1), t_prime};
}

NacCountMatrix::NacCountMatrix(int num_stages)
    : num_stages_(num_stages),
      cells_(static_cast<std::size_t>(num_stages + 1) * static_cast<std::size_t>(num_stages + 1),
             0) {}

std::uint64_t NacCountMatrix::at(Stage ancestor_stage, Stage t_prime) const {
  return cells_[static_cast<std::size_t>(ancestor_stage) * (num_stages_ + 1) + t_prime];
}

void NacCountMatrix::set(Stage ancestor_stage, Stage t_prime, std::uint64_t value) {
  cells_[static_cast<std::size_t>(ancestor_stage) * (num_stages_ + 1) + t_prime] = value;
}

std::uint64_t NacCountMatrix::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : cells_) {
    if (__builtin_add_overflow(sum, c, &sum)) throw ParameterError("NAC count overflows 64 bits");
  }
  return sum;
}

NacCountMatrix count_cells(int num_stages, int branching, NacRegime regime, int mu) {
  if (num_stages < 1 || branching < 1) throw ParameterError("T and B must be positive");
  check_mu(num_stages, mu);
  NacCountMatrix m(num_stages);
  if (branching == 1) return m;
  const auto b = static_cast<std::uint64_t>(branching);
  for (Stage tp = 2; tp <= num_stages; ++tp) {
    const StageWindow window = ancestor_window(num_stages, mu, tp);
    for (Stage ta = 1; ta < tp; ++ta) {
      std::uint64_t cell = 0;
      switch (regime) {
        case NacRegime::full: {
          // B^(ta-1) subtrees, each with C(K, 2) unordered pairs, two directions.
          const std::uint64_t k = checked_pow(b, tp - ta);
          const std::uint64_t pairs = (k % 2 == 0) ? checked_mul(k / 2, k - 1)
                                                   : checked_mul(k, (k - 1) / 2);
          cell = checked_mul(checked_mul(checked_pow(b, ta - 1), pairs), 2);
          break;
        }
        case NacRegime::prop5:
          cell = checked_pow(b, tp - 1);
          break;
        case NacRegime::prop56:
          cell = checked_pow(b, ta);
          break;
        case NacRegime::reduced:
          cell = window.contains(ta) ? checked_pow(b, ta) : 0;
          break;
      }
      m.set(ta, tp, cell);
    }
  }
  return m;
}

std::uint64_t count_total(int num_stages, int branching, NacRegime regime, int mu,
                          int num_states) {
  if (num_states < 0) throw ParameterError("state count must be nonnegative");
  return checked_mul(count_cells(num_stages, branching, regime, mu).total(),
                     static_cast<std::uint64_t>(num_states));
}

NacSet generate_nacs(const ScenarioTree& tree, NacRegime regime, int mu,
                     std::span<const double> big_m) {
  const int T = tree.num_stages();
  check_mu(T, mu);
  for (double m : big_m) {
    if (!(m > 0.0)) throw ParameterError("NAC big-M values must be positive");
  }
  NacSet set;
  set.regime = regime;
  if (tree.branching() == 1) return set;

  const int num_states = static_cast<int>(big_m.size());
  for (Stage tp = 2; tp <= T; ++tp) {
    const StageWindow window = ancestor_window(T, mu, tp);
    for (Stage ta = 1; ta < tp; ++ta) {
      if (regime == NacRegime::reduced && !window.contains(ta)) continue;
      for (NodeId l : tree.stage_nodes(ta)) {
        const NodeRange block = tree.subtree_stage_nodes(l, tp);
        for (int i = 0; i < num_states; ++i) {
          const double bm = big_m[static_cast<std::size_t>(i)];
          switch (regime) {
            case NacRegime::full:
              for (int a = 0; a < block.size; ++a) {
                for (int c = a + 1; c < block.size; ++c) {
                  push(set, i, block[a], block[c], tp, ta, NacDirection::geq, bm);
                  push(set, i, block[a], block[c], tp, ta, NacDirection::leq, bm);
                }
              }
              break;
            case NacRegime::prop5:
              for (int a = 0; a < block.size; ++a) {
                push(set, i, block[a], block[(a + 1) % block.size], tp, ta, NacDirection::geq,
                     bm);
              }
              break;
            case NacRegime::prop56:
            case NacRegime::reduced: {
              // Link the last node under each child to the first node under the next
              // child, cyclically; equality inside a child's block comes from deeper t_a.
              const NodeRange kids = tree.children(l);
              for (int j = 0; j < kids.size; ++j) {
                const NodeRange from = tree.subtree_stage_nodes(kids[j], tp);
                const NodeRange to = tree.subtree_stage_nodes(kids[(j + 1) % kids.size], tp);
                push(set, i, from.last(), to.first, tp, ta, NacDirection::geq, bm);
              }
              break;
            }
          }
        }
      }
    }
  }
  return set;
}

NacCountMatrix tally(const NacSet& set, int num_stages) {
  NacCountMatrix m(num_stages);
  for (const NacConstraint& c : set.constraints) {
    if (c.state != 0) continue;
    m.set(c.ancestor_stage, c.stage, m.at(c.ancestor_stage, c.stage) + 1);
  }
  return m;
}

}  // namespace amsp
