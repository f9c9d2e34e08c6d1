#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "amsp/decomposition.hpp"
#include "amsp/formulation.hpp"
#include "amsp/instance.hpp"
#include "amsp/nac.hpp"
#include "amsp/problems.hpp"
#include "amsp/solver.hpp"

namespace amsp {

enum class ProblemKind { lotsizing, gep, file };
enum class Method { direct_full, direct_reduced, decomposition };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(Method method);
ProblemKind parse_problem(std::string_view text);
Method parse_method(std::string_view text);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::lotsizing;
  int num_stages = 5;
  int branching = 2;
  int num_states = 1;                // sources for lot-sizing; ignored otherwise
  std::vector<int> mu_values = {1};  // empty means 0..T-1
  std::vector<std::uint64_t> seeds = {1};
  std::vector<Method> methods = {Method::direct_reduced};
  std::string instance_path;  // ProblemKind::file
  GepOptions gep;
  DecompositionConfig decomposition;
  SolveOptions solve;

  /// Throws ParameterError on an empty seed list, mu outside [0, T-1], or a missing path.
  void validate() const;
  std::vector<int> resolved_mu_values() const;
  /// 16-hex-digit FNV-1a digest of a canonical text rendering of the config.
  std::string hash() const;
  AmspInstance make_instance(std::uint64_t seed, int mu) const;
};

/// Column-named CSV table. The first output line is the header.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  void write_csv(std::ostream& os) const;
  /// Column position by name; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;
  const std::string& cell(std::size_t row, std::string_view name) const;
};

std::string format_double(double v);

struct DirectResult {
  SolveStatus status = SolveStatus::error;
  double objective = 0.0;
  double gap = 0.0;
  double wall_seconds = 0.0;
  std::optional<RevisionSchedule> schedule;
  std::size_t nac_count = 0;
};

DirectResult solve_formulation(const Formulation& f, Solver& solver, const SolveOptions& options);

struct References {
  DirectResult two_stage;
  DirectResult multistage;
  bool ok() const { return two_stage.status == SolveStatus::optimal &&
                           multistage.status == SolveStatus::optimal; }
};

References solve_references(const AmspInstance& instance, Solver& solver,
                            const SolveOptions& options);

/// One method on one instance; decomposition fills `decomposition`.
struct MethodResult {
  Method method = Method::direct_reduced;
  DirectResult result;
  std::optional<DecompositionState> decomposition;
};

MethodResult run_method(const AmspInstance& instance, Method method, const ExperimentConfig& config,
                        Solver& solver);

/// Per-cell NAC counts (one row per ancestor stage) followed by a totals row.
Report count_nacs_report(int num_stages, int branching, int mu, int num_states, NacRegime regime);

/// For each seed: 2SP, MSP and AMS_mu for every mu, then a mean row per mu over seeds whose
/// three reference solves were optimal.
Report vams_sweep(const ExperimentConfig& config, Solver& solver);

/// Fixed-revision solves for every schedule of exactly mu revisions per state.
Report enumerate_revisions(const ExperimentConfig& config, Solver& solver);

/// Runs every configured method on the same instances and reports agreement and timing.
/// When `results` is given, every MethodResult is appended to it in row order.
Report compare_methods(const ExperimentConfig& config, Solver& solver,
                       std::vector<MethodResult>* results = nullptr);

}  // namespace amsp
