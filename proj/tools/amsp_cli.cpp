// Command-line front end: NAC counting, instance generation, solving and experiment sweeps.
//
// Exit codes: 0 success, 2 invalid parameters, 3 solver failure, 4 enumeration guard exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amsp/decomposition.hpp"
#include "amsp/errors.hpp"
#include "amsp/harness.hpp"
#include "amsp/instance_io.hpp"
#include "amsp/nac.hpp"
#include "amsp/problems.hpp"
#include "amsp/solver.hpp"

namespace {

constexpr int kExitParameter = 2;
constexpr int kExitSolver = 3;
constexpr int kExitGuard = 4;

struct CommonArgs {
  std::string problem = "lotsizing";
  std::string instance;
  int T = 5;
  int B = 2;
  int I = 1;
  std::vector<int> mu;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<std::string> methods;
  double epsilon = 1e-3;
  int horizon_cut = 2;
  bool exact = false;
  bool no_heuristic = false;
  bool no_rub_gate = false;
  bool partial_revisions = false;
  double time_limit = 300.0;
  double mip_gap = 1e-6;
  double penalty = 10000.0;
  int build_limit = 20;
  std::string out;
  std::string solver = "default";
};

void add_problem_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--problem", a.problem, "lotsizing | gep | generic-file")
      ->check(CLI::IsMember({"lotsizing", "gep", "generic-file", "file"}));
  cmd->add_option("--instance", a.instance, "instance JSON (implies --problem generic-file)");
  cmd->add_option("--T", a.T, "number of stages")->check(CLI::PositiveNumber);
  cmd->add_option("--B", a.B, "branching factor")->check(CLI::PositiveNumber);
  cmd->add_option("--I", a.I, "lot-sizing sources")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seeds, "PRNG seed(s)");
  cmd->add_option("--penalty", a.penalty, "GEP unserved-energy penalty ($/MWh)");
  cmd->add_option("--build-limit", a.build_limit, "GEP units per type per node");
}

void add_solve_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--method", a.methods, "direct-full | direct-reduced | decomposition");
  cmd->add_option("--epsilon", a.epsilon, "decomposition relative gap");
  cmd->add_option("--horizon-cut", a.horizon_cut, "stages dropped for heuristic cuts");
  cmd->add_flag("--exact", a.exact, "decomposition without heuristic cuts or RUB gating");
  cmd->add_flag("--no-heuristic", a.no_heuristic, "skip heuristic cuts");
  cmd->add_flag("--no-rub-gate", a.no_rub_gate, "evaluate every schedule exactly");
  cmd->add_flag("--partial-revisions", a.partial_revisions,
                "let the master choose fewer than mu revisions");
  cmd->add_option("--time-limit", a.time_limit, "seconds per solve / decomposition run");
  cmd->add_option("--mip-gap", a.mip_gap, "relative MILP gap");
  cmd->add_option("--solver", a.solver, "MILP backend");
}

amsp::ExperimentConfig make_config(const CommonArgs& a) {
  amsp::ExperimentConfig c;
  c.problem = a.instance.empty() ? amsp::parse_problem(a.problem) : amsp::ProblemKind::file;
  c.instance_path = a.instance;
  c.num_stages = a.T;
  c.branching = a.B;
  c.num_states = a.I;
  if (c.problem == amsp::ProblemKind::file) {
    const amsp::AmspInstance inst = amsp::load_instance(c.instance_path);
    c.num_stages = inst.num_stages();
    c.branching = inst.tree.branching();
    c.num_states = inst.num_states();
  }
  c.mu_values = a.mu;
  c.seeds = a.seeds;
  if (!a.methods.empty()) {
    c.methods.clear();
    for (const std::string& m : a.methods) c.methods.push_back(amsp::parse_method(m));
  }
  c.decomposition = a.exact ? amsp::DecompositionConfig::exact() : amsp::DecompositionConfig{};
  c.decomposition.epsilon = a.epsilon;
  c.decomposition.horizon_cut = a.horizon_cut;
  if (a.no_heuristic) c.decomposition.heuristic = false;
  if (a.no_rub_gate) c.decomposition.rub_gate = false;
  if (a.partial_revisions) c.decomposition.full_revisions = false;
  c.decomposition.time_limit = a.time_limit;
  c.solve.time_limit = a.time_limit;
  c.solve.mip_gap = a.mip_gap;
  c.gep.unserved_penalty = a.penalty;
  c.gep.build_limit = a.build_limit;
  c.validate();
  return c;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw amsp::ParameterError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int exit_for(const amsp::Report& rep) {
  const std::size_t col = rep.column("status");
  for (const auto& row : rep.rows) {
    if (row[col] == "error" || row[col] == "infeasible" || row[col] == "unbounded") {
      return kExitSolver;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multistage stochastic programming toolkit"};
  app.require_subcommand(1);
  CommonArgs a;

  auto* count = app.add_subcommand("count-nacs", "NAC counts per (ancestor stage, stage) cell");
  std::string regime = "reduced";
  int count_mu = 0;
  count->add_option("--T", a.T)->required()->check(CLI::PositiveNumber);
  count->add_option("--B", a.B)->required()->check(CLI::PositiveNumber);
  count->add_option("--mu", count_mu, "revision budget");
  count->add_option("--I", a.I, "state components")->check(CLI::PositiveNumber);
  count->add_option("--regime", regime, "full | prop5 | prop5+6 | reduced");
  count->add_option("--out", a.out, "CSV output path");

  auto* gen = app.add_subcommand("gen", "write a generated instance as JSON");
  int gen_mu = 0;
  add_problem_options(gen, a);
  gen->add_option("--mu", gen_mu, "revision budget stored in the file");
  gen->add_option("--out", a.out, "instance JSON path");

  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string log_path;
  add_problem_options(solve, a);
  add_solve_options(solve, a);
  solve->add_option("--mu", a.mu, "revision budget");
  solve->add_option("--out", a.out, "CSV report path");
  solve->add_option("--log", log_path, "decomposition iteration log CSV");

  auto* sweep = app.add_subcommand("vams-sweep", "VAMS as a function of mu, averaged over seeds");
  add_problem_options(sweep, a);
  add_solve_options(sweep, a);
  sweep->add_option("--mu", a.mu, "mu values (default 0..T-1)");
  sweep->add_option("--out", a.out, "CSV report path");

  auto* enumerate = app.add_subcommand("enumerate-revisions", "solve every revision schedule");
  add_problem_options(enumerate, a);
  enumerate->add_option("--mu", a.mu, "mu values (default 0..T-1)");
  enumerate->add_option("--time-limit", a.time_limit, "seconds per solve");
  enumerate->add_option("--mip-gap", a.mip_gap, "relative MILP gap");
  enumerate->add_option("--solver", a.solver, "MILP backend");
  enumerate->add_option("--out", a.out, "CSV report path");

  auto* compare = app.add_subcommand("compare", "direct-full vs direct-reduced vs decomposition");
  add_problem_options(compare, a);
  add_solve_options(compare, a);
  compare->add_option("--mu", a.mu, "mu values");
  compare->add_option("--out", a.out, "CSV report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParameter;
  }

  try {
    if (count->parsed()) {
      const amsp::Report rep =
          amsp::count_nacs_report(a.T, a.B, count_mu, a.I, amsp::parse_nac_regime(regime));
      Output out(a.out);
      rep.write_csv(out.stream());
      return 0;
    }
    if (gen->parsed()) {
      a.mu = {gen_mu};
      if (a.seeds.size() != 1) throw amsp::ParameterError("gen takes exactly one seed");
      const amsp::ExperimentConfig c = make_config(a);
      const amsp::AmspInstance inst = c.make_instance(c.seeds.front(), gen_mu);
      Output out(a.out);
      amsp::write_instance(out.stream(), inst);
      return 0;
    }

    const auto solver = amsp::make_solver(a.solver);
    if (solve->parsed()) {
      if (a.mu.size() > 1) throw amsp::ParameterError("solve takes at most one mu");
      if (a.methods.size() > 1) throw amsp::ParameterError("solve takes one method");
      if (a.seeds.size() != 1) throw amsp::ParameterError("solve takes exactly one seed");
      if (a.mu.empty()) a.mu = {a.instance.empty() ? 1 : amsp::load_instance(a.instance).mu};
      const amsp::ExperimentConfig c = make_config(a);
      std::vector<amsp::MethodResult> results;
      const amsp::Report rep = amsp::compare_methods(c, *solver, &results);
      Output out(a.out);
      rep.write_csv(out.stream());
      if (!log_path.empty() && results.front().decomposition) {
        std::ofstream log(log_path);
        if (!log) throw amsp::ParameterError("cannot write " + log_path);
        results.front().decomposition->write_log_csv(log);
      }
      return exit_for(rep);
    }
    if (sweep->parsed()) {
      const amsp::Report rep = amsp::vams_sweep(make_config(a), *solver);
      Output out(a.out);
      rep.write_csv(out.stream());
      return exit_for(rep);
    }
    if (enumerate->parsed()) {
      const amsp::Report rep = amsp::enumerate_revisions(make_config(a), *solver);
      Output out(a.out);
      rep.write_csv(out.stream());
      return exit_for(rep);
    }
    if (compare->parsed()) {
      if (a.methods.empty()) a.methods = {"direct-full", "direct-reduced", "decomposition"};
      const amsp::Report rep = amsp::compare_methods(make_config(a), *solver);
      Output out(a.out);
      rep.write_csv(out.stream());
      return exit_for(rep);
    }
  } catch (const amsp::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const amsp::GuardExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const amsp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const amsp::InconsistencyError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
