#include "amsp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "amsp/errors.hpp"
#include "amsp/instance_io.hpp"

namespace amsp {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::lotsizing:
      return "lotsizing";
    case ProblemKind::gep:
      return "gep";
    case ProblemKind::file:
      return "generic-file";
  }
  return "?";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::direct_full:
      return "direct-full";
    case Method::direct_reduced:
      return "direct-reduced";
    case Method::decomposition:
      return "decomposition";
  }
  return "?";
}

ProblemKind parse_problem(std::string_view text) {
  if (text == "lotsizing") return ProblemKind::lotsizing;
  if (text == "gep") return ProblemKind::gep;
  if (text == "generic-file" || text == "file") return ProblemKind::file;
  throw ParameterError("unknown problem '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
  if (text == "direct-full" || text == "full") return Method::direct_full;
  if (text == "direct-reduced" || text == "reduced") return Method::direct_reduced;
  if (text == "decomposition") return Method::decomposition;
  throw ParameterError("unknown method '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ParameterError("seed list must not be empty");
  if (methods.empty()) throw ParameterError("method list must not be empty");
  if (problem == ProblemKind::file && instance_path.empty()) {
    throw ParameterError("generic-file problem needs an instance path");
  }
  if (num_stages < 1 || branching < 1 || num_states < 1) {
    throw ParameterError("T, B and I must be positive");
  }
  for (int mu : mu_values) {
    if (mu < 0 || mu > num_stages - 1) {
      throw ParameterError("mu=" + std::to_string(mu) + " outside [0, " +
                           std::to_string(num_stages - 1) + "]");
    }
  }
  if (decomposition.epsilon <= 0.0) throw ParameterError("epsilon must be positive");
  if (problem == ProblemKind::gep) gep.validate();
}

std::vector<int> ExperimentConfig::resolved_mu_values() const {
  if (!mu_values.empty()) return mu_values;
  std::vector<int> all(static_cast<std::size_t>(num_stages));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::string ExperimentConfig::hash() const {
  std::ostringstream os;
  os << to_string(problem) << '|' << num_stages << '|' << branching << '|' << num_states << '|';
  for (int mu : mu_values) os << mu << ',';
  os << '|';
  for (std::uint64_t s : seeds) os << s << ',';
  os << '|';
  for (Method m : methods) os << to_string(m) << ',';
  os << '|' << instance_path << '|' << decomposition.epsilon << '|' << decomposition.horizon_cut
     << '|' << decomposition.heuristic << '|' << decomposition.rub_gate << '|' << decomposition.full_revisions << '|'
     << decomposition.time_limit << '|' << solve.time_limit << '|' << solve.mip_gap << '|'
     << gep.unserved_penalty << '|' << gep.build_limit << '|' << gep.interest_rate;
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AmspInstance ExperimentConfig::make_instance(std::uint64_t seed, int mu) const {
  switch (problem) {
    case ProblemKind::lotsizing:
      return gen_lotsizing(ScenarioTree::uniform(num_stages, branching), num_states, seed, mu);
    case ProblemKind::gep:
      return gen_gep(ScenarioTree::uniform(num_stages, branching), seed, gep, mu);
    case ProblemKind::file: {
      AmspInstance inst = load_instance(instance_path);
      inst.mu = mu;
      inst.validate();
      return inst;
    }
  }
  throw ParameterError("unknown problem kind");
}

// ---------------------------------------------------------------------------------------

void Report::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("report row width mismatch");
  rows.push_back(std::move(row));
}

namespace {

void write_field(std::ostream& os, const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) {
    os << v;
    return;
  }
  os << '"';
  for (char c : v) os << (c == '"' ? "\"\"" : std::string(1, c));
  os << '"';
}

void write_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) os << ',';
    write_field(os, fields[k]);
  }
  os << '\n';
}

}  // namespace

void Report::write_csv(std::ostream& os) const {
  write_line(os, columns);
  for (const auto& r : rows) write_line(os, r);
}

std::size_t Report::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + std::string(name));
  return static_cast<std::size_t>(it - columns.begin());
}

const std::string& Report::cell(std::size_t row, std::string_view name) const {
  return rows.at(row).at(column(name));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------------------------------

DirectResult solve_formulation(const Formulation& f, Solver& solver, const SolveOptions& options) {
  const SolveOutcome out = solver.solve_milp(f.model, options);
  DirectResult r;
  r.status = out.status;
  r.objective = out.objective;
  r.gap = out.mip_gap;
  r.wall_seconds = out.wall_seconds;
  r.nac_count = f.nacs.size();
  if (out.has_solution() && f.has_revisions()) r.schedule = f.schedule(out.primal);
  return r;
}

References solve_references(const AmspInstance& instance, Solver& solver,
                            const SolveOptions& options) {
  return {solve_formulation(build_2sp(instance), solver, options),
          solve_formulation(build_msp(instance), solver, options)};
}

MethodResult run_method(const AmspInstance& instance, Method method, const ExperimentConfig& config,
                        Solver& solver) {
  MethodResult m;
  m.method = method;
  switch (method) {
    case Method::direct_full:
      m.result = solve_formulation(build_ams(instance, {.regime = NacRegime::full}), solver,
                                   config.solve);
      break;
    case Method::direct_reduced:
      m.result = solve_formulation(build_ams(instance, {.regime = NacRegime::reduced}), solver,
                                   config.solve);
      if (m.result.schedule) m.result.schedule = pad_revisions(*m.result.schedule, instance.mu);
      break;
    case Method::decomposition: {
      DecompositionConfig dc = config.decomposition;
      dc.mip_gap = config.solve.mip_gap;
      DecompositionState st = run_decomposition(instance, dc, solver);
      DirectResult& r = m.result;
      r.objective = st.ub;
      r.gap = st.gap();
      r.wall_seconds = st.wall_seconds;
      r.nac_count = count_total(instance.num_stages(), instance.tree.branching(), NacRegime::reduced,
                                 instance.mu, instance.num_states());
      if (st.incumbent) r.schedule = pad_revisions(*st.incumbent, instance.mu);
      switch (st.status) {
        case DecompositionStatus::converged:
          r.status = SolveStatus::optimal;
          break;
        case DecompositionStatus::time_limit:
        case DecompositionStatus::iteration_limit:
          r.status = st.incumbent ? SolveStatus::time_limit_feasible
                                  : SolveStatus::time_limit_no_solution;
          break;
        case DecompositionStatus::solver_failure:
          r.status = SolveStatus::error;
          break;
      }
      m.decomposition = std::move(st);
      break;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------------------

Report count_nacs_report(int num_stages, int branching, int mu, int num_states, NacRegime regime) {
  if (num_states < 1) throw ParameterError("I must be positive");
  const NacCountMatrix cells = count_cells(num_stages, branching, regime, mu);
  Report rep;
  rep.columns = {"regime", "T", "B", "mu", "I", "ancestor_stage"};
  for (Stage t = 2; t <= num_stages; ++t) rep.columns.push_back("t" + std::to_string(t));
  rep.columns.push_back("row_total");
  const std::string head[] = {std::string(to_string(regime)), std::to_string(num_stages),
                              std::to_string(branching), std::to_string(mu),
                              std::to_string(num_states)};
  for (Stage ta = 1; ta < num_stages; ++ta) {
    std::vector<std::string> row(std::begin(head), std::end(head));
    row.push_back(std::to_string(ta));
    std::uint64_t sum = 0;
    for (Stage t = 2; t <= num_stages; ++t) {
      const std::uint64_t v = t > ta ? cells.at(ta, t) : 0;
      sum += v;
      row.push_back(t > ta ? std::to_string(v) : "");
    }
    row.push_back(std::to_string(sum));
    rep.add(std::move(row));
  }
  std::vector<std::string> total(std::begin(head), std::end(head));
  total.push_back("total");
  for (Stage t = 2; t <= num_stages; ++t) total.push_back("");
  total.push_back(std::to_string(count_total(num_stages, branching, regime, mu, num_states)));
  rep.add(std::move(total));
  return rep;
}

namespace {

std::string status_text(SolveStatus s) { return std::string(to_string(s)); }

}  // namespace

Report vams_sweep(const ExperimentConfig& config, Solver& solver) {
  config.validate();
  const std::string hash = config.hash();
  const Method method = config.methods.front();
  Report rep;
  rep.columns = {"seed",  "config_hash", "problem", "T",        "B",      "I",
                 "mu",    "method",      "z_2sp",   "z_msp",    "z_ams",  "vams",
                 "revision_stages", "status", "gap", "wall_seconds", "flag"};
  const std::vector<int> mus = config.resolved_mu_values();
  std::map<int, std::vector<double>> accepted;

  for (std::uint64_t seed : config.seeds) {
    AmspInstance inst = config.make_instance(seed, 0);
    const References refs = solve_references(inst, solver, config.solve);
    double previous = kInfinity;
    int previous_mu = -1;
    for (int mu : mus) {
      inst.mu = mu;
      const MethodResult m = run_method(inst, method, config, solver);
      const DirectResult& r = m.result;
      std::string flag;
      std::string vams_text = "";
      const bool ok = refs.ok() && r.status == SolveStatus::optimal;
      if (!ok) {
        flag = "non-optimal-reference";
      } else {
        try {
          const Vams v = vams(refs.two_stage.objective, r.objective, refs.multistage.objective);
          vams_text = format_double(v.percent);
          if (v.degenerate) flag = "degenerate";
          accepted[mu].push_back(v.percent);
        } catch (const InconsistencyError&) {
          flag = "inconsistent-ordering";
        }
        if (previous_mu >= 0 && mu > previous_mu &&
            r.objective > previous + objective_tolerance(r.objective, previous)) {
          flag += flag.empty() ? "non-monotone" : "+non-monotone";
        }
        previous = r.objective;
        previous_mu = mu;
      }
      rep.add({std::to_string(seed), hash, std::string(to_string(config.problem)),
               std::to_string(inst.num_stages()), std::to_string(inst.tree.branching()),
               std::to_string(inst.num_states()), std::to_string(mu),
               std::string(to_string(method)), format_double(refs.two_stage.objective),
               format_double(refs.multistage.objective), format_double(r.objective), vams_text,
               r.schedule ? r.schedule->to_string() : "", status_text(r.status),
               format_double(r.gap), format_double(r.wall_seconds), flag});
    }
  }
  for (int mu : mus) {
    const std::vector<double>& v = accepted[mu];
    const std::string mean =
        v.empty() ? "" : format_double(std::accumulate(v.begin(), v.end(), 0.0) / v.size());
    rep.add({"mean", hash, std::string(to_string(config.problem)),
             std::to_string(config.num_stages), std::to_string(config.branching),
             std::to_string(config.num_states), std::to_string(mu),
             std::string(to_string(method)), "", "", "", mean, "", "", "", "",
             "averaged-over-" + std::to_string(v.size())});
  }
  return rep;
}

Report enumerate_revisions(const ExperimentConfig& config, Solver& solver) {
  config.validate();
  const std::string hash = config.hash();
  Report rep;
  rep.columns = {"seed", "config_hash", "mu",  "schedule", "objective", "vams",
                 "best", "status",      "gap", "wall_seconds"};
  for (std::uint64_t seed : config.seeds) {
    AmspInstance inst = config.make_instance(seed, 0);
    std::map<int, std::vector<RevisionSchedule>> schedules;
    for (int mu : config.resolved_mu_values()) {
      schedules[mu] =
          enumerate_schedules(inst.num_states(), inst.num_stages(), mu, /*exactly_mu=*/true);
    }
    const References refs = solve_references(inst, solver, config.solve);
    for (int mu : config.resolved_mu_values()) {
      inst.mu = mu;
      const std::vector<RevisionSchedule>& all = schedules[mu];
      std::vector<DirectResult> results;
      double best = kInfinity;
      for (const RevisionSchedule& s : all) {
        results.push_back(
            solve_formulation(fix_revisions(inst, s, /*relaxed=*/false), solver, config.solve));
        if (results.back().status == SolveStatus::optimal) {
          best = std::min(best, results.back().objective);
        }
      }
      auto vams_text = [&](const DirectResult& r) -> std::string {
        if (!refs.ok() || r.status != SolveStatus::optimal) return "";
        try {
          return format_double(
              vams(refs.two_stage.objective, r.objective, refs.multistage.objective).percent);
        } catch (const InconsistencyError&) {
          return "";
        }
      };
      for (std::size_t k = 0; k < all.size(); ++k) {
        const DirectResult& r = results[k];
        const bool is_best = r.status == SolveStatus::optimal && objectives_agree(r.objective, best);
        rep.add({std::to_string(seed), hash, std::to_string(mu), all[k].to_string(),
                 format_double(r.objective), vams_text(r), is_best ? "1" : "0",
                 status_text(r.status), format_double(r.gap), format_double(r.wall_seconds)});
      }
      const DirectResult direct =
          solve_formulation(build_ams(inst), solver, config.solve);
      const bool direct_best =
          direct.status == SolveStatus::optimal && objectives_agree(direct.objective, best);
      rep.add({std::to_string(seed), hash, std::to_string(mu), "direct",
               format_double(direct.objective), vams_text(direct), direct_best ? "1" : "0",
               status_text(direct.status), format_double(direct.gap),
               format_double(direct.wall_seconds)});
    }
  }
  return rep;
}

Report compare_methods(const ExperimentConfig& config, Solver& solver,
                       std::vector<MethodResult>* all_results) {
  config.validate();
  const std::string hash = config.hash();
  Report rep;
  rep.columns = {"seed",      "config_hash", "problem",      "T",         "B",
                 "I",         "mu",          "method",       "objective", "status",
                 "gap",       "wall_seconds", "time_ratio",  "nac_count", "revision_stages",
                 "iterations", "agree",      "flag"};
  for (std::uint64_t seed : config.seeds) {
    for (int mu : config.resolved_mu_values()) {
      const AmspInstance inst = config.make_instance(seed, mu);
      std::vector<MethodResult> results;
      for (Method m : config.methods) results.push_back(run_method(inst, m, config, solver));
      const DirectResult& base = results.front().result;
      for (const MethodResult& m : results) {
        const DirectResult& r = m.result;
        const bool both = base.status == SolveStatus::optimal && r.status == SolveStatus::optimal;
        // Decomposition stops at relative gap epsilon, so agreement is judged at that level.
        const double tol = m.method == Method::decomposition || results.front().method == Method::decomposition
                               ? config.decomposition.epsilon * std::max(1.0, std::abs(base.objective))
                               : objective_tolerance(base.objective, r.objective);
        const bool agree = both && std::abs(base.objective - r.objective) <= tol;
        std::string flag;
        if (r.status == SolveStatus::time_limit_feasible ||
            r.status == SolveStatus::time_limit_no_solution) {
          flag = "time-limit";
        }
        rep.add({std::to_string(seed), hash, std::string(to_string(config.problem)),
                 std::to_string(inst.num_stages()), std::to_string(inst.tree.branching()),
                 std::to_string(inst.num_states()), std::to_string(mu),
                 std::string(to_string(m.method)), format_double(r.objective),
                 status_text(r.status), format_double(r.gap), format_double(r.wall_seconds),
                 format_double(base.wall_seconds > 0 ? r.wall_seconds / base.wall_seconds : 0.0),
                 std::to_string(r.nac_count), r.schedule ? r.schedule->to_string() : "",
                 m.decomposition ? std::to_string(m.decomposition->log.size()) : "",
                 both ? (agree ? "1" : "0") : "", flag});
      }
      if (all_results != nullptr) {
        for (MethodResult& m : results) all_results->push_back(std::move(m));
      }
    }
  }
  return rep;
}

}  // namespace amsp
