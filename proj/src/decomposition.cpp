#include "amsp/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "amsp/errors.hpp"

namespace amsp {

std::string_view to_string(CutKind kind) {
  switch (kind) {
    case CutKind::lshaped:
      return "lshaped";
    case CutKind::benders:
      return "benders";
    case CutKind::heuristic:
      return "heuristic";
  }
  return "?";
}

std::string_view to_string(DecompositionStatus status) {
  switch (status) {
    case DecompositionStatus::converged:
      return "converged";
    case DecompositionStatus::time_limit:
      return "time-limit";
    case DecompositionStatus::iteration_limit:
      return "iteration-limit";
    case DecompositionStatus::solver_failure:
      return "solver-failure";
  }
  return "?";
}

double Cut::rhs(const RevisionSchedule& r) const {
  double v = constant;
  for (const Term& t : terms) v += t.coef * r.at(t.state, t.stage);
  return v;
}

bool Cut::satisfied(const RevisionSchedule& r, double theta, double tol) const {
  const double lhs = theta_coef * theta;
  const double right = rhs(r);
  return lhs >= right - tol * std::max({1.0, std::abs(lhs), std::abs(right)});
}

Cut lshaped_cut(const RevisionSchedule& rbar, double q_value, double lower_bound) {
  if (q_value < lower_bound - objective_tolerance(q_value, lower_bound)) {
    throw InconsistencyError("subproblem value " + std::to_string(q_value) +
                             " is below the lower bound " + std::to_string(lower_bound));
  }
  q_value = std::max(q_value, lower_bound);
  const double scale = q_value - lower_bound;

  // theta >= scale * ( sum_{t in Y} (r_t - r_{t-1} - 1) - sum_{t not in Y} (r_t - r_{t-1}) ) + Q
  Cut cut;
  cut.kind = CutKind::lshaped;
  cut.generator = rbar;
  cut.generator_value = q_value;
  cut.constant = q_value;
  std::map<std::pair<int, Stage>, double> coef;
  for (int i = 0; i < rbar.num_states(); ++i) {
    for (Stage t = 2; t <= rbar.num_stages(); ++t) {
      const bool revised = rbar.at(i, t) - rbar.at(i, t - 1) == 1;
      const double sign = revised ? 1.0 : -1.0;
      coef[{i, t}] += sign * scale;
      coef[{i, t - 1}] -= sign * scale;
      if (revised) cut.constant -= scale;
    }
  }
  for (const auto& [key, c] : coef) {
    if (c != 0.0) cut.terms.push_back({key.first, key.second, c});
  }
  return cut;
}

Cut benders_cut(const Formulation& rsp, const SolveOutcome& lp, const RevisionSchedule& rbar) {
  if (!lp.optimal() || !lp.has_duals()) {
    throw SolverError("Benders cut needs an optimal relaxed subproblem with duals");
  }
  Cut cut;
  cut.kind = CutKind::benders;
  cut.generator = rbar;
  cut.generator_value = lp.objective;
  cut.constant = lp.objective;
  std::map<std::pair<int, Stage>, double> coef;
  for (std::size_t k = 0; k < rsp.nacs.size(); ++k) {
    const NacConstraint& c = rsp.nacs[k];
    const double dual = lp.duals.at(static_cast<std::size_t>(rsp.nac_rows[k]));
    // rhs = -M * gap for >= rows, +M * gap for <= rows.
    const double slope =
        dual * (c.direction == NacDirection::geq ? -c.big_m : c.big_m);  // dQ/dgap
    if (slope == 0.0) continue;
    const double gap_bar = rbar.at(c.state, c.stage) - rbar.at(c.state, c.ancestor_stage);
    cut.constant -= slope * gap_bar;
    coef[{c.state, c.stage}] += slope;
    coef[{c.state, c.ancestor_stage}] -= slope;
  }
  for (const auto& [key, c] : coef) {
    if (c != 0.0) cut.terms.push_back({key.first, key.second, c});
  }
  return cut;
}

HeuristicCuts heuristic_cuts(const AmspInstance& instance, int horizon_cut, Solver& solver,
                             const SolveOptions& options) {
  const int T = instance.num_stages();
  if (horizon_cut < 1 || horizon_cut > T - 1) {
    throw ParameterError("horizon cut must lie in [1, T-1]");
  }
  const int short_T = T - horizon_cut;
  const int I = instance.num_states();
  HeuristicCuts out;

  RevisionSchedule lower(I, short_T);
  if (short_T > 1) {
    const AmspInstance shorter = instance.truncated(short_T);
    const Formulation f = build_ams(shorter, {});
    const SolveOutcome res = solver.solve_milp(f.model, options);
    if (!res.has_solution()) {
      out.warning = "truncated-horizon solve failed (" + std::string(to_string(res.status)) +
                    "); no heuristic cuts added";
      return out;
    }
    lower = f.schedule(res.primal);
  }

  RevisionSchedule start(I, T);
  for (int i = 0; i < I; ++i) {
    for (Stage t = 1; t <= T; ++t) start.set(i, t, lower.at(i, std::min(t, short_T)));
    for (Stage t = 1; t <= short_T; ++t) {
      Cut cut;
      cut.kind = CutKind::heuristic;
      cut.theta_coef = 0.0;
      cut.constant = lower.at(i, t);
      cut.terms.push_back({i, t, -1.0});
      cut.generator = start;
      out.cuts.push_back(std::move(cut));
    }
  }
  for (Cut& c : out.cuts) c.generator = start;
  out.start = std::move(start);
  return out;
}

MasterResult solve_master(int num_states, int num_stages, int mu, double lower_bound,
                          const std::vector<const std::vector<Cut>*>& pools, Solver& solver,
                          const SolveOptions& options, const RevisionSchedule* warm_start,
                          bool full_revisions) {
  Formulation f;
  f.num_states = num_states;
  f.num_stages = num_stages;
  const VarId theta = f.model.add_variable("theta", lower_bound, kInfinity, false, 1.0);
  for (int i = 0; i < num_states; ++i) {
    for (Stage t = 1; t <= num_stages; ++t) {
      const double ub = t == 1 ? 0.0 : std::min(t - 1, mu);
      const double lb = full_revisions && t == num_stages ? ub : 0.0;
      f.r_vars.push_back(f.model.add_variable(
          "r" + std::to_string(i + 1) + "_" + std::to_string(t), lb, ub, true));
    }
    for (Stage t = 1; t < num_stages; ++t) {
      f.model.add_row("rmono", {{f.r(i, t + 1), 1.0}, {f.r(i, t), -1.0}}, RowSense::geq, 0.0);
      f.model.add_row("rstep", {{f.r(i, t + 1), 1.0}, {f.r(i, t), -1.0}}, RowSense::leq, 1.0);
    }
  }
  for (const std::vector<Cut>* pool : pools) {
    for (const Cut& cut : *pool) {
      std::vector<LinearTerm> terms;
      terms.reserve(cut.terms.size() + 1);
      if (cut.theta_coef != 0.0) terms.push_back({theta, cut.theta_coef});
      for (const Cut::Term& t : cut.terms) terms.push_back({f.r(t.state, t.stage), -t.coef});
      f.model.add_row(std::string(to_string(cut.kind)), std::move(terms), RowSense::geq,
                      cut.constant);
    }
  }

  SolveOptions opts = options;
  if (warm_start != nullptr) {
    opts.warm_start.assign(static_cast<std::size_t>(f.model.num_variables()), 0.0);
    for (int i = 0; i < num_states; ++i) {
      for (Stage t = 1; t <= num_stages; ++t) {
        opts.warm_start[static_cast<std::size_t>(f.r(i, t))] = warm_start->at(i, t);
      }
    }
    // theta is left to the engine to repair.
    opts.warm_start[static_cast<std::size_t>(theta)] = lower_bound;
  }
  const SolveOutcome res = solver.solve_milp(f.model, opts);
  MasterResult out;
  out.status = res.status;
  if (!res.has_solution()) return out;
  out.schedule = f.schedule(res.primal);
  out.lb = res.optimal() ? res.objective : res.bound;
  return out;
}

double DecompositionState::gap() const {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInfinity;
  return (ub - lb) / std::max(std::abs(ub), 1e-12);
}

void DecompositionState::write_log_csv(std::ostream& os) const {
  os << "iteration,lb,ub,rub,gap,lshaped_cuts,benders_cuts,heuristic_cuts,wall_seconds,schedule\n";
  for (const IterationRecord& r : log) {
    os << r.iteration << ',' << r.lb << ',' << r.ub << ',' << r.rub << ',' << r.gap << ','
       << r.lshaped_cuts << ',' << r.benders_cuts << ',' << r.heuristic_cuts << ','
       << r.wall_seconds << ",\"" << r.schedule << "\"\n";
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

DecompositionState run_decomposition(const AmspInstance& instance,
                                     const DecompositionConfig& config, Solver& solver) {
  instance.validate();
  const auto start = Clock::now();
  const int I = instance.num_states();
  const int T = instance.num_stages();

  DecompositionState state;
  state.epsilon = config.epsilon;

  auto options = [&]() {
    SolveOptions o;
    o.mip_gap = config.mip_gap;
    o.time_limit = std::max(1.0, config.time_limit - seconds_since(start));
    return o;
  };

  const SolveOutcome msp = solver.solve_milp(build_msp(instance).model, options());
  if (!msp.optimal()) {
    state.status = msp.status == SolveStatus::time_limit_feasible ||
                           msp.status == SolveStatus::time_limit_no_solution
                       ? DecompositionStatus::time_limit
                       : DecompositionStatus::solver_failure;
    state.warning = "multistage bound solve: " + std::string(to_string(msp.status));
    state.wall_seconds = seconds_since(start);
    return state;
  }
  state.lower_bound = msp.objective;

  RevisionSchedule rbar(I, T);
  if (config.heuristic && T >= 2) {
    HeuristicCuts h = heuristic_cuts(instance, std::min(config.horizon_cut, T - 1), solver,
                                     options());
    state.warning = h.warning;
    state.heuristic = std::move(h.cuts);
    if (h.start) rbar = *h.start;
  }
  if (config.full_revisions) rbar = pad_revisions(rbar, instance.mu);

  std::set<RevisionSchedule> visited;
  std::set<RevisionSchedule> evaluated;
  const std::vector<const std::vector<Cut>*> pools_all = {&state.lshaped, &state.benders,
                                                          &state.heuristic};
  const std::vector<const std::vector<Cut>*> pools_exact = {&state.lshaped, &state.benders};

  state.status = DecompositionStatus::iteration_limit;
  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    if (seconds_since(start) > config.time_limit) {
      state.status = DecompositionStatus::time_limit;
      break;
    }

    const Formulation rsp = fix_revisions(instance, rbar, /*relaxed=*/true);
    const SolveOutcome lp = solver.solve_lp_with_duals(rsp.model, options());
    if (!lp.optimal()) {
      state.status = DecompositionStatus::solver_failure;
      state.warning = "relaxed subproblem: " + std::string(to_string(lp.status));
      break;
    }
    state.benders.push_back(benders_cut(rsp, lp, rbar));

    // A schedule seen before without exact evaluation would repeat forever under gating.
    const bool revisit = visited.contains(rbar);
    visited.insert(rbar);
    const bool gate_open = !config.rub_gate || lp.objective <= state.rub || revisit;
    if (gate_open && !evaluated.contains(rbar)) {
      state.rub = config.rub_gate ? lp.objective : std::min(state.rub, lp.objective);
      const Formulation sp = fix_revisions(instance, rbar, /*relaxed=*/false);
      const SolveOutcome q = solver.solve_milp(sp.model, options());
      if (!q.has_solution()) {
        state.status = q.status == SolveStatus::time_limit_no_solution
                           ? DecompositionStatus::time_limit
                           : DecompositionStatus::solver_failure;
        state.warning = "subproblem: " + std::string(to_string(q.status));
        break;
      }
      evaluated.insert(rbar);
      state.lshaped.push_back(lshaped_cut(rbar, q.objective, state.lower_bound));
      if (q.objective <= state.ub) {
        state.ub = q.objective;
        state.incumbent = rbar;
      }
    }

    MasterResult master =
        solve_master(I, T, instance.mu, state.lower_bound, pools_all, solver, options(),
                     state.incumbent ? &*state.incumbent : nullptr, config.full_revisions);
    if (master.status == SolveStatus::infeasible && !state.heuristic.empty()) {
      state.warning = "master infeasible with heuristic cuts; heuristic cuts dropped";
      state.heuristic.clear();
      master = solve_master(I, T, instance.mu, state.lower_bound, pools_exact, solver, options(),
                            state.incumbent ? &*state.incumbent : nullptr, config.full_revisions);
    }
    if (master.status != SolveStatus::optimal) {
      state.status = master.status == SolveStatus::time_limit_feasible ||
                             master.status == SolveStatus::time_limit_no_solution
                         ? DecompositionStatus::time_limit
                         : DecompositionStatus::solver_failure;
      state.warning = "master: " + std::string(to_string(master.status));
      break;
    }
    state.lb = std::max(state.lb, master.lb);

    IterationRecord rec;
    rec.iteration = iteration;
    rec.lb = state.lb;
    rec.ub = state.ub;
    rec.rub = state.rub;
    rec.gap = state.gap();
    rec.lshaped_cuts = static_cast<int>(state.lshaped.size());
    rec.benders_cuts = static_cast<int>(state.benders.size());
    rec.heuristic_cuts = static_cast<int>(state.heuristic.size());
    rec.wall_seconds = seconds_since(start);
    rec.schedule = rbar.to_string();
    state.log.push_back(std::move(rec));

    if (state.gap() < config.epsilon) {
      state.status = DecompositionStatus::converged;
      break;
    }
    rbar = master.schedule;
  }
  state.wall_seconds = seconds_since(start);
  return state;
}

}  // namespace amsp
