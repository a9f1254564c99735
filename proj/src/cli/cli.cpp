// Copyright 2026 The qdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdyn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdyn/cases.hpp"
#include "qdyn/channels.hpp"
#include "qdyn/compatdomain.hpp"
#include "qdyn/io.hpp"
#include "qdyn/opendyn.hpp"

namespace qdyn::cli {

namespace {

using io::json;

struct Globals {
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct TimeRange {
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t steps = 1;

  std::vector<double> points() const {
    if (steps <= 1) return {t0};
    std::vector<double> ts;
    for (std::size_t k = 0; k < steps; ++k) {
      ts.push_back(t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(steps - 1));
    }
    return ts;
  }
};

TimeRange parse_times(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw std::invalid_argument("--times expects t0:t1:steps, got '" + text + "'");
  TimeRange r;
  try {
    r.t0 = std::stod(parts[0]);
    r.t1 = std::stod(parts[1]);
    const long long steps = std::stoll(parts[2]);
    if (steps <= 0) throw std::invalid_argument("steps");
    r.steps = static_cast<std::size_t>(steps);
  } catch (const std::exception&) {
    throw std::invalid_argument("--times expects t0:t1:steps with numeric fields, got '" + text + "'");
  }
  if (!(r.t1 >= r.t0)) throw std::invalid_argument("--times: t1 must be >= t0");
  return r;
}

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

const char* yes_no(bool b) { return b ? "yes" : "NO"; }

void write_json(const std::string& path, const json& j) { io::write_text_file(path, j.dump(2) + "\n"); }

//============================================================================
// check
//============================================================================

int check_superoperator(const json& doc, const std::string& out_path, std::size_t budget, const Globals& g,
                        std::ostream& out) {
  const Superoperator t = io::superoperator_from_json(doc);
  const double tp = trace_preservation_residual(t);
  const double unital = unitality_residual(t);
  const double herm = hermiticity_preservation_residual(t);
  const SearchOptions opts{budget, 50, g.seed};
  const PositivityReport pos = is_positive_map(t, opts, g.tol);

  const bool tp_ok = tp <= g.tol;
  const bool unital_ok = unital <= g.tol;
  const bool positive_ok = pos.is_positive == PositivityVerdict::kNoViolationFound;
  out << "superoperator " << t.dim_in() << " -> " << t.dim_out() << " (tol " << g.tol << ", seed " << g.seed << ")\n";
  out << "Trace-preserving: " << yes_no(tp_ok) << " (residual " << num(tp, 12) << ")\n";
  out << "Unital: " << (t.dim_in() == t.dim_out() ? yes_no(unital_ok) : "n/a") << "\n";
  out << "Hermiticity-preserving: " << yes_no(herm <= g.tol) << "\n";
  out << "CP: " << (pos.is_cp ? "yes" : "NO") << " (Choi λmin = " << num(pos.min_choi_eigenvalue) << ")\n";
  if (positive_ok) {
    out << "Positive: no violation found (" << pos.samples_used << " samples, search λmin = "
        << num(pos.search_min_eigenvalue) << ")\n";
  } else {
    out << "Positive: NO (certified violation, output λmin = " << num(pos.search_min_eigenvalue) << ")\n";
  }
  const bool clean = tp_ok && pos.is_cp && positive_ok;

  if (!out_path.empty()) {
    json j = {{"type", "superoperator"},
              {"dim_in", t.dim_in()},
              {"dim_out", t.dim_out()},
              {"trace_preservation_residual", tp},
              {"unitality_residual", std::isfinite(unital) ? json(unital) : json(nullptr)},
              {"hermiticity_preservation_residual", herm},
              {"min_choi_eigenvalue", pos.min_choi_eigenvalue},
              {"is_cp", pos.is_cp},
              {"positivity", to_string(pos.is_positive)},
              {"search_min_eigenvalue", pos.search_min_eigenvalue},
              {"samples_used", pos.samples_used},
              {"tol", g.tol},
              {"seed", g.seed},
              {"clean", clean}};
    if (pos.witness) j["witness"] = io::matrix_to_json(pos.witness->mat());
    write_json(out_path, j);
  }
  return clean ? kClean : kNegativeFinding;
}

int check_assignment(const json& doc, const std::string& out_path, std::size_t budget, const Globals& g,
                     std::ostream& out) {
  const AssignmentMap phi = io::assignment_from_json(doc);
  const BipartiteDims dims = phi.dims();
  out << "assignment map (" << to_string(phi.kind()) << ", d_s = " << dims.system << ", d_r = " << dims.reservoir
      << ", tol " << g.tol << ", seed " << g.seed << ")\n";
  json j = {{"type", "assignment"}, {"variant", to_string(phi.kind())}, {"tol", g.tol}, {"seed", g.seed}};

  const auto probes = standard_probes(dims.system, 20, g.seed);
  const ConsistencyReport cons = check_consistency(phi, probes, g.tol);
  out << "Consistent: " << yes_no(cons.consistent) << " (max ||tr_R Φρ - ρ||_1 = " << num(cons.max_residual, 9)
      << " over " << cons.probes << " probes)\n";
  j["consistency"] = {{"max_residual", cons.max_residual}, {"worst_probe", cons.worst_probe}, {"consistent", cons.consistent}};

  std::vector<LinearityProbe> lin_probes;
  if (const auto* t = phi.as_tabulated()) {
    for (std::size_t a = 0; a < t->entries.size(); ++a)
      for (std::size_t b = a + 1; b < t->entries.size(); ++b)
        lin_probes.push_back({t->entries[a].system, t->entries[b].system, 0.5});
  } else {
    for (std::size_t k = 0; k + 1 < probes.size(); ++k) lin_probes.push_back({probes[k], probes[k + 1], 0.3});
  }
  const LinearityReport lin = check_linearity(phi, lin_probes, g.tol);
  const bool linear_ok = lin.max_residual <= 1e3 * g.tol;
  out << "Convex-linear: " << yes_no(linear_ok) << " (max residual " << num(lin.max_residual, 9) << ", "
      << lin.undefined << " of " << lin.entries.size() << " probes undefined)\n";
  j["linearity"] = {{"max_residual", lin.max_residual}, {"undefined", lin.undefined}, {"probes", lin.entries.size()}};

  bool clean = cons.consistent && linear_ok;
  if (phi.totally_defined()) {
    const OutputMinimum m = minimize_output_eigenvalue(phi.linear_extension(), {budget, 50, g.seed});
    const bool positive = m.min_eigenvalue >= -g.tol;
    out << "Positive on all states: " << yes_no(positive) << " (min λmin(Φρ) = " << num(m.min_eigenvalue) << ")\n";
    j["positivity"] = {{"min_eigenvalue", m.min_eigenvalue}, {"positive", positive}, {"samples_used", m.samples_used}};
    if (!positive) j["positivity"]["witness"] = io::matrix_to_json(m.state.mat());
    clean = clean && positive;
  } else {
    const ExtensionResult ext = extend_linearly(phi, g.tol);
    if (ext.is_extension()) {
      out << "Linear extension: exists\n";
      j["extension"] = {{"exists", true}, {"map", io::assignment_to_json(ext.extension())}};
    } else {
      const Conflict& c = ext.conflict();
      out << "Linear extension: NO (conflicting decompositions, image distance " << num(c.image_distance, 9) << ")\n";
      j["extension"] = {{"exists", false},
                        {"first_weights", c.first.weights},
                        {"second_weights", c.second.weights},
                        {"state", io::matrix_to_json(c.state)},
                        {"image_distance", c.image_distance},
                        {"residual_norm", c.residual_norm}};
      clean = false;
    }
  }
  j["clean"] = clean;
  if (!out_path.empty()) write_json(out_path, j);
  return clean ? kClean : kNegativeFinding;
}

int cmd_check(const std::string& file, const std::string& out_path, std::size_t budget, const Globals& g,
              std::ostream& out) {
  const json doc = io::read_json_file(file);
  if (doc.is_object() && doc.contains("variant")) return check_assignment(doc, out_path, budget, g, out);
  if (doc.is_object() && doc.contains("kind")) return check_superoperator(doc, out_path, budget, g, out);
  throw io::FormatError("$: neither a superoperator (kind) nor an assignment map (variant)");
}

//============================================================================
// reduce
//============================================================================

int cmd_reduce(const std::string& assignment_file, const std::string& generator_file, const TimeRange& times,
               const std::string& out_dir, const Globals& g, std::ostream& out) {
  const AssignmentMap phi = io::assignment_from_json(io::read_json_file(assignment_file));
  const Generator gen = io::generator_from_json(io::read_json_file(generator_file));
  if (!phi.totally_defined()) throw std::invalid_argument("reduce: tabulated assignments must be extended first");
  const ReducedDynamics rd(phi, gen);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  out << "reduced dynamics (" << to_string(phi.kind()) << " assignment, "
      << (gen.is_hamiltonian() ? "Hamiltonian" : "fixed unitary") << ", tol " << g.tol << ", seed " << g.seed << ")\n";
  bool clean = true;
  json index = json::array();
  const auto ts = times.points();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Superoperator lambda = reduced_map(rd, ts[k]);
    const PositivityReport cp = is_cp(lambda, g.tol);
    const double tp = trace_preservation_residual(lambda);
    const DomainQuery q = DomainQuery::reduced(rd, ts[k], DomainPredicate::kLambdaPositive);
    const Membership center = membership(q, CMatrix::identity(phi.dims().system) * (1.0 / phi.dims().system), g.tol);
    out << "t = " << num(ts[k], 4) << ": CP " << (cp.is_cp ? "yes" : "NO (NCP extension)") << " (Choi λmin = "
        << num(cp.min_choi_eigenvalue) << "), TP residual " << num(tp, 12) << ", centre "
        << (center.member ? "in" : "NOT in") << " domain (λmin = " << num(center.min_eigenvalue) << ")\n";
    clean = clean && cp.is_cp;
    if (!out_dir.empty()) {
      const std::string name = "lambda_" + std::to_string(k) + ".json";
      json doc = io::superoperator_to_json(lambda);
      doc["time"] = ts[k];
      write_json((std::filesystem::path(out_dir) / name).string(), doc);
      index.push_back({{"time", ts[k]},
                       {"file", name},
                       {"is_cp", cp.is_cp},
                       {"min_choi_eigenvalue", cp.min_choi_eigenvalue},
                       {"trace_preservation_residual", tp},
                       {"center_member", center.member},
                       {"center_lmin", center.min_eigenvalue}});
    }
  }
  if (!out_dir.empty()) {
    write_json((std::filesystem::path(out_dir) / "index.json").string(),
               {{"tol", g.tol}, {"seed", g.seed}, {"times", index}});
  }
  return clean ? kClean : kNegativeFinding;
}

//============================================================================
// domain
//============================================================================

struct DomainArgs {
  std::string assignment;
  std::string generator;
  double time = 0.0;
  std::string predicate = "phi";
  std::size_t resolution = 20;
  std::size_t rays = 0;
  std::size_t trials = 1000;
  std::string csv;
  std::string out;
  bool geometry_requested = false;
};

int cmd_domain(const DomainArgs& a, const Globals& g, std::ostream& out) {
  const AssignmentMap phi = io::assignment_from_json(io::read_json_file(a.assignment));
  if (!phi.totally_defined()) throw std::invalid_argument("domain: tabulated assignments must be extended first");
  const DomainPredicate pred = a.predicate == "lambda" ? DomainPredicate::kLambdaPositive : DomainPredicate::kPhiPositive;
  if (pred == DomainPredicate::kLambdaPositive && a.generator.empty()) {
    throw std::invalid_argument("domain: --predicate lambda needs --generator");
  }
  const bool qubit = phi.dims().system == 2;
  if (!qubit && a.geometry_requested) {
    throw std::invalid_argument("domain: geometry outputs (--resolution, --rays, --csv) need a qubit system");
  }

  DomainQuery q = a.generator.empty()
                      ? DomainQuery::assignment(phi)
                      : DomainQuery::reduced(ReducedDynamics(phi, io::generator_from_json(io::read_json_file(a.generator))),
                                             a.time, pred);
  DomainReportOptions opts;
  opts.resolution = a.resolution;
  opts.convexity_trials = a.trials;
  opts.seed = g.seed;
  opts.geometry = qubit;
  if (a.rays > 0) opts.rays = fibonacci_sphere(a.rays);
  const DomainReport rep = domain_report(q, opts, g.tol);

  out << "compatibility domain (" << to_string(pred) << " predicate, tol " << g.tol << ", seed " << g.seed << ")\n";
  out << "status: " << rep.status << "\n";
  out << "centre: " << (rep.center.member ? "member" : "non-member") << " (λmin = " << num(rep.center.min_eigenvalue, 9)
      << ")\n";
  for (const auto& r : rep.radii) {
    out << "radius along (" << num(r.direction.x, 4) << ", " << num(r.direction.y, 4) << ", " << num(r.direction.z, 4)
        << "): " << num(r.radius, 8) << "\n";
  }
  if (!rep.samples.empty()) {
    const auto worst = std::min_element(rep.samples.begin(), rep.samples.end(),
                                        [](const auto& x, const auto& y) { return x.min_eigenvalue < y.min_eigenvalue; });
    out << "landscape: " << rep.samples.size() << " samples, min λmin = " << num(worst->min_eigenvalue, 9) << "\n";
  }
  if (rep.convexity) {
    out << "convexity: " << rep.convexity->failures << " failures in " << rep.convexity->trials << " trials"
        << (rep.convexity->empty_interior ? " (no members sampled)" : "") << "\n";
  }
  if (!a.out.empty()) write_json(a.out, io::domain_report_to_json(rep));
  if (!a.csv.empty()) io::write_text_file(a.csv, io::domain_report_csv(rep));
  const bool clean = rep.center.member && (!rep.convexity || rep.convexity->failures == 0);
  return clean ? kClean : kNegativeFinding;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build and audit quantum dynamical maps", "qdyn"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Equality/PSD tolerance")->default_val(1e-9)->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized searches")->default_val(0);

  std::string out_path;
  std::size_t budget = 2000;
  std::string check_file;
  auto* check = app.add_subcommand("check", "Audit a superoperator or assignment-map JSON file");
  check->add_option("file", check_file, "Input JSON")->required();
  check->add_option("--budget", budget, "Positivity search sample count")->default_val(2000);
  check->add_option("--out", out_path, "Write the JSON report here");

  std::string case_name;
  double c = 0.5;
  std::string case_times = "0:2:21";
  auto* case_cmd = app.add_subcommand("paper-case", "Reproduce one worked example");
  case_cmd->add_option("name", case_name, "flip | four-state | pechukas | correlated | inconsistent")
      ->required()
      ->check(CLI::IsMember(case_names()));
  case_cmd->add_option("--c", c, "Correlation strength in [-1, 1]")->default_val(0.5);
  case_cmd->add_option("--times", case_times, "t0:t1:steps")->default_val("0:2:21");
  case_cmd->add_option("--out", out_path, "Write the JSON result here");

  std::string assignment_file;
  std::string generator_file;
  std::string reduce_times = "0:1:11";
  auto* reduce = app.add_subcommand("reduce", "Reduced dynamical maps tr_R(U_t Φ(ρ) U_t†)");
  reduce->add_option("assignment", assignment_file, "Assignment-map JSON")->required();
  reduce->add_option("generator", generator_file, "Generator JSON (unitary or hamiltonian)")->required();
  reduce->add_option("--times", reduce_times, "t0:t1:steps")->default_val("0:1:11");
  reduce->add_option("--out", out_path, "Directory for per-time transfer matrices");

  DomainArgs da;
  auto* domain = app.add_subcommand("domain", "Compatibility-domain report");
  domain->add_option("assignment", da.assignment, "Assignment-map JSON")->required();
  domain->add_option("--generator", da.generator, "Generator JSON for reduced-map queries");
  domain->add_option("--time", da.time, "Time for reduced-map queries")->default_val(0.0);
  domain->add_option("--predicate", da.predicate, "phi | lambda")->default_val("phi")->check(CLI::IsMember({"phi", "lambda"}));
  auto* res_opt = domain->add_option("--resolution", da.resolution, "Landscape points per shell step")->default_val(20);
  auto* rays_opt = domain->add_option("--rays", da.rays, "Number of Fibonacci ray directions (default: six axes)");
  domain->add_option("--trials", da.trials, "Convexity trials")->default_val(1000);
  auto* csv_opt = domain->add_option("--csv", da.csv, "Write landscape CSV (rx,ry,rz,lmin)");
  domain->add_option("--out", da.out, "Write the JSON report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kClean : kInputError;
  }

  try {
    set_default_tolerance(g.tol);
    if (*check) return cmd_check(check_file, out_path, budget, g, out);
    if (*case_cmd) {
      const TimeRange tr = parse_times(case_times);
      CaseOptions opts{c, tr.t0, tr.t1, tr.steps, g.seed};
      const CaseResult r = run_case(case_name, opts);
      out << r.text();
      if (!out_path.empty()) {
        json j = r.to_json();
        j["tol"] = g.tol;
        j["seed"] = g.seed;
        write_json(out_path, j);
      }
      return r.pass() ? kClean : kNegativeFinding;
    }
    if (*reduce) return cmd_reduce(assignment_file, generator_file, parse_times(reduce_times), out_path, g, out);
    if (*domain) {
      da.geometry_requested = res_opt->count() > 0 || rays_opt->count() > 0 || csv_opt->count() > 0;
      return cmd_domain(da, g, out);
    }
  } catch (const io::FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qdyn::cli
