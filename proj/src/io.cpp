#include "blr/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "blr/basis.hpp"
#include "blr/errors.hpp"
#include "blr/exponent.hpp"
#include "blr/fit.hpp"
#include "blr/integrate.hpp"
#include "blr/rng.hpp"

namespace blr {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& where, const std::string& what) {
  throw invalid_input("problem: field '" + where + "': " + what);
}

double as_number(const json& node, const std::string& where) {
  if (!node.is_number()) fail_field(where, "expected a number");
  return node.get<double>();
}

int as_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) fail_field(where, "expected an integer");
  return node.get<int>();
}

const json& member(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail_field(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

Vector parse_vector(const json& node, int n, const std::string& where) {
  if (!node.is_array() || static_cast<int>(node.size()) != n) {
    fail_field(where, "expected an array of " + std::to_string(n) + " numbers");
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = as_number(node[i], where);
  return v;
}

Matrix parse_matrix(const json& node, int cols, const std::string& where) {
  if (!node.is_array() || node.empty()) {
    fail_field(where, "expected a non-empty array of rows");
  }
  const int rows = static_cast<int>(node.size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = node[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      fail_field(where + "[" + std::to_string(r) + "]",
                 "expected a row of " + std::to_string(cols) + " numbers");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = as_number(row[c], where);
  }
  return m;
}

// A subspace given as a list of spanning vectors; [] is the zero subspace.
Subspace parse_subspace(const json& node, int n, const std::string& where) {
  if (!node.is_array()) fail_field(where, "expected an array of vectors");
  if (node.empty()) return Subspace::trivial(n);
  Matrix span(n, static_cast<int>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    span.col(static_cast<int>(i)) =
        parse_vector(node[i], n, where + "[" + std::to_string(i) + "]");
  }
  return Subspace::span_of(span);
}

TubeFamilySpec parse_tube_family(const json& node, int n, const std::string& where) {
  if (!node.is_object()) fail_field(where, "expected an object");
  TubeFamilySpec spec;
  if (node.contains("center")) spec.center = parse_subspace(node["center"], n, where + ".center");
  if (node.contains("nu")) spec.nu = as_number(node["nu"], where + ".nu");
  if (node.contains("delta")) spec.delta = as_number(node["delta"], where + ".delta");
  if (node.contains("count")) spec.count = as_int(node["count"], where + ".count");
  if (node.contains("seed")) {
    spec.seed = static_cast<std::uint64_t>(as_int(node["seed"], where + ".seed"));
  }
  if (node.contains("tubes")) {
    const json& tubes = node["tubes"];
    if (!tubes.is_array()) fail_field(where + ".tubes", "expected an array");
    for (std::size_t i = 0; i < tubes.size(); ++i) {
      const std::string twhere = where + ".tubes[" + std::to_string(i) + "]";
      const json& tn = tubes[i];
      Tube t;
      t.direction = parse_subspace(member(tn, "direction", twhere), n, twhere + ".direction");
      t.base = parse_vector(member(tn, "base", twhere), n, twhere + ".base");
      t.radius = as_number(member(tn, "radius", twhere), twhere + ".radius");
      if (!(t.radius > 0.0)) fail_field(twhere + ".radius", "must be positive");
      spec.explicit_tubes.push_back(std::move(t));
    }
  }
  return spec;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json subspace_json(const Subspace& s) {
  json basis = json::array();
  for (int c = 0; c < s.dim(); ++c) {
    json col = json::array();
    for (int r = 0; r < s.ambient_dim(); ++r) col.push_back(s.basis()(r, c));
    basis.push_back(std::move(col));
  }
  return json{{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", std::move(basis)}};
}

json lattice_fn_json(const LatticeFn& f) {
  json cells = json::array();
  for (const auto& [cell, value] : f.cells()) {
    json entry = json::array();
    json coords = json::array();
    for (const auto c : cell) coords.push_back(c);
    entry.push_back(std::move(coords));
    entry.push_back(value);
    cells.push_back(std::move(entry));
  }
  return cells;
}

json ratio_json(const RatioReport& r) {
  return json{{"R", r.R},
              {"integral", r.integral},
              {"denominators", r.denominators},
              {"ratio", r.ratio},
              {"grid_residual", r.grid_residual}};
}

json config_json(const RunConfig& c) {
  json grid{{"points_per_axis", c.grid.points_per_axis},
            {"parallel_chunks", c.grid.parallel_chunks}};
  json out{{"command", command_name(c.command)},
           {"problem", c.problem_path},
           {"seed", c.seed},
           {"grid", std::move(grid)},
           {"format", c.format}};
  switch (c.command) {
    case Command::kExponent:
      out["random_per_dim"] = c.random_per_dim;
      break;
    case Command::kPolytope:
      out["q"] = c.q;
      out["random_per_dim"] = c.random_per_dim;
      break;
    case Command::kStability:
      out["nu"] = c.nu;
      out["samples"] = c.samples;
      out["random_per_dim"] = c.random_per_dim;
      break;
    case Command::kWitness:
      out["R"] = c.R;
      break;
    case Command::kRatio:
      out["R"] = c.R;
      out["budget"] = c.budget;
      break;
    case Command::kFit:
      out["R_list"] = c.r_list;
      out["mode"] = c.mode;
      out["budget"] = c.budget;
      break;
    case Command::kKakeyaSweep:
      out["delta_list"] = c.delta_list;
      out["nu"] = c.nu;
      out["epsilon"] = c.epsilon;
      break;
    case Command::kKakeyaLedger:
      out["delta"] = c.delta;
      out["epsilon"] = c.epsilon;
      out["c_kappa"] = c.c_kappa;
      out["families"] = c.families;
      break;
    case Command::kBasis:
      out["trials"] = c.trials;
      break;
  }
  return out;
}

CandidateOpts candidate_opts_for(const RunConfig& c) {
  CandidateOpts opts;
  opts.random_per_dim = c.random_per_dim;
  opts.seed = stream_seed(c.seed, "candidates-cli");
  return opts;
}

json census_json(const ExponentReport& report) {
  json rows = json::array();
  for (const auto& row : report.per_candidate) {
    rows.push_back(json{{"id", row.id},
                        {"dim", row.dim},
                        {"image_dims", row.image_dims},
                        {"value", row.value},
                        {"origin", provenance_name(row.origin)}});
  }
  return rows;
}

// Counts and deviation come from the problem's tube block; the CLI --nu
// overrides every family's deviation when positive.
std::vector<int> sweep_counts(const Problem& problem) {
  if (problem.tube_specs.empty()) {
    throw invalid_input("problem: tube_families block required for kakeya commands");
  }
  if (static_cast<int>(problem.tube_specs.size()) != problem.datum.factors()) {
    throw invalid_input("problem: one tube_families entry per map required");
  }
  std::vector<int> counts;
  for (const auto& spec : problem.tube_specs) counts.push_back(spec.count);
  return counts;
}

// Pinned layouts, when the problem gives every family as an explicit list.
ExplicitFamilies explicit_families(const Problem& problem) {
  ExplicitFamilies tubes;
  bool any = false, all = true;
  for (const auto& spec : problem.tube_specs) {
    if (spec.explicit_tubes.empty()) {
      all = false;
    } else {
      any = true;
    }
    tubes.push_back(spec.explicit_tubes);
  }
  if (any && !all) {
    throw invalid_input(
        "problem: tube_families must be all explicit lists or all random specs");
  }
  if (!any) tubes.clear();
  return tubes;
}

json run_exponent(const Problem& problem, const RunConfig& config) {
  const ExponentReport report = gamma_sup(problem.datum, candidate_opts_for(config));
  return json{
      {"gamma", report.gamma},
      {"locbd_exponent", locbd_exponent(problem.datum)},
      {"argmax_id", report.argmax_id},
      {"argmax", subspace_json(report.argmax)},
      {"certification",
       report.certification == Certification::kLatticeEnumerated ? "lattice-enumerated"
                                                                 : "lattice+sampled"},
      {"closure_truncated", report.closure_truncated},
      {"census", census_json(report)},
  };
}

json run_polytope(const Problem& problem, const RunConfig& config) {
  const PolytopeResult result =
      bl_polytope_contains(problem.datum, config.q, candidate_opts_for(config));
  json out{{"contains", result.contains}};
  if (!result.contains) {
    out["reason"] = result.reason;
    out["slack"] = result.slack;
    if (result.reason == "halfspace") {
      out["witness_id"] = result.witness_id;
      out["witness"] = subspace_json(result.witness);
    }
  }
  return out;
}

json run_stability(const Problem& problem, const RunConfig& config) {
  PerturbationSpec spec;
  spec.nu = config.nu;
  spec.seed = config.seed;
  spec.samples = config.samples;
  const StabilityReport report =
      stability_scan(problem.datum, spec, candidate_opts_for(config));
  json samples = json::array();
  for (const auto& s : report.samples) {
    samples.push_back(json{{"distance", s.distance}, {"gamma", s.gamma}});
  }
  return json{{"gamma_base", report.gamma_base},
              {"max_gamma", report.max_gamma},
              {"violations", report.violations},
              {"samples", std::move(samples)}};
}

json run_witness(const Problem& problem, const RunConfig& config) {
  const ExponentReport exponent =
      gamma_sup(problem.datum, candidate_opts_for(config));
  const WitnessSet w = witness(problem.datum, exponent.argmax, config.R);
  json sets = json::array();
  json counts = json::array();
  for (std::size_t j = 0; j < w.fns.size(); ++j) {
    counts.push_back(w.cell_sets[j].size());
    sets.push_back(lattice_fn_json(w.fns[j]));
  }
  return json{{"R", w.R},
              {"c0", w.c0},
              {"gamma", exponent.gamma},
              {"subspace", subspace_json(w.v)},
              {"cell_counts", std::move(counts)},
              {"indicators", std::move(sets)}};
}

json run_ratio(const Problem& problem, const RunConfig& config) {
  const EmpiricalResult result =
      empirical_blr(problem.datum, config.R, config.grid, config.budget, config.seed);
  json out = ratio_json(result.best);
  out["witness_id"] = result.witness_id;
  return out;
}

GrowthFit run_fit_inner(const Problem& problem, const RunConfig& config) {
  FitMode mode;
  mode.budget = config.budget;
  mode.seed = config.seed;
  if (config.mode == "witness") {
    mode.witness_of =
        gamma_sup(problem.datum, candidate_opts_for(config)).argmax;
  } else if (config.mode != "empirical") {
    throw invalid_input("fit: mode must be 'witness' or 'empirical'");
  }
  return fit_growth(problem.datum, config.r_list, config.grid, mode);
}

json run_fit(const Problem& problem, const RunConfig& config) {
  const GrowthFit fit = run_fit_inner(problem, config);
  json table = json::array();
  for (const auto& row : fit.table) table.push_back(ratio_json(row));
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r2", fit.r2},
              {"table", std::move(table)}};
}

SweepReport run_sweep_inner(const Problem& problem, const RunConfig& config) {
  const std::vector<int> counts = sweep_counts(problem);
  const ExplicitFamilies pinned = explicit_families(problem);
  if (!pinned.empty()) {
    return delta_sweep(problem.datum, pinned, config.delta_list, config.epsilon,
                       config.grid);
  }

  bool custom = false;
  for (const auto& spec : problem.tube_specs) {
    if (spec.center.has_value() || spec.seed.has_value()) custom = true;
  }
  if (!custom) {
    const double nu = config.nu > 0.0 ? config.nu : problem.tube_specs.front().nu;
    return delta_sweep(problem.datum, nu, config.delta_list, counts, config.epsilon,
                       config.grid, config.seed);
  }

  // Families with explicit centers or seeds: materialize per the block.
  const BLDatum& d = problem.datum;
  std::vector<double> bound_counts(counts.begin(), counts.end());
  const auto families_at = [&, config](double delta, std::size_t k) {
    std::vector<TubeFamily> families;
    for (int j = 0; j < d.factors(); ++j) {
      const TubeFamilySpec& spec = problem.tube_specs[j];
      const Subspace center =
          spec.center.has_value() ? *spec.center : d.kernel_subspace(j);
      const double nu = config.nu > 0.0 ? config.nu : spec.nu;
      const std::uint64_t base = spec.seed.has_value() ? *spec.seed : config.seed;
      auto family = random_tube_family(
          center, nu, delta, spec.count,
          stream_seed(base, "sweep", k * 1009 + static_cast<std::uint64_t>(j)));
      family.j = j;
      families.push_back(std::move(family));
    }
    return families;
  };
  return delta_sweep_with(d, families_at, bound_counts, config.delta_list,
                          config.epsilon, config.grid);
}

json run_sweep(const Problem& problem, const RunConfig& config) {
  const SweepReport report = run_sweep_inner(problem, config);
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back(json{{"delta", row.delta},
                        {"overlap", row.overlap},
                        {"bound", row.bound},
                        {"ratio", row.ratio}});
  }
  return json{{"rows", std::move(rows)},
              {"slope", report.slope},
              {"intercept", report.intercept},
              {"r2", report.r2},
              {"predicted_slope", report.predicted_slope},
              {"calibrated_c", report.calibrated_c}};
}

json run_ledger(const Problem& problem, const RunConfig& config) {
  double delta = config.delta;
  if (delta <= 0.0 && !problem.tube_specs.empty() &&
      problem.tube_specs.front().delta.has_value()) {
    delta = *problem.tube_specs.front().delta;
  }
  const Schedule schedule =
      multiscale_schedule(delta, config.epsilon, config.c_kappa);
  LedgerSampling sampling;
  sampling.families = config.families;
  sampling.counts = sweep_counts(problem);
  sampling.explicit_tubes = explicit_families(problem);
  if (config.nu > 0.0) sampling.nu = config.nu;
  const MultiscaleLedger ledger = multiscale_ledger(
      problem.datum, delta, schedule.omega, sampling, config.grid, config.seed);
  json rows = json::array();
  for (const auto& row : ledger.rows) {
    rows.push_back(json{{"scale", row.scale},
                        {"d_hat", row.d_hat},
                        {"bound_factor", row.bound_factor},
                        {"kappa_hat", row.kappa_hat}});
  }
  return json{{"delta", ledger.delta},
              {"omega", ledger.omega},
              {"ell", ledger.ell},
              {"bl_hat", ledger.bl_hat},
              {"kappa_measured", ledger.kappa_measured},
              {"rows", std::move(rows)}};
}

json run_basis(const Problem& problem, const RunConfig& config) {
  const BasisSelection sel = select_basis(problem.datum, config.trials, config.seed);
  const LocbdCheck check = verify_locbd_exponent(problem.datum, sel);
  json vectors = json::array();
  for (int c = 0; c < sel.vectors.cols(); ++c) {
    json col = json::array();
    for (int r = 0; r < sel.vectors.rows(); ++r) col.push_back(sel.vectors(r, c));
    vectors.push_back(std::move(col));
  }
  return json{{"vectors", std::move(vectors)},
              {"margin", sel.margin},
              {"step_dims", sel.step_dims},
              {"exponent", check.exponent},
              {"match", check.match}};
}

std::string render_csv(const Problem& problem, const RunConfig& config) {
  std::ostringstream out;
  // Comment header so CSV reports also carry their provenance.
  out << "# blr " << kLibraryVersion << ' ' << command_name(config.command)
      << " seed=" << config.seed << " grid=" << config.grid.points_per_axis << ','
      << config.grid.parallel_chunks << " problem=" << config.problem_path << '\n';
  if (config.command == Command::kFit) {
    const GrowthFit fit = run_fit_inner(problem, config);
    out << "R,integral,ratio,residual\n";
    for (const auto& row : fit.table) {
      out << format_double(row.R) << ',' << format_double(row.integral) << ','
          << format_double(row.ratio) << ',' << format_double(row.grid_residual)
          << '\n';
    }
    out << "slope," << format_double(fit.slope) << ",intercept,"
        << format_double(fit.intercept) << '\n';
  } else if (config.command == Command::kKakeyaSweep) {
    const SweepReport report = run_sweep_inner(problem, config);
    out << "delta,overlap,bound,ratio\n";
    for (const auto& row : report.rows) {
      out << format_double(row.delta) << ',' << format_double(row.overlap) << ','
          << format_double(row.bound) << ',' << format_double(row.ratio) << '\n';
    }
    out << "slope," << format_double(report.slope) << ",intercept,"
        << format_double(report.intercept) << ",predicted,"
        << format_double(report.predicted_slope) << '\n';
  } else {
    throw invalid_input("format: csv output is provided for fit and kakeya-sweep");
  }
  return out.str();
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::kExponent: return "exponent";
    case Command::kPolytope: return "polytope";
    case Command::kStability: return "stability";
    case Command::kWitness: return "witness";
    case Command::kRatio: return "ratio";
    case Command::kFit: return "fit";
    case Command::kKakeyaSweep: return "kakeya-sweep";
    case Command::kKakeyaLedger: return "kakeya-ledger";
    case Command::kBasis: return "basis";
  }
  return "unknown";
}

Problem parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw invalid_input("problem: JSON parse error at line " + std::to_string(line) +
                        ": " + e.what());
  }
  if (!root.is_object()) throw invalid_input("problem: top level must be an object");

  const int n = as_int(member(root, "n", ""), "n");
  if (n < 1) fail_field("n", "must be >= 1");

  const json& pj = member(root, "p", "");
  if (!pj.is_array() || pj.empty()) fail_field("p", "expected a non-empty array");
  std::vector<double> p;
  for (std::size_t j = 0; j < pj.size(); ++j) {
    p.push_back(as_number(pj[j], "p[" + std::to_string(j) + "]"));
  }

  const bool has_maps = root.contains("maps");
  const bool has_kernels = root.contains("kernels");
  if (has_maps == has_kernels) {
    throw invalid_input("problem: exactly one of 'maps' or 'kernels' is required");
  }

  std::optional<BLDatum> datum;
  if (has_maps) {
    const json& maps_node = root["maps"];
    if (!maps_node.is_array() || maps_node.size() != p.size()) {
      fail_field("maps", "expected one matrix per exponent");
    }
    std::vector<Matrix> maps;
    for (std::size_t j = 0; j < maps_node.size(); ++j) {
      maps.push_back(parse_matrix(maps_node[j], n, "maps[" + std::to_string(j) + "]"));
    }
    datum = BLDatum::from_maps(n, std::move(maps), std::move(p));
  } else {
    const json& kernels_node = root["kernels"];
    if (!kernels_node.is_array() || kernels_node.size() != p.size()) {
      fail_field("kernels", "expected one basis list per exponent");
    }
    std::vector<Subspace> kernels;
    for (std::size_t j = 0; j < kernels_node.size(); ++j) {
      kernels.push_back(
          parse_subspace(kernels_node[j], n, "kernels[" + std::to_string(j) + "]"));
    }
    datum = BLDatum::from_kernels(n, std::move(kernels), std::move(p));
  }

  Problem problem{std::move(*datum), {}};
  if (root.contains("tube_families")) {
    const json& families = root["tube_families"];
    if (!families.is_array()) fail_field("tube_families", "expected an array");
    for (std::size_t i = 0; i < families.size(); ++i) {
      problem.tube_specs.push_back(parse_tube_family(
          families[i], n, "tube_families[" + std::to_string(i) + "]"));
    }
  }
  return problem;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("problem: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string render_report(const RunConfig& config) {
  const Problem problem = load_problem(config.problem_path);
  const ValidationReport validation = validate(problem.datum);
  if (!validation.ok()) {
    std::string what = "problem: validation failed:";
    for (const auto& issue : validation.issues) {
      what += " [map " + std::to_string(issue.index) + "] " + issue.what + ";";
    }
    throw invalid_input(what);
  }

  if (config.format == "csv") return render_csv(problem, config);
  if (config.format != "json") {
    throw invalid_input("format: must be 'json' or 'csv'");
  }

  json body;
  switch (config.command) {
    case Command::kExponent: body = run_exponent(problem, config); break;
    case Command::kPolytope: body = run_polytope(problem, config); break;
    case Command::kStability: body = run_stability(problem, config); break;
    case Command::kWitness: body = run_witness(problem, config); break;
    case Command::kRatio: body = run_ratio(problem, config); break;
    case Command::kFit: body = run_fit(problem, config); break;
    case Command::kKakeyaSweep: body = run_sweep(problem, config); break;
    case Command::kKakeyaLedger: body = run_ledger(problem, config); break;
    case Command::kBasis: body = run_basis(problem, config); break;
  }
  body["config"] = config_json(config);
  body["version"] = kLibraryVersion;
  return body.dump(2) + "\n";
}

int run(const RunConfig& config) {
  try {
    const std::string report = render_report(config);
    if (config.out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(config.out_path, std::ios::binary);
      if (!out) throw invalid_input("output: cannot open '" + config.out_path + "'");
      out << report;
    }
    return 0;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const selection_failed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace blr
