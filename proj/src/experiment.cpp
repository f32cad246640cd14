#include "greenlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "greenlab/dimension.hpp"
#include "greenlab/linearization.hpp"
#include "greenlab/lyapunov.hpp"
#include "greenlab/map_io.hpp"
#include "greenlab/parallel.hpp"

namespace greenlab {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Collects the artifacts of one subcommand in a scratch directory next to
// the output directory; commit() moves them into place.
class Staging {
 public:
  Staging(const std::string& out, const std::string& name)
      : out_(out), dir_(fs::path(out) / (".staging-" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  fs::path path(const std::string& rel) const { return dir_ / rel; }

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = path(rel);
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    os << content;
    if (!os) throw ConfigError("cannot write " + p.string());
    add(rel);
  }

  // Records a top-level entry created directly under path().
  void add(const std::string& rel) {
    const std::string top = fs::path(rel).begin()->string();
    if (std::find(entries_.begin(), entries_.end(), top) == entries_.end()) entries_.push_back(top);
  }

  void commit() {
    for (const auto& e : entries_) {
      const fs::path target = out_ / e;
      fs::remove_all(target);
      fs::rename(dir_ / e, target);
    }
  }

 private:
  fs::path out_;
  fs::path dir_;
  std::vector<std::string> entries_;
};

ordered_json provenance(const ExperimentConfig& c, const ZooEntry& entry) {
  ordered_json j;
  j["map"] = entry.map.label();
  j["config_hash"] = config_hash(c);
  j["seed"] = c.seed;
  return j;
}

std::string csv_provenance(const ExperimentConfig& c) {
  return "config_hash=" + config_hash(c) + " base_seed=" + std::to_string(c.seed);
}

MeasureSample draw_sample(const ZooEntry& entry, const ExperimentConfig& c, int count) {
  return sample_measure(entry.map, count, c.burn_in, stream_seed(c.seed, SeedStream::sample),
                        sample_method_from_string(c.method));
}

SpectrumEstimate run_spectrum(const ZooEntry& entry, const ExperimentConfig& c) {
  const MeasureSample s = draw_sample(entry, c, std::max(c.n_orbits, 100));
  SpectrumOptions opts;
  opts.n_orbits = c.n_orbits;
  opts.seed = stream_seed(c.seed, SeedStream::spectrum);
  return lyapunov_spectrum(entry.map, s, c.n_steps, opts);
}

ordered_json exponents_json(const ZooEntry& entry, const ExperimentConfig& c, const SpectrumEstimate& est) {
  ordered_json j = provenance(c, entry);
  j["stream_seed"] = stream_seed(c.seed, SeedStream::spectrum);
  j["spectrum"] = spectrum_report(est, entry.map.degree());
  return j;
}

MassCurves run_masses(const ZooEntry& entry, const ExperimentConfig& c) {
  const MeasureSample s = draw_sample(entry, c, c.mass_points);
  MassCurveOptions opts;
  opts.n_min = c.n_min;
  opts.n_max = c.n_max;
  opts.rhos = c.rhos;
  opts.taus = c.taus;
  opts.nus = c.nus;
  opts.seed = stream_seed(c.seed, SeedStream::masses);
  return mass_curves(entry.map, s, opts);
}

std::string mass_file(const MassCurve& m) {
  return "masses_rho" + fmt_param(m.rho) + "_tau" + fmt_param(m.tau) + "_nu" + fmt_param(m.nu) + ".csv";
}

// Mass monotonicity in rho, tau, nu, judged with 2 SE slack.
ordered_json mass_monotonicity(const MassCurves& mc, const ExperimentConfig& c) {
  long checked = 0, violations = 0;
  auto find = [&](double rho, double tau, double nu) -> const MassCurve* {
    for (const auto& m : mc.curves)
      if (m.rho == rho && m.tau == tau && m.nu == nu) return &m;
    return nullptr;
  };
  auto cmp = [&](const MassEstimate& bigger, const MassEstimate& smaller) {
    ++checked;
    if (smaller.mass > bigger.mass + 2.0 * std::hypot(bigger.standard_error, smaller.standard_error)) ++violations;
  };
  for (const auto& m : mc.curves) {
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      cmp(m.rows[r].b, m.rows[r].lb);
      for (double rho : c.rhos)
        if (rho < m.rho)
          if (const MassCurve* o = find(rho, m.tau, m.nu)) cmp(o->rows[r].b, m.rows[r].b);
      for (double tau : c.taus)
        if (tau > m.tau)
          if (const MassCurve* o = find(m.rho, tau, m.nu)) cmp(o->rows[r].lb, m.rows[r].lb);
      for (double nu : c.nus)
        if (nu < m.nu)
          if (const MassCurve* o = find(m.rho, m.tau, nu)) cmp(o->rows[r].v, m.rows[r].v);
    }
  }
  return {{"checked", checked}, {"violations", violations}};
}

ordered_json inclusion_json(const InclusionCounts& ic) {
  return {{"evaluated", ic.evaluated},
          {"lb_not_in_b", ic.lb_not_in_b},
          {"rho_monotonicity", ic.rho_monotonicity},
          {"rho_grid_disagreements", ic.rho_grid_disagreements},
          {"tau_monotonicity", ic.tau_monotonicity},
          {"nu_monotonicity", ic.nu_monotonicity}};
}

// V_n(nu) mass curve at nu = 0.3 (or the grid value closest to it).
const MassCurve& v_curve(const MassCurves& mc) {
  const MassCurve* best = &mc.curves.front();
  for (const auto& m : mc.curves)
    if (std::abs(m.nu - 0.3) < std::abs(best->nu - 0.3)) best = &m;
  return *best;
}

DimensionReport run_dimension(const ZooEntry& entry, const ExperimentConfig& c, const SpectrumEstimate& est) {
  const MeasureSample s = draw_sample(entry, c, c.dim_points);
  DimensionReport r = local_dimension(s, c.r_min, c.r_max);
  attach_bound(r, entry.map.degree(), est);
  return r;
}

// Threshold below which the V_n(0.3) mass counts as having decayed.
constexpr double kVMassDecay = 0.05;

}  // namespace

void validate_config(const ExperimentConfig& c) {
  auto positive = [](long v, const char* name) {
    if (v <= 0) throw ConfigError(std::string("config: ") + name + " must be positive");
  };
  if (c.map.empty()) throw ConfigError("config: map must be set");
  if (c.output_dir.empty()) throw ConfigError("config: output_dir must be set");
  positive(c.sample_count, "sample.count");
  if (c.burn_in < 0) throw ConfigError("config: sample.burn_in must be non-negative");
  try {
    sample_method_from_string(c.method);
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  positive(c.n_steps, "exponents.n_steps");
  positive(c.n_orbits, "exponents.n_orbits");
  if (c.n_min < 0 || c.n_max < c.n_min) throw ConfigError("config: masses needs 0 <= n_min <= n_max");
  positive(c.mass_points, "masses.points");
  if (c.rhos.empty() || c.taus.empty() || c.nus.empty()) throw ConfigError("config: rho/tau/nu grids must be non-empty");
  for (double r : c.rhos)
    if (!(r > 0.0 && r <= kR0)) throw ConfigError("config: rho values must lie in (0, R0]");
  for (double t : c.taus)
    if (!(t > 0.0)) throw ConfigError("config: tau values must be positive");
  for (double n : c.nus)
    if (!(n > 0.0 && n < 1.0)) throw ConfigError("config: nu values must lie in (0, 1)");
  positive(c.lin_points, "linearize.points");
  if (c.max_n < 0) throw ConfigError("config: linearize.max_n must be non-negative");
  if (!(c.ball_radius > 0.0)) throw ConfigError("config: linearize.ball_radius must be positive");
  if (!(c.recurrence_radius > 0.0)) throw ConfigError("config: linearize.recurrence_radius must be positive");
  positive(c.dim_points, "dimension.points");
  if (c.r_min < 0.0 || c.r_max < 0.0 || (c.r_max > 0.0 && c.r_min >= c.r_max)) {
    throw ConfigError("config: dimension needs 0 <= r_min < r_max (or both 0)");
  }
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["map"] = c.map;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["sample"] = {{"count", c.sample_count}, {"burn_in", c.burn_in}, {"method", c.method}};
  j["exponents"] = {{"n_steps", c.n_steps}, {"n_orbits", c.n_orbits}};
  j["masses"] = {{"n_min", c.n_min}, {"n_max", c.n_max}, {"rho", c.rhos},
                 {"tau", c.taus},    {"nu", c.nus},       {"points", c.mass_points}};
  j["linearize"] = {{"points", c.lin_points},
                    {"max_n", c.max_n},
                    {"ball_radius", c.ball_radius},
                    {"recurrence_radius", c.recurrence_radius}};
  j["dimension"] = {{"points", c.dim_points}, {"r_min", c.r_min}, {"r_max", c.r_max}};
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  try {
    require_keys(j, "", {"map", "seed", "output_dir", "sample", "exponents", "masses", "linearize", "dimension"});
    read(j, "map", c.map);
    read(j, "seed", c.seed);
    read(j, "output_dir", c.output_dir);
    if (j.contains("sample")) {
      const json& s = j.at("sample");
      require_keys(s, "sample", {"count", "burn_in", "method"});
      read(s, "count", c.sample_count);
      read(s, "burn_in", c.burn_in);
      read(s, "method", c.method);
    }
    if (j.contains("exponents")) {
      const json& s = j.at("exponents");
      require_keys(s, "exponents", {"n_steps", "n_orbits"});
      read(s, "n_steps", c.n_steps);
      read(s, "n_orbits", c.n_orbits);
    }
    if (j.contains("masses")) {
      const json& s = j.at("masses");
      require_keys(s, "masses", {"n_min", "n_max", "rho", "tau", "nu", "points"});
      read(s, "n_min", c.n_min);
      read(s, "n_max", c.n_max);
      read(s, "rho", c.rhos);
      read(s, "tau", c.taus);
      read(s, "nu", c.nus);
      read(s, "points", c.mass_points);
    }
    if (j.contains("linearize")) {
      const json& s = j.at("linearize");
      require_keys(s, "linearize", {"points", "max_n", "ball_radius", "recurrence_radius"});
      read(s, "points", c.lin_points);
      read(s, "max_n", c.max_n);
      read(s, "ball_radius", c.ball_radius);
      read(s, "recurrence_radius", c.recurrence_radius);
    }
    if (j.contains("dimension")) {
      const json& s = j.at("dimension");
      require_keys(s, "dimension", {"points", "r_min", "r_max"});
      read(s, "points", c.dim_points);
      read(s, "r_min", c.r_min);
      read(s, "r_max", c.r_max);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

std::string config_hash(const ExperimentConfig& c) {
  ordered_json j = config_to_json(c);
  j.erase("output_dir");  // where results go does not change them
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ZooEntry resolve_map(const std::string& source) {
  const fs::path p(source);
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    if (fs::exists(p / "expected.json")) return load_zoo_entry(source);
    return {load_map((p / "map.json").string()), Expected{}};
  }
  if (fs::is_regular_file(p, ec)) return {load_map(source), Expected{}};
  return zoo_entry(source);
}

std::uint64_t stream_seed(std::uint64_t seed, SeedStream stream) {
  return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

ChartMatrix differential_fd(const HomogeneousMap& f, const ProjPoint& x, double h) {
  const Chart cx = chart_at(x);
  const Chart cy = chart_at(eval(f, x));
  const int k = x.dim();
  ChartMatrix a(k, k);
  auto g = [&](const ChartVector& u) -> ChartVector {
    const auto v = chart_inverse(cy, eval(f, chart_apply(cx, u)));
    if (!v) throw NumericError("differential_fd: image left the target chart");
    return *v;
  };
  for (int j = 0; j < k; ++j) {
    ChartVector e = ChartVector::Zero(k);
    e[j] = h;
    a.col(j) = (g(e) - g(-e)) / (2.0 * h);
  }
  return a;
}

ZooValidation validate_zoo_entry(const ZooEntry& entry, std::uint64_t seed, int sample_count) {
  const HomogeneousMap& f = entry.map;
  ZooValidation v;
  v.label = f.label();
  f.validate();
  const int n = f.dim() + 1;
  const double d = f.degree();

  Rng rng(derive_seed(seed, 1));
  for (int i = 0; i < 100; ++i) {
    LiftVector z(n);
    for (int c = 0; c < n; ++c) z[c] = complex_normal(rng);
    const double g = green_function(f, z).value;
    const double gf = green_function(f, f.lift(z)).value;
    v.green_residual = std::max(v.green_residual, std::abs(gf - d * g));
  }

  Rng prng(derive_seed(seed, 2));
  int done = 0;
  while (done < 100) {
    LiftVector z(n);
    for (int c = 0; c < n; ++c) z[c] = complex_normal(prng);
    const ProjPoint x = normalize<double>(z);
    if (critical_proximity(f, x) < 1e-3) continue;
    const ChartMatrix a = chart_differential(f, x);
    const ChartMatrix b = differential_fd(f, x);
    v.gradient_rel_error = std::max(v.gradient_rel_error, (a - b).norm() / a.norm());
    ++done;
  }

  const MeasureSample s = sample_measure(f, sample_count, kDefaultBurnIn, derive_seed(seed, 3));
  for (const auto& c : pushforward_invariance(f, s)) {
    ++v.invariance_total;
    if (c.pass) ++v.invariance_pass;
  }
  for (const auto& b : pullback_balance(f, s)) {
    ++v.pullback_total;
    if (b.pass) ++v.pullback_pass;
  }
  v.constructor_residual = constructor_residual(entry, 500, derive_seed(seed, 4));

  v.ok = v.green_residual < 1e-8 && v.gradient_rel_error < 1e-5 && v.invariance_pass == v.invariance_total &&
         v.pullback_pass == v.pullback_total &&
         (std::isnan(v.constructor_residual) || v.constructor_residual < 1e-9);
  return v;
}

ordered_json validation_json(const ZooValidation& v) {
  ordered_json j;
  j["label"] = v.label;
  j["green_residual"] = v.green_residual;
  j["gradient_rel_error"] = v.gradient_rel_error;
  j["invariance"] = {{"pass", v.invariance_pass}, {"total", v.invariance_total}};
  j["pullback"] = {{"pass", v.pullback_pass}, {"total", v.pullback_total}};
  if (std::isnan(v.constructor_residual)) j["constructor_residual"] = nullptr;
  else j["constructor_residual"] = v.constructor_residual;
  j["ok"] = v.ok;
  return j;
}

ordered_json run_subcommand(const std::string& name, const ExperimentConfig& c) {
  static const std::vector<std::string> known{"sample",    "exponents", "masses",      "linearize",
                                              "dimension", "verdict",   "validate-zoo"};
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    throw ConfigError("unknown subcommand '" + name + "'");
  }
  validate_config(c);
  fs::create_directories(c.output_dir);
  Staging stage(c.output_dir, name);
  ordered_json summary;
  summary["subcommand"] = name;

  if (name == "validate-zoo") {
    ordered_json report;
    report["config_hash"] = config_hash(c);
    report["seed"] = c.seed;
    report["entries"] = ordered_json::array();
    bool all_ok = true;
    const std::uint64_t seed = stream_seed(c.seed, SeedStream::validation);
    for (const auto& entry : default_zoo()) {
      save_zoo_entry(entry, stage.path("zoo").string());
      const ZooValidation v = validate_zoo_entry(entry, derive_seed(seed, report["entries"].size()), c.sample_count);
      report["entries"].push_back(validation_json(v));
      all_ok = all_ok && v.ok;
    }
    stage.add("zoo");
    report["all_ok"] = all_ok;
    stage.write("validate_zoo.json", dump(report));
    stage.commit();
    summary["all_ok"] = all_ok;
    return summary;
  }

  const ZooEntry entry = resolve_map(c.map);
  summary["map"] = entry.map.label();
  const int d = entry.map.degree();

  if (name == "sample") {
    const MeasureSample s = draw_sample(entry, c, c.sample_count);
    std::ostringstream os;
    write_sample_csv(os, s, csv_provenance(c));
    stage.write("sample.csv", os.str());
    summary["count"] = s.count;
    summary["resampled"] = s.resampled;
    summary["skipped_critical"] = s.skipped_critical;
  } else if (name == "exponents") {
    const SpectrumEstimate est = run_spectrum(entry, c);
    const ordered_json j = exponents_json(entry, c, est);
    stage.write("exponents.json", dump(j));
    summary["lambdas"] = est.lambdas;
    summary["bd_pass"] = j["spectrum"]["bd_pass"];
  } else if (name == "masses") {
    const MassCurves mc = run_masses(entry, c);
    ordered_json j = provenance(c, entry);
    j["stream_seed"] = stream_seed(c.seed, SeedStream::masses);
    j["R0"] = kR0;
    j["files"] = ordered_json::array();
    for (const auto& m : mc.curves) {
      std::ostringstream os;
      write_mass_curve_csv(os, m, csv_provenance(c));
      stage.write(mass_file(m), os.str());
      j["files"].push_back(mass_file(m));
    }
    j["pointwise_inclusions"] = inclusion_json(mc.inclusions);
    j["mass_monotonicity"] = mass_monotonicity(mc, c);
    stage.write("masses.json", dump(j));
    summary["curves"] = mc.curves.size();
    summary["pointwise_violations"] = mc.inclusions.lb_not_in_b + mc.inclusions.rho_monotonicity +
                                      mc.inclusions.tau_monotonicity + mc.inclusions.nu_monotonicity;
  } else if (name == "linearize") {
    const MeasureSample s = draw_sample(entry, c, c.lin_points);
    const std::uint64_t seed = stream_seed(c.seed, SeedStream::linearize);
    std::vector<RenormalizationTrace> traces(s.points.size());
    parallel_for(traces.size(), [&](std::size_t i) {
      Rng rng(derive_seed(seed, i));
      const Orbit orbit = extension_orbit(entry.map, s.points[i], c.max_n, rng);
      traces[i] = sqrt_d_linearization_test(entry.map, orbit, c.max_n, c.ball_radius, c.recurrence_radius);
    });
    ordered_json j = provenance(c, entry);
    j["stream_seed"] = seed;
    int counts[3] = {0, 0, 0};
    ordered_json files = ordered_json::array();
    for (std::size_t i = 0; i < traces.size(); ++i) {
      char file[32];
      std::snprintf(file, sizeof file, "traces/trace_%03zu.json", i);
      ordered_json t = trace_json(traces[i]);
      t["config_hash"] = config_hash(c);
      t["seed"] = c.seed;
      stage.write(file, dump(t));
      files.push_back(file);
      ++counts[static_cast<int>(traces[i].verdict)];
    }
    const double total = static_cast<double>(traces.size());
    j["points"] = traces.size();
    j["converging"] = counts[0];
    j["diverging"] = counts[1];
    j["inconclusive"] = counts[2];
    j["converging_fraction"] = counts[0] / total;
    j["diverging_fraction"] = counts[1] / total;
    j["files"] = files;
    stage.write("linearize.json", dump(j));
    summary["converging"] = counts[0];
    summary["diverging"] = counts[1];
    summary["inconclusive"] = counts[2];
  } else if (name == "dimension") {
    const SpectrumEstimate est = run_spectrum(entry, c);
    const DimensionReport r = run_dimension(entry, c, est);
    ordered_json j = provenance(c, entry);
    j["report"] = dimension_json(r);
    const DimensionConsistency dc = dimension_consistency(r, est, d);
    j["consistency"] = {{"within_bound", dc.within_bound},
                        {"slack", dc.slack},
                        {"maximal_candidate", dc.maximal_candidate},
                        {"exponents_minimal", dc.exponents_minimal},
                        {"consistent", dc.consistent}};
    stage.write("dimension.json", dump(j));
    summary["measured_local_dim"] = r.measured_local_dim;
    summary["upper_bound"] = r.upper_bound;
  } else if (name == "verdict") {
    const SpectrumEstimate est = run_spectrum(entry, c);
    const MinimalityVerdict mv = exponent_minimality_test(est, d);
    const MassCurves mc = run_masses(entry, c);
    const DimensionReport r = run_dimension(entry, c, est);
    const int k = entry.map.dim();
    const bool dim_max = r.measured_local_dim > 2.0 * k - 0.2;
    const MassCurve& vc = v_curve(mc);
    double min_v = 1.0;
    int min_v_n = vc.rows.empty() ? 0 : vc.rows.front().n;
    for (const auto& row : vc.rows) {
      if (row.v.mass < min_v) {
        min_v = row.v.mass;
        min_v_n = row.n;
      }
    }
    const bool decay = min_v < kVMassDecay;
    const bool lattes = mv.minimal && dim_max;

    ordered_json j = provenance(c, entry);
    ordered_json s;
    s["minimality"] = mv.minimal ? "pass" : "fail";
    s["dimension_max"] = dim_max ? "pass" : "fail";
    s["v_mass_decay"] = decay ? "yes" : "no";
    s["lattes_verdict"] = lattes ? "consistent" : "no";
    j["summary"] = s;
    j["statement"] = std::string(lattes ? "consistent with" : "inconsistent with") +
                     " the Lattes characterization (minimal exponents and maximal dimension); a diagnostic, not a proof";
    ordered_json margins;
    margins["minimality_margin_se"] = mv.margin_se;
    margins["measured_local_dim"] = r.measured_local_dim;
    margins["ci95"] = {r.ci95.first, r.ci95.second};
    margins["dimension_threshold"] = 2.0 * k - 0.2;
    margins["dimension_margin"] = r.measured_local_dim - (2.0 * k - 0.2);
    margins["v_nu"] = vc.nu;
    margins["v_rho"] = vc.rho;
    margins["v_tau"] = vc.tau;
    margins["min_v_mass"] = min_v;
    margins["min_v_mass_n"] = min_v_n;
    margins["v_decay_threshold"] = kVMassDecay;
    j["margins"] = margins;
    j["exponents"] = spectrum_report(est, d);
    j["dimension"] = dimension_json(r);
    j["pointwise_inclusions"] = inclusion_json(mc.inclusions);
    stage.write("verdict.json", dump(j));
    summary["verdict"] = s;
  }
  stage.commit();
  return summary;
}

}  // namespace greenlab
