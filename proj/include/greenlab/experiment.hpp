#ifndef GREENLAB_EXPERIMENT_HPP
#define GREENLAB_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenlab/green_measure.hpp"
#include "greenlab/zoo.hpp"

namespace greenlab {

/// Everything a subcommand needs. Serialized as nested JSON:
///   {map, seed, output_dir,
///    sample: {count, burn_in, method},
///    exponents: {n_steps, n_orbits},
///    masses: {n_min, n_max, rho, tau, nu, points},
///    linearize: {points, max_n, ball_radius, recurrence_radius},
///    dimension: {points, r_min, r_max}}
/// Missing keys keep their defaults; unknown keys are rejected.
struct ExperimentConfig {
  std::string map = "power_d2_k1";  // zoo label, map.json path, or zoo entry directory
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  int sample_count = 2000;
  int burn_in = kDefaultBurnIn;
  std::string method = "backward_iteration";

  int n_steps = 200;
  int n_orbits = 500;

  int n_min = 0;
  int n_max = 12;
  std::vector<double> rhos{0.2, 0.1, 0.05, 0.02};
  std::vector<double> taus{2.0, 10.0, 50.0};
  std::vector<double> nus{0.5, 0.3, 0.1};
  int mass_points = 500;

  int lin_points = 20;
  int max_n = 3000;
  double ball_radius = 0.05;
  double recurrence_radius = 1.0;

  int dim_points = 5000;
  double r_min = 0.0;  // 0, 0: automatic range
  double r_max = 0.0;
};

/// Throws ConfigError on bad values (non-positive counts, empty grids, ...).
void validate_config(const ExperimentConfig& c);
nlohmann::ordered_json config_to_json(const ExperimentConfig& c);
/// Overlays the keys present in j onto base.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// Map named by config.map: a zoo label, a map.json file, or a directory
/// holding map.json (and optionally expected.json).
ZooEntry resolve_map(const std::string& source);

/// Independent seed streams per subcommand: seed ^ (stream * kSeedStride).
enum class SeedStream : std::uint64_t { sample = 0, spectrum = 1ULL << 32, masses = 2ULL << 32,
                                        linearize = 3ULL << 32, validation = 4ULL << 32 };
std::uint64_t stream_seed(std::uint64_t seed, SeedStream stream);

/// Finite-difference matrix of tau_{f(x)}^{-1} o f o tau_x at 0 (central
/// differences along real directions; f_x is holomorphic).
ChartMatrix differential_fd(const HomogeneousMap& f, const ProjPoint& x, double h = 1e-5);

/// Zoo invariants of one entry.
struct ZooValidation {
  std::string label;
  double green_residual = 0.0;     // max |G(F v) - d G(v)| over 100 lifts
  double gradient_rel_error = 0.0; // max over 100 non-critical points
  int invariance_pass = 0;         // of 20 test functions
  int invariance_total = 0;
  int pullback_pass = 0;
  int pullback_total = 0;
  double constructor_residual = 0.0;  // commutation / semiconjugacy oracle, NaN if none
  bool ok = false;
};

ZooValidation validate_zoo_entry(const ZooEntry& entry, std::uint64_t seed, int sample_count = 2000);
nlohmann::ordered_json validation_json(const ZooValidation& v);

/// Runs one subcommand, writing its artifacts into config.output_dir.
/// Files are staged in a scratch directory and moved into place only on
/// success. Returns a short JSON summary. Subcommands: sample, exponents,
/// masses, linearize, dimension, verdict, validate-zoo.
nlohmann::ordered_json run_subcommand(const std::string& name, const ExperimentConfig& config);

}  // namespace greenlab

#endif  // GREENLAB_EXPERIMENT_HPP
