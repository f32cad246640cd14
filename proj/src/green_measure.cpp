#include "greenlab/green_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace greenlab {

namespace {

constexpr int kMaxGreenIterations = 200;
constexpr double kResidualLimit = 1e-8;
constexpr double kCriticalSkip = 1e-10;
constexpr int kBirkhoffBlock = 20;

// One preimage step with perturbed retries when the root finder struggles.
ProjPoint backward_step(const HomogeneousMap& f, const ProjPoint& y, Rng& rng, int& resampled) {
  double residual = 0.0;
  ProjPoint x = random_preimage(f, y, rng, &residual);
  ProjPoint target = y;
  for (int attempt = 0; residual > kResidualLimit && attempt < 8; ++attempt) {
    ++resampled;
    warn("sampler: preimage residual " + std::to_string(residual) + ", retrying with perturbed target");
    LiftVector v = target.coords();
    for (int i = 0; i < v.size(); ++i) v[i] += 1e-9 * complex_normal(rng);
    target = normalize<double>(v);
    x = random_preimage(f, target, rng, &residual);
  }
  return x;
}

bool near_critical(const HomogeneousMap& f, const ProjPoint& x) {
  return critical_proximity(f, x) < kCriticalSkip;
}

}  // namespace

GreenEvaluation green_function(const HomogeneousMap& f, const LiftVector& v, double tol) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw DomainError("green_function: zero lift");
  const double d = f.degree();
  GreenEvaluation out;
  out.point_lift = v;
  LiftVector u = v / norm;
  double value = std::log(norm);
  double weight = 1.0;
  double largest = 1.0;  // running bound on |log |F(u)|| over the unit sphere
  for (int j = 1; j <= kMaxGreenIterations; ++j) {
    const LiftVector image = f.lift(u);
    const double n = image.norm();
    if (!(n > 0.0)) throw NumericError("green_function: lift vanished");
    const double step = std::log(n);
    weight /= d;
    const double increment = weight * step;
    value += increment;
    largest = std::max(largest, std::abs(step));
    u = image / n;
    out.iterations = j;
    out.residual = std::abs(increment);
    if (out.residual < tol && weight * largest / (d - 1.0) < tol) {
      out.value = value;
      return out;
    }
  }
  throw NumericError("green_function: no convergence after 200 iterations");
}

std::string to_string(SampleMethod method) {
  return method == SampleMethod::backward_iteration ? "backward_iteration" : "forward_birkhoff";
}

SampleMethod sample_method_from_string(const std::string& name) {
  if (name == "backward_iteration") return SampleMethod::backward_iteration;
  if (name == "forward_birkhoff") return SampleMethod::forward_birkhoff;
  throw ConfigError("unknown sample method '" + name + "'");
}

ProjPoint default_start(int dim) {
  LiftVector v(dim + 1);
  if (dim == 1) v << 1.0, Complex(0.37, 0.21);
  else v << 1.0, Complex(0.37, 0.21), Complex(0.53, -0.17);
  return normalize<double>(v);
}

MeasureSample sample_measure(const HomogeneousMap& f, int count, int burn_in, std::uint64_t seed,
                             SampleMethod method) {
  if (count <= 0) throw DomainError("sample_measure: count must be positive");
  if (burn_in < 0) throw DomainError("sample_measure: burn_in must be nonnegative");
  if (f.solver() == PreimageSolver::none) {
    throw UnsupportedError("map '" + f.label() + "' has no preimage solver; " + to_string(method) +
                           " sampling is unsupported");
  }
  MeasureSample s;
  s.map_label = f.label();
  s.dim = f.dim();
  s.method = method;
  s.burn_in = burn_in;
  s.seed = seed;
  s.count = count;
  s.points.reserve(count);

  Rng rng(seed);
  ProjPoint y = default_start(f.dim());
  for (int i = 0; i < burn_in; ++i) y = backward_step(f, y, rng, s.resampled);

  if (method == SampleMethod::backward_iteration) {
    while (static_cast<int>(s.points.size()) < count) {
      y = backward_step(f, y, rng, s.resampled);
      if (near_critical(f, y)) {
        ++s.skipped_critical;
        continue;
      }
      s.points.push_back(y);
    }
    return s;
  }

  while (static_cast<int>(s.points.size()) < count) {
    for (int i = 0; i < kBirkhoffBlock; ++i) y = backward_step(f, y, rng, s.resampled);
    ProjPoint x = y;
    for (int i = 0; i < kBirkhoffBlock && static_cast<int>(s.points.size()) < count; ++i) {
      if (near_critical(f, x)) ++s.skipped_critical;
      else s.points.push_back(x);
      x = eval(f, x);
    }
  }
  return s;
}

MassEstimate empirical_mass(const MeasureSample& sample, const std::function<bool(const ProjPoint&)>& predicate) {
  const std::size_t n = sample.points.size();
  if (n < 100) throw DomainError("empirical_mass: sample needs at least 100 points");
  std::size_t hits = 0;
  for (const auto& p : sample.points) hits += predicate(p) ? 1 : 0;
  MassEstimate m;
  m.mass = static_cast<double>(hits) / static_cast<double>(n);
  m.standard_error = std::sqrt(m.mass * (1.0 - m.mass) / static_cast<double>(n));
  return m;
}

std::vector<InvarianceCheck> pushforward_invariance(const HomogeneousMap& f, const MeasureSample& sample,
                                                   int n_functions) {
  const std::size_t n = sample.points.size();
  if (n < 2) throw DomainError("pushforward_invariance: sample too small");
  std::vector<ProjPoint> pushed;
  pushed.reserve(n);
  for (const auto& p : sample.points) pushed.push_back(eval(f, p));

  std::vector<InvarianceCheck> out;
  for (int j = 0; j < n_functions; ++j) {
    const ProjPoint c = quasi_random_point(f.dim(), static_cast<std::uint64_t>(j) + 1);
    auto moments = [&](const std::vector<ProjPoint>& pts) {
      double sum = 0.0, sq = 0.0;
      for (const auto& p : pts) {
        const double phi = std::norm(c.coords().dot(p.coords()));
        sum += phi;
        sq += phi * phi;
      }
      const double mean = sum / n;
      const double var = std::max(0.0, sq / n - mean * mean);
      return std::pair{mean, var};
    };
    const auto [m0, v0] = moments(sample.points);
    const auto [m1, v1] = moments(pushed);
    InvarianceCheck check;
    check.mean_sample = m0;
    check.mean_pushed = m1;
    check.combined_se = std::sqrt((v0 + v1) / static_cast<double>(n));
    check.pass = std::abs(m0 - m1) <= 3.0 * check.combined_se + 1e-15;
    out.push_back(check);
  }
  return out;
}

double binomial_two_sided(long n, double p, long k) {
  // Tails summed in log space; n is at most the sample size.
  auto log_pmf = [&](long i) {
    return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
           (n - i) * std::log1p(-p);
  };
  double lower = 0.0, upper = 0.0;
  for (long i = 0; i <= k; ++i) lower += std::exp(log_pmf(i));
  for (long i = k; i <= n; ++i) upper += std::exp(log_pmf(i));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

std::vector<PullbackBall> pullback_balance(const HomogeneousMap& f, const MeasureSample& sample, int n_balls,
                                           double radius) {
  const std::size_t n = sample.points.size();
  if (n < 100) throw DomainError("pullback_balance: sample needs at least 100 points");
  std::vector<ProjPoint> pushed;
  pushed.reserve(n);
  for (const auto& p : sample.points) pushed.push_back(eval(f, p));
  const double dk = static_cast<double>(f.topological_degree());

  std::vector<PullbackBall> out;
  for (int b = 0; b < n_balls; ++b) {
    PullbackBall ball;
    ball.radius = radius;
    // Near a critical value two branches of f^{-1}(B) merge and carry 2/d^k
    // together, so the centre is moved along the sample until the preimages
    // are separated by twice the first-order branch radii radius / sigma_min.
    std::vector<ProjPoint> centers;
    double best_score = -1.0;
    const std::size_t start = (static_cast<std::size_t>(b) + 1) * n / (n_balls + 1);
    for (std::size_t t = 0; t < n && best_score < 2.0; ++t) {
      const ProjPoint& c = sample.points[(start + t) % n];
      auto pre = preimages(f, c);
      std::vector<double> branch_radius;
      for (const auto& q : pre) branch_radius.push_back(radius / std::max(critical_proximity(f, q), 1e-300));
      double score = INFINITY;
      for (std::size_t i = 0; i < pre.size(); ++i)
        for (std::size_t j = i + 1; j < pre.size(); ++j)
          score = std::min(score, fs_distance(pre[i], pre[j]) / (branch_radius[i] + branch_radius[j]));
      if (score > best_score) {
        best_score = score;
        ball.center = c;
        centers = std::move(pre);
      }
    }
    if (best_score < 2.0) warn("pullback_balance: no sample point with well separated preimage branches");
    ball.ball = empirical_mass(sample, [&](const ProjPoint& p) { return fs_distance(p, ball.center) < radius; });

    std::vector<std::size_t> hits(centers.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(fs_distance(pushed[i], ball.center) < radius)) continue;
      std::size_t nearest = 0;
      double best = 10.0;
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dist = fs_distance(sample.points[i], centers[c]);
        if (dist < best) {
          best = dist;
          nearest = c;
        }
      }
      ++hits[nearest];
    }
    // Conditional on the N points mapped into B the branch counts are
    // multinomial(N, 1/d^k) under f^* mu = d^k mu.
    long total = 0;
    for (auto h : hits) total += static_cast<long>(h);
    const double p = 1.0 / dk;
    const double count_se = std::sqrt(static_cast<double>(total) * p * (1.0 - p));
    for (std::size_t c = 0; c < centers.size(); ++c) {
      MassEstimate m;
      m.mass = static_cast<double>(hits[c]) / static_cast<double>(n);
      m.standard_error = count_se / static_cast<double>(n);
      ball.branches.push_back(m);
      const double dev = std::abs(static_cast<double>(hits[c]) - static_cast<double>(total) * p);
      ball.worst_deviation_se = std::max(ball.worst_deviation_se, count_se > 0.0 ? dev / count_se : 0.0);
      ball.min_p_value = std::min(ball.min_p_value, binomial_two_sided(total, p, static_cast<long>(hits[c])));
    }
    // One 3-sigma test's two-sided level, shared out over the branches.
    ball.pass = ball.min_p_value >= std::erfc(3.0 / std::sqrt(2.0)) / dk;
    out.push_back(std::move(ball));
  }
  return out;
}

void write_sample_csv(std::ostream& out, const MeasureSample& sample, const std::string& extra_header) {
  out << "# map_label=" << sample.map_label << "\n";
  out << "# seed=" << sample.seed << "\n";
  out << "# burn_in=" << sample.burn_in << "\n";
  out << "# method=" << to_string(sample.method) << "\n";
  out << "# count=" << sample.points.size() << "\n";
  if (!extra_header.empty()) out << "# " << extra_header << "\n";
  for (int i = 0; i <= sample.dim; ++i) out << (i ? "," : "") << "re_" << i << ",im_" << i;
  out << "\n";
  char buf[64];
  for (const auto& p : sample.points) {
    for (int i = 0; i <= sample.dim; ++i) {
      std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", i ? "," : "", p[i].real(), p[i].imag());
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace greenlab
