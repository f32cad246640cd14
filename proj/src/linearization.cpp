#include "greenlab/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "greenlab/parallel.hpp"

namespace greenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Largest chart vector handed from the linear stage to the nonlinear tail.
constexpr double kLinearStageLimit = 1e-6;
// log of the largest roundoff amplification accepted in the nonlinear tail.
const double kRoundoffGrowth = std::log(1e10);

LiftVector iterate_lift(const HomogeneousMap& f, LiftVector p, int steps) {
  p /= p.norm();
  for (int i = 0; i < steps; ++i) {
    p = f.lift(p);
    const double n = p.norm();
    if (!(n > 0.0)) throw NumericError("lift vanished while iterating");
    p /= n;
  }
  return p;
}

double chart_norm(const Chart& chart, const LiftVector& p) {
  const auto u = chart_inverse(chart, ProjPoint::from_unit(p));
  return u ? u->norm() : kInf;
}

double max_log_sv(const Cocycle& c) { return c.log_singular_values.maxCoeff(); }
double min_log_sv(const Cocycle& c) { return c.log_singular_values.minCoeff(); }

MassEstimate binomial(long hits, long total) {
  MassEstimate m;
  m.mass = total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
  m.standard_error = total > 0 ? std::sqrt(m.mass * (1.0 - m.mass) / static_cast<double>(total)) : 0.0;
  return m;
}

}  // namespace

std::vector<ChartVector> ball_grid(int k, double radius, int count, bool include_origin) {
  std::vector<ChartVector> grid;
  grid.reserve(count);
  if (include_origin && count > 0) grid.push_back(ChartVector::Zero(k));
  for (std::uint64_t i = 1; static_cast<int>(grid.size()) < count; ++i) {
    ChartVector u(k);
    if (k == 1) {
      u[0] = radius * std::sqrt(radical_inverse(i, 2)) * std::polar(1.0, 2.0 * M_PI * radical_inverse(i, 3));
    } else {
      const double s = radius * std::pow(radical_inverse(i, 2), 0.25);
      const double t = radical_inverse(i, 3);
      u[0] = s * std::sqrt(t) * std::polar(1.0, 2.0 * M_PI * radical_inverse(i, 5));
      u[1] = s * std::sqrt(1.0 - t) * std::polar(1.0, 2.0 * M_PI * radical_inverse(i, 7));
    }
    grid.push_back(u);
  }
  return grid;
}

BallImage b_membership(const HomogeneousMap& f, const Orbit& orbit, const Cocycle& c, double rho) {
  const int n = c.length;
  if (n > orbit.length()) throw DomainError("b_membership: orbit shorter than the cocycle");
  BallImage out;
  if (c.near_critical) return out;
  const auto grid = ball_grid(f.dim(), rho, kMembershipGrid);
  const Chart from = chart_at(orbit.points[0]);
  const Chart to = chart_at(orbit.points[n]);
  std::vector<ChartVector> images(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (n == 0) {
      images[i] = grid[i];
    } else {
      const LiftVector p = iterate_lift(f, from.center.coords() + from.frame * c.solve(grid[i]), n);
      const auto v = chart_inverse(to, ProjPoint::from_unit(p));
      if (!v) {
        out.max_image_norm = kInf;
        return out;
      }
      images[i] = *v;
    }
    out.max_image_norm = std::max(out.max_image_norm, images[i].norm());
  }
  out.min_ratio = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      out.min_ratio = std::min(out.min_ratio, (images[i] - images[j]).norm() / (grid[i] - grid[j]).norm());
    }
  }
  out.in_B = out.max_image_norm < kR0 && out.min_ratio > kInjectivityMargin;
  return out;
}

bool lb_condition(const Cocycle& c, int d, double tau) {
  if (c.near_critical) return false;
  return -min_log_sv(c) <= std::log(tau) - 0.5 * c.length * std::log(static_cast<double>(d));
}

bool v_condition(const Cocycle& c, int d, double nu) {
  if (c.near_critical) return false;
  const double ratio = log_jacobian_sq(c) - c.dim() * c.length * std::log(static_cast<double>(d));
  // Ties (z^d at n log d = 2 log(1/nu)) land inside up to rounding.
  return std::abs(ratio) <= 2.0 * std::log(1.0 / nu) * (1 + 1e-12) + 1e-12;
}

MembershipRecord membership(const HomogeneousMap& f, const Orbit& orbit, const Cocycle& c, double rho, double tau,
                            double nu) {
  MembershipRecord r;
  r.point = orbit.points.front();
  r.n = c.length;
  r.rho = rho;
  r.tau = tau;
  r.nu = nu;
  const BallImage b = b_membership(f, orbit, c, rho);
  r.in_B = b.in_B;
  r.min_ratio = b.min_ratio;
  r.max_image_norm = b.max_image_norm;
  r.in_LB = r.in_B && lb_condition(c, f.degree(), tau);
  r.in_V = v_condition(c, f.degree(), nu);
  r.sigma_max_inv = c.near_critical ? kInf : std::exp(-min_log_sv(c));
  r.log_jac_ratio = log_jacobian_sq(c) - f.dim() * c.length * std::log(static_cast<double>(f.degree()));
  return r;
}

MassCurves mass_curves(const HomogeneousMap& f, const MeasureSample& sample, const MassCurveOptions& o) {
  if (o.n_min < 0 || o.n_max < o.n_min) throw DomainError("mass_curves: bad n range");
  if (o.rhos.empty() || o.taus.empty() || o.nus.empty()) throw DomainError("mass_curves: empty parameter grid");
  const int available = static_cast<int>(sample.points.size());
  const int points = o.max_points > 0 ? std::min(o.max_points, available) : available;
  if (points < 100) throw DomainError("mass_curves: needs at least 100 sample points");
  const int n_count = o.n_max - o.n_min + 1;
  const std::size_t nr = o.rhos.size(), nt = o.taus.size(), nv = o.nus.size();

  // Per point and n: B per rho, LB per (rho, tau), V per nu.
  struct Flags {
    std::vector<char> b, raw_b, lb, v;
  };
  std::vector<std::vector<Flags>> flags(points);
  parallel_for(points, [&](std::size_t i) {
    Rng rng(derive_seed(o.seed, i));
    const Orbit orbit = extension_orbit(f, sample.points[i], o.n_max, rng);
    const auto prefixes = cocycle_prefixes(f, orbit);
    auto& mine = flags[i];
    mine.resize(n_count);
    for (int n = o.n_min; n <= o.n_max; ++n) {
      const Cocycle& c = prefixes[n];
      Flags& fl = mine[n - o.n_min];
      fl.b.resize(nr);
      fl.lb.resize(nr * nt);
      fl.v.resize(nv);
      for (std::size_t a = 0; a < nr; ++a) fl.b[a] = b_membership(f, orbit, c, o.rhos[a]).in_B;
      fl.raw_b = fl.b;
      // B(0, rho') lies inside B(0, rho): a witness found on a smaller grid
      // also refutes membership at rho.
      for (std::size_t a = 0; a < nr; ++a) {
        for (std::size_t a2 = 0; a2 < nr; ++a2) {
          if (o.rhos[a2] < o.rhos[a] && !fl.raw_b[a2]) fl.b[a] = 0;
        }
        for (std::size_t t = 0; t < nt; ++t) fl.lb[a * nt + t] = fl.b[a] && lb_condition(c, f.degree(), o.taus[t]);
      }
      for (std::size_t v = 0; v < nv; ++v) fl.v[v] = v_condition(c, f.degree(), o.nus[v]);
    }
  });

  MassCurves out;
  InclusionCounts& inc = out.inclusions;
  for (const auto& per_point : flags) {
    for (const auto& fl : per_point) {
      ++inc.evaluated;
      for (std::size_t a = 0; a < nr; ++a) {
        for (std::size_t t = 0; t < nt; ++t) {
          if (fl.lb[a * nt + t] && !fl.b[a]) ++inc.lb_not_in_b;
          for (std::size_t t2 = 0; t2 < nt; ++t2) {
            if (o.taus[t2] > o.taus[t] && fl.lb[a * nt + t] && !fl.lb[a * nt + t2]) ++inc.tau_monotonicity;
          }
        }
        for (std::size_t a2 = 0; a2 < nr; ++a2) {
          if (o.rhos[a2] < o.rhos[a] && fl.b[a] && !fl.b[a2]) ++inc.rho_monotonicity;
          if (o.rhos[a2] < o.rhos[a] && fl.raw_b[a] && !fl.raw_b[a2]) ++inc.rho_grid_disagreements;
        }
      }
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t v2 = 0; v2 < nv; ++v2) {
          if (o.nus[v2] < o.nus[v] && fl.v[v] && !fl.v[v2]) ++inc.nu_monotonicity;
        }
      }
    }
  }

  for (std::size_t a = 0; a < nr; ++a) {
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t v = 0; v < nv; ++v) {
        MassCurve curve;
        curve.rho = o.rhos[a];
        curve.tau = o.taus[t];
        curve.nu = o.nus[v];
        for (int n = o.n_min; n <= o.n_max; ++n) {
          long b = 0, lb = 0, vv = 0;
          for (const auto& per_point : flags) {
            const Flags& fl = per_point[n - o.n_min];
            b += fl.b[a];
            lb += fl.lb[a * nt + t];
            vv += fl.v[v];
          }
          curve.rows.push_back({n, binomial(b, points), binomial(lb, points), binomial(vv, points)});
        }
        out.curves.push_back(std::move(curve));
      }
    }
  }
  return out;
}

void write_mass_curve_csv(std::ostream& out, const MassCurve& curve, const std::string& header) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "# rho=%.17g tau=%.17g nu=%.17g R0=%.17g\n", curve.rho, curve.tau, curve.nu, kR0);
  out << buf;
  if (!header.empty()) out << "# " << header << "\n";
  out << "n,mass_B,se_B,mass_LB,se_LB,mass_V,se_V\n";
  for (const auto& r : curve.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.b.mass, r.b.standard_error,
                  r.lb.mass, r.lb.standard_error, r.v.mass, r.v.standard_error);
    out << buf;
  }
}

DistortionProfile distortion_profile(const HomogeneousMap& f, const MeasureSample& sample, int n, double rho,
                                     double tau, double nu, std::uint64_t seed, int max_points, double slack) {
  if (n < 0) throw DomainError("distortion_profile: n must be nonnegative");
  const int available = static_cast<int>(sample.points.size());
  const int points = max_points > 0 ? std::min(max_points, available) : available;
  const int k = f.dim();
  DistortionProfile out;
  out.n = n;
  out.tau = tau;
  out.nu = nu;
  out.slack = slack;
  out.entries.resize(points);
  const double bound = std::pow(tau, k) / nu * (1.0 + slack);
  parallel_for(points, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const Orbit orbit = extension_orbit(f, sample.points[i], n, rng);
    const Cocycle c = cocycle_along(f, orbit);
    DistortionEntry& e = out.entries[i];
    if (c.near_critical) {
      e.condition = kInf;
      return;
    }
    // Singular values of the inverse are exp(-s_j), so the ratio is the same.
    e.condition = k == 1 ? 1.0 : std::exp(max_log_sv(c) - min_log_sv(c));
    e.in_V = v_condition(c, f.degree(), nu);
    e.in_LB = lb_condition(c, f.degree(), tau) && b_membership(f, orbit, c, rho).in_B;
    if (e.in_LB && e.in_V) e.sandwich_ok = e.condition <= bound;
  });
  for (const auto& e : out.entries) {
    if (!(e.in_LB && e.in_V)) continue;
    ++out.checked;
    if (!e.sandwich_ok) ++out.violations;
    out.max_condition_checked = std::max(out.max_condition_checked, e.condition);
  }
  return out;
}

std::string to_string(TraceVerdict v) {
  switch (v) {
    case TraceVerdict::converging: return "converging";
    case TraceVerdict::diverging: return "diverging";
    case TraceVerdict::inconclusive: break;
  }
  return "inconclusive";
}

RenormalizationTrace sqrt_d_linearization_test(const HomogeneousMap& f, const Orbit& orbit, int max_n,
                                               double ball_radius, double recurrence_radius,
                                               const SqrtDOptions& options) {
  if (!(ball_radius > 0.0 && ball_radius <= 0.1)) throw DomainError("sqrt_d test: ball_radius must lie in (0, 0.1]");
  if (!(recurrence_radius > 0.0)) throw DomainError("sqrt_d test: recurrence_radius must be positive");
  if (max_n < 0 || orbit.length() < max_n) throw DomainError("sqrt_d test: orbit shorter than max_n");

  RenormalizationTrace trace;
  trace.point = orbit.points.front();
  trace.recurrence_radius = recurrence_radius;
  trace.ball_radius = ball_radius;

  const ProjPoint& x = orbit.points.front();
  std::vector<int> times;
  for (int n = 1; n <= max_n; ++n) {
    if (fs_distance(orbit.points[n], x) < recurrence_radius) times.push_back(n);
  }
  trace.candidates = static_cast<int>(times.size());
  if (times.size() < 3) {
    trace.reason = "fewer than 3 recurrence times below max_n";
    return trace;
  }

  const int k = f.dim();
  const double log_d = std::log(static_cast<double>(f.degree()));
  const Chart chart_x = chart_at(x);
  const auto grid = ball_grid(k, ball_radius, options.grid_points, /*include_origin=*/true);
  const std::size_t g = grid.size();

  // Prefix cocycles: at n - tail for the linear stage, at n for the diameter.
  std::vector<Cocycle> prefixes;
  prefixes.reserve(max_n + 1);
  {
    Cocycle c = identity_cocycle(x);
    prefixes.push_back(c);
    Chart from = chart_x;
    for (int i = 0; i < max_n; ++i) {
      Chart to = chart_at(orbit.points[i + 1]);
      extend_cocycle(c, chart_differential(f, from, to));
      prefixes.push_back(c);
      from = std::move(to);
    }
  }

  // Candidates whose linear stage would leave the linear regime cannot be
  // resolved in floating point; their derivative at 0 is already far from any
  // bounded limit, so they only enter the divergence test.
  std::vector<int> usable;  // resolved candidates
  std::vector<std::vector<LiftVector>> images;
  std::vector<int> all_n;
  std::vector<double> log_diam;
  std::vector<char> exits;
  std::vector<double> smax(prefixes.size());
  for (std::size_t i = 0; i < prefixes.size(); ++i) smax[i] = max_log_sv(prefixes[i]);
  for (int n : times) {
    if (prefixes[n].near_critical) continue;
    // Nonlinear tail x_m -> x_n: as long as roundoff growth stays below the budget.
    int m = n;
    while (m > 0 && smax[n] - smax[m - 1] <= kRoundoffGrowth) --m;
    const double ld = std::log(2.0 * ball_radius) + smax[n] - 0.5 * n * log_d;
    std::vector<LiftVector> img(g);
    bool resolved = true;
    if (m == 0) {
      const double scale = std::exp(-0.5 * n * log_d);
      for (std::size_t i = 0; i < g; ++i) {
        img[i] = iterate_lift(f, chart_x.center.coords() + chart_x.frame * (scale * grid[i]), n);
      }
    } else {
      const Cocycle& cm = prefixes[m];
      const double shift = smax[m];
      const double log_scale = shift - 0.5 * n * log_d;
      if (std::log(ball_radius) + log_scale > std::log(kLinearStageLimit)) {
        resolved = false;
      } else {
        const ChartMatrix a = cm.scaled_matrix(shift);
        const Chart chart_m = chart_at(orbit.points[m]);
        for (std::size_t i = 0; i < g; ++i) {
          const ChartVector v = std::exp(log_scale) * (a * grid[i]);
          img[i] = iterate_lift(f, chart_m.center.coords() + chart_m.frame * v, n - m);
        }
      }
    }
    bool out_of_ball = !resolved;
    if (resolved) {
      for (const auto& p : img) {
        if (!(chart_norm(chart_x, p) < kR0)) out_of_ball = true;
      }
      usable.push_back(n);
      images.push_back(std::move(img));
    }
    all_n.push_back(n);
    log_diam.push_back(ld);
    exits.push_back(out_of_ball);
  }
  const std::size_t nc = usable.size();
  auto deviation = [&](std::size_t a, std::size_t b, double cap) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      worst = std::max(worst, fs_distance(ProjPoint::from_unit(images[a][i]), ProjPoint::from_unit(images[b][i])));
      if (worst > cap) break;
    }
    return worst;
  };

  // Closest pair of renormalized maps. The image of the origin is a
  // 1-Lipschitz key (|<e0, p>| = cos of the distance to e0), so pairs whose
  // keys differ by more than the current best are skipped.
  std::vector<double> key(nc);
  for (std::size_t c = 0; c < nc; ++c) key[c] = std::abs(images[c][0][0]);
  std::vector<std::size_t> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key[a] < key[b] || (key[a] == key[b] && a < b);
  });
  double best = kInf;
  std::size_t best_a = 0, best_b = nc > 1 ? 1 : 0;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = i + 1; j < nc && key[order[j]] - key[order[i]] < best; ++j) {
      const std::size_t a = order[i], b = order[j];
      if (fs_distance(ProjPoint::from_unit(images[a][0]), ProjPoint::from_unit(images[b][0])) >= best) continue;
      const double dev = deviation(a, b, best);
      if (dev < best) {
        best = dev;
        best_a = std::min(a, b);
        best_b = std::max(a, b);
      }
    }
  }

  // Extend backwards: prepend the earlier map closest to the current head
  // among those farther than the current first deviation.
  std::vector<std::size_t> chain;
  std::vector<double> devs;
  if (nc >= 2) {
    chain = {best_a, best_b};
    devs = {best};
  }
  while (nc >= 2 && static_cast<int>(chain.size()) < options.max_chain) {
    const std::size_t head = chain.front();
    double pick = kInf;
    std::size_t pick_c = head;
    for (std::size_t c = 0; c < head; ++c) {
      const double dev = deviation(c, head, pick);
      if (dev > devs.front() && dev < pick) {
        pick = dev;
        pick_c = c;
      }
    }
    if (pick_c == head) break;
    chain.insert(chain.begin(), pick_c);
    devs.insert(devs.begin(), pick);
  }

  if (chain.size() >= 3 && devs.back() < options.converge_tol) {
    trace.verdict = TraceVerdict::converging;
    for (std::size_t c : chain) trace.subsequence.push_back(usable[c]);
    trace.sup_deviation = devs;
    char buf[160];
    std::snprintf(buf, sizeof buf, "chain of %zu recurrence times, deviations decreasing to %.3g", chain.size(),
                  devs.back());
    trace.reason = buf;
    return trace;
  }

  for (std::size_t c = 0; c + 1 < all_n.size(); ++c) {
    if (exits[c + 1] && log_diam[c + 1] - log_diam[c] >= std::log(2.0)) {
      trace.verdict = TraceVerdict::diverging;
      const std::size_t first = c + 2 > 32 ? c + 2 - 32 : 0;
      for (std::size_t i = first; i <= c + 1; ++i) trace.subsequence.push_back(all_n[i]);
      // Deviations between consecutive maps; unresolved maps give infinity.
      auto slot = [&](int n) {
        const auto it = std::lower_bound(usable.begin(), usable.end(), n);
        return it != usable.end() && *it == n ? static_cast<std::ptrdiff_t>(it - usable.begin()) : -1;
      };
      for (std::size_t i = first; i < c + 1; ++i) {
        const auto a = slot(all_n[i]), b = slot(all_n[i + 1]);
        trace.sup_deviation.push_back(a >= 0 && b >= 0 ? deviation(a, b, kInf) : kInf);
      }
      char buf[160];
      std::snprintf(buf, sizeof buf, "image leaves B(0, R0) at n = %d while the linearized diameter grows by %.3g",
                    all_n[c + 1], std::exp(log_diam[c + 1] - log_diam[c]));
      trace.reason = buf;
      return trace;
    }
  }

  for (std::size_t c : chain) trace.subsequence.push_back(usable[c]);
  trace.sup_deviation = devs;
  char buf[160];
  if (chain.empty()) std::snprintf(buf, sizeof buf, "fewer than 2 resolvable maps; no escape with doubling diameter");
  else std::snprintf(buf, sizeof buf, "best chain of %zu ends at deviation %.3g; no escape with doubling diameter",
                     chain.size(), devs.back());
  trace.reason = buf;
  return trace;
}

RenormalizationTrace sqrt_d_linearization_test(const HomogeneousMap& f, const ProjPoint& x, int max_n,
                                               double ball_radius, double recurrence_radius,
                                               const SqrtDOptions& options) {
  return sqrt_d_linearization_test(f, forward_orbit(f, x, std::max(0, max_n)), max_n, ball_radius,
                                   recurrence_radius, options);
}

nlohmann::ordered_json trace_json(const RenormalizationTrace& trace) {
  nlohmann::ordered_json j;
  std::vector<std::vector<double>> coords;
  for (int i = 0; i <= trace.point.dim(); ++i) coords.push_back({trace.point[i].real(), trace.point[i].imag()});
  j["point"] = coords;
  j["subsequence"] = trace.subsequence;
  j["sup_deviation"] = trace.sup_deviation;
  j["recurrence_radius"] = trace.recurrence_radius;
  j["ball_radius"] = trace.ball_radius;
  j["candidates"] = trace.candidates;
  j["verdict"] = to_string(trace.verdict);
  j["reason"] = trace.reason;
  return j;
}

}  // namespace greenlab
