#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "critmult/lp.hpp"
#include "critmult/stability.hpp"

namespace critmult {

const char* to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::Bounded: return "Bounded";
    case ProbeVerdict::Diverging: return "Diverging";
    default: return "Inconclusive";
  }
}

namespace {

double norm(const std::vector<double>& a) {
  double s = 0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double exact_norm(const Vec& a) { return std::sqrt(norm2_squared(a).get_d()); }

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> ball_sample(std::mt19937_64& rng, std::size_t dim, double r) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> d(dim);
  double len = 0;
  while (len == 0) {
    for (auto& t : d) t = gauss(rng);
    len = norm(d);
  }
  const double scale = r * unif(rng) / len;
  for (auto& t : d) t *= scale;
  return d;
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

struct SampleOutcome {
  double modulus = std::numeric_limits<double>::quiet_NaN();
  double eb_ratio = std::numeric_limits<double>::quiet_NaN();
};

std::optional<Vec> nonzero_point(const HPoly& cone) {
  HPoly boxed = cone;
  for (std::size_t j = 0; j < cone.dim; ++j) {
    boxed.add_ineq(unit(cone.dim, j), 1);
    boxed.add_ineq(scale(Rational(-1), unit(cone.dim, j)), 1);
  }
  for (std::size_t j = 0; j < cone.dim; ++j)
    for (int s : {1, -1}) {
      LpResult r = lp_maximize(boxed, scale(Rational(s), unit(cone.dim, j)));
      if (r.status == LpStatus::Optimal && sgn(r.value) > 0) return r.x;
    }
  return std::nullopt;
}

}  // namespace

CalmnessProbeReport calmness_probe(const VariationalSystem& vs, const Vec& x, const Vec& v, const ProbeOptions& opts) {
  const Vec z = require_multiplier(vs, x, v);
  if (opts.radii.empty()) throw std::invalid_argument("radii list is empty");
  for (double r : opts.radii)
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("radii must be positive");
  if (opts.samples_per_radius < 1) throw std::invalid_argument("samples per radius must be positive");

  const std::size_t n = vs.n(), m = vs.m();
  const HPoly lambda = multiplier_set(vs, x).hpoly;
  const PrimalDualPoint seed = make_point(vs, x, v);
  const std::vector<double> xd = to_doubles(x), vd = to_doubles(v);

  CalmnessProbeReport rep;
  rep.radii = opts.radii;
  rep.seed = opts.seed;
  rep.samples_per_radius = opts.samples_per_radius;

  const std::size_t per = static_cast<std::size_t>(opts.samples_per_radius);
  std::vector<SampleOutcome> outcomes(opts.radii.size() * per);
  parallel_for(outcomes.size(), opts.threads, [&](std::size_t task) {
    const std::size_t ri = task / per, k = task % per;
    std::seed_seq ss{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                     static_cast<std::uint32_t>(ri), static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(ss);
    const double r = opts.radii[ri];
    SampleOutcome& out = outcomes[task];

    auto d = ball_sample(rng, n + m, r);
    Perturbation p{std::vector<double>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n)),
                   std::vector<double>(d.begin() + static_cast<std::ptrdiff_t>(n), d.end())};
    const double pn = norm(p.p1) + norm(p.p2);
    if (pn > 0) {
      for (const auto& s : solve_perturbed(vs, p, seed, opts.solver).solutions) {
        if (std::hypot(dist(s.x, xd), dist(s.v, vd)) > opts.locality) continue;
        const double ratio = (dist(s.x, xd) + distance_point_polyhedron(s.v, lambda)) / pn;
        if (std::isnan(out.modulus) || ratio > out.modulus) out.modulus = ratio;
      }
    }

    auto e = ball_sample(rng, n + m, r);
    std::vector<double> xs(n), vs_(m);
    for (std::size_t i = 0; i < n; ++i) xs[i] = xd[i] + e[i];
    for (std::size_t i = 0; i < m; ++i) vs_[i] = vd[i] + e[n + i];
    const double res = error_bound_residual(vs, xs, vs_);
    if (std::isfinite(res) && res > 0) out.eb_ratio = (dist(xs, xd) + distance_point_polyhedron(vs_, lambda)) / res;
  });

  for (std::size_t ri = 0; ri < opts.radii.size(); ++ri) {
    double mx = std::numeric_limits<double>::quiet_NaN(), eb = std::numeric_limits<double>::quiet_NaN();
    int skipped = 0;
    for (std::size_t k = 0; k < per; ++k) {
      const auto& o = outcomes[ri * per + k];
      if (std::isnan(o.modulus))
        ++skipped;
      else if (std::isnan(mx) || o.modulus > mx)
        mx = o.modulus;
      if (!std::isnan(o.eb_ratio) && (std::isnan(eb) || o.eb_ratio > eb)) eb = o.eb_ratio;
    }
    rep.empirical_moduli.push_back(mx);
    rep.skipped.push_back(skipped);
    rep.error_bound_ratios.push_back(eb);
  }

  bool diverging = false;
  if (opts.path_witness) {
    CriticalityVerdict cv = classify_multiplier(vs, x, v);
    if (cv.status == Criticality::Critical) {
      const CriticalityWitness& w = *cv.witness;
      const Matrix j = vs.phi_jacobian(x);
      const Vec jxi = mat_vec(j, w.xi);
      for (double td : opts.path_ts) {
        const Rational t = from_double(td);
        const Vec xt = add(x, scale(t, w.xi)), vt = add(v, scale(t, w.eta));
        const Vec p1 = vs.psi(xt, vt);
        const Vec zt = add(z, scale(t, jxi));
        const Vec p2 = sub(zt, vs.phi().eval(xt));
        PathSample ps;
        ps.t = td;
        const double pn = exact_norm(p1) + exact_norm(p2);
        ps.ratio = pn > 0 ? td * exact_norm(w.xi) / pn : std::numeric_limits<double>::infinity();
        if (in_subdifferential(vs.theta(), zt, vt)) {
          Perturbation p{to_doubles(p1), to_doubles(p2)};
          const auto xtd = to_doubles(xt), vtd = to_doubles(vt);
          const double tol = 1e-2 * td * std::sqrt(Rational(norm2_squared(w.xi) + norm2_squared(w.eta)).get_d());
          auto hits = [&](const PerturbedSolve& sol) {
            return std::any_of(sol.solutions.begin(), sol.solutions.end(),
                               [&](const PerturbedSolution& s) { return std::hypot(dist(s.x, xtd), dist(s.v, vtd)) <= tol; });
          };
          ps.recovered = hits(solve_perturbed(vs, p, seed, opts.solver));
          if (!ps.recovered) {
            SolverOptions started = opts.solver;
            started.start = std::make_pair(xtd, vtd);
            ps.recovered = hits(solve_perturbed(vs, p, seed, started));
          }
        }
        if (td >= 1e-4 && ps.ratio > 1e3) diverging = true;
        rep.path.push_back(ps);
      }
    }
  }

  if (diverging) {
    rep.verdict = ProbeVerdict::Diverging;
  } else if (rep.empirical_moduli.size() >= 3) {
    const auto last = rep.empirical_moduli.end() - 3;
    const bool finite = std::all_of(last, rep.empirical_moduli.end(), [](double t) { return std::isfinite(t); });
    if (finite) {
      const double hi = *std::max_element(last, rep.empirical_moduli.end());
      const double lo = *std::min_element(last, rep.empirical_moduli.end());
      if (hi <= 10 * lo || hi == 0) {
        rep.verdict = ProbeVerdict::Bounded;
        rep.modulus = hi;
      }
    }
  }
  return rep;
}

bool isolated_calmness_check(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  require_multiplier(vs, x, v);
  if (nontrivial_pair(vs, x, v)) return false;
  return affine_dimension(multiplier_set(vs, x).hpoly) == 0;
}

RobustCalmnessResult robust_isolated_calmness_check(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  RobustCalmnessResult r;
  SoscVerdict s = sosc_check(vs, x, v);
  r.sosc = s.holds;
  r.sosc_violation = s.violating_direction;
  r.singleton = multiplier_set(vs, x).is_singleton();
  r.holds = r.sosc && r.singleton;
  if (!r.sosc) r.failed = "SOSC";
  if (!r.singleton) r.failed += r.failed.empty() ? "Lambda not a singleton" : ", Lambda not a singleton";
  return r;
}

LipschitzLikeResult lipschitz_like_check(const VariationalSystem& vs, const Vec& x, const Vec& v) {
  const Vec z = require_multiplier(vs, x, v);
  const std::size_t n = vs.n(), m = vs.m();
  const Matrix h = vs.psi_jacobian_x(x, v);
  const Matrix j = vs.phi_jacobian(x);
  LipschitzLikeResult out;
  out.holds = true;
  // (eta, -J xi) in a limiting normal cone piece and H xi + J^T eta = 0, in variables (xi, eta).
  auto lift = [&](const Vec& g) {
    Vec row = zeros(n + m);
    Vec gy(g.begin() + static_cast<std::ptrdiff_t>(m), g.end());
    Vec jt = mat_t_vec(j, gy, n);
    for (std::size_t c = 0; c < n; ++c) row[c] = -jt[c];
    for (std::size_t i = 0; i < m; ++i) row[n + i] = g[i];
    return row;
  };
  for (const auto& cone : limiting_normal_cone(vs.graph(), z, v)) {
    ++out.cones;
    HPoly sys(n + m);
    for (const auto& c : cone.ineqs) sys.add_ineq(lift(c.normal), c.rhs);
    for (const auto& c : cone.eqs) sys.add_eq(lift(c.normal), c.rhs);
    for (std::size_t k = 0; k < n; ++k) {
      Vec row = zeros(n + m);
      for (std::size_t c = 0; c < n; ++c) row[c] = h[k][c];
      for (std::size_t i = 0; i < m; ++i) row[n + i] = j[i][k];
      sys.add_eq(std::move(row), 0);
    }
    if (auto y = nonzero_point(sys)) {
      Vec both = primitive(*y);
      out.holds = false;
      out.violating = CriticalityWitness{Vec(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(n)),
                                         Vec(both.begin() + static_cast<std::ptrdiff_t>(n), both.end())};
      break;
    }
  }
  return out;
}

SemiIsolatedSummary semi_isolated_summary(const VariationalSystem& vs, const Vec& x, const Vec& v,
                                          const ProbeOptions& opts) {
  SemiIsolatedSummary s;
  s.isolated_calm = isolated_calmness_check(vs, x, v);
  s.criticality = classify_multiplier(vs, x, v).status;
  s.probe = calmness_probe(vs, x, v, opts).verdict;
  const bool noncritical = s.criticality == Criticality::Noncritical;
  s.chain_holds = (!s.isolated_calm || noncritical) &&
                  (noncritical ? s.probe != ProbeVerdict::Diverging : s.probe == ProbeVerdict::Diverging);
  s.line = std::string("(") + (s.isolated_calm ? "true" : "false") + ", " + to_string(s.criticality) + ", " +
           to_string(s.probe) + ")" + (s.chain_holds ? "" : " chain violated");
  return s;
}

}  // namespace critmult
