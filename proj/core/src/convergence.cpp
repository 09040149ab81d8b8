#include "critmult/convergence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace critmult {

const char* to_string(RateKind k) {
  switch (k) {
    case RateKind::Superlinear: return "Superlinear";
    case RateKind::Linear: return "Linear";
    default: return "Stalled";
  }
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kFeasTol = 1e-9;

double norm(const std::vector<double>& a) {
  double s = 0;
  for (double t : a) s += t * t;
  return std::sqrt(s);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct ThetaData {
  std::vector<VectorXd> a, d;
  std::vector<double> alpha, beta;
  explicit ThetaData(const CpwlFunction& th) {
    for (const auto& p : th.pieces()) {
      auto ad = to_doubles(p.a);
      a.emplace_back(Eigen::Map<VectorXd>(ad.data(), static_cast<Eigen::Index>(ad.size())));
      alpha.push_back(p.alpha.get_d());
    }
    for (const auto& r : th.domain_rows()) {
      auto dd = to_doubles(r.d);
      d.emplace_back(Eigen::Map<VectorXd>(dd.data(), static_cast<Eigen::Index>(dd.size())));
      beta.push_back(r.beta.get_d());
    }
  }
};

std::vector<std::vector<std::size_t>> all_subsets(std::size_t count, bool nonempty) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned long mask = nonempty ? 1 : 0; mask < (1UL << count); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t b = 0; b < count; ++b)
      if (mask & (1UL << b)) s.push_back(b);
    out.push_back(std::move(s));
  }
  return out;
}

struct Candidate {
  Iterate point;
  double step = std::numeric_limits<double>::infinity();
};

// Nearest point to (xk, vk) of the affine solution set of one pattern, if it satisfies the pattern inequalities.
std::optional<Candidate> solve_pattern(const VariationalSystem& vs, const ThetaData& th, const Iterate& it,
                                       const MatrixXd& h, const MatrixXd& j, const VectorXd& fk, const VectorXd& phik,
                                       const std::vector<std::size_t>& P, const std::vector<std::size_t>& Q) {
  const auto n = static_cast<Eigen::Index>(vs.n()), m = static_cast<Eigen::Index>(vs.m());
  const auto np = static_cast<Eigen::Index>(P.size()), nq = static_cast<Eigen::Index>(Q.size());
  const Eigen::Index nu = n + m + np + nq;
  const Eigen::Index rows = n + m + 1 + (np - 1) + nq;
  MatrixXd A = MatrixXd::Zero(rows, nu);
  VectorXd b = VectorXd::Zero(rows);
  VectorXd xk = Eigen::Map<const VectorXd>(it.x.data(), n);
  VectorXd vk = Eigen::Map<const VectorXd>(it.v.data(), m);
  Eigen::Index r = 0;
  A.block(r, 0, n, n) = h;
  A.block(r, n, n, m) = j.transpose();
  b.segment(r, n) = h * xk - fk;
  r += n;
  A.block(r, n, m, m) = MatrixXd::Identity(m, m);
  for (Eigen::Index t = 0; t < np; ++t) A.block(r, n + m + t, m, 1) = -th.a[P[static_cast<std::size_t>(t)]];
  for (Eigen::Index t = 0; t < nq; ++t) A.block(r, n + m + np + t, m, 1) = -th.d[Q[static_cast<std::size_t>(t)]];
  r += m;
  A.block(r, n + m, 1, np).setOnes();
  b[r] = 1;
  ++r;
  const VectorXd offset = phik - j * xk;  // z_lin = offset + J x
  auto tight = [&](const VectorXd& g, double rhs) {
    A.block(r, 0, 1, n) = (g.transpose() * j);
    b[r] = rhs - g.dot(offset);
    ++r;
  };
  const std::size_t s0 = P.front();
  for (std::size_t t = 1; t < P.size(); ++t) tight(th.a[P[t]] - th.a[s0], th.alpha[P[t]] - th.alpha[s0]);
  for (auto q : Q) tight(th.d[q], th.beta[q]);

  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
  VectorXd y = cod.solve(b);
  const double scale = 1 + b.norm();
  if ((A * y - b).norm() > 1e-9 * scale) return std::nullopt;
  Eigen::FullPivLU<MatrixXd> lu(A);
  MatrixXd N = lu.kernel();
  if (lu.rank() < nu && N.cols() > 0) {
    MatrixXd SN = N.topRows(n + m);
    VectorXd target(n + m);
    target << xk, vk;
    VectorXd c = SN.completeOrthogonalDecomposition().solve(target - y.head(n + m));
    y += N * c;
  }
  for (Eigen::Index t = 0; t < np + nq; ++t)
    if (y[n + m + t] < -kFeasTol) return std::nullopt;
  const VectorXd z = offset + j * y.head(n);
  const double top = th.a[s0].dot(z) - th.alpha[s0];
  for (std::size_t i = 0; i < th.a.size(); ++i)
    if (th.a[i].dot(z) - th.alpha[i] > top + kFeasTol) return std::nullopt;
  for (std::size_t q = 0; q < th.d.size(); ++q)
    if (th.d[q].dot(z) - th.beta[q] > kFeasTol) return std::nullopt;
  Candidate c;
  c.point.x.assign(y.data(), y.data() + n);
  c.point.v.assign(y.data() + n, y.data() + n + m);
  c.step = std::hypot(dist(c.point.x, it.x), dist(c.point.v, it.v));
  return c;
}

MatrixXd to_eigen(const std::vector<std::vector<double>>& a, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) out(i, c) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  return out;
}

}  // namespace

Trajectory newton_kkt_run(const VariationalSystem& vs, const Vec& x_target, const Iterate& start, int max_iter,
                          double tol) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (start.x.size() != vs.n() || start.v.size() != vs.m()) throw DimensionError("start point dimensions");
  const auto n = static_cast<Eigen::Index>(vs.n()), m = static_cast<Eigen::Index>(vs.m());
  const ThetaData th(vs.theta());
  const auto Ps = all_subsets(th.a.size(), true);
  const auto Qs = all_subsets(th.d.size(), false);
  const HPoly lambda = multiplier_set(vs, x_target).hpoly;
  const std::vector<double> xt = to_doubles(x_target);

  Trajectory tr;
  tr.target.x = x_target;
  tr.target.z = vs.phi().eval(x_target);
  auto record = [&](const Iterate& it) {
    tr.iterates.push_back(it);
    const double dv = distance_point_polyhedron(it.v, lambda);
    tr.dual_distances.push_back(dv);
    tr.distances.push_back(dist(it.x, xt) + dv);
  };
  record(start);
  Iterate cur = start;
  for (int k = 0; k < max_iter; ++k) {
    const VectorXd fk = Eigen::Map<const VectorXd>(vs.f().eval(cur.x).data(), n);
    const MatrixXd h = to_eigen(vs.psi_jacobian_x(cur.x, cur.v), n, n);
    const MatrixXd j = to_eigen(vs.phi_jacobian(cur.x), m, n);
    const auto phid = vs.phi().eval(cur.x);
    const VectorXd phik = Eigen::Map<const VectorXd>(phid.data(), m);
    std::optional<Candidate> best;
    for (const auto& P : Ps)
      for (const auto& Q : Qs) {
        auto c = solve_pattern(vs, th, cur, h, j, fk, phik, P, Q);
        if (c && (!best || c->step < best->step)) best = std::move(c);
      }
    if (!best) {
      tr.diagnostic = "linearized subproblem infeasible at iteration " + std::to_string(k);
      tr.residuals.push_back(std::numeric_limits<double>::infinity());
      return tr;
    }
    const double res = norm(vs.psi(cur.x, cur.v)) + best->step;
    tr.residuals.push_back(res);
    cur = best->point;
    record(cur);
    if (res <= tol) {
      tr.converged = true;
      break;
    }
  }
  tr.residuals.push_back(norm(vs.psi(cur.x, cur.v)));
  if (!tr.converged && tr.residuals.back() <= tol) tr.converged = true;
  return tr;
}

RateClass rate_classify(const std::vector<double>& d) {
  RateClass rc;
  if (d.size() < 2) throw std::invalid_argument("trajectory too short to classify");
  const double floor = 1e-14 * std::max(1.0, d.front());
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k] <= floor) {
      rc.kind = RateKind::Superlinear;
      rc.finite_termination = true;
      return rc;
    }
  if (d.size() < 6) throw std::invalid_argument("trajectory too short to classify");
  const std::size_t tail = 5;
  std::vector<double> ratios;
  for (std::size_t k = d.size() - tail; k < d.size(); ++k) ratios.push_back(d[k] / d[k - 1]);
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  rc.ratio = sorted[sorted.size() / 2];
  // Least-squares slope of log d over the tail.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::size_t first = d.size() - tail - 1;
  const double cnt = static_cast<double>(tail + 1);
  for (std::size_t k = first; k < d.size(); ++k) {
    const double xk = static_cast<double>(k - first), yk = std::log(d[k]);
    sx += xk;
    sy += yk;
    sxx += xk * xk;
    sxy += xk * yk;
  }
  rc.fitted_ratio = std::exp((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
  const bool decreasing = std::is_sorted(ratios.begin(), ratios.end(), std::greater_equal<double>());
  if (decreasing && ratios.back() < 1e-2)
    rc.kind = RateKind::Superlinear;
  else if (rc.ratio >= 1)
    rc.kind = RateKind::Stalled;
  else
    rc.kind = RateKind::Linear;
  return rc;
}

RateClass rate_classify(const Trajectory& t) {
  // Past sqrt(machine epsilon) the distances of a run at a singular solution are rounding noise,
  // so only the prefix down to that level is classified.
  const auto& d = t.distances;
  if (d.empty()) throw std::invalid_argument("trajectory too short to classify");
  const double working = std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, d.front());
  std::size_t end = d.size();
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k] <= working) {
      end = k + 1;
      break;
    }
  if (end < d.size() && end < 6) {
    RateClass rc;
    rc.kind = RateKind::Superlinear;
    rc.finite_termination = true;
    return rc;
  }
  return rate_classify(std::vector<double>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(end)));
}

ConvergenceSummary converge_experiment(const VariationalSystem& vs, const Vec& x, const Vec& v, int starts,
                                       double ball, std::uint64_t seed, int max_iter, double tol, unsigned threads) {
  if (starts < 1) throw std::invalid_argument("number of starts must be positive");
  if (!(ball > 0) || !std::isfinite(ball)) throw std::invalid_argument("ball radius must be positive");
  const std::size_t n = vs.n(), m = vs.m();
  const auto xd = to_doubles(x), vd = to_doubles(v);
  ConvergenceSummary out;
  out.seed = seed;
  out.runs.resize(static_cast<std::size_t>(starts));
  std::vector<std::optional<RateClass>> rates(static_cast<std::size_t>(starts));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<unsigned>(threads, static_cast<unsigned>(starts)); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < out.runs.size(); i = next++) {
        std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(i)};
        std::mt19937_64 rng(ss);
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> dir(n + m);
        double len = 0;
        while (len == 0) {
          for (auto& t : dir) t = gauss(rng);
          len = norm(dir);
        }
        const double rad = ball * std::pow(unif(rng), 1.0 / static_cast<double>(n + m));
        Iterate s{xd, vd};
        for (std::size_t c = 0; c < n; ++c) s.x[c] += rad * dir[c] / len;
        for (std::size_t c = 0; c < m; ++c) s.v[c] += rad * dir[n + c] / len;
        out.runs[i] = newton_kkt_run(vs, x, s, max_iter, tol);
        try {
          rates[i] = rate_classify(out.runs[i]);
        } catch (const std::invalid_argument&) {
        }
      }
    });
  for (auto& t : pool) t.join();
  std::vector<double> linear_ratios;
  out.rates = rates;
  for (const auto& r : rates) {
    if (!r) {
      ++out.unclassified;
      continue;
    }
    switch (r->kind) {
      case RateKind::Superlinear: ++out.superlinear; break;
      case RateKind::Linear:
        ++out.linear;
        linear_ratios.push_back(r->ratio);
        break;
      default: ++out.stalled;
    }
  }
  if (!linear_ratios.empty()) {
    std::sort(linear_ratios.begin(), linear_ratios.end());
    out.median_linear_ratio = linear_ratios[linear_ratios.size() / 2];
  }
  return out;
}

}  // namespace critmult
