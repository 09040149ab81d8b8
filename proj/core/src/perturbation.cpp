#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "critmult/lp.hpp"
#include "critmult/stability.hpp"

namespace critmult {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<std::vector<std::size_t>> subsets_between(const std::vector<std::size_t>& must,
                                                      const std::vector<std::size_t>& pool) {
  std::vector<std::size_t> optional_idx;
  for (auto i : pool)
    if (std::find(must.begin(), must.end(), i) == must.end()) optional_idx.push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (unsigned long mask = 0; mask < (1UL << optional_idx.size()); ++mask) {
    std::vector<std::size_t> s = must;
    for (std::size_t b = 0; b < optional_idx.size(); ++b)
      if (mask & (1UL << b)) s.push_back(optional_idx[b]);
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> dbl(const Vec& v) { return to_doubles(v); }

double norm(const std::vector<double>& a) {
  double s = 0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

struct PatternSystem {
  const VariationalSystem& vs;
  const Perturbation& p;
  std::vector<std::size_t> P, Q;
  std::vector<std::vector<double>> a, d;
  std::vector<double> alpha, beta;
  std::size_t n, m;

  PatternSystem(const VariationalSystem& s, const Perturbation& pert, std::vector<std::size_t> p_set,
                std::vector<std::size_t> q_set)
      : vs(s), p(pert), P(std::move(p_set)), Q(std::move(q_set)), n(s.n()), m(s.m()) {
    for (const auto& piece : vs.theta().pieces()) {
      a.push_back(dbl(piece.a));
      alpha.push_back(piece.alpha.get_d());
    }
    for (const auto& row : vs.theta().domain_rows()) {
      d.push_back(dbl(row.d));
      beta.push_back(row.beta.get_d());
    }
  }

  std::size_t unknowns() const { return n + m + P.size() + Q.size(); }

  std::vector<double> z_of(const std::vector<double>& x) const {
    auto z = vs.phi().eval(x);
    for (std::size_t i = 0; i < m; ++i) z[i] += p.p2[i];
    return z;
  }

  void eval(const VectorXd& y, VectorXd& f, MatrixXd& jac) const {
    const std::size_t nu = unknowns();
    std::vector<double> x(y.data(), y.data() + n), v(y.data() + n, y.data() + n + m);
    f = VectorXd::Zero(static_cast<Eigen::Index>(nu));
    jac = MatrixXd::Zero(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(nu));
    auto psi = vs.psi(x, v);
    auto hx = vs.psi_jacobian_x(x, v);
    auto jphi = vs.phi_jacobian(x);
    auto z = z_of(x);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < n; ++i, ++r) {
      f[r] = psi[i] - p.p1[i];
      for (std::size_t c = 0; c < n; ++c) jac(r, static_cast<Eigen::Index>(c)) = hx[i][c];
      for (std::size_t k = 0; k < m; ++k) jac(r, static_cast<Eigen::Index>(n + k)) = jphi[k][i];
    }
    const std::size_t lam0 = n + m, mu0 = n + m + P.size();
    for (std::size_t k = 0; k < m; ++k, ++r) {
      double s = v[k];
      jac(r, static_cast<Eigen::Index>(n + k)) = 1;
      for (std::size_t t = 0; t < P.size(); ++t) {
        s -= y[static_cast<Eigen::Index>(lam0 + t)] * a[P[t]][k];
        jac(r, static_cast<Eigen::Index>(lam0 + t)) = -a[P[t]][k];
      }
      for (std::size_t t = 0; t < Q.size(); ++t) {
        s -= y[static_cast<Eigen::Index>(mu0 + t)] * d[Q[t]][k];
        jac(r, static_cast<Eigen::Index>(mu0 + t)) = -d[Q[t]][k];
      }
      f[r] = s;
    }
    {
      double s = -1;
      for (std::size_t t = 0; t < P.size(); ++t) {
        s += y[static_cast<Eigen::Index>(lam0 + t)];
        jac(r, static_cast<Eigen::Index>(lam0 + t)) = 1;
      }
      f[r] = s;
      ++r;
    }
    auto row_eq = [&](const std::vector<double>& g, double rhs) {
      double s = -rhs;
      for (std::size_t k = 0; k < m; ++k) s += g[k] * z[k];
      f[r] = s;
      for (std::size_t c = 0; c < n; ++c) {
        double dz = 0;
        for (std::size_t k = 0; k < m; ++k) dz += g[k] * jphi[k][c];
        jac(r, static_cast<Eigen::Index>(c)) = dz;
      }
      ++r;
    };
    const std::size_t s0 = P.front();
    for (std::size_t t = 1; t < P.size(); ++t) {
      std::vector<double> g(m);
      for (std::size_t k = 0; k < m; ++k) g[k] = a[P[t]][k] - a[s0][k];
      row_eq(g, alpha[P[t]] - alpha[s0]);
    }
    for (auto j : Q) row_eq(d[j], beta[j]);
  }

  bool accepted(const VectorXd& y, double tol) const {
    std::vector<double> x(y.data(), y.data() + n);
    for (std::size_t t = 0; t < P.size() + Q.size(); ++t)
      if (y[static_cast<Eigen::Index>(n + m + t)] < -tol) return false;
    auto z = z_of(x);
    auto val = [&](std::size_t i) {
      double s = -alpha[i];
      for (std::size_t k = 0; k < m; ++k) s += a[i][k] * z[k];
      return s;
    };
    const double top = val(P.front());
    for (std::size_t i = 0; i < a.size(); ++i)
      if (val(i) > top + tol) return false;
    for (std::size_t j = 0; j < d.size(); ++j) {
      double s = -beta[j];
      for (std::size_t k = 0; k < m; ++k) s += d[j][k] * z[k];
      if (s > tol) return false;
    }
    return true;
  }
};

}  // namespace

ActiveSets always_positive(const CpwlFunction& theta, const Vec& z, const Vec& v) {
  ActiveSets act = eval_and_active(theta, z).active;
  const std::size_t nk = act.K.size(), ni = act.I.size(), m = theta.dim();
  HPoly sys(nk + ni);
  for (std::size_t k = 0; k < m; ++k) {
    Vec row = zeros(nk + ni);
    for (std::size_t t = 0; t < nk; ++t) row[t] = theta.pieces()[act.K[t]].a[k];
    for (std::size_t t = 0; t < ni; ++t) row[nk + t] = theta.domain_rows()[act.I[t]].d[k];
    sys.add_eq(std::move(row), v[k]);
  }
  Vec ones = zeros(nk + ni);
  for (std::size_t t = 0; t < nk; ++t) ones[t] = 1;
  sys.add_eq(ones, 1);
  for (std::size_t t = 0; t < nk + ni; ++t) sys.add_ineq(scale(Rational(-1), unit(nk + ni, t)), 0);
  ActiveSets out;
  for (std::size_t t = 0; t < nk + ni; ++t) {
    LpResult r = lp_maximize(sys, scale(Rational(-1), unit(nk + ni, t)));
    if (r.status == LpStatus::Infeasible) throw MembershipError("v is not a subgradient at z");
    if (r.status == LpStatus::Optimal && sgn(r.value) < 0) {
      if (t < nk)
        out.K.push_back(act.K[t]);
      else
        out.I.push_back(act.I[t - nk]);
    }
  }
  return out;
}

PerturbedSolve solve_perturbed(const VariationalSystem& vs, const Perturbation& p, const PrimalDualPoint& seed,
                               const SolverOptions& opts) {
  if (!(opts.residual_tol > 0) || !(opts.accept_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (p.p1.size() != vs.n() || p.p2.size() != vs.m()) throw DimensionError("perturbation dimensions");
  for (double t : p.p1)
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite perturbation");
  for (double t : p.p2)
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite perturbation");

  ActiveSets act = eval_and_active(vs.theta(), seed.z).active;
  ActiveSets must = always_positive(vs.theta(), seed.z, seed.v);
  std::vector<double> x0 = dbl(seed.x), v0 = dbl(seed.v);
  if (opts.start) {
    x0 = opts.start->first;
    v0 = opts.start->second;
  }

  PerturbedSolve out;
  for (const auto& P : subsets_between(must.K, act.K)) {
    if (P.empty()) continue;
    for (const auto& Q : subsets_between(must.I, act.I)) {
      PatternSystem sys(vs, p, P, Q);
      const auto nu = static_cast<Eigen::Index>(sys.unknowns());
      VectorXd y = VectorXd::Zero(nu);
      for (std::size_t i = 0; i < vs.n(); ++i) y[static_cast<Eigen::Index>(i)] = x0[i];
      for (std::size_t i = 0; i < vs.m(); ++i) y[static_cast<Eigen::Index>(vs.n() + i)] = v0[i];
      for (std::size_t t = 0; t < P.size(); ++t)
        y[static_cast<Eigen::Index>(vs.n() + vs.m() + t)] = 1.0 / static_cast<double>(P.size());
      VectorXd f;
      MatrixXd jac;
      bool converged = false;
      for (int it = 0; it <= opts.max_iter; ++it) {
        sys.eval(y, f, jac);
        if (!f.allFinite()) break;
        if (f.norm() <= opts.residual_tol) {
          converged = true;
          break;
        }
        if (it == opts.max_iter) break;
        VectorXd step = jac.completeOrthogonalDecomposition().solve(f);
        y -= step;
      }
      std::string tag = "pattern P={";
      for (auto i : P) tag += std::to_string(i) + ",";
      tag += "} Q={";
      for (auto i : Q) tag += std::to_string(i) + ",";
      tag += "}";
      if (!converged) {
        out.diagnostics.push_back(tag + ": Newton did not converge");
        continue;
      }
      if (!sys.accepted(y, opts.accept_tol)) continue;
      PerturbedSolution s;
      s.x.assign(y.data(), y.data() + vs.n());
      s.v.assign(y.data() + vs.n(), y.data() + vs.n() + vs.m());
      s.lambda.assign(y.data() + vs.n() + vs.m(), y.data() + vs.n() + vs.m() + P.size());
      s.mu.assign(y.data() + vs.n() + vs.m() + P.size(), y.data() + nu);
      s.P = P;
      s.Q = Q;
      s.residual = f.norm();
      out.solutions.push_back(std::move(s));
    }
  }
  return out;
}

double error_bound_residual(const VariationalSystem& vs, const std::vector<double>& x, const std::vector<double>& v) {
  const auto& theta = vs.theta();
  std::vector<double> z = vs.phi().eval(x);
  Vec vq;
  for (double t : v) vq.push_back(from_double(t));
  std::vector<std::size_t> all_pieces(theta.pieces().size()), all_rows(theta.domain_rows().size());
  for (std::size_t i = 0; i < all_pieces.size(); ++i) all_pieces[i] = i;
  for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& P : subsets_between({}, all_pieces)) {
    if (P.empty()) continue;
    for (const auto& Q : subsets_between({}, all_rows)) {
      const GraphPiece& g = vs.graph().piece(P, Q);
      if (!g.v_part.contains(vq)) continue;
      best = std::min(best, distance_point_polyhedron(z, g.z_part));
    }
  }
  return norm(vs.psi(x, v)) + best;
}

}  // namespace critmult
