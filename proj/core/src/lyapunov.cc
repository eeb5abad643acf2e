#include "symcon/lyapunov.hh"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "symcon/errors.hh"

namespace symcon {

double KinfFn::operator()(double r) const {
  return p == 1 ? c * r : c * r * r;
}

double KinfFn::inverse(double v) const {
  if (v < 0.0)
    throw config_error("class-K function: inverse of a negative value");
  return p == 1 ? v / c : std::sqrt(v / c);
}

void KinfFn::validate(const std::string& name) const {
  if (!(c > 0.0) || !std::isfinite(c))
    throw config_error("class-K function " + name + ": coefficient must be positive");
  if (p != 1 && p != 2)
    throw config_error("class-K function " + name + ": exponent must be 1 or 2");
}

void QuadraticCert::validate() const {
  if (n < 1 || static_cast<int>(P.size()) != n * n)
    throw config_error("certificate: P must be n x n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(P[i * n + j] - P[j * n + i]) > 1e-12)
        throw config_error("certificate: P must be symmetric");
  /* positive definiteness via Cholesky */
  std::vector<double> L(P);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = L[i * n + j];
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (!(s > 0.0))
          throw config_error("certificate: P is not positive definite");
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  if (!(lambda > 0.0))
    throw config_error("certificate: lambda must be positive");
  alpha_lo.validate("alpha_lo");
  alpha_hi.validate("alpha_hi");
  sigma_u.validate("sigma_u");
  sigma_d.validate("sigma_d");
}

double QuadraticCert::V(const Vec& x, const Vec& y) const {
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v += (x[i] - y[i]) * P[i * n + j] * (x[j] - y[j]);
  return v;
}

Vec QuadraticCert::grad_x(const Vec& x, const Vec& y) const {
  Vec g(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g[i] += 2.0 * P[i * n + j] * (x[j] - y[j]);
  return g;
}

QuadraticCert pendulum_cert() {
  QuadraticCert c;
  c.n = 2;
  c.P = {1.5, 0.3, 0.3, 1.5};
  c.lambda = 0.77;
  c.alpha_lo = {1.2, 2};
  c.alpha_hi = {3.6, 2};
  c.sigma_u = {8.76, 1};
  c.sigma_d = {1.31, 1};
  return c;
}

namespace {

Vec sample_box(const Box& b, std::mt19937_64& rng) {
  Vec v(b.dim());
  for (int i = 0; i < b.dim(); ++i) {
    std::uniform_real_distribution<double> dist(b.lo[i], b.hi[i]);
    v[i] = dist(rng);
  }
  return v;
}

/* visit all corner assignments of a box */
template <class F>
void for_corners(const Box& b, F&& fn) {
  const int d = b.dim();
  Vec v(d);
  for (uint64_t mask = 0; mask < (uint64_t(1) << d); ++mask) {
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? b.hi[i] : b.lo[i];
    fn(v);
  }
}

}  /* namespace */

CondReport check_condition_i(const QuadraticCert& cert, const SystemDef& sys,
                             int nsamples, uint64_t seed, double tol) {
  cert.validate();
  if (cert.n != sys.n)
    throw config_error("check_condition_i: certificate dimension mismatch");
  CondReport rep;
  rep.worst = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);

  auto probe = [&](const Vec& x, const Vec& y) {
    const double r = dist_inf(x, y);
    const double v = cert.V(x, y);
    const double excess = std::max(cert.alpha_lo(r) - v, v - cert.alpha_hi(r));
    if (excess > rep.worst) {
      rep.worst = excess;
      rep.witness = {x, y};
    }
  };
  for (int s = 0; s < nsamples; ++s)
    probe(sample_box(sys.X, rng), sample_box(sys.X, rng));
  for_corners(sys.X, [&](const Vec& x) {
    for_corners(sys.X, [&](const Vec& y) { probe(x, y); });
  });

  rep.pass = rep.worst <= tol;
  std::ostringstream os;
  os << "sandwich condition: worst excess " << rep.worst
     << (rep.pass ? " (pass)" : " (fail)");
  rep.detail = os.str();
  return rep;
}

CondReport check_condition_ii(const QuadraticCert& cert, const SystemDef& sys,
                              int nsamples, uint64_t seed, double tol) {
  cert.validate();
  if (cert.n != sys.n)
    throw config_error("check_condition_ii: certificate dimension mismatch");
  CondReport rep;
  rep.worst = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);

  Vec fx(sys.n), fy(sys.n);
  auto probe = [&](const Vec& x, const Vec& y, const Vec& u1, const Vec& u2,
                   const Vec& d1, const Vec& d2) {
    eval_field(sys, x.data(), u1.data(), d1.data(), fx.data());
    eval_field(sys, y.data(), u2.data(), d2.data(), fy.data());
    const Vec g = cert.grad_x(x, y);
    double lhs = 0.0;
    for (int i = 0; i < sys.n; ++i) lhs += g[i] * (fx[i] - fy[i]);
    const double rhs = -cert.lambda * cert.V(x, y) +
                       cert.sigma_u(dist_inf(u1, u2)) +
                       cert.sigma_d(dist_inf(d1, d2));
    if (lhs - rhs > rep.worst) {
      rep.worst = lhs - rhs;
      rep.witness = {x, y, u1, u2, d1, d2};
    }
  };

  for (int s = 0; s < nsamples; ++s)
    probe(sample_box(sys.X, rng), sample_box(sys.X, rng),
          sample_box(sys.U, rng), sample_box(sys.U, rng),
          sample_box(sys.D, rng), sample_box(sys.D, rng));

  /* corner sweep: the violation landscape for polynomial-trigonometric
   * fields peaks at extreme state gaps and input gaps, which random
   * sampling can miss at low counts */
  for_corners(sys.X, [&](const Vec& x) {
    for_corners(sys.X, [&](const Vec& y) {
      for_corners(sys.U, [&](const Vec& u1) {
        for_corners(sys.U, [&](const Vec& u2) {
          for_corners(sys.D, [&](const Vec& d1) {
            for_corners(sys.D, [&](const Vec& d2) { probe(x, y, u1, u2, d1, d2); });
          });
        });
      });
    });
  });

  rep.pass = rep.worst <= tol;
  std::ostringstream os;
  os << "dissipation condition: worst violation " << rep.worst
     << (rep.pass ? " (pass)" : " (fail)");
  rep.detail = os.str();
  return rep;
}

double gamma_sup(const QuadraticCert& cert, const Box& X) {
  cert.validate();
  if (cert.n != X.dim())
    throw config_error("gamma_sup: dimension mismatch");
  /* difference box of X with itself */
  Vec lo(X.dim()), hi(X.dim());
  for (int i = 0; i < X.dim(); ++i) {
    lo[i] = -(X.hi[i] - X.lo[i]);
    hi[i] = X.hi[i] - X.lo[i];
  }
  const Box diff(lo, hi);
  double best = 0.0;
  for_corners(diff, [&](const Vec& e) {
    /* |2 P e|_inf */
    for (int i = 0; i < cert.n; ++i) {
      double row = 0.0;
      for (int j = 0; j < cert.n; ++j) row += 2.0 * cert.P[i * cert.n + j] * e[j];
      best = std::max(best, std::abs(row));
    }
  });
  return best;
}

} /* namespace symcon */
