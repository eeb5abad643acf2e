#include "symcon/spline.hh"

#include <algorithm>
#include <cmath>
#include <string>

#include "symcon/errors.hh"

namespace symcon {

double eval_spline(const SplineBasis& basis, int i, double t) {
  if (basis.N < 0 || !(basis.tau > 0.0))
    throw config_error("spline: invalid basis");
  if (i < 0 || i > basis.N + 1)
    throw config_error("spline: basis index out of range");
  const double h = basis.h();
  if (t < 0.0 || t > basis.tau) return 0.0;
  if (i == 0)
    return t <= h ? 1.0 - t / h : 0.0;
  if (i == basis.N + 1)
    return t >= basis.tau - h ? 1.0 + (t - basis.tau) / h : 0.0;
  const double c = h * static_cast<double>(i);
  if (t < c - h || t > c + h) return 0.0;
  return t <= c ? 1.0 - static_cast<double>(i) + t / h
                : 1.0 + static_cast<double>(i) - t / h;
}

Vec SplineSeq::eval(double t) const {
  const int N = basis.N;
  if (static_cast<int>(z.size()) != N + 2)
    throw config_error("spline sequence: expected N+2 node values");
  const double h = basis.h();
  t = std::clamp(t, 0.0, basis.tau);
  /* on segment [i*h, (i+1)*h] only s_i and s_{i+1} are active and they sum
   * to one, so the interpolant is the affine blend of the two node values */
  int seg = static_cast<int>(std::floor(t / h));
  seg = std::clamp(seg, 0, N);
  const double lam = t / h - static_cast<double>(seg);
  const int l = this->l();
  Vec out(l);
  for (int j = 0; j < l; ++j)
    out[j] = (1.0 - lam) * z[seg][j] + lam * z[seg + 1][j];
  return out;
}

DisturbanceSignal SplineSeq::as_signal() const {
  DisturbanceSignal s;
  s.l = l();
  SplineSeq copy = *this;
  s.fn = [copy](double t, double* out) {
    Vec v = copy.eval(t);
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  };
  return s;
}

int64_t ApproxParams::key_step() const {
  /* padded before floor so that an exactly-divisible bound is not dropped to
   * the next lower integer by division noise */
  return static_cast<int64_t>(std::floor(kappa_d * h() / (2.0 * mu) + 1e-9));
}

ApproxParams rho_theta(int N, double mu, double kappa_d, double tau, double M) {
  if (N < 0)
    throw config_error("rho_theta: N must be nonnegative");
  if (!(tau > 0.0))
    throw config_error("rho_theta: tau must be positive");
  if (!(mu > 0.0))
    throw config_error("rho_theta: mu must be positive");
  if (!(kappa_d > 0.0) || !(M > 0.0))
    throw infeasible_error("rho_theta: degenerate signal class (kappa_d or M is zero)");
  ApproxParams p;
  p.N = N;
  p.mu = mu;
  p.kappa_d = kappa_d;
  p.tau = tau;
  p.M = M;
  const double h = p.h();
  p.rho = 1.0 - std::max(mu / M, 2.0 * mu / (kappa_d * h));
  p.Theta = (1.0 - p.rho) * M + (1.0 + p.rho) * kappa_d * h + mu;
  return p;
}

ApproxParams search_params(double theta, double kappa_d, double tau, double M,
                           int iteration_cap) {
  if (!(theta > 0.0))
    throw config_error("search_params: theta must be positive");
  for (int N = 0; N < iteration_cap; ++N) {
    const double mu = 1.0 / ((N + 1.0) * (N + 1.0));
    ApproxParams p = rho_theta(N, mu, kappa_d, tau, M);
    if (p.rho > 0.0 && p.Theta <= theta) return p;
  }
  throw infeasible_error("search_params: no admissible N below the iteration cap " +
                         std::to_string(iteration_cap));
}

/* per-axis key range of (2 mu Z) in D plus the step radius, shared by the
 * enumeration, the count and the witness construction */
namespace {
struct SeqGrid {
  Lattice lat;
  int64_t step;
  int len;  /* N+2 */
};

SeqGrid make_grid(const Box& D, const ApproxParams& p) {
  if (!(p.mu > 0.0))
    throw config_error("approximation: mu must be positive");
  SeqGrid g{Lattice(D, p.mu), p.key_step(), p.N + 2};
  if (g.lat.empty())
    throw infeasible_error("approximation: value lattice in D is empty");
  return g;
}
}  /* namespace */

uint64_t count_approx(const Box& D, const ApproxParams& p) {
  const SeqGrid g = make_grid(D, p);
  /* the sup-norm step bound decouples per axis, so the sequence count is the
   * product over axes of path counts in the per-axis band graph */
  uint64_t total = 1;
  for (int axis = 0; axis < D.dim(); ++axis) {
    const int64_t lo = g.lat.kmin(axis), hi = g.lat.kmax(axis);
    const size_t width = static_cast<size_t>(hi - lo + 1);
    std::vector<uint64_t> cnt(width, 1), next(width);
    for (int stepi = 0; stepi < g.len - 1; ++stepi) {
      /* prefix sums for the banded transition */
      std::vector<uint64_t> pre(width + 1, 0);
      for (size_t i = 0; i < width; ++i) {
        pre[i + 1] = pre[i] + cnt[i];
        if (pre[i + 1] < pre[i])
          throw runtime_failure("count_approx: count overflows 64 bits");
      }
      for (size_t i = 0; i < width; ++i) {
        const size_t a = g.step >= static_cast<int64_t>(i) ? 0 : i - static_cast<size_t>(g.step);
        const size_t b = std::min(width - 1, i + static_cast<size_t>(g.step));
        next[i] = pre[b + 1] - pre[a];
      }
      cnt.swap(next);
    }
    uint64_t axis_total = 0;
    for (uint64_t c : cnt) {
      if (axis_total + c < axis_total)
        throw runtime_failure("count_approx: count overflows 64 bits");
      axis_total += c;
    }
    if (axis_total != 0 && total > UINT64_MAX / axis_total)
      throw runtime_failure("count_approx: count overflows 64 bits");
    total *= axis_total;
  }
  return total;
}

std::vector<SplineSeq> enumerate_approx(const Box& D, const ApproxParams& p,
                                        uint64_t cap) {
  const SeqGrid g = make_grid(D, p);
  const uint64_t projected = count_approx(D, p);
  if (projected > cap)
    throw infeasible_error("enumerate_approx: projected sequence count " +
                           std::to_string(projected) + " exceeds cap " +
                           std::to_string(cap));

  const int l = D.dim();
  std::vector<SplineSeq> out;
  out.reserve(projected);

  /* depth-first over node positions; at each node the admissible keys are
   * the lattice box clipped to the step band around the previous node, and
   * per node the keys are visited in lexicographic order */
  std::vector<Key> nodes(g.len, Key(l, 0));
  SplineBasis basis{p.N, p.tau};

  std::function<void(int)> rec = [&](int pos) {
    if (pos == g.len) {
      SplineSeq s;
      s.basis = basis;
      s.z.reserve(g.len);
      for (const Key& k : nodes) s.z.push_back(g.lat.point(k));
      out.push_back(std::move(s));
      return;
    }
    std::vector<int64_t> lo(l), hi(l);
    for (int a = 0; a < l; ++a) {
      lo[a] = g.lat.kmin(a);
      hi[a] = g.lat.kmax(a);
      if (pos > 0) {
        lo[a] = std::max(lo[a], nodes[pos - 1][a] - g.step);
        hi[a] = std::min(hi[a], nodes[pos - 1][a] + g.step);
      }
      if (lo[a] > hi[a]) return;
    }
    Key& k = nodes[pos];
    k.assign(lo.begin(), lo.end());
    for (;;) {
      rec(pos + 1);
      int a = l - 1;
      for (; a >= 0; --a) {
        if (k[a] < hi[a]) { ++k[a]; break; }
        k[a] = lo[a];
      }
      if (a < 0) break;
    }
  };
  rec(0);
  return out;
}

SplineSeq approximate_disturbance(const DisturbanceSignal& d, const Box& D,
                                  const ApproxParams& p) {
  if (d.l != D.dim())
    throw config_error("approximate_disturbance: signal dimension mismatch");
  if (!(p.rho > 0.0))
    throw infeasible_error("approximate_disturbance: rho <= 0, class cannot shrink");

  /* validate the input signal on a grid: range membership in D and the
   * kappa_d Lipschitz bound between adjacent samples (small slack for the
   * sampling itself) */
  const int grid = 512;
  const double dt = p.tau / grid;
  Vec prev = d.at(0.0);
  for (int s = 0; s <= grid; ++s) {
    const Vec v = d.at(dt * s);
    if (!D.contains(v, 1e-12))
      throw config_error("approximate_disturbance: signal leaves D at t=" +
                         std::to_string(dt * s));
    if (s > 0 && dist_inf(v, prev) > p.kappa_d * dt * (1.0 + 1e-6) + 1e-12)
      throw config_error("approximate_disturbance: signal violates the kappa_d "
                         "Lipschitz bound near t=" + std::to_string(dt * s));
    prev = v;
  }

  const SeqGrid g = make_grid(D, p);
  SplineSeq out;
  out.basis = SplineBasis{p.N, p.tau};
  out.z.reserve(g.len);
  const double h = p.h();
  for (int i = 0; i < g.len; ++i) {
    Vec sample = d.at(h * static_cast<double>(i));
    for (double& c : sample) c *= p.rho;
    out.z.push_back(g.lat.point(g.lat.nearest(sample)));
  }
  return out;
}

} /* namespace symcon */
