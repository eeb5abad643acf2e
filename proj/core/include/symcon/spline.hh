/*
 * spline.hh
 *
 * Piecewise-linear (hat basis) disturbance approximation over one sampling
 * interval.  A sequence of N+2 lattice values z_0..z_{N+1} on the nodes
 * i*h, h = tau/(N+1), determines the interpolant sum_i z_i s_i(t); adjacent
 * values are constrained to differ by at most kappa_d*tau/(N+1) so the
 * interpolant stays kappa_d-Lipschitz.
 *
 * The quality of the class is controlled by the shrink factor rho and the
 * radius Theta:
 *   rho   = 1 - max(mu/M, 2*mu/(kappa_d*h)),
 *   Theta = (1-rho)*M + (1+rho)*kappa_d*h + mu,
 * where mu is the value-lattice precision and M the sup bound of the class.
 * Any admissible signal d has, whenever rho > 0, an in-class witness within
 * Theta in the sup norm: the interpolant of the nearest lattice values of
 * the shrunk samples rho*d(i*h).
 */

#ifndef SYMCON_SPLINE_HH_
#define SYMCON_SPLINE_HH_

#include <cstdint>
#include <functional>
#include <vector>

#include "symcon/geometry.hh"
#include "symcon/system.hh"

namespace symcon {

struct SplineBasis {
  int N = 0;          /* interior node count; N+2 nodes total */
  double tau = 1.0;
  double h() const { return tau / static_cast<double>(N + 1); }
};

/* hat function s_i on [0,tau]: s_0 falls from 1, s_{N+1} rises to 1, the
 * interior s_i peak at i*h; zero outside their support */
double eval_spline(const SplineBasis& basis, int i, double t);

struct SplineSeq {
  SplineBasis basis;
  std::vector<Vec> z;  /* N+2 node values, each of dimension l */

  int l() const { return z.empty() ? 0 : static_cast<int>(z[0].size()); }
  /* interpolant value at t (clamped to [0,tau]) */
  Vec eval(double t) const;
  DisturbanceSignal as_signal() const;
};

/* value lattice precision + node schedule for one approximation class */
struct ApproxParams {
  int N = 0;
  double mu = 0.0;       /* value lattice precision (spacing 2*mu) */
  double kappa_d = 0.0;
  double tau = 0.0;
  double M = 0.0;        /* sup bound of the signal class */
  double rho = 0.0;      /* computed */
  double Theta = 0.0;    /* computed */

  double h() const { return tau / static_cast<double>(N + 1); }
  /* largest admissible node-to-node key step, floor(kappa_d*h / (2*mu)) */
  int64_t key_step() const;
};

/* evaluates rho and Theta; errors on a degenerate class (kappa_d or M zero,
 * mu nonpositive) */
ApproxParams rho_theta(int N, double mu, double kappa_d, double tau, double M);

/*
 * Smallest N on the schedule mu = 1/(N+1)^2 with rho > 0 and Theta <= theta;
 * existence follows from the decreasing bound
 *   (1/(N+1)) * (max(1/(N+1), 2M/(kappa_d tau)) + 2 kappa_d tau + 1/(N+1)),
 * but an iteration cap guards against pathological inputs.
 */
ApproxParams search_params(double theta, double kappa_d, double tau, double M,
                           int iteration_cap = 1000000);

/*
 * All node sequences over (2*mu*Z^l) intersected with D whose successive key
 * steps stay within key_step(), ordered lexicographically by the
 * concatenated key tuples.  Aborts with the projected count in the message
 * when that projection exceeds `cap`.
 */
std::vector<SplineSeq> enumerate_approx(const Box& D, const ApproxParams& p,
                                        uint64_t cap = 10000000);

/* number of admissible sequences without materializing them */
uint64_t count_approx(const Box& D, const ApproxParams& p);

/*
 * In-class witness for an admissible signal: node values are the nearest
 * in-D lattice points of rho*d(i*h).  The input signal is validated on a
 * sample grid for range membership and the kappa_d Lipschitz bound.
 */
SplineSeq approximate_disturbance(const DisturbanceSignal& d, const Box& D,
                                  const ApproxParams& p);

} /* namespace symcon */

#endif /* SYMCON_SPLINE_HH_ */
