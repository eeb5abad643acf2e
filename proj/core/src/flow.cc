#include "symcon/flow.hh"

#include <cmath>
#include <sstream>

#include "symcon/errors.hh"

namespace symcon {

/* divergence guard: trajectories of interest live in bounded boxes, so any
 * excursion past this magnitude is treated as finite escape */
static constexpr double kBlowUpBound = 1e12;

static void check_inputs(const SystemDef& sys, const FlowConfig& cfg,
                         const Vec& x, const Vec& u, const DisturbanceSignal& d) {
  if (static_cast<int>(x.size()) != sys.n)
    throw config_error("integrate: state dimension mismatch");
  if (static_cast<int>(u.size()) != sys.m)
    throw config_error("integrate: control dimension mismatch");
  if (d.l != sys.l)
    throw config_error("integrate: disturbance dimension mismatch");
  if (!(cfg.tau > 0.0) || cfg.substeps < 1)
    throw config_error("integrate: tau must be positive and substeps >= 1");
}

static std::string describe(const double* x, int n, const Vec& u, double t) {
  std::ostringstream os;
  os << "x=(";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << x[i];
  os << "), u=(";
  for (size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
  os << "), t=" << t;
  return os.str();
}

/*
 * Advance x in place by `steps` RK4 steps of width h.  Stage times are
 * h*(step_offset + s) so that chunked runs reproduce a single run bitwise.
 */
static void rk4_run(const SystemDef& sys, Vec& x, const Vec& u,
                    const DisturbanceSignal& dist, int step_offset, double h,
                    int steps, std::vector<double>& scratch) {
  const int n = sys.n;
  scratch.resize(static_cast<size_t>(6) * n + dist.l);
  double* k1 = scratch.data();
  double* k2 = k1 + n;
  double* k3 = k2 + n;
  double* k4 = k3 + n;
  double* xs = k4 + n;
  double* x0 = xs + n;
  double* dv = x0 + n;

  for (int s = 0; s < steps; ++s) {
    const double t = h * static_cast<double>(step_offset + s);
    for (int i = 0; i < n; ++i) x0[i] = x[i];

    dist(t, dv);
    eval_field(sys, x0, u.data(), dv, k1);
    for (int i = 0; i < n; ++i) xs[i] = x0[i] + 0.5 * h * k1[i];

    dist(t + 0.5 * h, dv);
    eval_field(sys, xs, u.data(), dv, k2);
    for (int i = 0; i < n; ++i) xs[i] = x0[i] + 0.5 * h * k2[i];
    eval_field(sys, xs, u.data(), dv, k3);
    for (int i = 0; i < n; ++i) xs[i] = x0[i] + h * k3[i];

    dist(t + h, dv);
    eval_field(sys, xs, u.data(), dv, k4);

    bool bad = false;
    for (int i = 0; i < n; ++i) {
      x[i] = x0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      bad = bad || !std::isfinite(x[i]) || std::abs(x[i]) > kBlowUpBound;
    }
    if (bad)
      throw runtime_failure("integrate: trajectory blow-up from " +
                            describe(x0, n, u, t + h));
  }
}

Vec integrate(const SystemDef& sys, const FlowConfig& cfg, const Vec& x,
              const Vec& u, const DisturbanceSignal& d) {
  check_inputs(sys, cfg, x, u, d);
  thread_local std::vector<double> scratch;
  Vec y = x;
  rk4_run(sys, y, u, d, 0, cfg.tau / cfg.substeps, cfg.substeps, scratch);
  return y;
}

std::vector<Vec> integrate_trace(const SystemDef& sys, const FlowConfig& cfg,
                                 const Vec& x, const Vec& u,
                                 const DisturbanceSignal& d, int samples) {
  check_inputs(sys, cfg, x, u, d);
  if (samples < 1)
    throw config_error("integrate_trace: need at least one sample");
  const int per = (cfg.substeps + samples - 1) / samples;
  const double h = cfg.tau / static_cast<double>(per * samples);
  thread_local std::vector<double> scratch;
  Vec y = x;
  std::vector<Vec> out;
  out.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    rk4_run(sys, y, u, d, per * j, h, per, scratch);
    out.push_back(y);
  }
  return out;
}

} /* namespace symcon */
