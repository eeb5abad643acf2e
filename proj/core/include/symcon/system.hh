/*
 * system.hh
 *
 * Continuous-time control system description: state/input/disturbance boxes,
 * a Lipschitz budget for the disturbance class, and the vector field as
 * parsed expressions.  Disturbance signals over one sampling interval are
 * plain time functions.
 */

#ifndef SYMCON_SYSTEM_HH_
#define SYMCON_SYSTEM_HH_

#include <functional>
#include <string>
#include <vector>

#include "symcon/expr.hh"
#include "symcon/geometry.hh"

namespace symcon {

struct SystemDef {
  int n = 0, m = 0, l = 0;
  Box X, U, D;
  double kappa_d = 0.0;   /* sup-norm Lipschitz constant of admissible disturbances */
  std::vector<Expr> f;    /* one component expression per state variable */
  std::string name;

  /* sup norm bound M of the disturbance class, from the box */
  double dist_bound() const { return D.sup_norm(); }
};

/* writes f(x,u,d) into out (size n) */
void eval_field(const SystemDef& sys, const double* x, const double* u,
                const double* d, double* out);

/*
 * Construct from the JSON object
 *   {"n":..,"m":..,"l":..,"X":[[lo,hi],..],"U":[..],"D":[..],
 *    "kappa_d":..,"f":["expr1",..]}
 * Validates dimensions, box shapes, kappa_d >= 0 and that the origin with
 * zero input and zero disturbance is an equilibrium within 1e-9.
 */
SystemDef parse_system(const std::string& json_text);

/* damped torque-controlled pendulum benchmark system used throughout */
SystemDef pendulum_preset();

/* time -> disturbance value, defined on one sampling interval */
struct DisturbanceSignal {
  std::function<void(double, double*)> fn;
  int l = 0;
  void operator()(double t, double* out) const { fn(t, out); }
  std::vector<double> at(double t) const {
    std::vector<double> v(l);
    fn(t, v.data());
    return v;
  }
};

DisturbanceSignal constant_disturbance(const Vec& value);

/*
 * Slowest admissible full-swing disturbance: per component
 *   d_i(t) = (hi-lo)/2 * cos(2*kappa_d/(hi-lo) * t) + (hi+lo)/2,
 * which traverses its range with derivative bound exactly kappa_d.
 */
DisturbanceSignal cosine_disturbance(const Box& D, double kappa_d);

} /* namespace symcon */

#endif /* SYMCON_SYSTEM_HH_ */
