/*
 * flow.hh
 *
 * Fixed-step classical fourth order Runge-Kutta integration of the sampled
 * system over one sampling interval, with the disturbance evaluated at the
 * stage times.  The step count is fixed (no adaptive control) so that two
 * runs over the same data are bitwise identical regardless of thread count.
 */

#ifndef SYMCON_FLOW_HH_
#define SYMCON_FLOW_HH_

#include "symcon/geometry.hh"
#include "symcon/system.hh"

namespace symcon {

struct FlowConfig {
  double tau = 1.0;   /* sampling interval length */
  int substeps = 64;  /* RK4 steps across the interval */
};

/* state at time tau started from x under constant control u and signal d;
 * throws a runtime failure naming (x,u) when the state leaves a sanity bound
 * or turns non-finite (finite escape / blow-up) */
Vec integrate(const SystemDef& sys, const FlowConfig& cfg, const Vec& x,
              const Vec& u, const DisturbanceSignal& d);

/* trajectory samples at j*tau/samples for j=1..samples; when samples divides
 * substeps the final entry is bitwise the integrate() result, otherwise the
 * step count is rounded up to the next multiple of samples */
std::vector<Vec> integrate_trace(const SystemDef& sys, const FlowConfig& cfg,
                                 const Vec& x, const Vec& u,
                                 const DisturbanceSignal& d, int samples);

} /* namespace symcon */

#endif /* SYMCON_FLOW_HH_ */
