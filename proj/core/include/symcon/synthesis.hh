/*
 * synthesis.hh
 *
 * Two-player games on a symbolic model: the controller picks the control
 * label, the adversary picks the disturbance label and the abstract
 * successor.  A control forces a set when, for every disturbance label, the
 * successor set is nonempty, in-domain, and contained in the set.
 *
 * The reach/dwell/stay specification runs through a deterministic monitor
 * with step counters in units of tau:
 *   M0 reach the first region, M1 dwell there between dwell_min and
 *   dwell_max, M2 reach the second region, M3 stay there at most stay_max,
 *   M4 return to the first region, M5 stay there forever.
 * Winning sets are composed backward from M5; the controller stores one
 * control index per winning (state, monitor slot) pair.
 */

#ifndef SYMCON_SYNTHESIS_HH_
#define SYMCON_SYNTHESIS_HH_

#include <cstdint>
#include <string>
#include <vector>

#include "symcon/abstraction.hh"
#include "symcon/geometry.hh"

namespace symcon {

using StateSet = std::vector<uint8_t>;  /* one flag per state index */

/* { q : some control forces, for every disturbance label, a nonempty
 * in-domain successor set contained in target } */
StateSet cpre(const SymbolicModel& model, const StateSet& target);

struct GameResult {
  StateSet win;
  std::vector<int32_t> strategy;  /* control index, -1 where undefined */
  std::vector<int32_t> depth;     /* attractor layer, -1 outside (reach only) */
  int iterations = 0;
};

/* greatest fixed point Z = safe cap cpre(Z); strategy = smallest forcing
 * control at the fixed point */
GameResult solve_safety(const SymbolicModel& model, const StateSet& safe,
                        int threads = 1);

/* least fixed point Z = target cup cpre(Z), optionally depth-bounded;
 * strategy recorded at first entry (minimal depth, then smallest control) */
GameResult solve_reach(const SymbolicModel& model, const StateSet& target,
                       int within = -1, int threads = 1);

struct SpecRegions {
  Box omega1, omega2;
  double dwell_min = 2.0;  /* seconds in omega1, lower bound */
  double dwell_max = 4.0;  /* seconds in omega1, upper bound */
  double stay_max = 3.0;   /* seconds in omega2, upper bound */

  void validate(int dim) const;
  uint64_t hash(double tau) const;  /* stable spec fingerprint */
};

/*
 * Slot map of the monitor: 0 = M0, 1..kmax1 = M1 with its counter,
 * kmax1+1 = M2, kmax1+2..kmax1+1+kstay = M3 with its counter,
 * then M4 and M5.  Counters are inclusive sample counts.
 */
struct ModeLayout {
  int kmin1 = 0, kmax1 = 1, kstay = 1, nslots = 0;

  static ModeLayout from(const SpecRegions& spec, double tau);

  int m0() const { return 0; }
  int m1(int c) const { return c; }
  int m2() const { return kmax1 + 1; }
  int m3(int c) const { return kmax1 + 1 + c; }
  int m4() const { return kmax1 + kstay + 2; }
  int m5() const { return kmax1 + kstay + 3; }
  std::string name(int slot) const;
};

/* deterministic monitor advance on the membership of the arriving state;
 * returns the next slot, or -1 on a specification violation */
int monitor_step(const ModeLayout& layout, int slot, bool in1, bool in2);

struct SynthStats {
  int iter_m5 = 0, iter_m4 = 0, iter_m2 = 0, iter_m0 = 0;
  size_t win_product = 0;  /* winning (state, slot) pairs */
};

struct Controller {
  ParameterVector params;
  SpecRegions regions;
  ModeLayout layout;
  uint32_t nq = 0, na = 0;
  uint32_t q0 = 0;                /* initial state index, slot M0 */
  std::vector<uint8_t> win;       /* [slot*nq + q] */
  std::vector<int32_t> table;     /* [slot*nq + q] -> control index or -1 */
  SynthStats stats;

  bool defined(uint32_t q, int slot) const {
    return win[static_cast<size_t>(slot) * nq + q] != 0;
  }
  int32_t control_at(uint32_t q, int slot) const {
    return table[static_cast<size_t>(slot) * nq + q];
  }
};

/* reach/dwell/stay specification published for the pendulum benchmark:
 * omega1 = [pi/8, pi/4] x X2, omega2 = [-pi/4, -pi/8] x X2,
 * dwell 2..4 s, stay at most 3 s */
SpecRegions pendulum_spec();

/* backward composition of the monitor game; throws an infeasible error with
 * the first unwinnable mode when (x0, M0) is losing */
Controller synthesize(const SymbolicModel& model, const SpecRegions& spec,
                      const Vec& x0, int threads = 1);

struct TraceRow {
  int step = 0;
  std::string mode;
  Key sym_key;
  Vec sym, conc, u, d_sample;
  double distance = 0.0;
};

struct SimResult {
  std::vector<TraceRow> rows;
  bool violated = false;
  bool reached_terminal = false;  /* monitor reached M5 */
  std::string verdict;            /* satisfied | violated | undetermined */
  int final_slot = 0;
};

/*
 * Closed loop on the concrete system: each sampling instant the concrete
 * state is quantized to its nearest lattice point, the controller is looked
 * up at the current monitor slot, and the true disturbance drives the flow
 * over the next interval.  Throws a runtime error naming the step when the
 * controller is undefined at an encountered product state.
 */
SimResult simulate_closed_loop(const SystemDef& sys, const FlowConfig& flow,
                               const Controller& ctrl,
                               const DisturbanceSignal& d, const Vec& x0,
                               int steps);

struct ExhaustiveReport {
  bool ok = false;
  uint64_t explored = 0;  /* distinct product states visited */
  int horizon = 0;
  std::string detail;
};

/* breadth-first walk of every adversarial resolution (disturbance label and
 * abstract successor) under the controller, to the given horizon (negative:
 * until no new product state appears); checks that the monitor never
 * violates and every visited product state stays winning */
ExhaustiveReport exhaustive_closed_loop_check(const SymbolicModel& model,
                                              const Controller& ctrl,
                                              int horizon);

} /* namespace symcon */

#endif /* SYMCON_SYNTHESIS_HH_ */
