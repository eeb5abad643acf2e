/*
 * abstraction.hh
 *
 * Finite symbolic model of the sampled dynamics: states are the lattice
 * (2 mu_x Z^n) in X, control labels the lattice (2 mu_u Z^m) in U,
 * disturbance labels the admissible node sequences of the piecewise-linear
 * approximation class, and q -(a,b)-> q' holds when the lattice point q'
 * lies within mu_x of the time-tau flow from q under (a,b).
 *
 * The precision vector must satisfy the certified refinement inequalities
 * before the model carries any bisimulation guarantee; check_params
 * evaluates them and reports margins, suggest_params searches for a passing
 * vector by the staged shrinking argument.
 */

#ifndef SYMCON_ABSTRACTION_HH_
#define SYMCON_ABSTRACTION_HH_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "symcon/flow.hh"
#include "symcon/geometry.hh"
#include "symcon/lyapunov.hh"
#include "symcon/spline.hh"
#include "symcon/system.hh"

namespace symcon {

struct ParameterVector {
  double tau = 1.0;
  double mu_x = 0.0;
  double mu_u = 0.0;
  double mu_d = 0.0;
  double theta_d = 0.0;  /* admitted disturbance approximation radius */
  int N = 0;             /* interior spline nodes */
};

struct BisimCheckReport {
  double eps = 0.0;
  /* gap inequality: max(sigma_u(mu_u), sigma_d(theta_d))/lambda
   *                 + gamma_slope*mu_x/(1-exp(-lambda*tau)) <= alpha_lo(eps) */
  double gap_lhs = 0.0;
  double gap_rhs = 0.0;
  double gamma_slope = 0.0;
  /* lattice precision caps */
  double mu_hat_X = 0.0, mu_hat_U = 0.0, mu_hat_D = 0.0;
  /* disturbance class quality */
  double rho = 0.0, Theta = 0.0;
  bool ok_gap = false;
  bool ok_state = false;    /* mu_x <= mu_hat_X */
  bool ok_control = false;  /* mu_u <= mu_hat_U */
  bool ok_dist = false;     /* mu_d <= mu_hat_D */
  bool ok_theta = false;    /* rho > 0 and Theta <= theta_d */
  bool pass = false;
  std::string note;

  std::string summary() const;
};

/* published parameter pick for pendulum_preset(): tau=1, mu_x=pi/2000,
 * mu_u=0.001, theta_d=0.007, mu_d=1.43e-4, N=0 */
ParameterVector pendulum_params();

BisimCheckReport check_params(const SystemDef& sys, const QuadraticCert& cert,
                              const ParameterVector& p, double eps);

struct SuggestResult {
  ParameterVector params;
  BisimCheckReport report;
};

/*
 * Staged search: mu_u and theta_d take half the certified budget each
 * through the supply-rate inverses, mu_x the other half through the
 * gradient slope (all capped by the lattice bounds); then the smallest node
 * count N admitting the theta_d radius and the largest feasible mu_d on a
 * descending grid.  Deterministic, and monotone in eps.
 */
SuggestResult suggest_params(const SystemDef& sys, const QuadraticCert& cert,
                             double eps, double tau);

struct SuccessorSet {
  bool out_of_domain = false;
  std::vector<uint32_t> idx;  /* ascending state indices */
};

/* flow endpoint quantization: all in-X lattice keys within mu_x of the
 * endpoint (inclusive, 1e-12 absolute guard band on the comparison) */
SuccessorSet successors(const SystemDef& sys, const FlowConfig& flow,
                        const Lattice& states, const Lattice& controls,
                        const std::vector<SplineSeq>& symbols,
                        uint32_t q, uint32_t a, uint32_t b);

enum class BuildMode { materialized, onthefly };

class SymbolicModel {
public:
  SymbolicModel(SystemDef sys, FlowConfig flow, ParameterVector params,
                BuildMode mode, int threads = 1);

  const SystemDef& system() const { return m_sys; }
  const FlowConfig& flow() const { return m_flow; }
  const ParameterVector& params() const { return m_params; }
  const Lattice& states() const { return *m_states; }
  const Lattice& controls() const { return *m_controls; }
  const std::vector<SplineSeq>& symbols() const { return m_symbols; }
  BuildMode mode() const { return m_mode; }

  uint32_t num_states() const { return m_nq; }
  uint32_t num_controls() const { return m_na; }
  uint32_t num_symbols() const { return m_nb; }

  /* materialized: table lookup; on-the-fly: compute through a bounded cache */
  SuccessorSet successors_of(uint32_t q, uint32_t a, uint32_t b) const;

  /* zero-copy slice into the materialized table; false in on-the-fly mode */
  struct SuccView {
    bool out_of_domain = false;
    const uint32_t* first = nullptr;
    const uint32_t* last = nullptr;
  };
  bool try_view(uint32_t q, uint32_t a, uint32_t b, SuccView* out) const;

  /* install previously stored tables instead of recomputing (model loading) */
  static SymbolicModel from_tables(SystemDef sys, FlowConfig flow,
                                   ParameterVector params,
                                   std::vector<uint64_t> offsets,
                                   std::vector<uint32_t> succ,
                                   std::vector<uint8_t> oob);

private:
  struct NoBuildTag {};
  SymbolicModel(SystemDef sys, FlowConfig flow, ParameterVector params,
                NoBuildTag);
  void setup();
  void materialize(int threads);
  size_t triple(uint32_t q, uint32_t a, uint32_t b) const {
    return (static_cast<size_t>(q) * m_na + a) * m_nb + b;
  }

  SystemDef m_sys;
  FlowConfig m_flow;
  ParameterVector m_params;
  std::unique_ptr<Lattice> m_states, m_controls;
  std::vector<SplineSeq> m_symbols;
  BuildMode m_mode;
  uint32_t m_nq = 0, m_na = 0, m_nb = 0;

  /* materialized storage: CSR over triples plus an out-of-domain bitmap */
  std::vector<uint64_t> m_offsets;
  std::vector<uint32_t> m_succ;
  std::vector<uint8_t> m_oob;

  struct Cache;
  std::shared_ptr<Cache> m_cache;  /* on-the-fly memoization */
};

/* convenience wrapper mirroring the two build strategies */
SymbolicModel build_model(const SystemDef& sys, const FlowConfig& flow,
                          const ParameterVector& params, BuildMode mode,
                          int threads = 1);

} /* namespace symcon */

#endif /* SYMCON_ABSTRACTION_HH_ */
