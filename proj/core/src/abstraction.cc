#include "symcon/abstraction.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "symcon/errors.hh"

namespace symcon {

namespace {

constexpr double kMemberGuard = 1e-12;        /* successor membership band */
constexpr size_t kMaterializeCap = 20000000;  /* (q,a,b) slots */
constexpr uint64_t kSymbolCap = 10000000;

void validate_params(const ParameterVector& p) {
  if (!(p.tau > 0.0) || !std::isfinite(p.tau))
    throw config_error("params: tau must be positive");
  if (!(p.mu_x > 0.0) || !(p.mu_u > 0.0) || !(p.mu_d > 0.0))
    throw config_error("params: precisions mu_x, mu_u, mu_d must be positive");
  if (!(p.theta_d > 0.0))
    throw config_error("params: theta_d must be positive");
  if (p.N < 0) throw config_error("params: N must be nonnegative");
}

}  /* namespace */

ParameterVector pendulum_params() {
  ParameterVector p;
  p.tau = 1.0;
  p.mu_x = 3.141592653589793 / 2000.0;
  p.mu_u = 0.001;
  p.mu_d = 1.43e-4;
  p.theta_d = 0.007;
  p.N = 0;
  return p;
}

std::string BisimCheckReport::summary() const {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "gap %.17g <= %.17g : %s (margin %.17g)", gap_lhs, gap_rhs,
                ok_gap ? "ok" : "VIOLATED", gap_rhs - gap_lhs);
  os << buf << "\n";
  std::snprintf(buf, sizeof(buf),
                "precision caps: state %s, control %s, disturbance %s",
                ok_state ? "ok" : "VIOLATED", ok_control ? "ok" : "VIOLATED",
                ok_dist ? "ok" : "VIOLATED");
  os << buf << "\n";
  std::snprintf(buf, sizeof(buf),
                "signal class: rho %.17g, Theta %.17g <= theta_d : %s", rho,
                Theta, ok_theta ? "ok" : "VIOLATED");
  os << buf << "\n";
  os << (pass ? "PASS" : "FAIL");
  if (!note.empty()) os << "\nnote: " << note;
  return os.str();
}

BisimCheckReport check_params(const SystemDef& sys, const QuadraticCert& cert,
                              const ParameterVector& p, double eps) {
  if (cert.n != sys.n)
    throw config_error("check_params: certificate dimension mismatch");
  cert.validate();
  validate_params(p);
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw config_error("check_params: eps must be positive");

  BisimCheckReport r;
  r.eps = eps;
  r.gamma_slope = gamma_sup(cert, sys.X);
  const double decay = 1.0 - std::exp(-cert.lambda * p.tau);
  r.gap_lhs = std::max(cert.sigma_u(p.mu_u), cert.sigma_d(p.theta_d)) /
                  cert.lambda +
              r.gamma_slope * p.mu_x / decay;
  r.gap_rhs = cert.alpha_lo(eps);
  r.mu_hat_X = mu_hat(sys.X);
  r.mu_hat_U = mu_hat(sys.U);
  r.mu_hat_D = mu_hat(sys.D);
  ApproxParams ap =
      rho_theta(p.N, p.mu_d, sys.kappa_d, p.tau, sys.dist_bound());
  r.rho = ap.rho;
  r.Theta = ap.Theta;

  r.ok_gap = r.gap_lhs <= r.gap_rhs;
  r.ok_state = p.mu_x <= r.mu_hat_X;
  r.ok_control = p.mu_u <= r.mu_hat_U;
  r.ok_dist = p.mu_d <= r.mu_hat_D;
  r.ok_theta = (ap.rho > 0.0) && (ap.Theta <= p.theta_d);
  r.pass = r.ok_gap && r.ok_state && r.ok_control && r.ok_dist && r.ok_theta;
  if (!r.ok_gap)
    r.note =
        "the gap term uses the corner supremum of the certificate gradient "
        "over the whole domain; parameter picks tuned to a smaller effective "
        "slope can fail here";
  return r;
}

SuggestResult suggest_params(const SystemDef& sys, const QuadraticCert& cert,
                             double eps, double tau) {
  if (cert.n != sys.n)
    throw config_error("suggest_params: certificate dimension mismatch");
  cert.validate();
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw config_error("suggest_params: eps must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw config_error("suggest_params: tau must be positive");

  const double budget = cert.alpha_lo(eps) / 2.0;
  const double decay = 1.0 - std::exp(-cert.lambda * tau);
  const double slope = gamma_sup(cert, sys.X);

  ParameterVector p;
  p.tau = tau;
  p.mu_u = std::min(cert.sigma_u.inverse(budget * cert.lambda), mu_hat(sys.U));
  p.theta_d = cert.sigma_d.inverse(budget * cert.lambda);
  p.mu_x = std::min(budget * decay / slope, mu_hat(sys.X));

  /* smallest node count whose node-to-node drift fits under theta_d with a
   * 2% margin, then the coarsest value precision keeping rho positive and
   * Theta within theta_d */
  const double M = sys.dist_bound();
  const int n_cap = 1000000;
  const int grid = 4096;
  bool found = false;
  for (int N = 0; N < n_cap && !found; ++N) {
    const double h = tau / static_cast<double>(N + 1);
    if (!(2.0 * sys.kappa_d * h < 0.98 * p.theta_d)) continue;
    const double w =
        std::min(std::min(M, sys.kappa_d * h / 2.0), mu_hat(sys.D));
    for (int j = 1; j < grid; ++j) {
      const double mu = w * (1.0 - static_cast<double>(j) / grid);
      if (!(mu > 0.0)) break;
      ApproxParams ap = rho_theta(N, mu, sys.kappa_d, tau, M);
      if (ap.rho > 0.0 && ap.Theta <= p.theta_d && mu <= mu_hat(sys.D)) {
        p.N = N;
        p.mu_d = mu;
        found = true;
        break;
      }
    }
  }
  if (!found)
    throw infeasible_error(
        "suggest_params: no admissible disturbance schedule under theta_d");

  SuggestResult out;
  out.params = p;
  out.report = check_params(sys, cert, p, eps);
  if (!out.report.pass)
    throw runtime_failure(
        "suggest_params: staged split failed its own check\n" +
        out.report.summary());
  return out;
}

SuccessorSet successors(const SystemDef& sys, const FlowConfig& flow,
                        const Lattice& states, const Lattice& controls,
                        const std::vector<SplineSeq>& symbols, uint32_t q,
                        uint32_t a, uint32_t b) {
  if (b >= symbols.size())
    throw runtime_failure("successors: disturbance label out of range");
  const Vec x = states.point(states.key_of(q));
  const Vec u = controls.point(controls.key_of(a));
  const DisturbanceSignal d = symbols[b].as_signal();
  const Vec y = integrate(sys, flow, x, u, d);

  const int n = states.dim();
  const double s = states.spacing();
  const double r = states.mu() + kMemberGuard;

  SuccessorSet out;
  std::vector<int64_t> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    /* loose window, tightened against the exact membership predicate so the
     * result agrees with a brute-force scan of candidate keys */
    int64_t klo = static_cast<int64_t>(std::ceil((y[i] - r) / s)) - 1;
    int64_t khi = static_cast<int64_t>(std::floor((y[i] + r) / s)) + 1;
    while (klo <= khi && std::abs(s * static_cast<double>(klo) - y[i]) > r)
      ++klo;
    while (klo <= khi && std::abs(s * static_cast<double>(khi) - y[i]) > r)
      --khi;
    klo = std::max(klo, states.kmin(i));
    khi = std::min(khi, states.kmax(i));
    if (klo > khi) {
      out.out_of_domain = true;
      return out;
    }
    lo[i] = klo;
    hi[i] = khi;
  }

  /* odometer in lexicographic key order gives ascending indices */
  Key k(lo.begin(), lo.end());
  for (;;) {
    out.idx.push_back(static_cast<uint32_t>(states.index_of(k)));
    int axis = n - 1;
    while (axis >= 0) {
      if (++k[axis] <= hi[axis]) break;
      k[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

struct SymbolicModel::Cache {
  std::mutex mu;
  std::unordered_map<size_t, SuccessorSet> map;
  static constexpr size_t cap = size_t(1) << 22;
};

void SymbolicModel::setup() {
  validate_params(m_params);
  m_flow.tau = m_params.tau;
  m_states = std::make_unique<Lattice>(m_sys.X, m_params.mu_x);
  m_controls = std::make_unique<Lattice>(m_sys.U, m_params.mu_u);
  if (m_states->empty())
    throw infeasible_error("abstraction: state lattice is empty");
  if (m_controls->empty())
    throw infeasible_error("abstraction: control lattice is empty");
  if (m_states->size() > 0xffffffffull || m_controls->size() > 0xffffffffull)
    throw infeasible_error("abstraction: lattice exceeds 32-bit indexing");
  m_nq = static_cast<uint32_t>(m_states->size());
  m_na = static_cast<uint32_t>(m_controls->size());

  ApproxParams ap = rho_theta(m_params.N, m_params.mu_d, m_sys.kappa_d,
                              m_params.tau, m_sys.dist_bound());
  m_symbols = enumerate_approx(m_sys.D, ap, kSymbolCap);
  if (m_symbols.empty())
    throw infeasible_error("abstraction: disturbance class is empty");
  m_nb = static_cast<uint32_t>(m_symbols.size());
}

SymbolicModel::SymbolicModel(SystemDef sys, FlowConfig flow,
                             ParameterVector params, NoBuildTag)
    : m_sys(std::move(sys)), m_flow(flow), m_params(params),
      m_mode(BuildMode::materialized) {
  setup();
}

SymbolicModel SymbolicModel::from_tables(SystemDef sys, FlowConfig flow,
                                         ParameterVector params,
                                         std::vector<uint64_t> offsets,
                                         std::vector<uint32_t> succ,
                                         std::vector<uint8_t> oob) {
  SymbolicModel m(std::move(sys), flow, params, NoBuildTag{});
  const size_t total = static_cast<size_t>(m.m_nq) * m.m_na * m.m_nb;
  if (offsets.size() != total + 1 || oob.size() != total ||
      offsets.back() != succ.size() || offsets.front() != 0)
    throw io_error("model tables do not match the stored parameters");
  for (size_t t = 0; t < total; ++t)
    if (offsets[t] > offsets[t + 1])
      throw io_error("model tables: offsets not monotone");
  for (uint32_t v : succ)
    if (v >= m.m_nq) throw io_error("model tables: successor out of range");
  m.m_offsets = std::move(offsets);
  m.m_succ = std::move(succ);
  m.m_oob = std::move(oob);
  return m;
}

SymbolicModel::SymbolicModel(SystemDef sys, FlowConfig flow,
                             ParameterVector params, BuildMode mode,
                             int threads)
    : m_sys(std::move(sys)), m_flow(flow), m_params(params), m_mode(mode) {
  setup();

  if (m_mode == BuildMode::materialized) {
    const size_t total =
        static_cast<size_t>(m_nq) * m_na * m_nb;
    if (total > kMaterializeCap) {
      std::ostringstream os;
      os << "abstraction: " << total
         << " transition slots exceed the materialization cap "
         << kMaterializeCap << "; use the on-the-fly mode";
      throw infeasible_error(os.str());
    }
    materialize(threads);
  } else {
    m_cache = std::make_shared<Cache>();
  }
}

void SymbolicModel::materialize(int threads) {
  const size_t total = static_cast<size_t>(m_nq) * m_na * m_nb;
  std::vector<std::vector<uint32_t>> rows(total);
  m_oob.assign(total, 0);

  int nt = std::max(1, threads);
  nt = std::min<int>(nt, std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min<int>(nt, static_cast<int>(m_nq));

  /* static partition over states; every slot is written exactly once, so the
   * stored tables are identical for any thread count */
  auto work = [&](uint32_t q0, uint32_t q1) {
    for (uint32_t q = q0; q < q1; ++q)
      for (uint32_t a = 0; a < m_na; ++a)
        for (uint32_t b = 0; b < m_nb; ++b) {
          SuccessorSet s =
              successors(m_sys, m_flow, *m_states, *m_controls, m_symbols,
                         q, a, b);
          const size_t t = triple(q, a, b);
          m_oob[t] = s.out_of_domain ? 1 : 0;
          rows[t] = std::move(s.idx);
        }
  };
  if (nt == 1) {
    work(0, m_nq);
  } else {
    std::vector<std::thread> pool;
    const uint32_t chunk = (m_nq + nt - 1) / nt;
    for (int i = 0; i < nt; ++i) {
      const uint32_t q0 = std::min<uint32_t>(i * chunk, m_nq);
      const uint32_t q1 = std::min<uint32_t>(q0 + chunk, m_nq);
      if (q0 < q1) pool.emplace_back(work, q0, q1);
    }
    for (auto& th : pool) th.join();
  }

  m_offsets.assign(total + 1, 0);
  for (size_t t = 0; t < total; ++t)
    m_offsets[t + 1] = m_offsets[t] + rows[t].size();
  m_succ.resize(m_offsets[total]);
  for (size_t t = 0; t < total; ++t)
    std::copy(rows[t].begin(), rows[t].end(),
              m_succ.begin() + static_cast<ptrdiff_t>(m_offsets[t]));
}

SuccessorSet SymbolicModel::successors_of(uint32_t q, uint32_t a,
                                          uint32_t b) const {
  if (q >= m_nq || a >= m_na || b >= m_nb)
    throw runtime_failure("successors_of: label out of range");
  if (m_mode == BuildMode::materialized) {
    const size_t t = triple(q, a, b);
    SuccessorSet s;
    s.out_of_domain = m_oob[t] != 0;
    s.idx.assign(m_succ.begin() + static_cast<ptrdiff_t>(m_offsets[t]),
                 m_succ.begin() + static_cast<ptrdiff_t>(m_offsets[t + 1]));
    return s;
  }
  const size_t t = triple(q, a, b);
  {
    std::lock_guard<std::mutex> lock(m_cache->mu);
    auto it = m_cache->map.find(t);
    if (it != m_cache->map.end()) return it->second;
  }
  SuccessorSet s =
      successors(m_sys, m_flow, *m_states, *m_controls, m_symbols, q, a, b);
  {
    std::lock_guard<std::mutex> lock(m_cache->mu);
    if (m_cache->map.size() >= Cache::cap) m_cache->map.clear();
    m_cache->map.emplace(t, s);
  }
  return s;
}

bool SymbolicModel::try_view(uint32_t q, uint32_t a, uint32_t b,
                             SuccView* out) const {
  if (m_mode != BuildMode::materialized) return false;
  if (q >= m_nq || a >= m_na || b >= m_nb)
    throw runtime_failure("try_view: label out of range");
  const size_t t = triple(q, a, b);
  out->out_of_domain = m_oob[t] != 0;
  out->first = m_succ.data() + m_offsets[t];
  out->last = m_succ.data() + m_offsets[t + 1];
  return true;
}

SymbolicModel build_model(const SystemDef& sys, const FlowConfig& flow,
                          const ParameterVector& params, BuildMode mode,
                          int threads) {
  return SymbolicModel(sys, flow, params, mode, threads);
}

} /* namespace symcon */
