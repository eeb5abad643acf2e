#include "symcon/synthesis.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <deque>
#include <sstream>
#include <thread>

#include "symcon/errors.hh"
#include "symcon/flow.hh"

namespace symcon {

namespace {

constexpr double kRegionGuard = 1e-12;

void parallel_for(uint32_t n, int threads,
                  const std::function<void(uint32_t, uint32_t)>& fn) {
  int nt = std::max(1, threads);
  nt = std::min<int>(nt, std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min<int>(nt, static_cast<int>(n));
  if (nt <= 1 || n == 0) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const uint32_t chunk = (n + nt - 1) / nt;
  for (int i = 0; i < nt; ++i) {
    const uint32_t q0 = std::min<uint32_t>(i * chunk, n);
    const uint32_t q1 = std::min<uint32_t>(q0 + chunk, n);
    if (q0 < q1) pool.emplace_back(fn, q0, q1);
  }
  for (auto& th : pool) th.join();
}

/* smallest control index forcing accept(v) over every disturbance label and
 * every successor; -1 if none */
template <class Accept>
int first_force(const SymbolicModel& m, uint32_t q, Accept&& accept) {
  const uint32_t na = m.num_controls(), nb = m.num_symbols();
  for (uint32_t a = 0; a < na; ++a) {
    bool ok = true;
    for (uint32_t b = 0; b < nb && ok; ++b) {
      SymbolicModel::SuccView vw;
      if (m.try_view(q, a, b, &vw)) {
        if (vw.out_of_domain || vw.first == vw.last) {
          ok = false;
          break;
        }
        for (const uint32_t* p = vw.first; p != vw.last && ok; ++p)
          ok = accept(*p);
      } else {
        const SuccessorSet s = m.successors_of(q, a, b);
        if (s.out_of_domain || s.idx.empty()) {
          ok = false;
          break;
        }
        for (uint32_t v : s.idx) {
          if (!accept(v)) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) return static_cast<int>(a);
  }
  return -1;
}

StateSet region_members(const Lattice& lat, const Box& region) {
  StateSet out(lat.size(), 0);
  const uint64_t n = lat.size();
  for (uint64_t q = 0; q < n; ++q)
    out[q] = region.contains(lat.point(lat.key_of(q)), kRegionGuard) ? 1 : 0;
  return out;
}

uint64_t fnv1a(const void* data, size_t len, uint64_t h) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t fnv1a_double(double v, uint64_t h) {
  char buf[32];
  const int k = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return fnv1a(buf, static_cast<size_t>(k), h);
}

}  /* namespace */

StateSet cpre(const SymbolicModel& model, const StateSet& target) {
  if (target.size() != model.num_states())
    throw config_error("cpre: target set size differs from the state count");
  const uint32_t nq = model.num_states();
  StateSet out(nq, 0);
  for (uint32_t q = 0; q < nq; ++q)
    out[q] =
        first_force(model, q, [&](uint32_t v) { return target[v] != 0; }) >= 0
            ? 1
            : 0;
  return out;
}

GameResult solve_safety(const SymbolicModel& model, const StateSet& safe,
                        int threads) {
  if (safe.size() != model.num_states())
    throw config_error("solve_safety: set size differs from the state count");
  const uint32_t nq = model.num_states();
  GameResult r;
  r.win = safe;
  r.strategy.assign(nq, -1);
  r.depth.assign(nq, -1);

  std::vector<uint8_t> next(nq, 0);
  bool changed = true;
  while (changed) {
    ++r.iterations;
    parallel_for(nq, threads, [&](uint32_t q0, uint32_t q1) {
      for (uint32_t q = q0; q < q1; ++q)
        next[q] = (r.win[q] != 0 &&
                   first_force(model, q,
                               [&](uint32_t v) { return r.win[v] != 0; }) >= 0)
                      ? 1
                      : 0;
    });
    changed = next != r.win;
    r.win.swap(next);
  }
  parallel_for(nq, threads, [&](uint32_t q0, uint32_t q1) {
    for (uint32_t q = q0; q < q1; ++q)
      if (r.win[q])
        r.strategy[q] =
            first_force(model, q, [&](uint32_t v) { return r.win[v] != 0; });
  });
  return r;
}

GameResult solve_reach(const SymbolicModel& model, const StateSet& target,
                       int within, int threads) {
  if (target.size() != model.num_states())
    throw config_error("solve_reach: set size differs from the state count");
  const uint32_t nq = model.num_states();
  GameResult r;
  r.win = target;
  r.strategy.assign(nq, -1);
  r.depth.assign(nq, -1);
  for (uint32_t q = 0; q < nq; ++q)
    if (target[q]) r.depth[q] = 0;

  std::vector<int32_t> pending(nq, -1);
  for (;;) {
    if (within >= 0 && r.iterations >= within) break;
    ++r.iterations;
    parallel_for(nq, threads, [&](uint32_t q0, uint32_t q1) {
      for (uint32_t q = q0; q < q1; ++q) {
        pending[q] = -1;
        if (r.win[q]) continue;
        pending[q] =
            first_force(model, q, [&](uint32_t v) { return r.win[v] != 0; });
      }
    });
    uint32_t added = 0;
    for (uint32_t q = 0; q < nq; ++q)
      if (pending[q] >= 0) {
        r.win[q] = 1;
        r.strategy[q] = pending[q];
        r.depth[q] = r.iterations;
        ++added;
      }
    if (added == 0) break;
  }
  return r;
}

void SpecRegions::validate(int dim) const {
  if (omega1.dim() != dim || omega2.dim() != dim)
    throw config_error("spec: region dimension differs from the state space");
  if (!(dwell_min >= 0.0) || !std::isfinite(dwell_min))
    throw config_error("spec: dwell_min must be nonnegative");
  if (!(dwell_max >= dwell_min) || !std::isfinite(dwell_max))
    throw config_error("spec: dwell_max must be at least dwell_min");
  if (!(stay_max >= 0.0) || !std::isfinite(stay_max))
    throw config_error("spec: stay_max must be nonnegative");
}

uint64_t SpecRegions::hash(double tau) const {
  uint64_t h = 1469598103934665603ull;
  for (const Box* b : {&omega1, &omega2}) {
    for (double v : b->lo) h = fnv1a_double(v, h);
    for (double v : b->hi) h = fnv1a_double(v, h);
  }
  h = fnv1a_double(dwell_min, h);
  h = fnv1a_double(dwell_max, h);
  h = fnv1a_double(stay_max, h);
  h = fnv1a_double(tau, h);
  return h;
}

ModeLayout ModeLayout::from(const SpecRegions& spec, double tau) {
  if (!(tau > 0.0)) throw config_error("spec: tau must be positive");
  ModeLayout L;
  L.kmin1 = std::max<int>(
      0, static_cast<int>(std::ceil(spec.dwell_min / tau - 1e-9)));
  L.kmax1 = std::max<int>(
      1, static_cast<int>(std::floor(spec.dwell_max / tau + 1e-9)));
  if (L.kmin1 > L.kmax1)
    throw config_error("spec: the dwell window admits no whole sampling step");
  L.kstay = std::max<int>(
      1, static_cast<int>(std::floor(spec.stay_max / tau + 1e-9)));
  L.nslots = L.kmax1 + L.kstay + 4;
  return L;
}

std::string ModeLayout::name(int slot) const {
  std::ostringstream os;
  if (slot == m0()) os << "M0";
  else if (slot >= 1 && slot <= kmax1) os << "M1#" << slot;
  else if (slot == m2()) os << "M2";
  else if (slot >= m3(1) && slot <= m3(kstay)) os << "M3#" << (slot - m2());
  else if (slot == m4()) os << "M4";
  else if (slot == m5()) os << "M5";
  else os << "?" << slot;
  return os.str();
}

int monitor_step(const ModeLayout& L, int slot, bool in1, bool in2) {
  if (slot == L.m0()) return in1 ? L.m1(1) : L.m0();
  if (slot >= 1 && slot <= L.kmax1) {
    const int c = slot;
    /* progress to the second region counts as leaving the first */
    if (in2 && c >= L.kmin1) return L.m3(1);
    if (in1) return (c + 1 <= L.kmax1) ? L.m1(c + 1) : -1;
    if (c >= L.kmin1) return L.m2();
    return -1;
  }
  if (slot == L.m2()) return in2 ? L.m3(1) : L.m2();
  if (slot >= L.m3(1) && slot <= L.m3(L.kstay)) {
    const int c = slot - L.m2();
    if (in1) return L.m5();
    if (in2) return (c + 1 <= L.kstay) ? L.m3(c + 1) : -1;
    return L.m4();
  }
  if (slot == L.m4()) return in1 ? L.m5() : L.m4();
  if (slot == L.m5()) return in1 ? L.m5() : -1;
  throw runtime_failure("monitor_step: slot out of range");
}

SpecRegions pendulum_spec() {
  const double pi = 3.141592653589793;
  SpecRegions s;
  s.omega1 = Box({pi / 8.0, -0.5}, {pi / 4.0, 0.5});
  s.omega2 = Box({-pi / 4.0, -0.5}, {-pi / 8.0, 0.5});
  s.dwell_min = 2.0;
  s.dwell_max = 4.0;
  s.stay_max = 3.0;
  return s;
}

Controller synthesize(const SymbolicModel& model, const SpecRegions& spec,
                      const Vec& x0, int threads) {
  spec.validate(model.system().n);
  const ModeLayout L = ModeLayout::from(spec, model.params().tau);
  const uint32_t nq = model.num_states();
  const StateSet in1 = region_members(model.states(), spec.omega1);
  const StateSet in2 = region_members(model.states(), spec.omega2);

  Controller ctrl;
  ctrl.params = model.params();
  ctrl.regions = spec;
  ctrl.layout = L;
  ctrl.nq = nq;
  ctrl.na = model.num_controls();
  ctrl.win.assign(static_cast<size_t>(L.nslots) * nq, 0);
  ctrl.table.assign(static_cast<size_t>(L.nslots) * nq, -1);

  auto wslot = [&](int slot) { return ctrl.win.data() + size_t(slot) * nq; };
  auto tslot = [&](int slot) { return ctrl.table.data() + size_t(slot) * nq; };

  /* accept(v): the monitor advances from `slot` on v's membership; a move to
   * a later slot reads its finished winning set, a self-loop reads Z */
  auto acceptor = [&](int slot, const StateSet& Z) {
    return [&, slot](uint32_t v) -> bool {
      const int s2 = monitor_step(L, slot, in1[v] != 0, in2[v] != 0);
      if (s2 < 0) return false;
      if (s2 == slot) return Z[v] != 0;
      return ctrl.win[static_cast<size_t>(s2) * nq + v] != 0;
    };
  };

  /* greatest fixed point for a self-looping slot restricted to `limit` */
  auto solve_nu = [&](int slot, const StateSet& limit) -> int {
    StateSet Z = limit;
    StateSet next(nq, 0);
    int iters = 0;
    bool changed = true;
    while (changed) {
      ++iters;
      auto acc = acceptor(slot, Z);
      parallel_for(nq, threads, [&](uint32_t a, uint32_t b) {
        for (uint32_t q = a; q < b; ++q)
          next[q] = (Z[q] && first_force(model, q, acc) >= 0) ? 1 : 0;
      });
      changed = next != Z;
      Z.swap(next);
    }
    auto acc = acceptor(slot, Z);
    parallel_for(nq, threads, [&](uint32_t a, uint32_t b) {
      for (uint32_t q = a; q < b; ++q)
        if (Z[q]) {
          wslot(slot)[q] = 1;
          tslot(slot)[q] = first_force(model, q, acc);
        }
    });
    return iters;
  };

  /* least fixed point for a self-looping slot; minimal-depth strategies */
  auto solve_mu = [&](int slot) -> int {
    StateSet Z(nq, 0);
    std::vector<int32_t> pending(nq, -1);
    int iters = 0;
    for (;;) {
      ++iters;
      auto acc = acceptor(slot, Z);
      parallel_for(nq, threads, [&](uint32_t a, uint32_t b) {
        for (uint32_t q = a; q < b; ++q) {
          pending[q] = -1;
          if (!Z[q]) pending[q] = first_force(model, q, acc);
        }
      });
      uint32_t added = 0;
      for (uint32_t q = 0; q < nq; ++q)
        if (pending[q] >= 0) {
          Z[q] = 1;
          wslot(slot)[q] = 1;
          tslot(slot)[q] = pending[q];
          ++added;
        }
      if (added == 0) break;
    }
    return iters;
  };

  /* counter slot: the monitor always leaves it, so one sweep suffices */
  auto solve_counter = [&](int slot) {
    const StateSet empty(nq, 0);
    auto acc = acceptor(slot, empty);
    parallel_for(nq, threads, [&](uint32_t a, uint32_t b) {
      for (uint32_t q = a; q < b; ++q) {
        const int u = first_force(model, q, acc);
        if (u >= 0) {
          wslot(slot)[q] = 1;
          tslot(slot)[q] = u;
        }
      }
    });
  };

  ctrl.stats.iter_m5 = solve_nu(L.m5(), in1);
  ctrl.stats.iter_m4 = solve_mu(L.m4());
  for (int c = L.kstay; c >= 1; --c) solve_counter(L.m3(c));
  ctrl.stats.iter_m2 = solve_mu(L.m2());
  for (int c = L.kmax1; c >= 1; --c) solve_counter(L.m1(c));
  ctrl.stats.iter_m0 = solve_mu(L.m0());

  for (uint8_t w : ctrl.win) ctrl.stats.win_product += w;

  if (!model.system().X.contains(x0, kRegionGuard))
    throw config_error("synthesize: initial state outside the state space");
  ctrl.q0 = static_cast<uint32_t>(
      model.states().index_of(model.states().nearest(x0)));

  if (!ctrl.defined(ctrl.q0, L.m0())) {
    /* name the first mode, in backward solve order, with no winning state */
    std::vector<int> order;
    order.push_back(L.m5());
    order.push_back(L.m4());
    for (int c = L.kstay; c >= 1; --c) order.push_back(L.m3(c));
    order.push_back(L.m2());
    for (int c = L.kmax1; c >= 1; --c) order.push_back(L.m1(c));
    order.push_back(L.m0());
    std::string first_empty;
    for (int s : order) {
      bool any = false;
      for (uint32_t q = 0; q < nq && !any; ++q) any = wslot(s)[q] != 0;
      if (!any) {
        first_empty = L.name(s);
        break;
      }
    }
    std::ostringstream os;
    os << "synthesis failed: initial state (index " << ctrl.q0
       << ") is not winning at M0";
    if (!first_empty.empty())
      os << "; first unwinnable mode " << first_empty;
    throw infeasible_error(os.str());
  }
  return ctrl;
}

SimResult simulate_closed_loop(const SystemDef& sys, const FlowConfig& flow,
                               const Controller& ctrl,
                               const DisturbanceSignal& d, const Vec& x0,
                               int steps) {
  if (steps < 0) throw config_error("simulate: steps must be nonnegative");
  if (d.l != sys.l)
    throw config_error("simulate: disturbance dimension mismatch");
  Lattice lat(sys.X, ctrl.params.mu_x);
  Lattice ctl(sys.U, ctrl.params.mu_u);
  if (lat.size() != ctrl.nq || ctl.size() != ctrl.na)
    throw config_error(
        "simulate: controller does not match the lattices of this parameter "
        "vector");
  if (!sys.X.contains(x0, kRegionGuard))
    throw config_error("simulate: initial state outside the state space");

  FlowConfig fc = flow;
  fc.tau = ctrl.params.tau;
  const ModeLayout& L = ctrl.layout;

  auto member = [&](const Vec& p, const Box& region) {
    return region.contains(p, kRegionGuard);
  };

  SimResult out;
  Vec x = x0;
  Key k = lat.nearest(x);
  uint32_t q = static_cast<uint32_t>(lat.index_of(k));
  int slot = L.m0();

  TraceRow row;
  row.step = 0;
  row.mode = L.name(slot);
  row.sym_key = k;
  row.sym = lat.point(k);
  row.conc = x;
  row.d_sample = d.at(0.0);
  row.distance = dist_inf(x, row.sym);
  out.rows.push_back(row);

  for (int step = 0; step < steps; ++step) {
    if (!ctrl.defined(q, slot)) {
      std::ostringstream os;
      os << "refinement failed at step " << step << ": controller undefined "
         << "at state index " << q << ", mode " << L.name(slot);
      throw runtime_failure(os.str());
    }
    const int32_t ui = ctrl.control_at(q, slot);
    const Vec u = ctl.point(ctl.key_of(static_cast<uint64_t>(ui)));
    out.rows.back().u = u;

    const double t0 = step * fc.tau;
    DisturbanceSignal shifted;
    shifted.l = d.l;
    shifted.fn = [&d, t0](double t, double* o) { d.fn(t0 + t, o); };
    x = integrate(sys, fc, x, u, shifted);

    k = lat.nearest(x);
    q = static_cast<uint32_t>(lat.index_of(k));
    const Vec p = lat.point(k);
    const int s2 =
        monitor_step(L, slot, member(p, ctrl.regions.omega1),
                     member(p, ctrl.regions.omega2));

    row = TraceRow();
    row.step = step + 1;
    row.mode = s2 < 0 ? "VIOLATION" : L.name(s2);
    row.sym_key = k;
    row.sym = p;
    row.conc = x;
    row.d_sample = d.at((step + 1) * fc.tau);
    row.distance = dist_inf(x, p);
    out.rows.push_back(row);

    if (s2 < 0) {
      out.violated = true;
      break;
    }
    slot = s2;
    if (slot == L.m5()) out.reached_terminal = true;
  }
  out.final_slot = slot;
  out.verdict = out.violated ? "violated"
                             : (out.reached_terminal ? "satisfied"
                                                     : "undetermined");
  return out;
}

ExhaustiveReport exhaustive_closed_loop_check(const SymbolicModel& model,
                                              const Controller& ctrl,
                                              int horizon) {
  const ModeLayout& L = ctrl.layout;
  const uint32_t nq = model.num_states();
  if (nq != ctrl.nq)
    throw config_error("exhaustive check: controller does not match the model");
  const StateSet in1 = region_members(model.states(), ctrl.regions.omega1);
  const StateSet in2 = region_members(model.states(), ctrl.regions.omega2);

  ExhaustiveReport rep;
  rep.horizon = horizon;

  std::vector<uint8_t> seen(static_cast<size_t>(L.nslots) * nq, 0);
  struct Node {
    uint32_t q;
    int slot, depth;
  };
  std::deque<Node> frontier;

  auto visit = [&](uint32_t q, int slot, int depth) -> bool {
    const size_t id = static_cast<size_t>(slot) * nq + q;
    if (seen[id]) return true;
    seen[id] = 1;
    ++rep.explored;
    if (!ctrl.defined(q, slot)) {
      std::ostringstream os;
      os << "controller undefined at reachable product state (q=" << q
         << ", " << L.name(slot) << ", depth " << depth << ")";
      rep.detail = os.str();
      return false;
    }
    frontier.push_back({q, slot, depth});
    return true;
  };

  if (!visit(ctrl.q0, L.m0(), 0)) return rep;

  while (!frontier.empty()) {
    const Node n = frontier.front();
    frontier.pop_front();
    if (horizon >= 0 && n.depth >= horizon) continue;
    const int32_t ui = ctrl.control_at(n.q, n.slot);
    for (uint32_t b = 0; b < model.num_symbols(); ++b) {
      const SuccessorSet s =
          model.successors_of(n.q, static_cast<uint32_t>(ui), b);
      if (s.out_of_domain || s.idx.empty()) {
        std::ostringstream os;
        os << "controlled move leaves the domain at (q=" << n.q << ", "
           << L.name(n.slot) << ", b=" << b << ")";
        rep.detail = os.str();
        return rep;
      }
      for (uint32_t v : s.idx) {
        const int s2 = monitor_step(L, n.slot, in1[v] != 0, in2[v] != 0);
        if (s2 < 0) {
          std::ostringstream os;
          os << "specification violated at depth " << (n.depth + 1)
             << " via (q=" << n.q << ", " << L.name(n.slot) << ") -> q=" << v;
          rep.detail = os.str();
          return rep;
        }
        if (!visit(v, s2, n.depth + 1)) return rep;
      }
    }
  }
  rep.ok = true;
  std::ostringstream os;
  os << "explored " << rep.explored
     << " product states; every reachable state winning, no violation";
  rep.detail = os.str();
  return rep;
}

} /* namespace symcon */
