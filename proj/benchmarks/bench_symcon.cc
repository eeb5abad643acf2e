/*
 * Microbenchmarks for the hot paths: one flow integration, one successor
 * computation, enumeration of the published disturbance class, and one
 * forcing-predecessor sweep on a large synthetic game.
 */

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "symcon/abstraction.hh"
#include "symcon/flow.hh"
#include "symcon/spline.hh"
#include "symcon/synthesis.hh"
#include "symcon/system.hh"

using namespace symcon;

namespace {

void bm_integrate(benchmark::State& state) {
  const SystemDef sys = pendulum_preset();
  FlowConfig fl;
  fl.tau = 1.0;
  fl.substeps = static_cast<int>(state.range(0));
  const DisturbanceSignal d = cosine_disturbance(sys.D, sys.kappa_d);
  const Vec x0{0.1, -0.2};
  const Vec u{0.3};
  for (auto _ : state) {
    Vec x = integrate(sys, fl, x0, u, d);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(bm_integrate)->Arg(16)->Arg(64)->Arg(256);

void bm_successors(benchmark::State& state) {
  const SystemDef sys = pendulum_preset();
  ParameterVector p;
  p.tau = 1.0;
  p.mu_x = 0.023;
  p.mu_u = 0.0789;
  p.mu_d = 0.0009;
  p.theta_d = 0.1;
  p.N = 0;
  FlowConfig fl;
  fl.tau = p.tau;
  const Lattice states(sys.X, p.mu_x);
  const Lattice controls(sys.U, p.mu_u);
  const ApproxParams ap =
      rho_theta(p.N, p.mu_d, sys.kappa_d, p.tau, sys.dist_bound());
  const std::vector<SplineSeq> symbols = enumerate_approx(sys.D, ap);
  uint32_t q = 0;
  for (auto _ : state) {
    SuccessorSet s = successors(sys, fl, states, controls, symbols, q, 9, 24);
    benchmark::DoNotOptimize(s);
    q = (q + 1) % static_cast<uint32_t>(states.size());
  }
}
BENCHMARK(bm_successors);

void bm_enumerate_approx(benchmark::State& state) {
  const SystemDef sys = pendulum_preset();
  const ParameterVector p = pendulum_params();
  const ApproxParams ap =
      rho_theta(p.N, p.mu_d, sys.kappa_d, p.tau, sys.dist_bound());
  for (auto _ : state) {
    std::vector<SplineSeq> cls = enumerate_approx(sys.D, ap);
    benchmark::DoNotOptimize(cls);
  }
}
BENCHMARK(bm_enumerate_approx);

SymbolicModel synthetic_game(uint32_t nq) {
  SystemDef sys = parse_system(R"({
    "name": "synthetic",
    "n": 1, "m": 1, "l": 1,
    "X": [[0.0, )" + std::to_string(nq - 1) + R"(.0]],
    "U": [[0.0, 3.0]],
    "D": [[-0.001, 0.021]],
    "kappa_d": 0.001,
    "f": ["0"]
  })");
  ParameterVector p;
  p.tau = 1.0;
  p.mu_x = 0.5;
  p.mu_u = 0.5;
  p.mu_d = 0.01;
  p.theta_d = 1.0;
  p.N = 0;
  std::mt19937_64 rng(7);
  std::vector<uint64_t> offsets{0};
  std::vector<uint32_t> succ;
  std::vector<uint8_t> oob;
  for (uint32_t q = 0; q < nq; ++q)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 2; ++b) {
        oob.push_back(0);
        const int len = 1 + static_cast<int>(rng() % 3);
        uint32_t v = rng() % nq;
        for (int i = 0; i < len; ++i) {
          succ.push_back(v);
          if (v + 1 >= nq) break;  /* keep the run strictly ascending */
          v += 1 + static_cast<uint32_t>(rng() % 5);
          v = std::min(nq - 1, v);
        }
        offsets.push_back(succ.size());
      }
  return SymbolicModel::from_tables(sys, FlowConfig{}, p, std::move(offsets),
                                    std::move(succ), std::move(oob));
}

void bm_cpre(benchmark::State& state) {
  const uint32_t nq = static_cast<uint32_t>(state.range(0));
  const SymbolicModel m = synthetic_game(nq);
  StateSet target(nq, 0);
  for (uint32_t q = 0; q < nq; q += 2) target[q] = 1;
  for (auto _ : state) {
    StateSet c = cpre(m, target);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * int64_t(nq) * 4 * 2);
}
BENCHMARK(bm_cpre)->Arg(10000)->Arg(50000);

}  /* namespace */

BENCHMARK_MAIN();
