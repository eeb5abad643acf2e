/*
 * io.hh
 *
 * Run configuration (JSON), binary model and controller files, trace CSV,
 * and the JSON reports printed by the command line tool.  All numeric JSON
 * output round-trips doubles exactly; binary files are little-endian with a
 * JSON header block, so two builds of the same data are byte identical.
 */

#ifndef SYMCON_IO_HH_
#define SYMCON_IO_HH_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "symcon/abstraction.hh"
#include "symcon/altbisim.hh"
#include "symcon/lyapunov.hh"
#include "symcon/synthesis.hh"
#include "symcon/system.hh"

namespace symcon {

struct RunConfig {
  SystemDef sys;
  QuadraticCert cert;
  ParameterVector params;
  SpecRegions spec;
  double eps = 0.0;
  Vec x0;
  int substeps = 64;
  int steps = 20;
  int threads = 1;
  uint64_t seed = 0;
  std::string out_dir = ".";
  BuildMode mode = BuildMode::materialized;
  std::string disturbance = "cosine";  /* cosine | constant */
  Vec disturbance_value;               /* for the constant kind */

  bool has_cert = false, has_params = false, has_spec = false,
       has_eps = false, has_x0 = false;

  DisturbanceSignal make_disturbance() const;
};

/*
 * Parse the run configuration object:
 *   {"system": "pendulum" | {...}, "params": {...}, "cert": {...},
 *    "eps": e, "spec": {...}, "x0": [...], "substeps": k, "steps": s,
 *    "threads": t, "seed": n, "out": dir, "mode": "materialized"|"onthefly",
 *    "disturbance": {"kind": "cosine"} | {"kind": "constant", "value": [..]}}
 * Unknown keys are rejected.  The pendulum preset installs its published
 * certificate unless one is given explicitly.
 */
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

QuadraticCert parse_cert(const std::string& json_text, int n);

/* model file: magic, JSON header (system, parameters, counts), then one
 * record per (state, control, disturbance) triple with the out-of-domain
 * flag and run-length-encoded successor intervals */
void save_model(const SymbolicModel& model, const std::string& path);
SymbolicModel load_model(const std::string& path);

/* one "q,a,b,oob,s0|s1|..." line per triple */
void write_model_csv(std::ostream& os, const SymbolicModel& model);

/* controller file: magic, JSON header (parameters, regions, layout, spec
 * hash), then the winning bitmap and the packed control-index table */
void save_controller(const Controller& ctrl, const std::string& path);
Controller load_controller(const std::string& path);

/* step, mode, symbolic key and point, concrete state, control, disturbance
 * sample, quantization distance */
void write_trace_csv(std::ostream& os, const SimResult& res, int n, int m,
                     int l);

/*
 * Finite transition system for the bisimulation checker:
 *   {"na": 2, "nb": 1, "outputs": [[0.0],[1.0]],
 *    "edges": [[q, a, b, [q', ...]], ...]}
 * States are 0..len(outputs)-1; unlisted (q,a,b) triples have no transition.
 */
FiniteTS parse_finite_ts(const std::string& json_text);
FiniteTS load_finite_ts(const std::string& path);

/* JSON reports for the CLI */
std::string count_report_json(const SystemDef& sys, const ParameterVector& p);
std::string check_report_json(const BisimCheckReport& r,
                              const ParameterVector& p);
std::string synth_report_json(const Controller& c, const SymbolicModel& m);

} /* namespace symcon */

#endif /* SYMCON_IO_HH_ */
