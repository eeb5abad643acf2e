/*
 * symcon command line tool.
 *
 * Subcommands: count, check, abstract, synthesize, simulate, bisim-check.
 * Configuration comes from --config (JSON) and/or --preset pendulum; the
 * preset fills any section the config leaves out.  Reports go to stdout as
 * JSON, timing goes to stderr, artifacts go to --out.
 *
 * Exit codes: 0 ok / verdict pass, 2 usage, 3 bad configuration,
 * 4 infeasible or verdict fail, 5 runtime failure, 6 file I/O.
 */

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symcon/errors.hh"
#include "symcon/io.hh"

namespace sc = symcon;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config;
  std::string preset;
  int threads = 0;        /* 0: keep config value */
  long long seed = -1;    /* <0: keep config value */
  std::string out;
  std::string mode;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "run configuration JSON file");
  cmd->add_option("--preset", o.preset, "built-in system preset (pendulum)")
      ->check(CLI::IsMember({"pendulum"}));
  cmd->add_option("--threads", o.threads, "worker thread count");
  cmd->add_option("--seed", o.seed, "random seed for sampling runs");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--mode", o.mode, "transition storage strategy")
      ->check(CLI::IsMember({"materialized", "onthefly"}));
}

/* config first, preset fills the gaps, explicit flags override */
sc::RunConfig resolve(const CommonOpts& o) {
  sc::RunConfig c;
  bool have_sys = false;
  if (!o.config.empty()) {
    c = sc::load_run_config(o.config);
    have_sys = true;
  }
  if (o.preset == "pendulum") {
    if (!have_sys) {
      c.sys = sc::pendulum_preset();
      have_sys = true;
    }
    if (c.sys.name == "pendulum") {
      if (!c.has_cert) {
        c.cert = sc::pendulum_cert();
        c.has_cert = true;
      }
      if (!c.has_params) {
        c.params = sc::pendulum_params();
        c.has_params = true;
      }
      if (!c.has_eps) {
        c.eps = 0.125;
        c.has_eps = true;
      }
      if (!c.has_spec) {
        c.spec = sc::pendulum_spec();
        c.has_spec = true;
      }
      if (!c.has_x0) {
        c.x0 = {0.0, 0.0};
        c.has_x0 = true;
      }
    }
  }
  if (!have_sys)
    throw sc::config_error("no system given: use --config and/or --preset");
  if (o.threads > 0) c.threads = o.threads;
  if (o.seed >= 0) c.seed = static_cast<uint64_t>(o.seed);
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.mode == "materialized") c.mode = sc::BuildMode::materialized;
  if (o.mode == "onthefly") c.mode = sc::BuildMode::onthefly;
  return c;
}

void need(bool have, const char* what) {
  if (!have)
    throw sc::config_error(std::string("missing configuration section: ") +
                           what);
}

std::string out_path(const sc::RunConfig& c, const std::string& file) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / file).string();
}

class Timer {
public:
  explicit Timer(std::string label)
      : m_label(std::move(label)),
        m_start(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const auto dt = std::chrono::steady_clock::now() - m_start;
    std::fprintf(
        stderr, "timing: %s %.3fs\n", m_label.c_str(),
        std::chrono::duration_cast<std::chrono::duration<double>>(dt).count());
  }

private:
  std::string m_label;
  std::chrono::steady_clock::time_point m_start;
};

int cmd_count(const CommonOpts& o) {
  Timer t("count");
  const sc::RunConfig c = resolve(o);
  need(c.has_params, "params");
  std::cout << sc::count_report_json(c.sys, c.params) << "\n";
  return 0;
}

int cmd_check(const CommonOpts& o) {
  Timer t("check");
  const sc::RunConfig c = resolve(o);
  need(c.has_params, "params");
  need(c.has_cert, "cert");
  need(c.has_eps, "eps");
  const sc::BisimCheckReport r =
      sc::check_params(c.sys, c.cert, c.params, c.eps);
  std::cout << sc::check_report_json(r, c.params) << "\n";
  return r.pass ? 0 : static_cast<int>(sc::errc::infeasible);
}

int cmd_abstract(const CommonOpts& o, bool with_csv) {
  Timer t("abstract");
  const sc::RunConfig c = resolve(o);
  need(c.has_params, "params");
  sc::FlowConfig flow;
  flow.tau = c.params.tau;
  flow.substeps = c.substeps;
  const sc::SymbolicModel model =
      sc::build_model(c.sys, flow, c.params, c.mode, c.threads);
  const std::string path = out_path(c, "model.bin");
  sc::save_model(model, path);
  if (with_csv) {
    std::ofstream cs(out_path(c, "model.csv"));
    sc::write_model_csv(cs, model);
  }
  json j;
  j["file"] = path;
  j["states"] = model.num_states();
  j["controls"] = model.num_controls();
  j["disturbances"] = model.num_symbols();
  j["bytes"] = std::filesystem::file_size(path);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_synthesize(const CommonOpts& o, const std::string& model_path) {
  Timer t("synthesize");
  const sc::RunConfig c = resolve(o);
  need(c.has_params, "params");
  need(c.has_spec, "spec");
  need(c.has_x0, "x0");

  std::unique_ptr<sc::SymbolicModel> model;
  if (!model_path.empty()) {
    model = std::make_unique<sc::SymbolicModel>(sc::load_model(model_path));
  } else {
    sc::FlowConfig flow;
    flow.tau = c.params.tau;
    flow.substeps = c.substeps;
    model = std::make_unique<sc::SymbolicModel>(
        sc::build_model(c.sys, flow, c.params, c.mode, c.threads));
  }
  const sc::Controller ctrl =
      sc::synthesize(*model, c.spec, c.x0, c.threads);
  const std::string path = out_path(c, "controller.bin");
  sc::save_controller(ctrl, path);
  json j = json::parse(sc::synth_report_json(ctrl, *model));
  j["file"] = path;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& ctrl_path,
                 int steps_flag) {
  Timer t("simulate");
  const sc::RunConfig c = resolve(o);
  need(c.has_x0, "x0");
  const std::string path =
      ctrl_path.empty() ? out_path(c, "controller.bin") : ctrl_path;
  const sc::Controller ctrl = sc::load_controller(path);
  sc::FlowConfig flow;
  flow.tau = ctrl.params.tau;
  flow.substeps = c.substeps;
  const int steps = steps_flag > 0 ? steps_flag : c.steps;
  const sc::SimResult res = sc::simulate_closed_loop(
      c.sys, flow, ctrl, c.make_disturbance(), c.x0, steps);

  const std::string trace_path = out_path(c, "trace.csv");
  std::ofstream ts(trace_path);
  sc::write_trace_csv(ts, res, c.sys.n, c.sys.m, c.sys.l);
  if (!ts) throw sc::io_error("write failure on trace file: " + trace_path);

  double dmax = 0.0;
  for (const auto& r : res.rows) dmax = std::max(dmax, r.distance);
  json j;
  j["trace"] = trace_path;
  j["steps"] = steps;
  j["rows"] = res.rows.size();
  j["verdict"] = res.verdict;
  j["final_mode"] = ctrl.layout.name(res.final_slot);
  j["max_quantization_distance"] = dmax;
  std::cout << j.dump(2) << "\n";
  return res.violated ? static_cast<int>(sc::errc::infeasible) : 0;
}

int cmd_bisim_check(const std::string& t1_path, const std::string& t2_path,
                    double eps) {
  Timer t("bisim-check");
  const sc::FiniteTS t1 = sc::load_finite_ts(t1_path);
  const sc::FiniteTS t2 = sc::load_finite_ts(t2_path);
  const sc::LargestResult r = sc::largest_aea_bisim(t1, t2, eps);
  json j;
  j["eps"] = eps;
  j["bisimilar"] = r.bisimilar;
  j["relation_pairs"] = r.rel.count();
  if (t1.nb == 1 && t2.nb == 1) {
    const sc::LargestResult s = sc::reduce_to_approx_bisim(t1, t2, eps);
    j["singleton_crosscheck_agrees"] =
        (s.bisimilar == r.bisimilar && s.rel.count() == r.rel.count());
  }
  std::cout << j.dump(2) << "\n";
  return r.bisimilar ? 0 : static_cast<int>(sc::errc::infeasible);
}

}  /* namespace */

int main(int argc, char** argv) {
  CLI::App app{"finite symbolic abstractions of disturbed control systems: "
               "construction, certification, and controller synthesis"};
  app.require_subcommand(1);

  CommonOpts count_o, check_o, abstract_o, synth_o, sim_o;
  bool abstract_csv = false;
  std::string synth_model, sim_ctrl;
  int sim_steps = 0;
  std::string b_t1, b_t2;
  double b_eps = 0.0;

  CLI::App* count = app.add_subcommand("count", "lattice and signal-class cardinalities");
  add_common(count, count_o);
  CLI::App* check = app.add_subcommand("check", "certified precision inequalities for an accuracy");
  add_common(check, check_o);
  CLI::App* abst = app.add_subcommand("abstract", "build and store the symbolic model");
  add_common(abst, abstract_o);
  abst->add_flag("--csv", abstract_csv, "also write a CSV debug export");
  CLI::App* synth = app.add_subcommand("synthesize", "solve the monitor game and store the controller");
  add_common(synth, synth_o);
  synth->add_option("--model", synth_model, "reuse a stored model file");
  CLI::App* sim = app.add_subcommand("simulate", "closed-loop run of a stored controller");
  add_common(sim, sim_o);
  sim->add_option("--controller", sim_ctrl, "controller file (default: <out>/controller.bin)");
  sim->add_option("--steps", sim_steps, "sampling steps to simulate");
  CLI::App* bis = app.add_subcommand("bisim-check", "alternating bisimulation between two stored systems");
  bis->add_option("--t1", b_t1, "first transition system JSON")->required();
  bis->add_option("--t2", b_t2, "second transition system JSON")->required();
  bis->add_option("--eps", b_eps, "output precision")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(sc::errc::usage);
  }

  try {
    if (count->parsed()) return cmd_count(count_o);
    if (check->parsed()) return cmd_check(check_o);
    if (abst->parsed()) return cmd_abstract(abstract_o, abstract_csv);
    if (synth->parsed()) return cmd_synthesize(synth_o, synth_model);
    if (sim->parsed()) return cmd_simulate(sim_o, sim_ctrl, sim_steps);
    if (bis->parsed()) return cmd_bisim_check(b_t1, b_t2, b_eps);
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(sc::errc::runtime);
  }
  return static_cast<int>(sc::errc::usage);
}
