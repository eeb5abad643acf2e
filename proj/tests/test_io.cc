#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "symcon/errors.hh"
#include "symcon/io.hh"
#include "symcon/synthesis.hh"

using namespace symcon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("symcon_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

/* small game model with hand-picked tables, including runs and gaps in the
 * successor sets and an out-of-domain triple */
SymbolicModel fixture_model() {
  SystemDef sys = parse_system(R"({
    "name": "chain",
    "n": 1, "m": 1, "l": 1,
    "X": [[0.0, 9.0]],
    "U": [[0.0, 1.0]],
    "D": [[-0.001, 0.001]],
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
  std::vector<uint64_t> offsets{0};
  std::vector<uint32_t> succ;
  std::vector<uint8_t> oob;
  for (int q = 0; q < 10; ++q)
    for (int a = 0; a < 2; ++a) {
      if (q == 3 && a == 1) {
        oob.push_back(1);                      /* out of domain, no entries */
      } else if (q == 5 && a == 0) {
        oob.push_back(0);
        for (uint32_t v : {0u, 1u, 2u, 5u, 7u, 8u}) succ.push_back(v);
      } else {
        oob.push_back(0);
        if (q == 2 && a == 1)
          succ.push_back(4);  /* skip the trap state behind the oob triple */
        else
          succ.push_back(static_cast<uint32_t>((q + a) % 10));
      }
      offsets.push_back(succ.size());
    }
  return SymbolicModel::from_tables(sys, FlowConfig{}, p, std::move(offsets),
                                    std::move(succ), std::move(oob));
}

SymbolicModel tiny_pendulum() {
  ParameterVector p;
  p.tau = 1.0;
  p.mu_x = 0.2;
  p.mu_u = 0.4;
  p.mu_d = 0.005;
  p.theta_d = 0.1;
  p.N = 0;
  return build_model(pendulum_preset(), FlowConfig{}, p,
                     BuildMode::materialized, 1);
}

bool same_tables(const SymbolicModel& a, const SymbolicModel& b) {
  if (a.num_states() != b.num_states() || a.num_controls() != b.num_controls() ||
      a.num_symbols() != b.num_symbols())
    return false;
  for (uint32_t q = 0; q < a.num_states(); ++q)
    for (uint32_t u = 0; u < a.num_controls(); ++u)
      for (uint32_t d = 0; d < a.num_symbols(); ++d) {
        SuccessorSet s1 = a.successors_of(q, u, d);
        SuccessorSet s2 = b.successors_of(q, u, d);
        if (s1.out_of_domain != s2.out_of_domain || s1.idx != s2.idx)
          return false;
      }
  return true;
}

std::string read_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  /* namespace */

TEST_CASE("model files round-trip the transition tables") {
  TempDir tmp;
  SymbolicModel m = fixture_model();
  const std::string path = tmp.file("model.bin");
  save_model(m, path);
  SymbolicModel m2 = load_model(path);
  CHECK(same_tables(m, m2));
  CHECK(m2.system().name == "chain");
  CHECK(m2.params().mu_x == m.params().mu_x);
  CHECK(m2.params().tau == m.params().tau);
  CHECK(m2.params().N == m.params().N);
  CHECK(m2.successors_of(3, 1, 0).out_of_domain);
  CHECK(m2.successors_of(5, 0, 0).idx ==
        std::vector<uint32_t>{0, 1, 2, 5, 7, 8});
}

TEST_CASE("model files round-trip a computed abstraction") {
  TempDir tmp;
  SymbolicModel m = tiny_pendulum();
  REQUIRE(m.num_states() > 0);
  const std::string path = tmp.file("pend.bin");
  save_model(m, path);
  SymbolicModel m2 = load_model(path);
  CHECK(same_tables(m, m2));
  CHECK(m2.system().name == "pendulum");
  CHECK(m2.system().f[0].text() == m.system().f[0].text());
  CHECK(m2.flow().substeps == m.flow().substeps);
  /* saving the loaded model reproduces the bytes */
  const std::string path2 = tmp.file("pend2.bin");
  save_model(m2, path2);
  CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("model files reject foreign and truncated input") {
  TempDir tmp;
  const std::string bogus = tmp.file("bogus.bin");
  write_bytes(bogus, "NOTAMODELFILE AT ALL");
  CHECK_THROWS_AS(load_model(bogus), Error);
  CHECK_THROWS_AS(load_model(tmp.file("missing.bin")), Error);

  SymbolicModel m = fixture_model();
  const std::string path = tmp.file("model.bin");
  save_model(m, path);
  const std::string bytes = read_bytes(path);
  const std::string cut = tmp.file("cut.bin");
  write_bytes(cut, bytes.substr(0, bytes.size() - 7));
  try {
    load_model(cut);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::io);
  }
}

TEST_CASE("model csv lists one triple per line") {
  SymbolicModel m = fixture_model();
  std::ostringstream os;
  write_model_csv(os, m);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "q,a,b,oob,successors");
  size_t rows = 0;
  std::string row_oob, row_runs, row_single;
  while (std::getline(is, line)) {
    ++rows;
    if (line.rfind("3,1,0,", 0) == 0) row_oob = line;
    if (line.rfind("5,0,0,", 0) == 0) row_runs = line;
    if (line.rfind("0,1,0,", 0) == 0) row_single = line;
  }
  CHECK(rows == 20);  /* 10 states x 2 controls x 1 label */
  CHECK(row_oob == "3,1,0,1,");
  CHECK(row_runs == "5,0,0,0,0|1|2|5|7|8");
  CHECK(row_single == "0,1,0,0,1");
}

TEST_CASE("controller files round-trip every field") {
  TempDir tmp;
  SymbolicModel m = fixture_model();
  SpecRegions spec;
  spec.omega1 = Box({7.5}, {9.5});
  spec.omega2 = Box({-0.5}, {0.5});
  spec.dwell_min = 2.0;
  spec.dwell_max = 3.0;
  spec.stay_max = 2.0;
  Controller c = synthesize(m, spec, {4.0});
  const std::string path = tmp.file("ctrl.bin");
  save_controller(c, path);
  Controller c2 = load_controller(path);
  CHECK(c2.nq == c.nq);
  CHECK(c2.na == c.na);
  CHECK(c2.q0 == c.q0);
  CHECK(c2.layout.kmin1 == c.layout.kmin1);
  CHECK(c2.layout.kmax1 == c.layout.kmax1);
  CHECK(c2.layout.kstay == c.layout.kstay);
  CHECK(c2.layout.nslots == c.layout.nslots);
  CHECK(c2.win == c.win);
  CHECK(c2.table == c.table);
  CHECK(c2.params.mu_x == c.params.mu_x);
  CHECK(c2.params.tau == c.params.tau);
  CHECK(c2.regions.omega1.lo == c.regions.omega1.lo);
  CHECK(c2.regions.omega2.hi == c.regions.omega2.hi);
  CHECK(c2.regions.dwell_min == c.regions.dwell_min);
  CHECK(c2.regions.stay_max == c.regions.stay_max);
  /* saving again is byte identical */
  const std::string path2 = tmp.file("ctrl2.bin");
  save_controller(c2, path2);
  CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("controller files validate header and payload") {
  TempDir tmp;
  SymbolicModel m = fixture_model();
  SpecRegions spec;
  spec.omega1 = Box({7.5}, {9.5});
  spec.omega2 = Box({-0.5}, {0.5});
  spec.dwell_min = 2.0;
  spec.dwell_max = 3.0;
  spec.stay_max = 2.0;
  Controller c = synthesize(m, spec, {4.0});
  const std::string path = tmp.file("ctrl.bin");
  save_controller(c, path);
  const std::string bytes = read_bytes(path);

  /* wrong magic */
  const std::string wrong = tmp.file("wrong.bin");
  write_bytes(wrong, "XXXXXXXX" + bytes.substr(8));
  try {
    load_controller(wrong);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::io);
  }

  /* truncated payload */
  const std::string cut = tmp.file("cut.bin");
  write_bytes(cut, bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_controller(cut), Error);

  /* a tampered region no longer matches the stored specification hash */
  std::string tampered = bytes;
  const std::string needle = "\"dwell_min\":2.0";
  const size_t at = tampered.find(needle);
  REQUIRE(at != std::string::npos);
  tampered.replace(at, needle.size(), "\"dwell_min\":3.0");
  const std::string bad = tmp.file("bad.bin");
  write_bytes(bad, tampered);
  try {
    load_controller(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::io);
    CHECK(std::string(e.what()).find("hash") != std::string::npos);
  }
}

TEST_CASE("trace csv format") {
  SimResult res;
  TraceRow r0;
  r0.step = 0;
  r0.mode = "M0";
  r0.sym_key = {0};
  r0.sym = {0.0};
  r0.conc = {0.25};
  r0.u = {1.0};
  r0.d_sample = {0.5};
  r0.distance = 0.25;
  TraceRow r1;
  r1.step = 1;
  r1.mode = "M5";
  r1.sym_key = {-2};
  r1.sym = {-1.0};
  r1.conc = {-1.0};
  r1.d_sample = {0.0};
  r1.distance = 0.0;
  res.rows = {r0, r1};
  std::ostringstream os;
  write_trace_csv(os, res, 1, 1, 1);
  CHECK(os.str() ==
        "step,mode,k1,sym1,x1,u1,d1,distance\n"
        "0,M0,0,0,0.25,1,0.5,0.25\n"
        "1,M5,-2,-1,-1,,0,0\n");
}

TEST_CASE("finite transition system parsing") {
  FiniteTS t = parse_finite_ts(R"({
    "na": 2, "nb": 1,
    "outputs": [[0.0], [1.0], [2.5]],
    "edges": [[0, 0, 0, [0]], [0, 1, 0, [1, 2]], [1, 0, 0, [2]]]
  })");
  CHECK(t.nq == 3);
  CHECK(t.na == 2);
  CHECK(t.nb == 1);
  CHECK(t.output[2] == Vec{2.5});
  CHECK(t.succ(0, 1, 0) == std::vector<uint32_t>{1, 2});
  CHECK(t.succ(1, 0, 0) == std::vector<uint32_t>{2});
  CHECK(t.succ(2, 1, 0).empty());  /* unlisted triple is blocked */

  /* scalar outputs are accepted as one-dimensional */
  FiniteTS s = parse_finite_ts(
      R"({"na": 1, "nb": 1, "outputs": [0.0, 1.0], "edges": []})");
  CHECK(s.nq == 2);
  CHECK(s.output[1] == Vec{1.0});

  const char* bad[] = {
      "not json",
      R"({"na": 1, "nb": 1})",
      R"({"na": 0, "nb": 1, "outputs": [0], "edges": []})",
      R"({"na": 1, "nb": 1, "outputs": [0], "edges": [[0, 0, 0, [5]]]})",
      R"({"na": 1, "nb": 1, "outputs": [0], "edges": [[4, 0, 0, [0]]]})",
      R"({"na": 1, "nb": 1, "outputs": [0], "edges": [[0, 0]]})",
      R"({"na": 1, "nb": 1, "outputs": [0], "edges": [], "extra": 1})",
      R"({"na": 1, "nb": 1, "outputs": [[0], [0, 1]], "edges": []})",
  };
  for (const char* text : bad) {
    try {
      parse_finite_ts(text);
      CHECK_MESSAGE(false, text);
    } catch (const Error& e) {
      CHECK(e.code() == errc::config);
    }
  }
  CHECK_THROWS_AS(load_finite_ts("/nonexistent/ts.json"), Error);
}

TEST_CASE("run configuration with every key") {
  RunConfig c = parse_run_config(R"({
    "system": {
      "name": "line",
      "n": 1, "m": 1, "l": 1,
      "X": [[-1.0, 1.0]],
      "U": [[-1.0, 1.0]],
      "D": [[-0.01, 0.01]],
      "kappa_d": 0.001,
      "f": ["-x1 + u1 + d1"]
    },
    "cert": {
      "P": [[1.0]], "lambda": 0.5,
      "alpha_lo": {"c": 1.0, "p": 2}, "alpha_hi": {"c": 1.1, "p": 2},
      "sigma_u": {"c": 1.0, "p": 1}, "sigma_d": {"c": 1.0, "p": 1}
    },
    "params": {"tau": 0.5, "mu_x": 0.1, "mu_u": 0.2,
               "mu_d": 0.002, "theta_d": 0.05, "N": 1},
    "eps": 0.5,
    "spec": {"omega1": [[0.4, 0.9]], "omega2": [[-0.9, -0.4]],
             "dwell_min": 1.0, "dwell_max": 2.0, "stay_max": 1.0},
    "x0": [0.1],
    "substeps": 32,
    "steps": 7,
    "threads": 2,
    "seed": 99,
    "out": "/tmp/somewhere",
    "mode": "onthefly",
    "disturbance": {"kind": "constant", "value": [0.0]}
  })");
  CHECK(c.sys.name == "line");
  CHECK(c.sys.n == 1);
  CHECK(c.has_cert);
  CHECK(c.cert.lambda == 0.5);
  CHECK(c.has_params);
  CHECK(c.params.tau == 0.5);
  CHECK(c.params.N == 1);
  CHECK(c.has_eps);
  CHECK(c.eps == 0.5);
  CHECK(c.has_spec);
  CHECK(c.spec.omega1.lo == Vec{0.4});
  CHECK(c.spec.stay_max == 1.0);
  CHECK(c.has_x0);
  CHECK(c.x0 == Vec{0.1});
  CHECK(c.substeps == 32);
  CHECK(c.steps == 7);
  CHECK(c.threads == 2);
  CHECK(c.seed == 99);
  CHECK(c.out_dir == "/tmp/somewhere");
  CHECK(c.mode == BuildMode::onthefly);
  CHECK(c.disturbance == "constant");
  DisturbanceSignal d = c.make_disturbance();
  CHECK(d.at(0.3) == Vec{0.0});
}

TEST_CASE("run configuration pendulum preset") {
  RunConfig c = parse_run_config(R"({"system": "pendulum"})");
  CHECK(c.sys.name == "pendulum");
  CHECK(c.sys.n == 2);
  CHECK(c.has_cert);  /* the preset installs its published certificate */
  CHECK(c.cert.lambda == 0.77);
  CHECK(c.cert.P == std::vector<double>{1.5, 0.3, 0.3, 1.5});
  CHECK(!c.has_params);
  CHECK(!c.has_spec);
  CHECK(!c.has_eps);
  CHECK(!c.has_x0);
  CHECK(c.mode == BuildMode::materialized);
  CHECK(c.disturbance == "cosine");
  DisturbanceSignal d = c.make_disturbance();
  CHECK(d.at(0.0)[0] == doctest::Approx(0.02).epsilon(1e-12));

  /* an explicit certificate overrides the preset one */
  RunConfig o = parse_run_config(R"({
    "system": "pendulum",
    "cert": {
      "P": [[2.0, 0.0], [0.0, 2.0]], "lambda": 0.4,
      "alpha_lo": {"c": 1.0, "p": 2}, "alpha_hi": {"c": 2.5, "p": 2},
      "sigma_u": {"c": 1.0, "p": 1}, "sigma_d": {"c": 1.0, "p": 1}
    }
  })");
  CHECK(o.cert.lambda == 0.4);
  CHECK(o.cert.P == std::vector<double>{2.0, 0.0, 0.0, 2.0});
}

TEST_CASE("run configuration rejections") {
  const char* bad[] = {
      "nope",
      R"({})",
      R"({"system": "rocket"})",
      R"({"system": "pendulum", "bogus": 1})",
      R"({"system": "pendulum", "x0": [0.0]})",
      R"({"system": "pendulum", "x0": [0.0, 0.0, 0.0]})",
      R"({"system": "pendulum", "steps": -1})",
      R"({"system": "pendulum", "threads": 0})",
      R"({"system": "pendulum", "substeps": 0})",
      R"({"system": "pendulum", "mode": "magic"})",
      R"({"system": "pendulum", "disturbance": {"kind": "noise"}})",
      R"({"system": "pendulum", "params": {"tau": 1.0}})",
      R"({"system": "pendulum", "spec": {"omega1": [[0, 1]]}})",
      R"({"system": "pendulum", "cert": {"P": [[1.0]], "lambda": 1.0}})",
  };
  for (const char* text : bad) {
    try {
      parse_run_config(text);
      CHECK_MESSAGE(false, text);
    } catch (const Error& e) {
      CHECK(e.code() == errc::config);
    }
  }
  /* x0 with two entries is fine for the two-dimensional preset */
  CHECK(parse_run_config(R"({"system": "pendulum", "x0": [0.0, 0.0]})").has_x0);
  /* constant disturbance outside the range fails at construction */
  RunConfig far = parse_run_config(
      R"({"system": "pendulum",
          "disturbance": {"kind": "constant", "value": [5.0]}})");
  CHECK_THROWS_AS(far.make_disturbance(), Error);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), Error);
}

TEST_CASE("count report lists the published model sizes") {
  const SystemDef sys = pendulum_preset();
  const ParameterVector p = pendulum_params();
  const std::string text = count_report_json(sys, p);
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["states"].get<uint64_t>() == 159819);
  CHECK(j["controls"].get<uint64_t>() == 1501);
  CHECK(j["disturbances"].get<uint64_t>() == 1310);
  CHECK(j["rho"].get<double>() == 0.857);
  CHECK(j["Theta"].get<double>() == 0.006717);
  CHECK(j["note"].get<std::string>().find("convention") != std::string::npos);
}

TEST_CASE("check report serializes the gap inequality") {
  const SystemDef sys = pendulum_preset();
  const ParameterVector p = pendulum_params();
  BisimCheckReport r = check_params(sys, pendulum_cert(), p, 0.125);
  const nlohmann::json j = nlohmann::json::parse(check_report_json(r, p));
  CHECK(j["eps"].get<double>() == 0.125);
  CHECK(j["gap_lhs"].get<double>() == r.gap_lhs);
  CHECK(j["gap_rhs"].get<double>() == 0.01875);
  CHECK(j["gap_margin"].get<double>() == r.gap_rhs - r.gap_lhs);
  CHECK(j["pass"].get<bool>() == false);
  CHECK(j["ok_gap"].get<bool>() == false);
  CHECK(j["ok_state"].get<bool>() == true);
  CHECK(j["params"]["mu_x"].get<double>() == p.mu_x);
  CHECK(j.contains("note"));
}

TEST_CASE("synthesis report") {
  SymbolicModel m = fixture_model();
  SpecRegions spec;
  spec.omega1 = Box({7.5}, {9.5});
  spec.omega2 = Box({-0.5}, {0.5});
  spec.dwell_min = 2.0;
  spec.dwell_max = 3.0;
  spec.stay_max = 2.0;
  Controller c = synthesize(m, spec, {4.0});
  const nlohmann::json j = nlohmann::json::parse(synth_report_json(c, m));
  CHECK(j["states"].get<uint32_t>() == 10);
  CHECK(j["controls"].get<uint32_t>() == 2);
  CHECK(j["disturbances"].get<uint32_t>() == 1);
  CHECK(j["slots"].get<int>() == c.layout.nslots);
  CHECK(j["initial_state"].get<uint32_t>() == c.q0);
  CHECK(j["winning_product_states"].get<size_t>() == c.stats.win_product);
  CHECK(j["iterations"]["m5"].get<int>() == c.stats.iter_m5);
  CHECK(j["spec_hash"].get<uint64_t>() == c.regions.hash(c.params.tau));
}
