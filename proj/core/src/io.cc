#include "symcon/io.hh"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "symcon/errors.hh"

namespace symcon {

using nlohmann::json;

namespace {

constexpr char kModelMagic[8] = {'S', 'Y', 'M', 'C', 'M', 'D', 'L', '1'};
constexpr char kCtrlMagic[8] = {'S', 'Y', 'M', 'C', 'C', 'T', 'L', '1'};

void put_u8(std::ostream& os, uint8_t v) {
  os.put(static_cast<char>(v));
}

void put_u32(std::ostream& os, uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::ostream& os, uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint8_t get_u8(std::istream& is) {
  const int c = is.get();
  if (c < 0) throw io_error("unexpected end of file");
  return static_cast<uint8_t>(c);
}

uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(get_u8(is)) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& is) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(get_u8(is)) << (8 * i);
  return v;
}

json safe_parse(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw config_error(what + ": malformed JSON");
  return j;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& ctx) {
  if (!j.is_object()) throw config_error(ctx + ": object expected");
  for (const auto& kv : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (kv.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw config_error(ctx + ": unknown key \"" + kv.key() + "\"");
  }
}

double need_number(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error(ctx + ": numeric \"" + std::string(key) + "\" required");
  return j[key].get<double>();
}

Box box_from_json(const json& a, const std::string& ctx) {
  if (!a.is_array() || a.empty())
    throw config_error(ctx + ": array of [lo,hi] pairs expected");
  Vec lo, hi;
  for (const auto& side : a) {
    if (!side.is_array() || side.size() != 2 || !side[0].is_number() ||
        !side[1].is_number())
      throw config_error(ctx + ": each side must be a numeric [lo,hi] pair");
    lo.push_back(side[0].get<double>());
    hi.push_back(side[1].get<double>());
  }
  return Box(lo, hi);
}

json box_to_json(const Box& b) {
  json a = json::array();
  for (int i = 0; i < b.dim(); ++i) a.push_back({b.lo[i], b.hi[i]});
  return a;
}

json params_to_json(const ParameterVector& p) {
  json j;
  j["tau"] = p.tau;
  j["mu_x"] = p.mu_x;
  j["mu_u"] = p.mu_u;
  j["mu_d"] = p.mu_d;
  j["theta_d"] = p.theta_d;
  j["N"] = p.N;
  return j;
}

ParameterVector params_from_json(const json& j, const std::string& ctx) {
  require_keys(j, {"tau", "mu_x", "mu_u", "mu_d", "theta_d", "N"}, ctx);
  ParameterVector p;
  p.tau = need_number(j, "tau", ctx);
  p.mu_x = need_number(j, "mu_x", ctx);
  p.mu_u = need_number(j, "mu_u", ctx);
  p.mu_d = need_number(j, "mu_d", ctx);
  p.theta_d = need_number(j, "theta_d", ctx);
  p.N = static_cast<int>(need_number(j, "N", ctx));
  return p;
}

json spec_to_json(const SpecRegions& s) {
  json j;
  j["omega1"] = box_to_json(s.omega1);
  j["omega2"] = box_to_json(s.omega2);
  j["dwell_min"] = s.dwell_min;
  j["dwell_max"] = s.dwell_max;
  j["stay_max"] = s.stay_max;
  return j;
}

SpecRegions spec_from_json(const json& j, const std::string& ctx) {
  require_keys(j, {"omega1", "omega2", "dwell_min", "dwell_max", "stay_max"},
               ctx);
  SpecRegions s;
  if (!j.contains("omega1") || !j.contains("omega2"))
    throw config_error(ctx + ": omega1 and omega2 regions required");
  s.omega1 = box_from_json(j["omega1"], ctx + ".omega1");
  s.omega2 = box_from_json(j["omega2"], ctx + ".omega2");
  s.dwell_min = need_number(j, "dwell_min", ctx);
  s.dwell_max = need_number(j, "dwell_max", ctx);
  s.stay_max = need_number(j, "stay_max", ctx);
  return s;
}

json system_to_json(const SystemDef& sys) {
  json j;
  j["n"] = sys.n;
  j["m"] = sys.m;
  j["l"] = sys.l;
  j["X"] = box_to_json(sys.X);
  j["U"] = box_to_json(sys.U);
  j["D"] = box_to_json(sys.D);
  j["kappa_d"] = sys.kappa_d;
  json f = json::array();
  for (const Expr& e : sys.f) f.push_back(e.text());
  j["f"] = f;
  j["name"] = sys.name;
  return j;
}

KinfFn kinf_from_json(const json& j, const std::string& ctx) {
  require_keys(j, {"c", "p"}, ctx);
  KinfFn k;
  k.c = need_number(j, "c", ctx);
  k.p = static_cast<int>(need_number(j, "p", ctx));
  return k;
}

void write_vec_csv(std::ostream& os, const Vec& v, int dim, char* buf,
                   size_t buflen) {
  for (int i = 0; i < dim; ++i) {
    os << ',';
    if (i < static_cast<int>(v.size())) {
      std::snprintf(buf, buflen, "%.17g", v[i]);
      os << buf;
    }
  }
}

}  /* namespace */

DisturbanceSignal RunConfig::make_disturbance() const {
  if (disturbance == "cosine") return cosine_disturbance(sys.D, sys.kappa_d);
  if (disturbance == "constant") {
    Vec v = disturbance_value.empty() ? sys.D.center() : disturbance_value;
    if (static_cast<int>(v.size()) != sys.l)
      throw config_error("disturbance: constant value dimension mismatch");
    if (!sys.D.contains(v, 1e-12))
      throw config_error("disturbance: constant value outside its range");
    return constant_disturbance(v);
  }
  throw config_error("disturbance: unknown kind \"" + disturbance + "\"");
}

QuadraticCert parse_cert(const std::string& json_text, int n) {
  const json j = safe_parse(json_text, "cert");
  require_keys(j, {"P", "lambda", "alpha_lo", "alpha_hi", "sigma_u", "sigma_d"},
               "cert");
  QuadraticCert c;
  c.n = n;
  if (!j.contains("P") || !j["P"].is_array() ||
      j["P"].size() != static_cast<size_t>(n))
    throw config_error("cert: P must be an n-by-n matrix");
  for (const auto& row : j["P"]) {
    if (!row.is_array() || row.size() != static_cast<size_t>(n))
      throw config_error("cert: P must be an n-by-n matrix");
    for (const auto& v : row) {
      if (!v.is_number()) throw config_error("cert: P entries must be numbers");
      c.P.push_back(v.get<double>());
    }
  }
  c.lambda = need_number(j, "lambda", "cert");
  for (const char* k : {"alpha_lo", "alpha_hi", "sigma_u", "sigma_d"})
    if (!j.contains(k))
      throw config_error(std::string("cert: \"") + k + "\" required");
  c.alpha_lo = kinf_from_json(j["alpha_lo"], "cert.alpha_lo");
  c.alpha_hi = kinf_from_json(j["alpha_hi"], "cert.alpha_hi");
  c.sigma_u = kinf_from_json(j["sigma_u"], "cert.sigma_u");
  c.sigma_d = kinf_from_json(j["sigma_d"], "cert.sigma_d");
  c.validate();
  return c;
}

RunConfig parse_run_config(const std::string& json_text) {
  const json j = safe_parse(json_text, "config");
  require_keys(j,
               {"system", "cert", "params", "eps", "spec", "x0", "substeps",
                "steps", "threads", "seed", "out", "mode", "disturbance"},
               "config");
  RunConfig c;

  if (!j.contains("system"))
    throw config_error("config: \"system\" required (preset name or object)");
  if (j["system"].is_string()) {
    const std::string name = j["system"].get<std::string>();
    if (name != "pendulum")
      throw config_error("config: unknown system preset \"" + name + "\"");
    c.sys = pendulum_preset();
    c.cert = pendulum_cert();
    c.has_cert = true;
  } else {
    c.sys = parse_system(j["system"].dump());
  }

  if (j.contains("cert")) {
    c.cert = parse_cert(j["cert"].dump(), c.sys.n);
    c.has_cert = true;
  }
  if (j.contains("params")) {
    c.params = params_from_json(j["params"], "config.params");
    c.has_params = true;
  }
  if (j.contains("eps")) {
    c.eps = need_number(j, "eps", "config");
    c.has_eps = true;
  }
  if (j.contains("spec")) {
    c.spec = spec_from_json(j["spec"], "config.spec");
    c.has_spec = true;
  }
  if (j.contains("x0")) {
    if (!j["x0"].is_array())
      throw config_error("config: x0 must be an array");
    for (const auto& v : j["x0"]) {
      if (!v.is_number()) throw config_error("config: x0 entries must be numbers");
      c.x0.push_back(v.get<double>());
    }
    if (static_cast<int>(c.x0.size()) != c.sys.n)
      throw config_error("config: x0 dimension mismatch");
    c.has_x0 = true;
  }
  if (j.contains("substeps")) {
    c.substeps = static_cast<int>(need_number(j, "substeps", "config"));
    if (c.substeps < 1) throw config_error("config: substeps must be positive");
  }
  if (j.contains("steps")) {
    c.steps = static_cast<int>(need_number(j, "steps", "config"));
    if (c.steps < 0) throw config_error("config: steps must be nonnegative");
  }
  if (j.contains("threads")) {
    c.threads = static_cast<int>(need_number(j, "threads", "config"));
    if (c.threads < 1) throw config_error("config: threads must be positive");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw config_error("config: seed must be an integer");
    c.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw config_error("config: out must be a string");
    c.out_dir = j["out"].get<std::string>();
  }
  if (j.contains("mode")) {
    const std::string m = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (m == "materialized") c.mode = BuildMode::materialized;
    else if (m == "onthefly") c.mode = BuildMode::onthefly;
    else throw config_error("config: mode must be materialized or onthefly");
  }
  if (j.contains("disturbance")) {
    require_keys(j["disturbance"], {"kind", "value"}, "config.disturbance");
    if (!j["disturbance"].contains("kind") ||
        !j["disturbance"]["kind"].is_string())
      throw config_error("config.disturbance: string \"kind\" required");
    c.disturbance = j["disturbance"]["kind"].get<std::string>();
    if (j["disturbance"].contains("value"))
      for (const auto& v : j["disturbance"]["value"])
        c.disturbance_value.push_back(v.get<double>());
    if (c.disturbance != "cosine" && c.disturbance != "constant")
      throw config_error("config.disturbance: unknown kind");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_run_config(buf.str());
}

void save_model(const SymbolicModel& model, const std::string& path) {
  json h;
  h["version"] = 1;
  h["system"] = system_to_json(model.system());
  h["params"] = params_to_json(model.params());
  h["substeps"] = model.flow().substeps;
  h["nq"] = model.num_states();
  h["na"] = model.num_controls();
  h["nb"] = model.num_symbols();
  const std::string header = h.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open model file for writing: " + path);
  os.write(kModelMagic, 8);
  put_u64(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));

  for (uint32_t q = 0; q < model.num_states(); ++q)
    for (uint32_t a = 0; a < model.num_controls(); ++a)
      for (uint32_t b = 0; b < model.num_symbols(); ++b) {
        const SuccessorSet s = model.successors_of(q, a, b);
        put_u8(os, s.out_of_domain ? 1 : 0);
        /* ascending indices compress into maximal consecutive runs */
        std::vector<std::pair<uint32_t, uint32_t>> runs;
        for (size_t i = 0; i < s.idx.size();) {
          size_t jr = i + 1;
          while (jr < s.idx.size() && s.idx[jr] == s.idx[jr - 1] + 1) ++jr;
          runs.emplace_back(s.idx[i], static_cast<uint32_t>(jr - i));
          i = jr;
        }
        put_u32(os, static_cast<uint32_t>(runs.size()));
        for (const auto& r : runs) {
          put_u32(os, r.first);
          put_u32(os, r.second);
        }
      }
  if (!os) throw io_error("write failure on model file: " + path);
}

SymbolicModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open model file: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kModelMagic, 8) != 0)
    throw io_error("not a model file: " + path);
  const uint64_t hlen = get_u64(is);
  if (hlen > (uint64_t(1) << 24)) throw io_error("model header too large");
  std::string header(hlen, '\0');
  is.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!is) throw io_error("truncated model header");

  const json h = safe_parse(header, "model header");
  if (!h.contains("version") || h["version"].get<int>() != 1)
    throw io_error("unsupported model file version");
  SystemDef sys = parse_system(h["system"].dump());
  ParameterVector p = params_from_json(h["params"], "model header params");
  FlowConfig flow;
  flow.tau = p.tau;
  flow.substeps = static_cast<int>(need_number(h, "substeps", "model header"));
  const uint64_t nq = h["nq"].get<uint64_t>();
  const uint64_t na = h["na"].get<uint64_t>();
  const uint64_t nb = h["nb"].get<uint64_t>();

  const uint64_t total = nq * na * nb;
  std::vector<uint64_t> offsets;
  offsets.reserve(total + 1);
  offsets.push_back(0);
  std::vector<uint32_t> succ;
  std::vector<uint8_t> oob;
  oob.reserve(total);
  for (uint64_t t = 0; t < total; ++t) {
    oob.push_back(get_u8(is));
    const uint32_t runs = get_u32(is);
    for (uint32_t r = 0; r < runs; ++r) {
      const uint32_t start = get_u32(is);
      const uint32_t len = get_u32(is);
      if (len == 0 || start + uint64_t(len) > nq)
        throw io_error("model file: bad successor run");
      for (uint32_t k = 0; k < len; ++k) succ.push_back(start + k);
    }
    offsets.push_back(succ.size());
  }
  return SymbolicModel::from_tables(std::move(sys), flow, p,
                                    std::move(offsets), std::move(succ),
                                    std::move(oob));
}

void write_model_csv(std::ostream& os, const SymbolicModel& model) {
  os << "q,a,b,oob,successors\n";
  for (uint32_t q = 0; q < model.num_states(); ++q)
    for (uint32_t a = 0; a < model.num_controls(); ++a)
      for (uint32_t b = 0; b < model.num_symbols(); ++b) {
        const SuccessorSet s = model.successors_of(q, a, b);
        os << q << ',' << a << ',' << b << ',' << (s.out_of_domain ? 1 : 0)
           << ',';
        for (size_t i = 0; i < s.idx.size(); ++i) {
          if (i) os << '|';
          os << s.idx[i];
        }
        os << '\n';
      }
}

void save_controller(const Controller& ctrl, const std::string& path) {
  json h;
  h["version"] = 1;
  h["nq"] = ctrl.nq;
  h["na"] = ctrl.na;
  h["q0"] = ctrl.q0;
  h["layout"] = {{"kmin1", ctrl.layout.kmin1},
                 {"kmax1", ctrl.layout.kmax1},
                 {"kstay", ctrl.layout.kstay},
                 {"nslots", ctrl.layout.nslots}};
  h["params"] = params_to_json(ctrl.params);
  h["regions"] = spec_to_json(ctrl.regions);
  h["spec_hash"] = ctrl.regions.hash(ctrl.params.tau);
  const std::string header = h.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open controller file for writing: " + path);
  os.write(kCtrlMagic, 8);
  put_u64(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  os.write(reinterpret_cast<const char*>(ctrl.win.data()),
           static_cast<std::streamsize>(ctrl.win.size()));
  for (int32_t v : ctrl.table) put_u32(os, static_cast<uint32_t>(v));
  if (!os) throw io_error("write failure on controller file: " + path);
}

Controller load_controller(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open controller file: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kCtrlMagic, 8) != 0)
    throw io_error("not a controller file: " + path);
  const uint64_t hlen = get_u64(is);
  if (hlen > (uint64_t(1) << 24)) throw io_error("controller header too large");
  std::string header(hlen, '\0');
  is.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!is) throw io_error("truncated controller header");

  const json h = safe_parse(header, "controller header");
  if (!h.contains("version") || h["version"].get<int>() != 1)
    throw io_error("unsupported controller file version");
  Controller c;
  c.nq = h["nq"].get<uint32_t>();
  c.na = h["na"].get<uint32_t>();
  c.q0 = h["q0"].get<uint32_t>();
  c.layout.kmin1 = h["layout"]["kmin1"].get<int>();
  c.layout.kmax1 = h["layout"]["kmax1"].get<int>();
  c.layout.kstay = h["layout"]["kstay"].get<int>();
  c.layout.nslots = h["layout"]["nslots"].get<int>();
  c.params = params_from_json(h["params"], "controller header params");
  c.regions = spec_from_json(h["regions"], "controller header regions");
  if (h["spec_hash"].get<uint64_t>() != c.regions.hash(c.params.tau))
    throw io_error("controller file: specification hash mismatch");
  const ModeLayout check = ModeLayout::from(c.regions, c.params.tau);
  if (check.nslots != c.layout.nslots || check.kmin1 != c.layout.kmin1 ||
      check.kmax1 != c.layout.kmax1 || check.kstay != c.layout.kstay)
    throw io_error("controller file: layout disagrees with the regions");

  const size_t cells = static_cast<size_t>(c.layout.nslots) * c.nq;
  c.win.resize(cells);
  is.read(reinterpret_cast<char*>(c.win.data()),
          static_cast<std::streamsize>(cells));
  if (!is) throw io_error("truncated controller bitmap");
  c.table.resize(cells);
  for (size_t i = 0; i < cells; ++i)
    c.table[i] = static_cast<int32_t>(get_u32(is));
  for (size_t i = 0; i < cells; ++i) {
    if (c.win[i] > 1) throw io_error("controller file: bad winning bitmap");
    if (c.win[i] && (c.table[i] < 0 || c.table[i] >= static_cast<int32_t>(c.na)))
      throw io_error("controller file: control index out of range");
  }
  return c;
}

void write_trace_csv(std::ostream& os, const SimResult& res, int n, int m,
                     int l) {
  os << "step,mode";
  for (int i = 1; i <= n; ++i) os << ",k" << i;
  for (int i = 1; i <= n; ++i) os << ",sym" << i;
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= m; ++i) os << ",u" << i;
  for (int i = 1; i <= l; ++i) os << ",d" << i;
  os << ",distance\n";
  char buf[64];
  for (const TraceRow& r : res.rows) {
    os << r.step << ',' << r.mode;
    for (int i = 0; i < n; ++i) os << ',' << r.sym_key[i];
    write_vec_csv(os, r.sym, n, buf, sizeof(buf));
    write_vec_csv(os, r.conc, n, buf, sizeof(buf));
    write_vec_csv(os, r.u, m, buf, sizeof(buf));
    write_vec_csv(os, r.d_sample, l, buf, sizeof(buf));
    std::snprintf(buf, sizeof(buf), "%.17g", r.distance);
    os << ',' << buf << '\n';
  }
}

FiniteTS parse_finite_ts(const std::string& json_text) {
  const json j = safe_parse(json_text, "transition system");
  require_keys(j, {"na", "nb", "outputs", "edges"}, "transition system");
  FiniteTS t;
  t.na = static_cast<int>(need_number(j, "na", "transition system"));
  t.nb = static_cast<int>(need_number(j, "nb", "transition system"));
  if (!j.contains("outputs") || !j["outputs"].is_array() ||
      j["outputs"].empty())
    throw config_error("transition system: nonempty \"outputs\" array required");
  for (const auto& o : j["outputs"]) {
    Vec v;
    if (o.is_number()) {
      v.push_back(o.get<double>());
    } else if (o.is_array()) {
      for (const auto& x : o) v.push_back(x.get<double>());
    } else {
      throw config_error("transition system: outputs must be numbers or arrays");
    }
    t.output.push_back(std::move(v));
  }
  t.nq = static_cast<int>(t.output.size());
  if (t.na <= 0 || t.nb <= 0)
    throw config_error("transition system: na and nb must be positive");
  t.trans.assign(static_cast<size_t>(t.nq) * t.na * t.nb, {});
  if (j.contains("edges")) {
    if (!j["edges"].is_array())
      throw config_error("transition system: \"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 4 || !e[3].is_array())
        throw config_error(
            "transition system: each edge must be [q, a, b, [successors]]");
      const int q = e[0].get<int>(), a = e[1].get<int>(), b = e[2].get<int>();
      if (q < 0 || q >= t.nq || a < 0 || a >= t.na || b < 0 || b >= t.nb)
        throw config_error("transition system: edge label out of range");
      auto& row = t.trans[(static_cast<size_t>(q) * t.na + a) * t.nb + b];
      for (const auto& s : e[3]) {
        const int v = s.get<int>();
        if (v < 0 || v >= t.nq)
          throw config_error("transition system: successor out of range");
        row.push_back(static_cast<uint32_t>(v));
      }
    }
  }
  t.validate();
  return t;
}

FiniteTS load_finite_ts(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open transition system file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_finite_ts(buf.str());
}

std::string count_report_json(const SystemDef& sys, const ParameterVector& p) {
  Lattice states(sys.X, p.mu_x);
  Lattice controls(sys.U, p.mu_u);
  ApproxParams ap = rho_theta(p.N, p.mu_d, sys.kappa_d, p.tau, sys.dist_bound());
  json j;
  j["states"] = states.size();
  j["controls"] = controls.size();
  j["disturbances"] = count_approx(sys.D, ap);
  j["rho"] = ap.rho;
  j["Theta"] = ap.Theta;
  j["note"] =
      "the disturbance count follows this tool's convention: node sequences "
      "on the value lattice of spacing 2*mu_d with per-step drift at most "
      "kappa_d*tau/(N+1); other conventions give different third counts";
  return j.dump(2);
}

std::string check_report_json(const BisimCheckReport& r,
                              const ParameterVector& p) {
  json j;
  j["eps"] = r.eps;
  j["params"] = params_to_json(p);
  j["gap_lhs"] = r.gap_lhs;
  j["gap_rhs"] = r.gap_rhs;
  j["gap_margin"] = r.gap_rhs - r.gap_lhs;
  j["gamma_slope"] = r.gamma_slope;
  j["mu_hat_X"] = r.mu_hat_X;
  j["mu_hat_U"] = r.mu_hat_U;
  j["mu_hat_D"] = r.mu_hat_D;
  j["rho"] = r.rho;
  j["Theta"] = r.Theta;
  j["ok_gap"] = r.ok_gap;
  j["ok_state"] = r.ok_state;
  j["ok_control"] = r.ok_control;
  j["ok_dist"] = r.ok_dist;
  j["ok_theta"] = r.ok_theta;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2);
}

std::string synth_report_json(const Controller& c, const SymbolicModel& m) {
  json j;
  j["states"] = m.num_states();
  j["controls"] = m.num_controls();
  j["disturbances"] = m.num_symbols();
  j["slots"] = c.layout.nslots;
  j["initial_state"] = c.q0;
  j["winning_product_states"] = c.stats.win_product;
  j["iterations"] = {{"m5", c.stats.iter_m5},
                     {"m4", c.stats.iter_m4},
                     {"m2", c.stats.iter_m2},
                     {"m0", c.stats.iter_m0}};
  j["spec_hash"] = c.regions.hash(c.params.tau);
  return j.dump(2);
}

} /* namespace symcon */
