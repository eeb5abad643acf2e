#include "symcon/system.hh"

#include <cmath>

#include <json.hpp>

#include "symcon/errors.hh"

namespace symcon {

void eval_field(const SystemDef& sys, const double* x, const double* u,
                const double* d, double* out) {
  for (int i = 0; i < sys.n; ++i) out[i] = sys.f[i].eval(x, u, d);
}

static Box parse_box(const nlohmann::json& j, const std::string& name, int want_dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != want_dim)
    throw config_error("system: '" + name + "' must be an array of " +
                       std::to_string(want_dim) + " [lo,hi] pairs");
  Vec lo, hi;
  for (const auto& side : j) {
    if (!side.is_array() || side.size() != 2 || !side[0].is_number() || !side[1].is_number())
      throw config_error("system: each '" + name + "' entry must be [lo,hi]");
    lo.push_back(side[0].get<double>());
    hi.push_back(side[1].get<double>());
  }
  return Box(std::move(lo), std::move(hi));
}

static SystemDef from_json(const nlohmann::json& j) {
  SystemDef sys;
  for (const char* field : {"n", "m", "l", "X", "U", "D", "kappa_d", "f"})
    if (!j.contains(field))
      throw config_error(std::string("system: missing field '") + field + "'");
  sys.n = j.at("n").get<int>();
  sys.m = j.at("m").get<int>();
  sys.l = j.at("l").get<int>();
  if (sys.n < 1 || sys.m < 1 || sys.l < 1)
    throw config_error("system: n, m, l must all be at least 1");
  sys.X = parse_box(j.at("X"), "X", sys.n);
  sys.U = parse_box(j.at("U"), "U", sys.m);
  sys.D = parse_box(j.at("D"), "D", sys.l);
  sys.kappa_d = j.at("kappa_d").get<double>();
  if (!(sys.kappa_d >= 0.0) || !std::isfinite(sys.kappa_d))
    throw config_error("system: kappa_d must be finite and nonnegative");
  const auto& fs = j.at("f");
  if (!fs.is_array() || static_cast<int>(fs.size()) != sys.n)
    throw config_error("system: 'f' must list exactly n component expressions");
  const ExprDims dims{sys.n, sys.m, sys.l};
  for (const auto& comp : fs)
    sys.f.push_back(Expr::parse(comp.get<std::string>(), dims));
  sys.name = j.value("name", std::string("system"));

  /* origin with zero input and zero disturbance must be an equilibrium */
  Vec x0(sys.n, 0.0), u0(sys.m, 0.0), d0(sys.l, 0.0), f0(sys.n);
  eval_field(sys, x0.data(), u0.data(), d0.data(), f0.data());
  for (int i = 0; i < sys.n; ++i)
    if (!(std::abs(f0[i]) <= 1e-9))
      throw config_error("system: f(0,0,0) component " + std::to_string(i + 1) +
                         " = " + std::to_string(f0[i]) + ", origin is not an equilibrium");
  return sys;
}

SystemDef parse_system(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("system: invalid json: ") + ex.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("system: ") + ex.what());
  }
}

SystemDef pendulum_preset() {
  /* theta'' = -(g/l) sin(theta) - (k/m) theta' + u/(m l^2) + d cos(theta)
   * with g=9.8, l=0.5, m=0.6, k=2 */
  return parse_system(R"json({
    "name": "pendulum",
    "n": 2, "m": 1, "l": 1,
    "X": [[-0.7853981633974483, 0.7853981633974483], [-0.5, 0.5]],
    "U": [[-1.5, 1.5]],
    "D": [[-0.01, 0.02]],
    "kappa_d": 0.002,
    "f": ["x2",
          "-(9.8/0.5)*sin(x1) - (2/0.6)*x2 + u1/(0.6*0.5^2) + d1*cos(x1)"]
  })json");
}

DisturbanceSignal constant_disturbance(const Vec& value) {
  DisturbanceSignal s;
  s.l = static_cast<int>(value.size());
  s.fn = [value](double, double* out) {
    for (size_t i = 0; i < value.size(); ++i) out[i] = value[i];
  };
  return s;
}

DisturbanceSignal cosine_disturbance(const Box& D, double kappa_d) {
  if (!(kappa_d > 0.0))
    throw config_error("cosine disturbance: kappa_d must be positive");
  const int l = D.dim();
  std::vector<double> amp(l), mid(l), omega(l);
  for (int i = 0; i < l; ++i) {
    amp[i] = 0.5 * D.side(i);
    mid[i] = 0.5 * (D.lo[i] + D.hi[i]);
    omega[i] = 2.0 * kappa_d / D.side(i);
  }
  DisturbanceSignal s;
  s.l = l;
  s.fn = [amp, mid, omega, l](double t, double* out) {
    for (int i = 0; i < l; ++i) out[i] = amp[i] * std::cos(omega[i] * t) + mid[i];
  };
  return s;
}

} /* namespace symcon */
