#include "bpdg/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bpdg/error.hpp"

namespace bpdg {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool parse_double(const std::string& s, double& v) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size() && std::isfinite(v);
}

template <class I>
bool parse_int(const std::string& s, I& v) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

bool parse_bool(const std::string& s, bool& v) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return v = true, true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return v = false, true;
  return false;
}

struct Field {
  std::string section, key;
  std::function<bool(const std::string&)> set;  // false on a malformed value
  std::function<std::string()> get;
};

std::vector<Field> fields(SimulationConfig& c) {
  std::vector<Field> f;
  const auto dbl = [&](const char* s, const char* k, double& v) {
    f.push_back({s, k, [&v](const std::string& x) { return parse_double(x, v); }, [&v] { return fmt_double(v); }});
  };
  const auto integer = [&](const char* s, const char* k, auto& v) {
    f.push_back({s, k, [&v](const std::string& x) { return parse_int(x, v); }, [&v] { return std::to_string(v); }});
  };
  const auto str = [&](const char* s, const char* k, std::string& v) {
    f.push_back({s, k, [&v](const std::string& x) { return v = x, !x.empty(); }, [&v] { return v; }});
  };
  const auto boolean = [&](const char* s, const char* k, bool& v) {
    f.push_back({s, k, [&v](const std::string& x) { return parse_bool(x, v); }, [&v] { return std::string(v ? "true" : "false"); }});
  };
  integer("mesh", "nx", c.mesh.nx);
  integer("mesh", "np", c.mesh.np);
  integer("mesh", "nmu", c.mesh.nmu);
  dbl("mesh", "L", c.mesh.L);
  dbl("mesh", "p_max", c.mesh.p_max);

  str("band", "kind", c.band.kind);
  dbl("band", "m_star", c.band.m_star);
  dbl("band", "alpha_k", c.band.alpha_k);

  dbl("scattering", "K", c.scattering.K);
  dbl("scattering", "hbar_omega", c.scattering.hbar_omega);
  str("scattering", "n_ph", c.scattering.n_ph);
  dbl("scattering", "c0", c.scattering.c0);

  str("poisson", "bc", c.poisson.bc);
  dbl("poisson", "phi0", c.poisson.phi0);
  dbl("poisson", "q", c.poisson.q);
  dbl("poisson", "epsilon_perm", c.poisson.epsilon_perm);
  str("poisson", "doping", c.poisson.doping);
  dbl("poisson", "doping_level", c.poisson.doping_level);
  dbl("poisson", "n_plus", c.poisson.n_plus);
  dbl("poisson", "n", c.poisson.n);
  {
    auto& v = c.poisson.junctions;
    f.push_back({"poisson", "junctions",
                 [&v](const std::string& x) {
                   v.clear();
                   std::stringstream ss(x);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     boost::algorithm::trim(item);
                     double d;
                     if (!parse_double(item, d)) return false;
                     v.push_back(d);
                   }
                   return true;
                 },
                 [&v] {
                   std::string s;
                   for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_double(v[i]);
                   return s;
                 }});
  }
  boolean("poisson", "frozen", c.poisson.frozen);
  dbl("poisson", "compat_tol", c.poisson.compat_tol);

  integer("numerics", "degree", c.numerics.degree);
  {
    auto& v = c.numerics.rk;
    f.push_back({"numerics", "rk", [&v](const std::string& x) { return x == "auto" ? (v = 0, true) : parse_int(x, v); },
                 [&v] { return v == 0 ? std::string("auto") : std::to_string(v); }});
  }
  dbl("numerics", "cfl_safety", c.numerics.cfl_safety);
  boolean("numerics", "limiter", c.numerics.limiter);
  str("numerics", "alpha", c.numerics.alpha);
  str("numerics", "formulation", c.numerics.formulation);
  str("numerics", "collision_route", c.numerics.collision_route);

  dbl("run", "t_final", c.run.t_final);
  integer("run", "max_steps", c.run.max_steps);
  integer("run", "snapshot_every", c.run.snapshot_every);
  str("run", "output_dir", c.run.output_dir);
  integer("run", "seed", c.run.seed);

  str("initial", "density", c.initial.density);
  dbl("initial", "amplitude", c.initial.amplitude);
  integer("initial", "mode", c.initial.mode);
  dbl("initial", "temperature", c.initial.temperature);
  dbl("initial", "drift", c.initial.drift);
  boolean("initial", "neutralize", c.initial.neutralize);
  return f;
}

}  // namespace

std::vector<std::string> SimulationConfig::validate() const {
  std::vector<std::string> e;
  const auto need = [&](bool ok, const std::string& key, const std::string& what) {
    if (!ok) e.push_back(key + ": " + what);
  };
  need(mesh.nx >= 1, "mesh.nx", "must be >= 1");
  need(mesh.np >= 1, "mesh.np", "must be >= 1");
  need(mesh.nmu >= 1, "mesh.nmu", "must be >= 1");
  need(mesh.L > 0.0, "mesh.L", "must be > 0");
  need(mesh.p_max > 0.0, "mesh.p_max", "must be > 0");
  need(band.kind == "parabolic" || band.kind == "kane", "band.kind", "must be parabolic or kane");
  need(band.m_star > 0.0, "band.m_star", "must be > 0");
  need(band.alpha_k >= 0.0, "band.alpha_k", "must be >= 0");
  need(band.kind != "parabolic" || band.alpha_k == 0.0, "band.alpha_k", "must be 0 for the parabolic band");
  need(scattering.K >= 0.0, "scattering.K", "must be >= 0");
  need(scattering.hbar_omega >= 0.0, "scattering.hbar_omega", "must be >= 0");
  need(scattering.c0 >= 0.0, "scattering.c0", "must be >= 0");
  {
    double v;
    need(scattering.n_ph == "thermal" || (parse_double(scattering.n_ph, v) && v >= 0.0), "scattering.n_ph",
         "must be thermal or a number >= 0");
    need(scattering.n_ph != "thermal" || scattering.hbar_omega > 0.0 || scattering.K == 0.0, "scattering.hbar_omega",
         "thermal occupation needs hbar_omega > 0");
  }
  need(poisson.bc == "periodic" || poisson.bc == "dirichlet", "poisson.bc", "must be periodic or dirichlet");
  need(poisson.q != 0.0, "poisson.q", "must be nonzero");
  need(poisson.epsilon_perm > 0.0, "poisson.epsilon_perm", "must be > 0");
  need(poisson.doping == "uniform" || poisson.doping == "nplus-n-nplus", "poisson.doping",
       "must be uniform or nplus-n-nplus");
  need(poisson.doping_level >= 0.0, "poisson.doping_level", "must be >= 0");
  if (poisson.doping == "nplus-n-nplus") {
    need(poisson.n_plus >= 0.0, "poisson.n_plus", "must be >= 0");
    need(poisson.n >= 0.0, "poisson.n", "must be >= 0");
    need(poisson.junctions.size() == 2 && 0.0 < poisson.junctions[0] && poisson.junctions[0] < poisson.junctions[1] &&
             poisson.junctions[1] < mesh.L,
         "poisson.junctions", "needs two increasing positions inside (0, L)");
  }
  need(poisson.compat_tol > 0.0, "poisson.compat_tol", "must be > 0");
  need(numerics.degree >= 0 && numerics.degree <= 4, "numerics.degree", "must be in 0..4");
  need(numerics.rk >= 0 && numerics.rk <= 3, "numerics.rk", "must be auto, 1, 2 or 3");
  need(numerics.cfl_safety > 0.0 && numerics.cfl_safety <= 1.0, "numerics.cfl_safety", "must be in (0, 1]");
  {
    double a;
    need(numerics.alpha == "auto" || (parse_double(numerics.alpha, a) && a > 0.0 && a < 1.0), "numerics.alpha",
         "must be auto or a number in (0, 1)");
  }
  need(numerics.formulation == "standard" || numerics.formulation == "entropy", "numerics.formulation",
       "must be standard or entropy");
  need(numerics.collision_route == "whole" || numerics.collision_route == "split", "numerics.collision_route",
       "must be whole or split");
  need(run.t_final >= 0.0, "run.t_final", "must be >= 0");
  need(run.max_steps >= 0, "run.max_steps", "must be >= 0");
  need(run.snapshot_every >= 0, "run.snapshot_every", "must be >= 0");
  need(!run.output_dir.empty(), "run.output_dir", "must not be empty");
  {
    double d;
    need(initial.density == "doping" || (parse_double(initial.density, d) && d >= 0.0), "initial.density",
         "must be doping or a number >= 0");
  }
  need(std::abs(initial.amplitude) < 1.0, "initial.amplitude", "must satisfy |amplitude| < 1");
  need(initial.mode >= 0, "initial.mode", "must be >= 0");
  need(initial.temperature > 0.0, "initial.temperature", "must be > 0");
  need(poisson.bc != "periodic" || !initial.neutralize || initial.density == "doping" || poisson.doping_level > 0.0,
       "initial.neutralize", "needs a nonzero doping");
  return e;
}

SimulationConfig parse_config_string(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  SimulationConfig c;
  auto table = fields(c);
  std::map<std::string, Field*> by_name;
  std::map<std::string, bool> sections;
  for (auto& f : table) {
    by_name[f.section + "." + f.key] = &f;
    sections[f.section] = true;
  }
  std::vector<std::string> errors;
  for (const auto& [sec, body] : tree) {
    if (!sections.count(sec)) {
      errors.push_back(sec + ": unknown section");
      continue;
    }
    for (const auto& [key, node] : body) {
      const std::string name = sec + "." + key;
      const auto it = by_name.find(name);
      if (it == by_name.end()) {
        errors.push_back(name + ": unknown key");
        continue;
      }
      std::string v = node.data();
      boost::algorithm::trim(v);
      if (!it->second->set(v)) errors.push_back(name + ": malformed value '" + v + "'");
    }
  }
  // A Kane band without an explicit nonparabolicity takes the documented default.
  if (c.band.kind == "kane" && !tree.get_child_optional("band.alpha_k")) c.band.alpha_k = 0.5;
  for (auto& e : c.validate()) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

SimulationConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

std::string serialize(const SimulationConfig& cfg) {
  SimulationConfig c = cfg;
  const auto table = fields(c);
  std::string out, current;
  for (const auto& f : table) {
    if (f.section != current) {
      out += (current.empty() ? "[" : "\n[") + f.section + "]\n";
      current = f.section;
    }
    out += f.key + " = " + f.get() + "\n";
  }
  return out;
}

std::string config_hash(const SimulationConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bpdg
