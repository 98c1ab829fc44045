#include "galpha/runner/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "galpha/errors.hpp"

namespace galpha::runner {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KeyValue {
  std::string section, key, value;
  int line;
};

std::vector<KeyValue> parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::vector<KeyValue> out;
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    out.push_back({section, key, value, lineno});
  }
  return out;
}

[[noreturn]] void bad_value(const KeyValue& kv, const std::string& why) {
  throw ConfigError("config key '" + (kv.section.empty() ? kv.key : kv.section + "." + kv.key) +
                    "' (line " + std::to_string(kv.line) + "): " + why);
}

double as_double(const KeyValue& kv) {
  try {
    size_t pos = 0;
    double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) bad_value(kv, "not a number: '" + kv.value + "'");
    return v;
  } catch (const std::logic_error&) {
    bad_value(kv, "not a number: '" + kv.value + "'");
  }
}

int as_int(const KeyValue& kv) {
  double v = as_double(kv);
  if (v != std::floor(v)) bad_value(kv, "not an integer: '" + kv.value + "'");
  return static_cast<int>(v);
}

bool as_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "on" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "off" || kv.value == "0") return false;
  bad_value(kv, "not a boolean (true/false): '" + kv.value + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    std::istringstream ws(item);
    std::string tok;
    while (ws >> tok) out.push_back(tok);
  }
  return out;
}

std::vector<double> as_doubles(const KeyValue& kv) {
  std::vector<double> out;
  for (const auto& tok : split_list(kv.value)) {
    KeyValue item = kv;
    item.value = tok;
    out.push_back(as_double(item));
  }
  if (out.empty()) bad_value(kv, "empty list");
  return out;
}

std::vector<int> as_ints(const KeyValue& kv) {
  std::vector<int> out;
  for (double v : as_doubles(kv))
    if (v != std::floor(v)) bad_value(kv, "not an integer list: '" + kv.value + "'");
  for (const auto& tok : split_list(kv.value)) out.push_back(std::stoi(tok));
  return out;
}

void one_of(const KeyValue& kv, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (kv.value == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  bad_value(kv, "must be one of: " + list);
}

void apply_key(ScenarioConfig& cfg, const KeyValue& kv) {
  const std::string& s = kv.section;
  const std::string& k = kv.key;
  if (s.empty()) {
    if (k == "scenario") cfg.scenario = kv.value;
    else if (k == "load_scale") cfg.load_scale = as_double(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "mesh") {
    if (k == "extents") cfg.extents = as_doubles(kv);
    else if (k == "divisions") cfg.divisions = as_ints(kv);
    else if (k == "order") cfg.order = as_int(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "material") {
    if (k == "E") cfg.E = as_double(kv);
    else if (k == "nu") cfg.nu = as_double(kv);
    else if (k == "rho0") cfg.rho0 = as_double(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "integrator") {
    if (k == "family") { one_of(kv, {"n1", "n2", "general"}); cfg.family = kv.value; }
    else if (k == "rho_b") cfg.rho_b = as_double(kv);
    else if (k == "rho_s") cfg.rho_s = as_double(kv);
    else if (k == "alpha_f") cfg.alpha_f = as_double(kv);
    else if (k == "update_form") { one_of(kv, {"displacement", "acceleration"}); cfg.update_form = kv.value; }
    else if (k == "truncation") { one_of(kv, {"fixed_terms", "to_tolerance"}); cfg.truncation = kv.value; }
    else if (k == "terms") cfg.terms = as_int(kv);
    else if (k == "trunc_tol") cfg.trunc_tol = as_double(kv);
    else if (k == "k_max") cfg.k_max = as_int(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "adaptivity") {
    if (k == "enabled") cfg.adaptive = as_bool(kv);
    else if (k == "tol") cfg.tol = as_double(kv);
    else if (k == "tol_min") cfg.tol_min = as_double(kv);
    else if (k == "rho_tol") cfg.rho_tol = as_double(kv);
    else if (k == "dt0") cfg.dt0 = as_double(kv);
    else if (k == "dt_min") cfg.dt_min = as_double(kv);
    else if (k == "max_rejections") cfg.max_rejections = as_int(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "time") {
    if (k == "t_f") cfg.t_f = as_double(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "mass") {
    if (k == "kind") { one_of(kv, {"consistent", "lumped"}); cfg.mass = kv.value; }
    else if (k == "lin_tol") cfg.lin_tol = as_double(kv);
    else bad_value(kv, "unknown key");
  } else if (s == "output") {
    if (k == "csv") cfg.csv = kv.value;
    else if (k == "vtk_dir") cfg.vtk_dir = kv.value;
    else if (k == "stride") cfg.stride = as_int(kv);
    else bad_value(kv, "unknown key");
  } else {
    bad_value(kv, "unknown section '" + s + "'");
  }
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError("config key '" + key + "': " + why);
}

void validate(const ScenarioConfig& cfg) {
  require(static_cast<int>(cfg.extents.size()) == cfg.dim, "mesh.extents",
          "needs one entry per spatial dimension");
  require(static_cast<int>(cfg.divisions.size()) == cfg.dim, "mesh.divisions",
          "needs one entry per spatial dimension");
  for (double e : cfg.extents) require(e > 0.0, "mesh.extents", "entries must be positive");
  for (int d : cfg.divisions) require(d > 0, "mesh.divisions", "entries must be positive");
  require(cfg.order >= 1 && cfg.order <= 3, "mesh.order", "must be 1, 2 or 3");
  require(cfg.E > 0.0, "material.E", "must be positive");
  require(cfg.nu > -1.0 && cfg.nu < 0.5, "material.nu", "must lie in (-1, 0.5)");
  require(cfg.rho0 > 0.0, "material.rho0", "must be positive");
  require(cfg.rho_b >= 0.0 && cfg.rho_b <= 1.0, "integrator.rho_b", "must lie in [0, 1]");
  require(cfg.rho_s >= 0.0 && cfg.rho_s <= 1.0, "integrator.rho_s", "must lie in [0, 1]");
  require(cfg.terms >= 1, "integrator.terms", "must be at least 1");
  require(cfg.trunc_tol > 0.0, "integrator.trunc_tol", "must be positive");
  require(cfg.k_max >= 1, "integrator.k_max", "must be at least 1");
  require(cfg.tol > 0.0, "adaptivity.tol", "must be positive");
  require(cfg.tol_min > 0.0, "adaptivity.tol_min", "must be positive");
  require(cfg.tol_min < cfg.tol, "adaptivity.tol_min", "must be smaller than tol");
  require(cfg.rho_tol > 0.0 && cfg.rho_tol <= 1.0, "adaptivity.rho_tol", "must lie in (0, 1]");
  require(cfg.dt0 > 0.0, "adaptivity.dt0", "must be positive");
  require(cfg.dt_min > 0.0, "adaptivity.dt_min", "must be positive");
  require(cfg.max_rejections >= 1, "adaptivity.max_rejections", "must be at least 1");
  require(cfg.t_f > 0.0, "time.t_f", "must be positive");
  require(cfg.lin_tol > 0.0, "mass.lin_tol", "must be positive");
  require(cfg.stride >= 0, "output.stride", "must be non-negative");
  require(cfg.load_scale >= 0.0, "load_scale", "must be non-negative");
  require(!cfg.csv.empty(), "output.csv", "must not be empty");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"wave2d_mms", "hyper3d_mms", "twisted_bar", "tube_impact", "tossed_ruler"};
}

ScenarioConfig scenario_defaults(const std::string& name) {
  ScenarioConfig c;
  c.scenario = name;
  // The n1 family has alpha_f = 0, which collapses the corrector series to a
  // single term (e = 0 every step); adaptive scenarios default to n2.
  c.family = "n2";
  if (name == "wave2d_mms") {
    c.dim = 2;
    c.extents = {1.0, 1.0};
    c.divisions = {32, 32};
    c.E = 1.0;
    c.nu = 0.2;
    c.rho0 = 1.0;
    c.t_f = 0.1;
    c.dt0 = 2e-3;
    c.csv = "out/wave2d_mms.csv";
  } else if (name == "hyper3d_mms") {
    c.extents = {1.0, 1.0, 1.0};
    c.divisions = {6, 6, 6};
    c.E = 1.0;
    c.nu = 0.2;
    c.rho0 = 1.0;
    c.t_f = 0.1;
    c.dt0 = 1e-3;
    c.csv = "out/hyper3d_mms.csv";
  } else if (name == "twisted_bar") {
    c.extents = {1.0, 1.0, 5.0};
    c.divisions = {2, 2, 8};
    c.E = 17e6;
    c.nu = 0.3;
    c.rho0 = 1100.0;
    c.t_f = 1.5;
    c.dt0 = 2e-4;
    c.csv = "out/twisted_bar.csv";
  } else if (name == "tube_impact") {
    // extents/divisions are (circumference parameter, thickness, length)
    c.extents = {1.0, 0.0025, 0.5};
    c.divisions = {16, 1, 8};
    c.E = 68e6;
    c.nu = 0.3;
    c.rho0 = 1100.0;
    c.t_f = 2e-3;
    c.dt0 = 1e-6;
    c.csv = "out/tube_impact.csv";
  } else if (name == "tossed_ruler") {
    c.extents = {0.3, 0.06, 0.002};
    c.divisions = {10, 2, 1};
    c.E = 206e6;
    c.nu = 0.3;
    c.rho0 = 7800.0;
    c.t_f = 0.25;
    c.dt0 = 1e-6;
    c.csv = "out/tossed_ruler.csv";
  } else {
    std::string list;
    for (const auto& n : scenario_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + name + "'; available: " + list);
  }
  return c;
}

std::string render_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "scenario = " << c.scenario << "\n";
  o << "load_scale = " << fmt(c.load_scale) << "\n";
  o << "\n[mesh]\n";
  o << "extents = ";
  for (size_t i = 0; i < c.extents.size(); ++i) o << (i ? ", " : "") << fmt(c.extents[i]);
  o << "\ndivisions = ";
  for (size_t i = 0; i < c.divisions.size(); ++i) o << (i ? ", " : "") << c.divisions[i];
  o << "\norder = " << c.order << "\n";
  o << "\n[material]\n";
  o << "E = " << fmt(c.E) << "\nnu = " << fmt(c.nu) << "\nrho0 = " << fmt(c.rho0) << "\n";
  o << "\n[integrator]\n";
  o << "family = " << c.family << "\nrho_b = " << fmt(c.rho_b) << "\nrho_s = " << fmt(c.rho_s)
    << "\nalpha_f = " << fmt(c.alpha_f) << "\nupdate_form = " << c.update_form
    << "\ntruncation = " << c.truncation << "\nterms = " << c.terms
    << "\ntrunc_tol = " << fmt(c.trunc_tol) << "\nk_max = " << c.k_max << "\n";
  o << "\n[adaptivity]\n";
  o << "enabled = " << (c.adaptive ? "true" : "false") << "\ntol = " << fmt(c.tol)
    << "\ntol_min = " << fmt(c.tol_min) << "\nrho_tol = " << fmt(c.rho_tol)
    << "\ndt0 = " << fmt(c.dt0) << "\ndt_min = " << fmt(c.dt_min)
    << "\nmax_rejections = " << c.max_rejections << "\n";
  o << "\n[time]\nt_f = " << fmt(c.t_f) << "\n";
  o << "\n[mass]\nkind = " << c.mass << "\nlin_tol = " << fmt(c.lin_tol) << "\n";
  o << "\n[output]\ncsv = " << c.csv << "\nvtk_dir = " << c.vtk_dir
    << "\nstride = " << c.stride << "\n";
  return o.str();
}

ScenarioConfig load_config(const std::string& path) {
  auto entries = parse_file(path);
  std::string scenario;
  for (const auto& kv : entries)
    if (kv.section.empty() && kv.key == "scenario") scenario = kv.value;
  if (scenario.empty())
    throw ConfigError(path + ": missing required top-level key 'scenario'");
  ScenarioConfig cfg = scenario_defaults(scenario);
  for (const auto& kv : entries) apply_key(cfg, kv);
  validate(cfg);

  namespace fs = std::filesystem;
  fs::path out_dir = fs::path(cfg.csv).parent_path();
  if (out_dir.empty()) out_dir = ".";
  fs::create_directories(out_dir);
  std::ofstream echo(out_dir / (cfg.scenario + ".resolved.cfg"));
  echo << render_config(cfg);
  return cfg;
}

}  // namespace galpha::runner
