#include "lemp/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lemp/errors.hpp"

namespace lemp::harness {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(label() + ": expected an object");
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    used_.emplace_back(key);
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  double number(std::string_view key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(key_path(key) + ": expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(key_path(key) + ": must be finite");
    return x;
  }

  double positive(std::string_view key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(key_path(key) + ": must be > 0");
    return x;
  }

  double required(std::string_view key) {
    if (!has(key)) throw ConfigError(key_path(key) + ": missing required field");
    return number(key, 0.0);
  }

  std::size_t count(std::string_view key, std::size_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      throw ConfigError(key_path(key) + ": expected a non-negative integer");
    }
    return v->get<std::size_t>();
  }

  int integer(std::string_view key, int fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
    return v->get<int>();
  }

  bool boolean(std::string_view key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string text(std::string_view key, std::string fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v->get<std::string>();
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(used_.begin(), used_.end(), it.key()) == used_.end()) {
        throw ConfigError(key_path(it.key()) + ": unknown key");
      }
    }
  }

  const std::string& path() const { return path_; }

 private:
  std::string label() const { return path_.empty() ? "scenario" : path_; }

  const json& j_;
  std::string path_;
  std::vector<std::string> used_;
};

// Library validators report without the key path; prefix the section.
template <class F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

HeidlerParams read_heidler(Section& s) {
  const HeidlerParams d = HeidlerParams::typical_subsequent();
  const double i1 = s.number("i1_a", d.i1);
  const double t11 = s.positive("tau11_s", d.tau11);
  const double t12 = s.positive("tau12_s", d.tau12);
  const double n1 = s.number("n1", d.n1);
  const double i2 = s.number("i2_a", d.i2);
  const double t21 = s.positive("tau21_s", d.tau21);
  const double t22 = s.positive("tau22_s", d.tau22);
  const double n2 = s.number("n2", d.n2);
  s.reject_unknown();
  HeidlerParams h;
  checked(s.path(), [&] { h = HeidlerParams::make(i1, t11, t12, n1, i2, t21, t22, n2); });
  return h;
}

MtleModel read_mtle(Section& s) {
  MtleModel m;
  m.lambda_decay = s.positive("lambda_m", m.lambda_decay);
  m.v_front = s.positive("v_mps", m.v_front);
  m.channel_height = s.positive("height_m", m.channel_height);
  if (const json* h = s.find("heidler")) {
    Section hs(*h, s.key_path("heidler"));
    m.base = read_heidler(hs);
  }
  s.reject_unknown();
  checked(s.path(), [&] { m.validate(); });
  return m;
}

GroundModel read_ground(Section& s) {
  const std::string kind = s.text("kind", "lossy");
  GroundModel g;
  if (kind == "pec") {
    for (const char* k : {"sigma_spm", "eps_r"}) {
      if (s.has(k)) throw ConfigError(s.key_path(k) + ": contradicts kind \"pec\"");
    }
    g = GroundModel::pec();
  } else if (kind == "lossy") {
    g.sigma = s.number("sigma_spm", g.sigma);
    g.eps_r = s.number("eps_r", g.eps_r);
    if (!(g.sigma >= 0.0)) throw ConfigError(s.key_path("sigma_spm") + ": must be >= 0");
    if (!(g.eps_r >= 1.0)) throw ConfigError(s.key_path("eps_r") + ": must be >= 1");
  } else {
    throw ConfigError(s.key_path("kind") + ": expected \"lossy\" or \"pec\"");
  }
  s.reject_unknown();
  return g;
}

std::vector<ObservationPoint> read_observers(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty list");
  std::vector<ObservationPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Section s(j[i], path + "[" + std::to_string(i) + "]");
    ObservationPoint p;
    p.r = s.required("r_m");
    p.z = s.required("z_m");
    if (!(p.r > 0.0)) throw ConfigError(s.key_path("r_m") + ": must be > 0");
    s.reject_unknown();
    out.push_back(p);
  }
  return out;
}

Timebase read_timebase(Section& s) {
  Timebase tb;
  tb.dt = s.positive("dt_s", tb.dt);
  tb.n_samples = s.count("n", tb.n_samples);
  s.reject_unknown();
  checked(s.path(), [&] { tb.validate(); });
  return tb;
}

fdtd::GridSpec read_grid(Section& s) {
  fdtd::GridSpec g;
  const std::string dim = s.text("dimensionality", "axi2d");
  if (dim == "axi2d") {
    g.dimensionality = fdtd::Dimensionality::Axi2D;
  } else if (dim == "cart3d") {
    g.dimensionality = fdtd::Dimensionality::Cart3D;
  } else {
    throw ConfigError(s.key_path("dimensionality") + ": expected \"axi2d\" or \"cart3d\"");
  }
  g.dx = s.positive("dx_m", g.dx);
  if (const json* e = s.find("extents_m")) {
    const std::size_t want = g.dimensionality == fdtd::Dimensionality::Axi2D ? 2 : 3;
    if (!e->is_array() || e->size() != want) {
      throw ConfigError(s.key_path("extents_m") + ": expected " + std::to_string(want) +
                        " numbers");
    }
    g.extents.clear();
    for (const auto& v : *e) {
      if (!v.is_number()) throw ConfigError(s.key_path("extents_m") + ": expected numbers");
      g.extents.push_back(v.get<double>());
    }
  } else if (g.dimensionality == fdtd::Dimensionality::Cart3D) {
    throw ConfigError(s.key_path("extents_m") + ": missing required field");
  }
  g.ground_depth = s.number("ground_depth_m", g.ground_depth);
  g.cfl_factor = s.positive("cfl_factor", g.cfl_factor);
  g.cfl_dims = s.integer("cfl_dims", g.cfl_dims);
  g.allow_unsafe_cfl = s.boolean("allow_unsafe_cfl", g.allow_unsafe_cfl);
  g.n_steps = s.count("n_steps", g.n_steps);
  const std::string prec = s.text("precision", "single");
  if (prec == "single") {
    g.precision = fdtd::Precision::Single;
  } else if (prec == "double") {
    g.precision = fdtd::Precision::Double;
  } else {
    throw ConfigError(s.key_path("precision") + ": expected \"single\" or \"double\"");
  }
  if (s.has("source_x_m")) g.source_x = s.number("source_x_m", 0.0);
  if (s.has("source_y_m")) g.source_y = s.number("source_y_m", 0.0);
  s.reject_unknown();
  checked(s.path(), [&] { g.validate(); });
  return g;
}

fdtd::CpmlProfile read_pml(Section& s) {
  fdtd::CpmlProfile p;
  if (const json* t = s.find("thickness_cells")) {
    if (t->is_number_integer()) {
      p.set_all(t->get<int>());
    } else if (t->is_array() && t->size() == 6) {
      for (std::size_t i = 0; i < 6; ++i) {
        if (!(*t)[i].is_number_integer()) {
          throw ConfigError(s.key_path("thickness_cells") + ": expected integers");
        }
        p.thickness[i] = (*t)[i].get<int>();
      }
    } else {
      throw ConfigError(s.key_path("thickness_cells") +
                        ": expected an integer or 6 integers (xlo xhi ylo yhi zlo zhi)");
    }
  }
  p.m_order = s.integer("m_order", p.m_order);
  p.kappa_max = s.number("kappa_max", p.kappa_max);
  p.alpha_max = s.number("alpha_max_spm", p.alpha_max);
  p.sigma_ratio = s.number("sigma_ratio", p.sigma_ratio);
  s.reject_unknown();
  checked(s.path(), [&] { p.validate(); });
  return p;
}

json to_json(const Scenario& sc) {
  const HeidlerParams& h = sc.mtle.base;
  json j;
  j["id"] = sc.id;
  j["mtle"] = {{"lambda_m", sc.mtle.lambda_decay},
               {"v_mps", sc.mtle.v_front},
               {"height_m", sc.mtle.channel_height},
               {"heidler",
                {{"i1_a", h.i1},
                 {"tau11_s", h.tau11},
                 {"tau12_s", h.tau12},
                 {"n1", h.n1},
                 {"i2_a", h.i2},
                 {"tau21_s", h.tau21},
                 {"tau22_s", h.tau22},
                 {"n2", h.n2}}}};
  if (sc.ground.is_pec()) {
    j["ground"] = {{"kind", "pec"}};
  } else {
    j["ground"] = {{"kind", "lossy"}, {"sigma_spm", sc.ground.sigma}, {"eps_r", sc.ground.eps_r}};
  }
  j["observers"] = json::array();
  for (const auto& p : sc.observers) j["observers"].push_back({{"r_m", p.r}, {"z_m", p.z}});
  j["timebase"] = {{"dt_s", sc.timebase.dt}, {"n", sc.timebase.n_samples}};
  if (sc.grid) {
    const fdtd::GridSpec& g = *sc.grid;
    json gj = {{"dimensionality",
                g.dimensionality == fdtd::Dimensionality::Axi2D ? "axi2d" : "cart3d"},
               {"dx_m", g.dx},
               {"extents_m", g.extents},
               {"ground_depth_m", g.ground_depth},
               {"cfl_factor", g.cfl_factor},
               {"cfl_dims", g.cfl_dims},
               {"allow_unsafe_cfl", g.allow_unsafe_cfl},
               {"n_steps", g.n_steps},
               {"precision", g.precision == fdtd::Precision::Single ? "single" : "double"}};
    if (g.source_x) gj["source_x_m"] = *g.source_x;
    if (g.source_y) gj["source_y_m"] = *g.source_y;
    j["grid"] = gj;
  }
  if (sc.pml) {
    const fdtd::CpmlProfile& p = *sc.pml;
    j["pml"] = {{"thickness_cells", p.thickness},
                {"m_order", p.m_order},
                {"kappa_max", p.kappa_max},
                {"alpha_max_spm", p.alpha_max},
                {"sigma_ratio", p.sigma_ratio}};
  }
  return j;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario: malformed JSON: ") + e.what());
  }
  Section s(root, "");
  Scenario sc;
  sc.id = s.text("id", sc.id);
  if (sc.id.empty()) throw ConfigError("id: must not be empty");
  if (const json* v = s.find("mtle")) {
    Section ms(*v, "mtle");
    sc.mtle = read_mtle(ms);
  }
  if (const json* v = s.find("ground")) {
    Section gs(*v, "ground");
    sc.ground = read_ground(gs);
  }
  const json* obs = s.find("observers");
  if (!obs) throw ConfigError("observers: missing required field");
  sc.observers = read_observers(*obs, "observers");
  if (const json* v = s.find("timebase")) {
    Section ts(*v, "timebase");
    sc.timebase = read_timebase(ts);
  }
  if (const json* v = s.find("grid")) {
    Section gs(*v, "grid");
    sc.grid = read_grid(gs);
  }
  if (const json* v = s.find("pml")) {
    Section ps(*v, "pml");
    sc.pml = read_pml(ps);
  }
  s.reject_unknown();
  return sc;
}

std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("scenario: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("scenario: cannot write " + path.string());
  out << dump_scenario(s);
}

}  // namespace lemp::harness
