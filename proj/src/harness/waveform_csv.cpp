#include "lemp/harness/waveform_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lemp/errors.hpp"

namespace lemp::harness {

namespace {

std::string shortest(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void append_sci(std::string& out, double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.8e", x);
  out.append(buf, static_cast<std::size_t>(n));
}

double parse_number(std::string_view s, std::size_t line) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double x = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("csv line " + std::to_string(line) + ": malformed number '" +
                      std::string(s) + "'");
  }
  return x;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace

std::string format_waveform_csv(const FieldWaveform& w) {
  w.validate();
  std::string out;
  out.reserve(32 * w.values.size() + 256);
  out += "# scenario_id=" + w.scenario_id + "\n";
  out += "# component=" + std::string(to_string(w.component)) + "\n";
  out += "# unit=" + std::string(unit_of(w.component)) + "\n";
  out += "# dt_s=" + shortest(w.timebase.dt) + "\n";
  out += "# r_m=" + shortest(w.point.r) + "\n";
  out += "# z_m=" + shortest(w.point.z) + "\n";
  out += "t_s,value\n";
  for (std::size_t k = 0; k < w.values.size(); ++k) {
    append_sci(out, w.timebase.time(k));
    out += ',';
    append_sci(out, w.values[k]);
    out += '\n';
  }
  return out;
}

FieldWaveform parse_waveform_csv(std::string_view text) {
  std::map<std::string, std::string, std::less<>> meta;
  std::vector<double> t, v;
  bool header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header) throw ConfigError("csv line " + std::to_string(line_no) + ": metadata after header");
      line.remove_prefix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("csv line " + std::to_string(line_no) + ": expected '# key=value'");
      }
      meta.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
      continue;
    }
    if (!header) {
      if (line != "t_s,value") {
        throw ConfigError("csv line " + std::to_string(line_no) + ": expected header 't_s,value'");
      }
      header = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected two columns");
    }
    t.push_back(parse_number(line.substr(0, comma), line_no));
    v.push_back(parse_number(line.substr(comma + 1), line_no));
  }
  if (!header) throw ConfigError("csv: missing header 't_s,value'");
  if (t.size() < 2) throw ConfigError("csv: need at least two samples");

  FieldWaveform w;
  const auto comp = meta.find("component");
  if (comp == meta.end()) throw ConfigError("csv: missing '# component=' metadata");
  w.component = component_from_string(comp->second);
  if (auto u = meta.find("unit"); u != meta.end() && u->second != unit_of(w.component)) {
    throw ConfigError("csv: unit '" + u->second + "' does not match component " +
                      std::string(to_string(w.component)));
  }
  if (auto s = meta.find("scenario_id"); s != meta.end()) w.scenario_id = s->second;
  if (auto r = meta.find("r_m"); r != meta.end()) w.point.r = parse_number(r->second, 0);
  if (auto z = meta.find("z_m"); z != meta.end()) w.point.z = parse_number(z->second, 0);

  double dt = t[1] - t[0];
  if (auto d = meta.find("dt_s"); d != meta.end()) dt = parse_number(d->second, 0);
  if (!(dt > 0.0)) throw ConfigError("csv: time step must be > 0");
  // Nine printed digits leave a relative error of 5e-9 on each stamp.
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double expect = static_cast<double>(k) * dt;
    if (std::abs(t[k] - expect) > 1e-8 * std::abs(expect) + 1e-3 * dt) {
      throw ConfigError("csv: non-uniform time axis at sample " + std::to_string(k) +
                        " (t = " + shortest(t[k]) + " s, expected " + shortest(expect) + " s)");
    }
  }
  w.timebase = Timebase{dt, t.size()};
  w.values = std::move(v);
  w.validate();
  return w;
}

void write_waveform_csv(const FieldWaveform& w, const std::filesystem::path& path) {
  write_text(format_waveform_csv(w), path);
}

FieldWaveform read_waveform_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_waveform_csv(buf.str());
}

void write_bundle_csv(const Timebase& time, const std::vector<CsvColumn>& cols,
                      const std::filesystem::path& path) {
  time.validate();
  std::string out = "t_s";
  for (const auto& c : cols) out += "," + c.name;
  out += '\n';
  for (std::size_t k = 0; k < time.n_samples; ++k) {
    const double tk = time.time(k);
    append_sci(out, tk);
    for (const auto& c : cols) {
      out += ',';
      append_sci(out, c.wave->at(tk));
    }
    out += '\n';
  }
  write_text(out, path);
}

}  // namespace lemp::harness
