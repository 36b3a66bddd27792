#include "wpk/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wpk/error.hpp"

namespace wpk {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw IoError("cannot parse " + what + " from '" + text + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  os << "# dim " << g.dim() << "\n# points " << g.points_per_axis() << "\n# half_width "
     << format_double(g.half_width()) << "\n";
  if (f.is_delta()) {
    os << "# delta";
    for (double c : f.delta_center()) os << ' ' << format_double(c);
    os << "\n";
    return;
  }
  if (f.domain() == Domain::Frequency) os << "# domain frequency\n";
  const std::size_t n = g.points_per_axis();
  const auto s = f.samples();
  char buf[128];
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool freq = f.domain() == Domain::Frequency;
    auto axis = [&](std::size_t k) { return freq ? g.freq(k) : g.coord(k); };
    if (g.dim() == 1) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", axis(i), s[i].real(), s[i].imag());
    } else {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", axis(i / n), axis(i % n),
                    s[i].real(), s[i].imag());
    }
    os << buf;
  }
}

Field read_field(std::istream& is) {
  int dim = 0;
  std::size_t points = 0;
  double half_width = 0.0;
  bool delta = false;
  std::vector<double> centre;
  Domain domain = Domain::Position;
  std::vector<cplx> samples;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "dim") ss >> dim;
      else if (key == "points") ss >> points;
      else if (key == "half_width") ss >> half_width;
      else if (key == "domain") {
        std::string d;
        ss >> d;
        domain = d == "frequency" ? Domain::Frequency : Domain::Position;
      } else if (key == "delta") {
        delta = true;
        double c;
        while (ss >> c) centre.push_back(c);
      }
      continue;
    }
    std::istringstream ss(line);
    double cols[4];
    int got = 0;
    while (got < 4 && ss >> cols[got]) ++got;
    if (got != dim + 2) throw IoError("field row has " + std::to_string(got) + " columns: " + line);
    samples.emplace_back(cols[dim], cols[dim + 1]);
  }
  if (dim == 0 || points == 0 || !(half_width > 0)) {
    throw IoError("field file lacks # dim / # points / # half_width header");
  }
  const Grid g = Grid::make(dim, points, half_width);
  if (delta) return Field::dirac(g, centre);
  if (samples.size() != g.total_points()) {
    throw IoError("field file has " + std::to_string(samples.size()) + " rows, header implies " +
                  std::to_string(g.total_points()));
  }
  return Field::sampled(g, std::move(samples), domain);
}

void save_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_field(os, f);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_field(is);
}

void KeyValues::set(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = std::move(value);
      return;
    }
  entries_.emplace_back(key, std::move(value));
}

void KeyValues::set(const std::string& key, double value) { set(key, format_double(value)); }

void KeyValues::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

bool KeyValues::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& KeyValues::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw ParameterError("missing key '" + key + "'");
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValues::get_double(const std::string& key) const {
  try {
    return parse_double(get(key), key);
  } catch (const IoError& e) {
    throw ParameterError(e.what());
  }
}

double KeyValues::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValues::get_int_or(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = get(key);
  try {
    std::size_t used = 0;
    const long long r = std::stoll(v, &used);
    if (used == v.size()) return r;
  } catch (const std::exception&) {
  }
  throw ParameterError("key '" + key + "' is not an integer: '" + v + "'");
}

bool KeyValues::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParameterError("key '" + key + "' is not a boolean: '" + v + "'");
}

void KeyValues::merge(const KeyValues& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

KeyValues KeyValues::parse(std::istream& is) {
  KeyValues kv;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw IoError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw IoError("line " + std::to_string(lineno) + ": empty key");
    kv.set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return parse(is);
}

void KeyValues::write(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << " = " << v << "\n";
}

void KeyValues::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write(os);
}

}  // namespace wpk
