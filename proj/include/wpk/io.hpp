#pragma once

// Text persistence: the columnar Field format and flat key = value files.
//
// Field files:
//   # dim 1
//   # points 1024
//   # half_width 20
//   x re im            (1-D rows)     or     x y re im   (2-D rows)
// A Dirac delta is written as `# delta <c1> [<c2>]` with no rows.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wpk/grid_field.hpp"

namespace wpk {

void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);
void save_field(const std::filesystem::path& path, const Field& f);
/// Throws IoError (missing file or malformed content).
Field load_field(const std::filesystem::path& path);

/// Ordered key = value pairs. Section headers `[name]` prefix later keys as
/// `name.key`; `#` and `;` start comments.
class KeyValues {
 public:
  void set(const std::string& key, std::string value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void merge(const KeyValues& other);

  static KeyValues parse(std::istream& is);
  static KeyValues load(const std::filesystem::path& path);
  void write(std::ostream& os) const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// `%.17g` formatting used for every numeric artifact (byte-reproducible).
std::string format_double(double v);

}  // namespace wpk
