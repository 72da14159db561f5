#pragma once

#include <sstream>
#include <string>

#include "bregmax/family.hpp"

namespace bregmax {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedInstance {
  Instance instance;
  Tolerances tolerances;  // defaults unless the file overrides them
};

LoadedInstance load_instance(const std::string& path);
LoadedInstance parse_instance(const std::string& json_text);

Pm load_pm(const std::string& path, int expected_size);
Vec load_direction(const std::string& path, int expected_size);

/// Minimal ordered JSON writer producing numbers with 12 significant
/// digits, so identical inputs yield byte-identical reports.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const Vec& v);
  std::string str() const { return out_.str(); }

  static std::string format_double(double v);

 private:
  void pre_value();
  std::ostringstream out_;
  std::vector<bool> need_comma_;
  bool after_key_ = false;
};

}  // namespace bregmax
