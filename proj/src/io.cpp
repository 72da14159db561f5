#include "bregmax/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

namespace bregmax {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ParseError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

Vec to_vec(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  Vec v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ParseError(where + "[" + std::to_string(i) + "]: expected number");
    }
    v(static_cast<int>(i)) = arr[i].get<double>();
  }
  return v;
}

}  // namespace

LoadedInstance parse_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance: expected an object");
  reject_unknown_keys(doc, {"z", "f", "beta", "tolerances"}, "instance");
  if (!doc.contains("z") || !doc.contains("f") || !doc.contains("beta")) {
    throw ParseError("instance: keys 'z', 'f', 'beta' are required");
  }

  std::vector<std::string> labels;
  for (const auto& lbl : doc.at("z")) {
    if (!lbl.is_string()) throw ParseError("instance.z: expected strings");
    labels.push_back(lbl.get<std::string>());
  }
  const int n = static_cast<int>(labels.size());
  if (n < 1) throw ValidationError("instance: |Z| must be >= 1");

  const json& frows = doc.at("f");
  if (!frows.is_array()) throw ParseError("instance.f: expected array of rows");
  Mat f(frows.size(), n);
  for (size_t i = 0; i < frows.size(); ++i) {
    const Vec row = to_vec(frows[i], "instance.f[" + std::to_string(i) + "]");
    if (row.size() != n) {
      throw ParseError("instance.f[" + std::to_string(i) +
                       "]: row length != |z|");
    }
    f.row(static_cast<int>(i)) = row.transpose();
  }

  const json& beta = doc.at("beta");
  if (!beta.is_object() || !beta.contains("kind")) {
    throw ParseError("instance.beta: expected object with 'kind'");
  }
  const std::string kind = beta.at("kind").get<std::string>();
  BetaSystem sys;
  if (kind == "classical") {
    reject_unknown_keys(beta, {"kind", "nu"}, "instance.beta");
    const Vec nu = to_vec(beta.at("nu"), "instance.beta.nu");
    if (nu.size() != n) throw ValidationError("beta.nu: length != |z|");
    for (int z = 0; z < n; ++z) {
      if (!(nu(z) > 0)) throw ValidationError("beta.nu: must be positive");
    }
    sys = make_classical(nu);
  } else if (kind == "entropy_quadratic") {
    reject_unknown_keys(beta, {"kind", "alpha"}, "instance.beta");
    const Vec alpha = to_vec(beta.at("alpha"), "instance.beta.alpha");
    if (alpha.size() != n) throw ValidationError("beta.alpha: length != |z|");
    for (int z = 0; z < n; ++z) {
      if (alpha(z) < 0) throw ValidationError("beta.alpha: must be >= 0");
    }
    sys = make_entropy_quadratic(alpha);
  } else {
    throw ParseError("instance.beta.kind: unknown kind '" + kind + "'");
  }

  LoadedInstance out{Instance(labels, f, sys), Tolerances{}};
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    reject_unknown_keys(
        t, {"root_abs", "grad_norm", "lp_feas", "fd_step", "cluster_tv"},
        "instance.tolerances");
    if (t.contains("root_abs")) out.tolerances.root_abs = t["root_abs"];
    if (t.contains("grad_norm")) out.tolerances.grad_norm = t["grad_norm"];
    if (t.contains("lp_feas")) out.tolerances.lp_feas = t["lp_feas"];
    if (t.contains("fd_step")) out.tolerances.fd_step = t["fd_step"];
    if (t.contains("cluster_tv")) out.tolerances.cluster_tv = t["cluster_tv"];
    out.tolerances.validate();
  }
  return out;
}

LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

Pm load_pm(const std::string& path, int expected_size) {
  const json doc = read_json_file(path);
  if (!doc.is_object()) throw ParseError(path + ": expected an object");
  reject_unknown_keys(doc, {"p"}, path);
  if (!doc.contains("p")) throw ParseError(path + ": key 'p' required");
  Vec w = to_vec(doc.at("p"), path + ".p");
  if (expected_size >= 0 && w.size() != expected_size) {
    throw ValidationError(path + ": pm length != |z|");
  }
  Pm p(std::move(w));
  try {
    p.validate(1e-9);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return p;
}

Vec load_direction(const std::string& path, int expected_size) {
  const json doc = read_json_file(path);
  if (!doc.is_object()) throw ParseError(path + ": expected an object");
  reject_unknown_keys(doc, {"u"}, path);
  if (!doc.contains("u")) throw ParseError(path + ": key 'u' required");
  Vec u = to_vec(doc.at("u"), path + ".u");
  if (expected_size >= 0 && u.size() != expected_size) {
    throw ValidationError(path + ": direction length != |z|");
  }
  return u;
}

// ---- JsonWriter ----------------------------------------------------------

std::string JsonWriter::format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void JsonWriter::pre_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!need_comma_.empty()) {
    if (need_comma_.back()) out_ << ",";
    need_comma_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  pre_value();
  out_ << "{";
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ << "}";
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  pre_value();
  out_ << "[";
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ << "]";
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  if (need_comma_.back()) out_ << ",";
  need_comma_.back() = true;
  out_ << '"' << k << "\":";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  pre_value();
  out_ << format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  pre_value();
  out_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  pre_value();
  out_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  pre_value();
  out_ << (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  pre_value();
  out_ << '"';
  for (char c : v) {
    if (c == '"' || c == '\\') out_ << '\\';
    out_ << c;
  }
  out_ << '"';
  return *this;
}

JsonWriter& JsonWriter::value(const Vec& v) {
  begin_array();
  for (int i = 0; i < v.size(); ++i) value(v(i));
  end_array();
  return *this;
}

}  // namespace bregmax
