#pragma once

// State files and result records. Requires nlohmann/json on the include path.

#include "qdisc/bloch.hpp"
#include "qdisc/discord.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qdisc {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One entry of a state file, before validation.
struct StateEntry {
  std::string id;
  std::optional<Matrix4c> rho;
  std::optional<BlochForm> bloch;
};

namespace detail {

inline double number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline Vector3 vec3(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ParseError(where + ": expected an array of 3 numbers");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

inline StateEntry parse_entry(const nlohmann::json& j, const std::string& fallback_id) {
  if (!j.is_object()) throw ParseError(fallback_id + ": state entry must be an object");
  StateEntry e;
  e.id = fallback_id;
  if (j.contains("id")) {
    if (!j["id"].is_string()) throw ParseError(fallback_id + ": id must be a string");
    e.id = j["id"].get<std::string>();
  }
  const bool dense = j.contains("rho");
  const bool bloch = j.contains("x") || j.contains("y") || j.contains("K");
  if (dense == bloch) throw ParseError(e.id + ": exactly one of the dense (rho) and bloch (x, y, K) forms is required");

  if (dense) {
    const auto& r = j["rho"];
    if (!r.is_array() || r.size() != 4) throw ParseError(e.id + ": rho must be a 4x4 array");
    Matrix4c m;
    for (int i = 0; i < 4; ++i) {
      const auto& row = r[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != 4) throw ParseError(e.id + ": rho must be a 4x4 array");
      for (int k = 0; k < 4; ++k) {
        const auto& c = row[static_cast<std::size_t>(k)];
        if (!c.is_array() || c.size() != 2) throw ParseError(e.id + ": rho entries must be [re, im] pairs");
        m(i, k) = cplx(number(c[0], e.id), number(c[1], e.id));
      }
    }
    e.rho = m;
  } else {
    for (const char* key : {"x", "y", "K"})
      if (!j.contains(key)) throw ParseError(e.id + ": bloch form needs x, y and K");
    BlochForm b;
    b.x = vec3(j["x"], e.id + ".x");
    b.y = vec3(j["y"], e.id + ".y");
    const auto& k = j["K"];
    if (!k.is_array() || k.size() != 3) throw ParseError(e.id + ": K must be a 3x3 array");
    for (int i = 0; i < 3; ++i) b.K.row(i) = vec3(k[static_cast<std::size_t>(i)], e.id + ".K").transpose();
    e.bloch = b;
  }
  return e;
}

}  // namespace detail

/// Accepts a single entry or an array of entries. Entries without an "id"
/// are named `<source>` or `<source>#<index>`.
inline std::vector<StateEntry> parse_state_text(const std::string& text, const std::string& source = "input") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(source + ": " + ex.what());
  }
  std::vector<StateEntry> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(detail::parse_entry(j[i], source + "#" + std::to_string(i)));
  } else {
    out.push_back(detail::parse_entry(j, source));
  }
  return out;
}

inline std::vector<StateEntry> read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state_text(ss.str(), path);
}

/// Validated Bloch data of an entry (the dense form is validated first,
/// the bloch form after reconstruction).
inline BlochForm entry_bloch(const StateEntry& e) {
  if (e.rho) return to_bloch(validate_state(*e.rho));
  return to_bloch(validate_state(from_bloch(*e.bloch).rho));
}

inline nlohmann::json state_to_json(const TwoQubitState& s, const std::string& id = "") {
  nlohmann::json rho = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back({s.rho(i, k).real(), s.rho(i, k).imag()});
    rho.push_back(row);
  }
  nlohmann::json j = {{"rho", rho}};
  if (!id.empty()) j["id"] = id;
  return j;
}

inline nlohmann::json bloch_to_json(const BlochForm& b, const std::string& id = "") {
  nlohmann::json k = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) k.push_back({b.K(i, 0), b.K(i, 1), b.K(i, 2)});
  nlohmann::json j = {{"x", {b.x(0), b.x(1), b.x(2)}}, {"y", {b.y(0), b.y(1), b.y(2)}}, {"K", k}};
  if (!id.empty()) j["id"] = id;
  return j;
}

// ---------------------------------------------------------------------------
// Result records

struct ResultRecord {
  std::string id;
  double d1 = 0.0;
  double d2 = 0.0;
  double lower_bound = 0.0;
  std::string branch;
  Vector3 axis = Vector3::UnitZ();
  Vector3 l_minus = Vector3::Zero();
  std::optional<double> oracle;
  double wall_time_ms = 0.0;

  bool operator==(const ResultRecord&) const = default;
};

inline ResultRecord make_record(const std::string& id, const DiscordResult& r) {
  ResultRecord rec;
  rec.id = id;
  rec.d1 = r.d1_value;
  rec.d2 = r.d2_value;
  rec.lower_bound = r.lower_bound;
  rec.branch = to_string(r.branch);
  rec.axis = r.axis.canonical().v();
  rec.l_minus = r.frame.l_minus_vals;
  return rec;
}

inline nlohmann::json to_json(const ResultRecord& r) {
  nlohmann::json j = {
      {"id", r.id},
      {"D1", r.d1},
      {"D2", r.d2},
      {"lower_bound", r.lower_bound},
      {"branch", r.branch},
      {"axis", {r.axis(0), r.axis(1), r.axis(2)}},
      {"l_minus", {r.l_minus(0), r.l_minus(1), r.l_minus(2)}},
      {"wall_time_ms", r.wall_time_ms},
  };
  j["oracle"] = r.oracle ? nlohmann::json(*r.oracle) : nlohmann::json(nullptr);
  return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  try {
    ResultRecord r;
    r.id = j.at("id").get<std::string>();
    r.d1 = j.at("D1").get<double>();
    r.d2 = j.at("D2").get<double>();
    r.lower_bound = j.at("lower_bound").get<double>();
    r.branch = j.at("branch").get<std::string>();
    r.axis = detail::vec3(j.at("axis"), "axis");
    r.l_minus = detail::vec3(j.at("l_minus"), "l_minus");
    if (j.contains("oracle") && !j["oracle"].is_null()) r.oracle = j["oracle"].get<double>();
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("result record: ") + ex.what());
  }
}

inline std::string csv_header() {
  return "id,D1,D2,lower_bound,branch,axis_x,axis_y,axis_z,l_minus_1,l_minus_2,l_minus_3,oracle,wall_time_ms";
}

inline std::string csv_row(const ResultRecord& r) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << r.id << ',' << r.d1 << ',' << r.d2 << ',' << r.lower_bound << ',' << r.branch << ',' << r.axis(0) << ','
    << r.axis(1) << ',' << r.axis(2) << ',' << r.l_minus(0) << ',' << r.l_minus(1) << ',' << r.l_minus(2) << ',';
  if (r.oracle) s << *r.oracle;
  s << ',' << r.wall_time_ms;
  return s.str();
}

inline ResultRecord record_from_csv(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  if (f.size() != 13) throw ParseError("csv row: expected 13 fields, got " + std::to_string(f.size()));
  auto d = [&](std::size_t i) {
    try {
      return std::stod(f[i]);
    } catch (const std::exception&) {
      throw ParseError("csv row: field " + std::to_string(i) + " is not a number");
    }
  };
  ResultRecord r;
  r.id = f[0];
  r.d1 = d(1);
  r.d2 = d(2);
  r.lower_bound = d(3);
  r.branch = f[4];
  r.axis = {d(5), d(6), d(7)};
  r.l_minus = {d(8), d(9), d(10)};
  if (!f[11].empty()) r.oracle = d(11);
  r.wall_time_ms = d(12);
  return r;
}

}  // namespace qdisc
