#pragma once

// Instance files: a JSON document
//
//   {
//     "name": "ward-a",
//     "grades": 3,
//     "demand": [[r_1,1, r_1,2, r_1,3], ... 14 rows],
//     "patterns": ["11111000000000", ...],
//     "nurses": [
//       {"grade": 1, "days": 5, "nights": 4, "preference": "day",
//        "costs": {"12": 40, ...}, "unavailable": [3, 7]},
//       {"grade": 2, "days": 2, "nights": 2, "both": 4, ...}
//     ]
//   }
//
// Pattern strings are authoritative: character 0 is the Sunday day shift,
// character 7 the Sunday night shift. Pattern indices are 0-based. Costs
// missing from the sparse map are 0.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nurse/errors.hpp"
#include "nurse/model.hpp"

namespace nurse {

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of element `index` of the array stored under top-level `key`, or of
// the key itself when the element cannot be located; 0 if the key is absent.
inline std::size_t locate_element(std::string_view text, std::string_view key, std::size_t index) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  std::size_t at = 0;
  for (;;) {
    at = text.find(quoted, at);
    if (at == std::string_view::npos) return 0;
    std::size_t c = at + quoted.size();
    while (c < text.size() && std::isspace(static_cast<unsigned char>(text[c]))) ++c;
    if (c < text.size() && text[c] == ':') {
      at = c + 1;
      break;
    }
    at += quoted.size();
  }
  while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) ++at;
  const std::size_t key_line = line_of(text, at);
  if (at >= text.size() || text[at] != '[') return key_line;
  int depth = 0;
  std::size_t element = 0;
  bool in_string = false;
  bool want_start = true;
  for (std::size_t c = at; c < text.size(); ++c) {
    const char ch = text[c];
    if (in_string) {
      if (ch == '\\') ++c;
      else if (ch == '"') in_string = false;
      continue;
    }
    if (depth == 1 && want_start && !std::isspace(static_cast<unsigned char>(ch)) && ch != ']') {
      if (element == index) return line_of(text, c);
      want_start = false;
    }
    if (ch == '"') in_string = true;
    else if (ch == '[' || ch == '{') ++depth;
    else if (ch == ']' || ch == '}') {
      if (--depth == 0) break;
    } else if (ch == ',' && depth == 1) {
      ++element;
      want_start = true;
    }
  }
  return key_line;
}

}  // namespace detail

inline Instance parse_instance(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance document: ") + e.what(), detail::line_of(text, e.byte));
  }
  auto fail = [&](const std::string& what, std::string_view key, std::size_t index = 0) -> ParseError {
    return ParseError(what, detail::locate_element(text, key, index));
  };
  if (!doc.is_object()) throw ParseError("instance document must be an object", 1);

  auto as_int = [](const json& v, int& out) {
    if (!v.is_number_integer()) return false;
    out = v.get<int>();
    return true;
  };

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw fail("'name' must be a string", "name");
    name = doc["name"].get<std::string>();
  }
  int grades = 0;
  if (!doc.contains("grades") || !as_int(doc["grades"], grades) || grades < 1)
    throw fail("'grades' must be a positive integer", "grades");

  if (!doc.contains("demand") || !doc["demand"].is_array()) throw fail("'demand' must be an array", "demand");
  const auto& rows = doc["demand"];
  if (rows.size() != kSlots) throw fail("'demand' must have 14 rows", "demand");
  std::vector<int> demand;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(grades))
      throw fail("demand row " + std::to_string(k) + " must hold one entry per grade", "demand", k);
    for (const auto& v : row) {
      int r = 0;
      if (!as_int(v, r) || r < 0)
        throw fail("demand row " + std::to_string(k) + " must hold nonnegative integers", "demand", k);
      demand.push_back(r);
    }
  }

  if (!doc.contains("patterns") || !doc["patterns"].is_array())
    throw fail("'patterns' must be an array", "patterns");
  std::vector<ShiftPattern> patterns;
  const auto& pats = doc["patterns"];
  for (std::size_t j = 0; j < pats.size(); ++j) {
    if (!pats[j].is_string()) throw fail("pattern " + std::to_string(j) + " must be a string", "patterns", j);
    try {
      patterns.push_back(ShiftPattern::parse(pats[j].get<std::string>()));
    } catch (const InstanceInvalid& e) {
      throw fail("pattern " + std::to_string(j) + ": " + e.what(), "patterns", j);
    }
  }
  const auto m = patterns.size();

  if (!doc.contains("nurses") || !doc["nurses"].is_array()) throw fail("'nurses' must be an array", "nurses");
  std::vector<Nurse> nurses;
  const auto& ns = doc["nurses"];
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& v = ns[i];
    auto bad = [&](const std::string& what) { return fail("nurse " + std::to_string(i) + ": " + what, "nurses", i); };
    if (!v.is_object()) throw bad("must be an object");
    Nurse nurse;
    if (!v.contains("grade") || !as_int(v["grade"], nurse.grade)) throw bad("'grade' must be an integer");
    if (!v.contains("days") || !as_int(v["days"], nurse.days)) throw bad("'days' must be an integer");
    if (!v.contains("nights") || !as_int(v["nights"], nurse.nights)) throw bad("'nights' must be an integer");
    if (v.contains("both")) {
      int b = 0;
      if (!as_int(v["both"], b)) throw bad("'both' must be an integer");
      nurse.both = b;
    }
    const std::string pref = v.value("preference", std::string("day"));
    if (pref == "day") nurse.preference = Side::day;
    else if (pref == "night") nurse.preference = Side::night;
    else throw bad("'preference' must be \"day\" or \"night\"");
    nurse.costs.assign(m, 0);
    nurse.unavailable.assign(m, false);
    if (v.contains("costs")) {
      if (!v["costs"].is_object()) throw bad("'costs' must be an object");
      for (const auto& [key, cost] : v["costs"].items()) {
        std::size_t idx = 0;
        int c = 0;
        try {
          std::size_t used = 0;
          idx = std::stoul(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw bad("cost key '" + key + "' is not a pattern index");
        }
        if (idx >= m) throw bad("cost key " + key + " out of range");
        if (!as_int(cost, c)) throw bad("cost of pattern " + key + " must be an integer");
        nurse.costs[idx] = c;
      }
    }
    if (v.contains("unavailable")) {
      if (!v["unavailable"].is_array()) throw bad("'unavailable' must be an array");
      for (const auto& u : v["unavailable"]) {
        int idx = 0;
        if (!as_int(u, idx) || idx < 0 || static_cast<std::size_t>(idx) >= m)
          throw bad("unavailable entries must be pattern indices");
        nurse.unavailable[idx] = true;
      }
    }
    nurses.push_back(std::move(nurse));
  }

  try {
    return Instance(std::move(name), grades, std::move(demand), std::move(patterns), std::move(nurses));
  } catch (const InstanceInvalid& e) {
    throw ParseError(std::string("invalid instance: ") + e.what(), 0);
  }
}

inline void write_instance(const Instance& inst, std::ostream& out) {
  using nlohmann::json;
  out << "{\n  \"name\": " << json(inst.name()).dump() << ",\n";
  out << "  \"grades\": " << inst.grades() << ",\n";
  out << "  \"demand\": [\n";
  for (int k = 0; k < kSlots; ++k) {
    json row = json::array();
    for (int s = 0; s < inst.grades(); ++s) row.push_back(inst.demand(k, s));
    out << "    " << row.dump() << (k + 1 < kSlots ? ",\n" : "\n");
  }
  out << "  ],\n  \"patterns\": [\n";
  for (int j = 0; j < inst.pattern_count(); ++j)
    out << "    \"" << inst.pattern(j).str() << "\"" << (j + 1 < inst.pattern_count() ? ",\n" : "\n");
  out << "  ],\n  \"nurses\": [\n";
  for (int i = 0; i < inst.nurse_count(); ++i) {
    const auto& n = inst.nurse(i);
    json v = json::object();
    v["grade"] = n.grade;
    v["days"] = n.days;
    v["nights"] = n.nights;
    if (n.both) v["both"] = *n.both;
    v["preference"] = to_string(n.preference);
    json costs = json::object();
    json unavailable = json::array();
    for (int j = 0; j < inst.pattern_count(); ++j) {
      if (n.costs[j] != 0) costs[std::to_string(j)] = n.costs[j];
      if (n.unavailable[j]) unavailable.push_back(j);
    }
    v["costs"] = std::move(costs);
    v["unavailable"] = std::move(unavailable);
    out << "    " << v.dump() << (i + 1 < inst.nurse_count() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
}

inline std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  write_instance(inst, out);
  return out.str();
}

inline Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_instance(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line());
  }
}

inline void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write instance file '" + path + "'");
  write_instance(inst, out);
}

}  // namespace nurse
