#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cubicfib/driver/driver.hpp"

namespace cubicfib::driver {

namespace {

std::string describe(const std::vector<FormIssue>& issues) {
  std::string s = "invalid form document";
  for (const auto& i : issues) s += "\n  " + (i.line ? "line " + std::to_string(i.line) + ": " : "") + i.message;
  return s;
}

// Source lines of the top-level keys and of each element of the "terms" array.
struct SourceLines {
  std::map<std::string, std::size_t> keys;
  std::vector<std::size_t> terms;
};

SourceLines locate(const std::string& t) {
  SourceLines out;
  std::size_t line = 1;
  int depth = 0;
  bool in_terms = false;
  char prev = 0;
  std::string last_key;
  for (std::size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    if (c == '\n') ++line;
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    bool element_start = depth == 2 && in_terms && (prev == '[' || prev == ',') && c != ']';
    if (element_start) out.terms.push_back(line);
    if (c == '"') {
      std::size_t j = i + 1;
      std::string s;
      while (j < t.size() && t[j] != '"') {
        if (t[j] == '\\' && j + 1 < t.size()) ++j;
        s += t[j++];
      }
      i = j;
      std::size_t k = i + 1;
      while (k < t.size() && (t[k] == ' ' || t[k] == '\t')) ++k;
      if (depth == 1 && k < t.size() && t[k] == ':') {
        out.keys.emplace(s, line);
        last_key = s;
      }
      prev = '"';
      continue;
    }
    if (c == '{' || c == '[') {
      ++depth;
      if (depth == 2 && c == '[' && last_key == "terms") in_terms = true;
    } else if (c == '}' || c == ']') {
      if (depth == 2 && in_terms) in_terms = false;
      --depth;
    }
    prev = c;
  }
  return out;
}

std::size_t line_of_offset(const std::string& t, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < t.size(); ++i)
    if (t[i] == '\n') ++line;
  return line;
}

std::optional<Rational> parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) return std::nullopt;
  if (r.get_den() == 0) return std::nullopt;
  r.canonicalize();
  return r;
}

std::string index_list(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace

FormError::FormError(std::vector<FormIssue> issues) : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

IntPolynomial FormDocument::polynomial() const {
  IntPolynomial p(n);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

FormDocument FormDocument::from_polynomial(const IntPolynomial& c) {
  FormDocument d;
  d.n = c.num_vars();
  d.degree = c.total_degree();
  for (const auto& [e, coef] : c.terms()) d.terms.emplace_back(e, coef);
  return d;
}

FormDocument parse_form_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormError({{line_of_offset(text, e.byte), std::string("malformed JSON: ") + e.what()}});
  }
  auto lines = locate(text);
  auto key_line = [&](const std::string& k) {
    auto it = lines.keys.find(k);
    return it == lines.keys.end() ? std::size_t(0) : it->second;
  };
  std::vector<FormIssue> issues;
  FormDocument d;
  if (!j.is_object()) throw FormError({{1, "document must be a JSON object"}});
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "n" && k != "degree" && k != "terms" && k != "split" && k != "metadata")
      issues.push_back({key_line(k), "unknown key '" + k + "'"});
  }
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) {
    issues.push_back({key_line("n"), "'n' must be a positive integer"});
    throw FormError(issues);
  }
  d.n = j["n"].get<std::size_t>();
  if (j.contains("degree") && !(j["degree"].is_number_unsigned() && j["degree"].get<unsigned>() == 3))
    issues.push_back({key_line("degree"), "'degree' must be 3"});
  if (!j.contains("terms") || !j["terms"].is_array()) {
    issues.push_back({key_line("terms"), "'terms' must be an array"});
    throw FormError(issues);
  }
  std::set<Exponent> seen;
  const auto& terms = j["terms"];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::size_t ln = i < lines.terms.size() ? lines.terms[i] : key_line("terms");
    const auto& t = terms[i];
    if (!t.is_object() || !t.contains("exponent") || !t.contains("coefficient")) {
      issues.push_back({ln, "term needs 'exponent' and 'coefficient'"});
      continue;
    }
    const auto& ex = t["exponent"];
    if (!ex.is_array() || ex.size() != d.n ||
        !std::all_of(ex.begin(), ex.end(), [](const Json& v) { return v.is_number_unsigned(); })) {
      issues.push_back({ln, "exponent must list " + std::to_string(d.n) + " nonnegative integers"});
      continue;
    }
    Exponent e;
    unsigned deg = 0;
    for (const auto& v : ex) {
      e.push_back(v.get<unsigned>());
      deg += e.back();
    }
    if (!t["coefficient"].is_string()) {
      issues.push_back({ln, "coefficient must be a decimal string"});
      continue;
    }
    Integer c;
    std::string cs = t["coefficient"].get<std::string>();
    if (cs.empty() || c.set_str(cs, 10) != 0 || (cs[0] == '+')) {
      issues.push_back({ln, "bad coefficient '" + cs + "'"});
      continue;
    }
    if (c == 0) issues.push_back({ln, "zero coefficient"});
    if (deg != 3) issues.push_back({ln, "term of degree " + std::to_string(deg) + " in a cubic form (not homogeneous)"});
    if (!seen.insert(e).second) issues.push_back({ln, "repeated exponent"});
    d.terms.emplace_back(std::move(e), std::move(c));
  }
  if (terms.empty()) issues.push_back({key_line("terms"), "form has no terms"});

  if (j.contains("split")) {
    std::size_t ln = key_line("split");
    const auto& s = j["split"];
    VariableSplit split;
    bool ok = s.is_object() && s.contains("x_vars") && s.contains("y_vars") && s["x_vars"].is_array() &&
              s["y_vars"].is_array();
    if (ok) {
      for (const char* key : {"x_vars", "y_vars"})
        for (const auto& v : s[key]) {
          if (!v.is_number_unsigned()) {
            ok = false;
            continue;
          }
          (std::string(key) == "x_vars" ? split.x_indices : split.y_indices).push_back(v.get<std::size_t>());
        }
    }
    if (!ok) {
      issues.push_back({ln, "split needs index arrays 'x_vars' and 'y_vars'"});
    } else {
      try {
        split.mode = forms::fibration_mode_from_string(s.value("mode", std::string("pi")));
        split.validate(d.n);
        d.split = split;
      } catch (const std::exception& e) {
        issues.push_back({ln, std::string("bad split: ") + e.what()});
      }
    }
  }

  if (j.contains("metadata")) {
    std::size_t ln = key_line("metadata");
    const auto& m = j["metadata"];
    if (!m.is_object()) {
      issues.push_back({ln, "metadata must be an object"});
    } else {
      if (m.contains("name")) {
        if (m["name"].is_string()) d.metadata.name = m["name"].get<std::string>();
        else issues.push_back({ln, "metadata.name must be a string"});
      }
      for (const char* key : {"expected_r", "expected_h"}) {
        if (!m.contains(key)) continue;
        if (!m[key].is_number_integer()) {
          issues.push_back({ln, std::string("metadata.") + key + " must be an integer"});
          continue;
        }
        (std::string(key) == "expected_r" ? d.metadata.expected_r : d.metadata.expected_h) = m[key].get<long>();
      }
      if (m.contains("box")) {
        std::vector<sieve::Interval> box;
        bool ok = m["box"].is_array();
        if (ok)
          for (const auto& iv : m["box"]) {
            std::optional<Rational> lo, hi;
            if (iv.is_array() && iv.size() == 2 && iv[0].is_string() && iv[1].is_string()) {
              lo = parse_rational(iv[0].get<std::string>());
              hi = parse_rational(iv[1].get<std::string>());
            }
            if (!lo || !hi || *hi < *lo) {
              ok = false;
              break;
            }
            box.push_back({*lo, *hi});
          }
        if (ok && d.split && box.size() != d.split->y_indices.size()) ok = false;
        if (ok) d.metadata.box = box;
        else issues.push_back({ln, "metadata.box must list one [lo, hi] pair of rational strings per parameter"});
      }
      if (m.contains("y_exponent")) {
        std::optional<Rational> e;
        if (m["y_exponent"].is_string()) e = parse_rational(m["y_exponent"].get<std::string>());
        if (e && *e >= 0 && *e <= 1) d.metadata.y_exponent = e;
        else issues.push_back({ln, "metadata.y_exponent must be a rational string in [0, 1]"});
      }
    }
  }

  if (issues.empty() && d.split) {
    try {
      d.split->validate_for(d.polynomial());
    } catch (const std::exception& e) {
      issues.push_back({key_line("split"), std::string("split does not fit the form: ") + e.what()});
    }
  }
  if (!issues.empty()) throw FormError(std::move(issues));
  return d;
}

FormDocument parse_form(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormError({{0, "cannot open " + path}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_form_text(ss.str());
}

std::string serialize_form(const FormDocument& d) {
  std::ostringstream out;
  out << "{\n  \"n\": " << d.n << ",\n  \"degree\": " << d.degree << ",\n  \"terms\": [\n";
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    const auto& [e, c] = d.terms[i];
    out << "    {\"exponent\": [";
    for (std::size_t k = 0; k < e.size(); ++k) out << (k ? ", " : "") << e[k];
    out << "], \"coefficient\": \"" << c.get_str() << "\"}" << (i + 1 < d.terms.size() ? "," : "") << "\n";
  }
  out << "  ]";
  if (d.split) {
    out << ",\n  \"split\": {\"x_vars\": " << index_list(d.split->x_indices)
        << ", \"y_vars\": " << index_list(d.split->y_indices) << ", \"mode\": \"" << forms::to_string(d.split->mode)
        << "\"}";
  }
  const auto& m = d.metadata;
  if (m.name || m.expected_r || m.expected_h || m.box || m.y_exponent) {
    std::vector<std::string> fields;
    if (m.name) fields.push_back("\"name\": " + Json(*m.name).dump());
    if (m.expected_r) fields.push_back("\"expected_r\": " + std::to_string(*m.expected_r));
    if (m.expected_h) fields.push_back("\"expected_h\": " + std::to_string(*m.expected_h));
    if (m.box) {
      std::string s = "\"box\": [";
      for (std::size_t i = 0; i < m.box->size(); ++i)
        s += (i ? ", " : "") + std::string("[\"") + (*m.box)[i].lo.get_str() + "\", \"" + (*m.box)[i].hi.get_str() +
             "\"]";
      fields.push_back(s + "]");
    }
    if (m.y_exponent) fields.push_back("\"y_exponent\": \"" + m.y_exponent->get_str() + "\"");
    out << ",\n  \"metadata\": {";
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? ", " : "") << fields[i];
    out << "}";
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace cubicfib::driver
