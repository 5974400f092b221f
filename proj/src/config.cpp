#include "ruledfib/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "ruledfib/error.hpp"

namespace ruledfib {

namespace {

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : s_(text) {}

  Json parse() {
    Json root = Json::object();
    Json* table = &root;
    while (skip_blank_lines(), pos_ < s_.size()) {
      if (peek() == '[') {
        ++pos_;
        table = &root;
        for (const auto& part : split_key(read_until(']'))) {
          if (!table->contains(part)) (*table)[part] = Json::object();
          table = &(*table)[part];
          if (!table->is_object()) fail("table name collides with a value");
        }
        ++pos_;
      } else {
        auto keys = split_key(read_until('='));
        ++pos_;
        Json* target = table;
        for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
          if (!target->contains(keys[i])) (*target)[keys[i]] = Json::object();
          target = &(*target)[keys[i]];
        }
        if (target->contains(keys.back())) fail("duplicate key " + keys.back());
        (*target)[keys.back()] = value();
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
    throw Error(ErrorKind::ParseError, "toml line " + std::to_string(line) + ": " + msg);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws(bool newlines) {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  void skip_blank_lines() { skip_ws(true); }
  void end_of_line() {
    skip_ws(false);
    if (pos_ < s_.size() && s_[pos_] != '\n') fail("unexpected text after value");
  }

  std::string read_until(char stop) {
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != stop && s_[pos_] != '\n') ++pos_;
    if (peek() != stop) fail(std::string("expected '") + stop + "'");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> split_key(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string part;
    while (std::getline(ss, part, '.')) {
      const auto b = part.find_first_not_of(" \t");
      const auto e = part.find_last_not_of(" \t");
      if (b == std::string::npos) fail("empty key");
      part = part.substr(b, e - b + 1);
      if (part.size() >= 2 && part.front() == '"' && part.back() == '"') part = part.substr(1, part.size() - 2);
      for (char c : part)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) fail("bad key " + part);
      out.push_back(part);
    }
    if (out.empty()) fail("empty key");
    return out;
  }

  Json value() {
    skip_ws(false);
    const char c = peek();
    if (c == '"') return string_value();
    if (c == '[') {
      ++pos_;
      Json arr = Json::array();
      for (;;) {
        skip_ws(true);
        if (peek() == ']') break;
        arr.push_back(value());
        skip_ws(true);
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() != ']') fail("expected ',' or ']'");
      }
      ++pos_;
      return arr;
    }
    if (c == '{') {
      ++pos_;
      Json obj = Json::object();
      skip_ws(false);
      if (peek() == '}') {
        ++pos_;
        return obj;
      }
      for (;;) {
        skip_ws(false);
        const auto start = pos_;
        while (pos_ < s_.size() && s_[pos_] != '=' && s_[pos_] != '\n') ++pos_;
        if (peek() != '=') fail("expected '=' in inline table");
        const auto keys = split_key(std::string(s_.substr(start, pos_ - start)));
        if (keys.size() != 1) fail("dotted keys are not supported in inline tables");
        ++pos_;
        obj[keys[0]] = value();
        skip_ws(false);
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() != '}') fail("expected ',' or '}'");
        ++pos_;
        return obj;
      }
    }
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '+' || s_[pos_] == '_'))
      ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char ch : tok)
      if (ch != '_') digits += ch;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(digits, &used, 10);
      if (used == digits.size() && !digits.empty()) return v;
    } catch (const std::exception&) {
    }
    fail("unsupported value '" + tok + "'");
  }

  Json string_value() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\n') fail("newline in string");
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (peek() != '"') fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Json parse_toml_subset(std::string_view text) { return TomlParser(text).parse(); }

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0) return parse_toml_subset(text);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

FieldElement element_from_json(const FieldPtr& f, const Json& j) {
  if (j.is_number_integer()) return FieldElement::from_int(f, j.get<std::int64_t>());
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "field element must be an integer or coefficient array");
  if (j.size() > static_cast<std::size_t>(f->k)) {
    throw Error(ErrorKind::ParseError, "coefficient array longer than the extension degree");
  }
  std::vector<std::int64_t> cs;
  for (const auto& c : j) {
    if (!c.is_number_integer()) throw Error(ErrorKind::ParseError, "coefficients must be integers");
    cs.push_back(c.get<std::int64_t>());
  }
  return FieldElement::from_coeffs(f, cs);
}

Json element_to_json(const FieldElement& x) {
  Json arr = Json::array();
  for (auto c : x.coeffs()) arr.push_back(c);
  return arr;
}

CurvePoint point_from_json(const Curve& e, const Json& j) {
  if (j.is_string() && (j == "inf" || j == "O")) return e.infinity();
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::ParseError, "point must be [x, y] or \"inf\"");
  return e.point(element_from_json(e.field(), j[0]), element_from_json(e.field(), j[1]));
}

Json point_to_json(const CurvePoint& pt) {
  if (pt.is_infinity()) return "inf";
  return Json::array({element_to_json(pt.x()), element_to_json(pt.y())});
}

CurveSpec curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("field")) throw Error(ErrorKind::ParseError, "curve spec needs a \"field\" table");
  const auto& fj = j["field"];
  if (!fj.is_object() || !fj.contains("p") || !fj["p"].is_number_integer()) {
    throw Error(ErrorKind::ParseError, "field needs an integer p");
  }
  const auto k = fj.contains("k") ? fj["k"].get<int>() : 1;
  const auto f = make_field(fj["p"].get<std::int64_t>(), k);
  auto coeff = [&](const char* name) {
    return j.contains(name) ? element_from_json(f, j[name]) : FieldElement::zero(f);
  };
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> known = {"field", "a1", "a2", "a3", "a4", "a6", "points", "name"};
    if (!known.count(key)) throw Error(ErrorKind::ParseError, "unknown key \"" + key + "\" in curve spec");
  }
  CurveSpec out{Curve::make(f, coeff("a1"), coeff("a2"), coeff("a3"), coeff("a4"), coeff("a6")), {}};
  if (j.contains("points")) {
    if (!j["points"].is_object()) throw Error(ErrorKind::ParseError, "points must be a table of names");
    for (const auto& [name, pj] : j["points"].items()) out.points.emplace(name, point_from_json(out.curve, pj));
  }
  return out;
}

Json curve_to_json(const Curve& e) {
  Json j;
  j["field"] = {{"p", e.field()->p}, {"k", e.field()->k}};
  j["a1"] = element_to_json(e.a1());
  j["a2"] = element_to_json(e.a2());
  j["a3"] = element_to_json(e.a3());
  j["a4"] = element_to_json(e.a4());
  j["a6"] = element_to_json(e.a6());
  return j;
}

}  // namespace ruledfib
