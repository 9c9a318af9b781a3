#include "fleetopt/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace fleetopt {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " +
                                         message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t column = 0;  // 1-based
};

struct Line {
  std::size_t number = 0;
  std::string text;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Token> split_ws(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back({s.substr(start, i - start), start + 1});
  }
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Parser {
 public:
  explicit Parser(std::string_view text) { split_sections(text); }

  Dataset run() {
    Dataset d;
    d.feature_names = read_names("features", feature_index_);
    d.type_names = read_names("types", type_index_);
    d.forbidden_per_type.assign(d.type_names.size(), {});
    read_forbidden(d);
    read_groups(d);
    read_rules(d);
    read_tests(d);
    read_schedule(d);
    try {
      validate(d);
    } catch (const ValidationError& e) {
      throw ParseError(0, 0, e.what());
    }
    return d;
  }

 private:
  void split_sections(std::string_view text) {
    std::size_t number = 0;
    std::string current;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string raw(text.substr(pos, nl - pos));
      pos = nl + 1;
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::string t = trim(raw);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') throw ParseError(number, raw.find('[') + 1, "unterminated section header");
        std::string name = trim(t.substr(1, t.size() - 2));
        static const char* known[] = {"features", "types", "forbidden", "groups", "rules", "tests", "schedule"};
        if (std::find(std::begin(known), std::end(known), name) == std::end(known))
          throw ParseError(number, raw.find('[') + 1, "unknown section '" + name + "'");
        if (sections_.count(name)) throw ParseError(number, raw.find('[') + 1, "duplicate section '" + name + "'");
        sections_[name];
        current = name;
        continue;
      }
      if (current.empty()) throw ParseError(number, 1, "content before the first section header");
      sections_[current].push_back({number, raw});
    }
  }

  const std::vector<Line>& section(const std::string& name) {
    static const std::vector<Line> empty;
    auto it = sections_.find(name);
    return it == sections_.end() ? empty : it->second;
  }

  std::vector<std::string> read_names(const std::string& sec, std::map<std::string, std::size_t>& index) {
    std::vector<std::string> names;
    for (const auto& line : section(sec)) {
      for (const auto& tok : split_ws(line.text)) {
        if (!std::all_of(tok.text.begin(), tok.text.end(), is_name_char))
          throw ParseError(line.number, tok.column, "invalid name '" + tok.text + "'");
        if (!index.emplace(tok.text, names.size()).second)
          throw ParseError(line.number, tok.column, "duplicate name '" + tok.text + "'");
        names.push_back(tok.text);
      }
    }
    return names;
  }

  FeatureId feature(const Line& line, std::size_t column, const std::string& name) {
    auto it = feature_index_.find(name);
    if (it == feature_index_.end()) throw ParseError(line.number, column, "undeclared feature '" + name + "'");
    return FeatureId(it->second);
  }

  TypeId type(const Line& line, std::size_t column, const std::string& name) {
    auto it = type_index_.find(name);
    if (it == type_index_.end()) throw ParseError(line.number, column, "undeclared type '" + name + "'");
    return TypeId(it->second);
  }

  void read_forbidden(Dataset& d) {
    std::vector<bool> seen(d.type_names.size(), false);
    for (const auto& line : section("forbidden")) {
      auto colon = line.text.find(':');
      if (colon == std::string::npos) throw ParseError(line.number, 1, "expected '<type>: <features>'");
      std::string tname = trim(line.text.substr(0, colon));
      std::size_t tcol = line.text.find_first_not_of(" \t") + 1;
      TypeId t = type(line, tcol, tname);
      if (seen[t.value]) throw ParseError(line.number, tcol, "forbidden set for '" + tname + "' given twice");
      seen[t.value] = true;
      auto& set = d.forbidden_per_type[t.value];
      for (auto tok : split_ws(line.text.substr(colon + 1))) set.push_back(feature(line, tok.column + colon + 1, tok.text));
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
    }
  }

  void read_groups(Dataset& d) {
    for (const auto& line : section("groups")) {
      FeatureGroup g;
      auto toks = split_ws(line.text);
      for (const auto& tok : toks) g.members.push_back(feature(line, tok.column, tok.text));
      std::sort(g.members.begin(), g.members.end());
      if (std::adjacent_find(g.members.begin(), g.members.end()) != g.members.end())
        throw ParseError(line.number, 1, "feature repeated within a group");
      if (g.members.size() < 2) throw ParseError(line.number, 1, "a group needs at least 2 features");
      d.groups.push_back(std::move(g));
    }
  }

  std::vector<Token> tokenize_rule(const Line& line) {
    std::vector<Token> out;
    const std::string& s = line.text;
    std::size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '!' || c == '&' || c == '|' || c == ':') {
        out.push_back({std::string(1, c), i + 1});
        ++i;
      } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({"->", i + 1});
        i += 2;
      } else if (is_name_char(c) || c == '*') {
        std::size_t start = i;
        while (i < s.size() && (is_name_char(s[i]) || s[i] == '*')) ++i;
        out.push_back({s.substr(start, i - start), start + 1});
      } else {
        throw ParseError(line.number, i + 1, std::string("unexpected character '") + c + "'");
      }
    }
    return out;
  }

  // Parses "lit (op lit)*" from toks[pos, end); empty allowed.
  std::pair<std::vector<Literal>, Connective> read_side(const Line& line, const std::vector<Token>& toks,
                                                        std::size_t pos, std::size_t end) {
    std::vector<Literal> lits;
    std::optional<char> op;
    bool expect_literal = true;
    while (pos < end) {
      if (expect_literal) {
        bool negated = false;
        if (toks[pos].text == "!") {
          negated = true;
          if (++pos >= end) throw ParseError(line.number, toks[pos - 1].column, "'!' without a feature");
        }
        const Token& t = toks[pos];
        if (!std::all_of(t.text.begin(), t.text.end(), is_name_char))
          throw ParseError(line.number, t.column, "expected a feature name, got '" + t.text + "'");
        lits.push_back({feature(line, t.column, t.text), negated});
        expect_literal = false;
      } else {
        const Token& t = toks[pos];
        if (t.text != "&" && t.text != "|")
          throw ParseError(line.number, t.column, "expected '&' or '|', got '" + t.text + "'");
        if (op && *op != t.text[0]) throw ParseError(line.number, t.column, "mixed '&' and '|' on one side");
        op = t.text[0];
        expect_literal = true;
      }
      ++pos;
    }
    if (expect_literal && !lits.empty())
      throw ParseError(line.number, toks[end - 1].column, "dangling connective");
    Connective c = !op ? Connective::Single : (*op == '&' ? Connective::And : Connective::Or);
    return {std::move(lits), c};
  }

  void read_rules(Dataset& d) {
    for (const auto& line : section("rules")) {
      auto toks = tokenize_rule(line);
      if (toks.size() < 2 || toks[1].text != ":")
        throw ParseError(line.number, toks.empty() ? 1 : toks[0].column, "expected '<type>|*:' at rule start");
      std::optional<TypeId> rule_type;
      if (toks[0].text != "*") rule_type = type(line, toks[0].column, toks[0].text);
      auto arrow = std::find_if(toks.begin() + 2, toks.end(), [](const Token& t) { return t.text == "->"; });
      if (arrow == toks.end()) throw ParseError(line.number, toks[1].column, "missing '->'");
      std::size_t a = static_cast<std::size_t>(arrow - toks.begin());
      auto [lhs, lc] = read_side(line, toks, 2, a);
      auto [rhs, rc] = read_side(line, toks, a + 1, toks.size());
      if (rhs.empty()) throw ParseError(line.number, toks[a].column, "empty right side");
      if (lhs.empty() && !rule_type)
        throw ParseError(line.number, toks[0].column, "an untyped rule needs a left side");
      if (lc == Connective::Or &&
          std::any_of(lhs.begin(), lhs.end(), [](const Literal& l) { return l.negated; }))
        throw ParseError(line.number, toks[2].column,
                         "disjunctive left side with negated literals is not supported");
      d.rules.push_back(ImplicationRule::make(rule_type, std::move(lhs), lc, std::move(rhs), rc));
    }
  }

  void read_tests(Dataset& d) {
    for (const auto& line : section("tests")) {
      TestRequirement t;
      t.id = d.tests.size();
      std::map<std::string, bool> seen;
      std::vector<bool> used(d.feature_names.size(), false);
      for (const auto& tok : split_ws(line.text)) {
        auto eq = tok.text.find('=');
        if (eq == std::string::npos) throw ParseError(line.number, tok.column, "expected key=value");
        std::string key = tok.text.substr(0, eq);
        std::string value = tok.text.substr(eq + 1);
        if (seen[key]) throw ParseError(line.number, tok.column, "duplicate key '" + key + "'");
        seen[key] = true;
        std::size_t vcol = tok.column + eq + 1;
        if (key == "present" || key == "absent" || key == "anyof") {
          auto& list = key == "present" ? t.required_present : key == "absent" ? t.required_absent : t.required_any_of;
          std::size_t p = 0;
          while (p < value.size()) {
            std::size_t comma = value.find(',', p);
            if (comma == std::string::npos) comma = value.size();
            std::string name = value.substr(p, comma - p);
            FeatureId id = feature(line, vcol + p, name);
            if (used[id.value]) throw ParseError(line.number, vcol + p, "feature '" + name + "' listed twice in test");
            used[id.value] = true;
            list.push_back(id);
            p = comma + 1;
          }
          std::sort(list.begin(), list.end());
        } else if (key == "k") {
          std::int64_t k = 0;
          auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), k);
          if (ec != std::errc{} || ptr != value.data() + value.size() || k < 1)
            throw ParseError(line.number, vcol, "k must be a positive integer");
          t.cars_needed = k;
        } else if (key == "w") {
          try {
            t.weight = parse_rational(value);
          } catch (const std::exception&) {
            throw ParseError(line.number, vcol, "bad weight '" + value + "'");
          }
          if (t.weight < 0) throw ParseError(line.number, vcol, "weight must be non-negative");
        } else {
          throw ParseError(line.number, tok.column, "unknown test key '" + key + "'");
        }
      }
      d.tests.push_back(std::move(t));
    }
  }

  static std::optional<int> to_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  }

  std::pair<std::size_t, std::size_t> test_ref(const Line& line, const Token& tok) {
    auto dot = tok.text.find('.');
    if (dot != std::string::npos) {
      auto o = to_int(tok.text.substr(0, dot));
      auto c = to_int(tok.text.substr(dot + 1));
      if (o && c && *o >= 0 && *c >= 0) return {static_cast<std::size_t>(*o), static_cast<std::size_t>(*c)};
    }
    throw ParseError(line.number, tok.column, "expected <test>.<copy>, got '" + tok.text + "'");
  }

  void read_schedule(Dataset& d) {
    if (!sections_.count("schedule")) return;
    ScheduleSpec s;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::vector<std::pair<const Line*, std::vector<Token>>> distinct_lines;
    auto int_at = [&](const Line& line, const std::vector<Token>& toks, std::size_t k) {
      if (k >= toks.size()) throw ParseError(line.number, line.text.size() + 1, "missing value");
      auto v = to_int(toks[k].text);
      if (!v) throw ParseError(line.number, toks[k].column, "expected an integer, got '" + toks[k].text + "'");
      return *v;
    };
    for (const auto& line : section("schedule")) {
      auto toks = split_ws(line.text);
      const std::string& kw = toks[0].text;
      if (kw == "horizon") {
        s.horizon_days = int_at(line, toks, 1);
      } else if (kw == "capacity") {
        s.daily_capacity = int_at(line, toks, 1);
      } else if (kw == "distinct_relaxed") {
        if (toks.size() != 2 || (toks[1].text != "true" && toks[1].text != "false"))
          throw ParseError(line.number, toks[0].column, "expected 'distinct_relaxed true|false'");
        s.distinct_vehicle_relaxed = toks[1].text == "true";
      } else if (kw == "test") {
        if (toks.size() != 7 || toks[2].text != "window" || toks[5].text != "group")
          throw ParseError(line.number, toks[0].column, "expected 'test <t>.<c> window <start> <end> group <g>'");
        auto [origin, copy] = test_ref(line, toks[1]);
        if (!index.emplace(std::pair{origin, copy}, s.expanded_tests.size()).second)
          throw ParseError(line.number, toks[1].column, "expanded test listed twice");
        s.expanded_tests.push_back({origin, copy, int_at(line, toks, 3), int_at(line, toks, 4), int_at(line, toks, 6)});
      } else if (kw == "distinct") {
        distinct_lines.emplace_back(&line, std::move(toks));
      } else {
        throw ParseError(line.number, toks[0].column, "unknown schedule keyword '" + kw + "'");
      }
    }
    for (auto& [line, toks] : distinct_lines) {
      std::vector<std::size_t> set;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto it = index.find(test_ref(*line, toks[k]));
        if (it == index.end()) throw ParseError(line->number, toks[k].column, "unknown expanded test '" + toks[k].text + "'");
        set.push_back(it->second);
      }
      s.distinct_vehicle_sets.push_back(std::move(set));
    }
    d.schedule = std::move(s);
  }

  std::map<std::string, std::vector<Line>> sections_;
  std::map<std::string, std::size_t> feature_index_;
  std::map<std::string, std::size_t> type_index_;
};

void write_names(std::ostringstream& os, const std::vector<std::string>& names) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    os << names[k] << ((k % 16 == 15 || k + 1 == names.size()) ? '\n' : ' ');
  }
}

}  // namespace

Dataset parse_dataset(std::string_view text) { return Parser(text).run(); }

std::string serialize_dataset(const Dataset& d) {
  std::ostringstream os;
  auto names = [&](const std::vector<FeatureId>& ids, char sep) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k > 0) out += sep;
      out += d.feature_names[ids[k].value];
    }
    return out;
  };
  os << "[features]\n";
  write_names(os, d.feature_names);
  os << "[types]\n";
  write_names(os, d.type_names);
  os << "[forbidden]\n";
  for (std::size_t t = 0; t < d.type_count(); ++t) {
    os << d.type_names[t] << ':';
    if (!d.forbidden_per_type[t].empty()) os << ' ' << names(d.forbidden_per_type[t], ' ');
    os << '\n';
  }
  os << "[groups]\n";
  for (const auto& g : d.groups) os << names(g.members, ' ') << '\n';
  os << "[rules]\n";
  for (const auto& r : d.rules) os << describe_rule(d, r) << '\n';
  os << "[tests]\n";
  for (const auto& t : d.tests) {
    os << "present=" << names(t.required_present, ',') << " absent=" << names(t.required_absent, ',')
       << " anyof=" << names(t.required_any_of, ',') << " k=" << t.cars_needed << " w=" << to_string(t.weight) << '\n';
  }
  if (d.schedule) {
    const auto& s = *d.schedule;
    os << "[schedule]\n";
    os << "horizon " << s.horizon_days << '\n';
    os << "capacity " << s.daily_capacity << '\n';
    os << "distinct_relaxed " << (s.distinct_vehicle_relaxed ? "true" : "false") << '\n';
    for (const auto& e : s.expanded_tests)
      os << "test " << e.origin << '.' << e.copy << " window " << e.window_start << ' ' << e.window_end << " group "
         << e.group << '\n';
    for (const auto& set : s.distinct_vehicle_sets) {
      os << "distinct";
      for (std::size_t e : set) os << ' ' << s.expanded_tests[e].origin << '.' << s.expanded_tests[e].copy;
      os << '\n';
    }
  }
  return os.str();
}

std::string instance_digest(const Dataset& d) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : serialize_dataset(d)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fleetopt
