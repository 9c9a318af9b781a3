#include "fleetopt/linmodel.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace fleetopt {

std::string to_string(const Violation& v) {
  return v.tag + ": " + fleetopt::to_string(v.lhs) + " " + sense_symbol(v.sense) + " " + fleetopt::to_string(v.rhs);
}

CheckResult check_assignment(const LinearModel& model, std::span<const std::uint8_t> values) {
  if (values.size() != model.variables().size())
    throw std::invalid_argument("assignment has " + std::to_string(values.size()) + " values for " +
                                std::to_string(model.variables().size()) + " variables");
  auto value_of = [&](const VariableKey& key) { return values[*model.index_of(key)] ? 1 : 0; };
  CheckResult result;
  for (const auto& c : model.constraints()) {
    Rational lhs{0};
    for (const auto& t : c.terms)
      if (value_of(t.variable)) lhs += t.coefficient;
    bool ok = c.sense == Sense::Le ? lhs <= c.rhs : (c.sense == Sense::Ge ? lhs >= c.rhs : lhs == c.rhs);
    if (!ok) {
      result.feasible = false;
      result.violations.push_back({c.tag, lhs, c.sense, c.rhs});
    }
  }
  if (model.objective()) {
    Rational obj{0};
    for (const auto& t : model.objective()->terms)
      if (value_of(t.variable)) obj += t.coefficient;
    result.objective = obj;
  }
  return result;
}

std::vector<std::uint8_t> to_dense(const LinearModel& model, const std::map<VariableKey, int>& values) {
  std::vector<std::uint8_t> dense(model.variables().size(), 0);
  for (std::size_t k = 0; k < dense.size(); ++k) {
    auto it = values.find(model.variables()[k]);
    if (it == values.end())
      throw std::invalid_argument("assignment is missing variable " + variable_name(model.variables()[k]));
    dense[k] = it->second != 0 ? 1 : 0;
  }
  return dense;
}

std::map<VariableKey, int> to_sparse(const LinearModel& model, std::span<const std::uint8_t> values) {
  std::map<VariableKey, int> out;
  for (std::size_t k = 0; k < values.size(); ++k) out.emplace(model.variables()[k], values[k] ? 1 : 0);
  return out;
}

CheckResult check_assignment(const LinearModel& model, const std::map<VariableKey, int>& values) {
  auto dense = to_dense(model, values);
  return check_assignment(model, dense);
}

namespace {

void write_terms(std::ostringstream& os, const std::vector<LinearTerm>& terms, const LinearModel& model) {
  if (terms.empty()) {
    os << "0 " << variable_name(model.variables().front());
    return;
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Rational& c = terms[k].coefficient;
    if (k > 0 && k % 10 == 0) os << "\n  ";
    if (k == 0) {
      os << to_decimal_string(c);
    } else {
      os << (k % 10 == 0 ? "" : " ") << (c < 0 ? "- " : "+ ") << to_decimal_string(c < 0 ? -c : c);
    }
    os << ' ' << variable_name(terms[k].variable);
  }
}

std::string pad8(const std::string& s) { return s.size() >= 8 ? s : s + std::string(8 - s.size(), ' '); }

std::string code(char prefix, std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%07zu", prefix, k + 1);
  return buf;
}

}  // namespace

std::string export_lp(const LinearModel& model) {
  std::ostringstream os;
  os << "\\ fleetopt 0-1 model: " << model.variables().size() << " variables, " << model.constraints().size()
     << " constraints\n";
  const auto& obj = model.objective();
  os << (obj && obj->sense == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: ";
  write_terms(os, obj ? obj->terms : std::vector<LinearTerm>{}, model);
  os << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    os << ' ' << c.tag << ": ";
    write_terms(os, c.terms, model);
    os << ' ' << sense_symbol(c.sense) << ' ' << to_decimal_string(c.rhs) << '\n';
  }
  os << "Binary\n";
  for (const auto& v : model.variables()) os << ' ' << variable_name(v) << '\n';
  os << "End\n";
  return os.str();
}

std::string export_mps(const LinearModel& model, std::string_view name) {
  std::ostringstream os;
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  os << "* fleetopt 0-1 model: " << vars.size() << " variables, " << rows.size() << " constraints\n";
  for (std::size_t r = 0; r < rows.size(); ++r) os << "* " << code('R', r) << ' ' << rows[r].tag << '\n';
  for (std::size_t k = 0; k < vars.size(); ++k) os << "* " << code('C', k) << ' ' << variable_name(vars[k]) << '\n';
  os << "NAME          " << name << '\n';
  const auto& obj = model.objective();
  if (obj && obj->sense == ObjectiveSense::Maximize) os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n N  OBJ\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    char type = rows[r].sense == Sense::Le ? 'L' : (rows[r].sense == Sense::Ge ? 'G' : 'E');
    os << ' ' << type << "  " << code('R', r) << '\n';
  }

  std::vector<std::vector<std::pair<std::string, Rational>>> columns(vars.size());
  if (obj)
    for (const auto& t : obj->terms) columns[*model.index_of(t.variable)].emplace_back("OBJ", t.coefficient);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& t : rows[r].terms) columns[*model.index_of(t.variable)].emplace_back(code('R', r), t.coefficient);
  // A column must appear in COLUMNS before BOUNDS may name it.
  for (auto& col : columns)
    if (col.empty()) col.emplace_back("OBJ", Rational(0));

  os << "COLUMNS\n";
  for (std::size_t k = 0; k < vars.size(); ++k)
    for (const auto& [row, value] : columns[k])
      os << "    " << pad8(code('C', k)) << "  " << pad8(row) << "  " << to_decimal_string(value) << '\n';
  os << "RHS\n";
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].rhs != 0)
      os << "    " << pad8("RHS") << "  " << pad8(code('R', r)) << "  " << to_decimal_string(rows[r].rhs) << '\n';
  os << "BOUNDS\n";
  for (std::size_t k = 0; k < vars.size(); ++k) os << " BV " << pad8("BND") << "  " << code('C', k) << '\n';
  os << "ENDATA\n";
  return os.str();
}

namespace {

class LpReader {
 public:
  explicit LpReader(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
      if (auto c = line.find('\\'); c != std::string::npos) line.resize(c);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back(tok);
    }
  }

  LinearModel run() {
    std::optional<ObjectiveSense> sense;
    std::vector<std::pair<std::string, std::vector<std::string>>> rows;
    std::vector<std::string> objective;
    std::vector<std::string> binaries;
    enum { None, Obj, Rows, Bin, Done } state = None;
    for (std::size_t k = 0; k < tokens_.size(); ++k) {
      std::string lower = tokens_[k];
      for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (lower == "maximize" || lower == "minimize") {
        sense = lower == "maximize" ? ObjectiveSense::Maximize : ObjectiveSense::Minimize;
        state = Obj;
      } else if (lower == "subject" && k + 1 < tokens_.size()) {
        ++k;
        state = Rows;
      } else if (lower == "binary" || lower == "binaries") {
        state = Bin;
      } else if (lower == "end") {
        state = Done;
      } else if (state == Obj) {
        if (tokens_[k].back() != ':') objective.push_back(tokens_[k]);
      } else if (state == Rows) {
        if (tokens_[k].back() == ':') rows.push_back({tokens_[k].substr(0, tokens_[k].size() - 1), {}});
        else if (rows.empty()) throw LpParseError("constraint without a name");
        else rows.back().second.push_back(tokens_[k]);
      } else if (state == Bin) {
        binaries.push_back(tokens_[k]);
      } else {
        throw LpParseError("unexpected token '" + tokens_[k] + "'");
      }
    }
    if (state != Done) throw LpParseError("missing End");

    LinearModel model;
    std::vector<VariableKey> keys;
    for (const auto& b : binaries) keys.push_back(key(b));
    model.add_variables(keys);
    for (auto& [tag, toks] : rows) {
      if (toks.size() < 2) throw LpParseError("row '" + tag + "' is truncated");
      std::string rel = toks[toks.size() - 2];
      Sense s = rel == "<=" ? Sense::Le : rel == ">=" ? Sense::Ge : rel == "=" ? Sense::Eq : throw LpParseError("bad sense '" + rel + "'");
      LinearExpr lhs = terms(std::vector<std::string>(toks.begin(), toks.end() - 2));
      LinearExpr rhs(number(toks.back()));
      model.add_constraint(make_constraint(lhs, s, rhs, tag));
    }
    if (sense) {
      LinearExpr e = terms(objective);
      bool all_zero = e.coefficients().empty();
      if (!all_zero || *sense == ObjectiveSense::Maximize) {
        Objective o{*sense, {}};
        for (const auto& [k, c] : e.coefficients()) o.terms.push_back({c, k});
        model.set_objective(std::move(o));
      }
    }
    return model;
  }

 private:
  static VariableKey key(const std::string& name) {
    auto k = parse_variable_name(name);
    if (!k) throw LpParseError("unknown variable name '" + name + "'");
    return *k;
  }

  static Rational number(const std::string& s) {
    try {
      return parse_rational(s);
    } catch (const std::exception&) {
      throw LpParseError("bad number '" + s + "'");
    }
  }

  static LinearExpr terms(const std::vector<std::string>& toks) {
    LinearExpr e;
    Rational sign{1};
    std::optional<Rational> coef;
    for (const auto& t : toks) {
      if (t == "+") {
        sign = 1;
      } else if (t == "-") {
        sign = -1;
      } else if (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '-' || t[0] == '.') {
        coef = number(t);
      } else {
        e += LinearExpr::var(key(t), sign * coef.value_or(Rational(1)));
        sign = 1;
        coef.reset();
      }
    }
    return e;
  }

  std::vector<std::string> tokens_;
};

}  // namespace

LinearModel parse_lp(std::string_view text) { return LpReader(text).run(); }

}  // namespace fleetopt
