#include "oscert/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "oscert/errors.hpp"

namespace oscert {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string trim(std::string_view s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace((unsigned char)s[lo])) ++lo;
  while (hi > lo && std::isspace((unsigned char)s[hi - 1])) --hi;
  return std::string(s.substr(lo, hi - lo));
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha((unsigned char)s[0]) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  return true;
}

struct Entry {
  int line = 0;
  std::string key, value;
};

struct RawSection {
  int line = 0;
  std::vector<Entry> entries;
  std::vector<Entry> jump_lines;  // [potential] only
};

struct RawFile {
  std::string name;
  std::map<std::string, RawSection> sections;

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw InputError(name + ":" + std::to_string(line) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(name + ": " + msg);
  }
  bool has(const std::string& section) const {
    return sections.count(section) != 0;
  }
};

const char* const kKnownSections[] = {"interval",  "params", "coefficients",
                                      "gauge",     "potential", "jacobi"};

RawFile scan_lines(std::string_view text, const std::string& name) {
  RawFile raw;
  raw.name = name;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view rest =
        text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string line(rest);
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        raw.fail(line_no, "section header is missing the closing bracket");
      std::string sec = trim(line.substr(1, line.size() - 2));
      bool known = std::any_of(std::begin(kKnownSections),
                               std::end(kKnownSections),
                               [&](const char* k) { return sec == k; });
      if (!known) raw.fail(line_no, "unknown section [" + sec + "]");
      if (raw.has(sec)) raw.fail(line_no, "duplicate section [" + sec + "]");
      raw.sections[sec].line = line_no;
      current = sec;
      continue;
    }
    if (current.empty())
      raw.fail(line_no, "'" + line + "' appears before any section header");

    if (current == "potential" && line.rfind("jump", 0) == 0 &&
        (line.size() == 4 || std::isspace((unsigned char)line[4]))) {
      raw.sections[current].jump_lines.push_back({line_no, "jump", line});
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      raw.fail(line_no, "expected key = value in section [" + current + "]");
    Entry e{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (e.key.empty())
      raw.fail(line_no, "empty key in section [" + current + "]");
    if (e.value.empty())
      raw.fail(line_no, "key '" + e.key + "' in section [" + current +
                            "] has an empty value");
    for (const Entry& prev : raw.sections[current].entries)
      if (prev.key == e.key)
        raw.fail(line_no, "duplicate key '" + e.key + "' in section [" +
                              current + "]");
    raw.sections[current].entries.push_back(std::move(e));
  }
  return raw;
}

/// Accessor over one section with unknown-key detection.
class SectionReader {
 public:
  SectionReader(const RawFile& raw, const std::string& section)
      : raw_(raw), section_(section) {
    if (raw.has(section))
      for (const Entry& e : raw.sections.at(section).entries)
        remaining_.push_back(&e);
  }

  const Entry* take(const std::string& key) {
    for (auto it = remaining_.begin(); it != remaining_.end(); ++it)
      if ((*it)->key == key) {
        const Entry* e = *it;
        remaining_.erase(it);
        return e;
      }
    return nullptr;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = take(key);
    if (!e)
      raw_.fail("section [" + section_ + "] is missing key '" + key + "'");
    return *e;
  }

  void finish() {
    if (!remaining_.empty())
      raw_.fail(remaining_.front()->line,
                "unknown key '" + remaining_.front()->key + "' in section [" +
                    section_ + "]");
  }

 private:
  const RawFile& raw_;
  std::string section_;
  std::vector<const Entry*> remaining_;
};

double const_entry(const RawFile& raw, const std::string& section,
                   const Entry& e,
                   const std::map<std::string, double>& params) {
  try {
    return const_value(e.value, params);
  } catch (const InputError& err) {
    raw.fail(e.line, "key '" + e.key + "' in section [" + section +
                         "]: " + err.what());
  }
}

Expr expr_entry(const RawFile& raw, const std::string& section,
                const Entry& e,
                const std::map<std::string, double>& params) {
  try {
    return parse_expr(e.value, params);
  } catch (const ParseError& err) {
    raw.fail(e.line, "key '" + e.key + "' in section [" + section + "]: " +
                         err.what() + " (at offset " +
                         std::to_string(err.offset()) + ")");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (value.find(',') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= value.size()) {
      std::size_t comma = value.find(',', pos);
      std::string tok = trim(value.substr(
          pos, comma == std::string::npos ? comma : comma - pos));
      out.push_back(tok);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } else {
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(tok);
  }
  return out;
}

std::vector<double> list_entry(const RawFile& raw, const std::string& section,
                               const Entry& e,
                               const std::map<std::string, double>& params) {
  std::vector<double> out;
  for (const std::string& tok : split_list(e.value)) {
    if (tok.empty())
      raw.fail(e.line, "key '" + e.key + "' in section [" + section +
                           "] has an empty list entry");
    try {
      out.push_back(const_value(tok, params));
    } catch (const InputError& err) {
      raw.fail(e.line, "key '" + e.key + "' in section [" + section +
                           "], entry '" + tok + "': " + err.what());
    }
  }
  return out;
}

int int_entry(const RawFile& raw, const std::string& section, const Entry& e,
              const std::map<std::string, double>& params) {
  double v = const_entry(raw, section, e, params);
  if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 1e9)
    raw.fail(e.line, "key '" + e.key + "' in section [" + section +
                         "] must be an integer, got " + num(v));
  return (int)v;
}

void read_params(const RawFile& raw, ProblemFile& out) {
  if (!raw.has("params")) return;
  for (const Entry& e : raw.sections.at("params").entries) {
    if (!is_identifier(e.key))
      raw.fail(e.line, "parameter name '" + e.key + "' is not an identifier");
    static const char* const kReserved[] = {"x",   "pi",   "sin",  "cos",
                                            "exp", "log",  "sqrt", "abs",
                                            "step"};
    for (const char* r : kReserved)
      if (e.key == r)
        raw.fail(e.line, "parameter name '" + e.key + "' is reserved");
    out.params[e.key] = const_entry(raw, "params", e, out.params);
  }
}

void read_interval(const RawFile& raw, ProblemFile& out) {
  if (!raw.has("interval")) raw.fail("missing section [interval]");
  SectionReader sec(raw, "interval");
  out.a = const_entry(raw, "interval", sec.require("a"), out.params);
  out.b = const_entry(raw, "interval", sec.require("b"), out.params);
  sec.finish();
  if (!std::isfinite(out.a) || !std::isfinite(out.b) || !(out.a < out.b))
    raw.fail("section [interval] needs a < b, got a = " + num(out.a) +
             ", b = " + num(out.b));
}

PiecewiseFunction single_expr_function(const ProblemFile& pf, Expr e,
                                       const std::vector<double>& bks) {
  std::vector<Expr> pieces(bks.size() + 1, e);
  return PiecewiseFunction(pf.a, pf.b, bks, std::move(pieces));
}

void read_coefficients(const RawFile& raw, ProblemFile& out) {
  SectionReader sec(raw, "coefficients");
  Expr p = expr_entry(raw, "coefficients", sec.require("p"), out.params);
  Expr q = expr_entry(raw, "coefficients", sec.require("q"), out.params);
  Expr r = expr_entry(raw, "coefficients", sec.require("r"), out.params);
  Expr s = expr_entry(raw, "coefficients", sec.require("s"), out.params);
  std::vector<double> bks;
  if (const Entry* e = sec.take("breakpoints"))
    bks = list_entry(raw, "coefficients", *e, out.params);
  sec.finish();
  try {
    out.coefficients = std::make_shared<CoefficientSet>(
        single_expr_function(out, p, bks), single_expr_function(out, q, bks),
        single_expr_function(out, r, bks), single_expr_function(out, s, bks));
  } catch (const InputError& err) {
    raw.fail("section [coefficients]: " + std::string(err.what()));
  }
}

void read_gauge(const RawFile& raw, ProblemFile& out) {
  if (!raw.has("gauge")) return;
  if (out.kind == ProblemKind::Jacobi)
    raw.fail(raw.sections.at("gauge").line,
             "section [gauge] does not apply to a [jacobi] problem");
  out.has_gauge = true;
  SectionReader sec(raw, "gauge");
  const Entry* f = sec.take("F_deriv");
  const Entry* g = sec.take("G_deriv");
  sec.finish();
  try {
    if (f) {
      Expr e = expr_entry(raw, "gauge", *f, out.params);
      out.F = GaugeFunction(PiecewiseFunction(out.a, out.b, e), 0.0);
    } else {
      out.F = GaugeFunction::zero_gauge(out.a, out.b);
    }
    if (g) {
      Expr e = expr_entry(raw, "gauge", *g, out.params);
      out.G = GaugeFunction(PiecewiseFunction(out.a, out.b, e), 0.0);
    } else {
      out.G = GaugeFunction::zero_gauge(out.a, out.b);
    }
  } catch (const InputError& err) {
    raw.fail("section [gauge]: " + std::string(err.what()));
  }
}

void read_potential(const RawFile& raw, ProblemFile& out) {
  SectionReader sec(raw, "potential");
  Expr v = expr_entry(raw, "potential", sec.require("V"), out.params);
  sec.finish();

  std::vector<PotentialJump> jumps;
  for (const Entry& e : raw.sections.at("potential").jump_lines) {
    std::istringstream in(e.value);
    std::string word, at_tok, w_tok;
    in >> word >> at_tok >> w_tok;
    std::string extra;
    bool shaped = word == "jump" && at_tok.rfind("at=", 0) == 0 &&
                  w_tok.rfind("weight=", 0) == 0 && !(in >> extra);
    if (!shaped)
      raw.fail(e.line, "jump line must look like 'jump at=<x> weight=<w>'");
    PotentialJump j;
    try {
      j.at = const_value(at_tok.substr(3), out.params);
      j.weight = const_value(w_tok.substr(7), out.params);
    } catch (const InputError& err) {
      raw.fail(e.line, std::string("jump line: ") + err.what());
    }
    jumps.push_back(j);
  }

  try {
    out.potential = std::make_shared<PotentialAntiderivative>(
        PiecewiseFunction(out.a, out.b, v), std::move(jumps));
  } catch (const InputError& err) {
    raw.fail("section [potential]: " + std::string(err.what()));
  }
}

void read_jacobi(const RawFile& raw, ProblemFile& out) {
  if (raw.has("interval"))
    raw.fail(raw.sections.at("interval").line,
             "section [interval] does not apply to a [jacobi] problem");
  SectionReader sec(raw, "jacobi");
  int n0 = int_entry(raw, "jacobi", sec.require("N0"), out.params);
  int n1 = int_entry(raw, "jacobi", sec.require("N1"), out.params);
  std::vector<double> alpha =
      list_entry(raw, "jacobi", sec.require("alpha"), out.params);
  const Entry* ve = sec.take("v");
  const Entry* be = sec.take("beta");
  sec.finish();
  if ((ve != nullptr) == (be != nullptr))
    raw.fail("section [jacobi] needs exactly one of the keys 'v' and 'beta'");
  try {
    if (ve) {
      std::vector<double> v = list_entry(raw, "jacobi", *ve, out.params);
      out.jacobi = std::make_shared<JacobiProblem>(n0, n1, std::move(alpha),
                                                   std::move(v));
    } else {
      std::vector<double> beta = list_entry(raw, "jacobi", *be, out.params);
      out.jacobi = std::make_shared<JacobiProblem>(JacobiProblem::from_beta(
          n0, n1, std::move(alpha), std::move(beta)));
    }
  } catch (const InputError& err) {
    raw.fail("section [jacobi]: " + std::string(err.what()));
  }
  out.a = n0;
  out.b = n1;
}

}  // namespace

double const_value(std::string_view text,
                   const std::map<std::string, double>& params) {
  Expr e = parse_expr(text, params);
  if (e.depends_on_x())
    throw InputError("'" + std::string(text) +
                     "' must be a constant (it depends on x)");
  return e(0.0);
}

CoeffPtr ProblemFile::realized() const {
  switch (kind) {
    case ProblemKind::Coefficients:
      return coefficients;
    case ProblemKind::Potential:
      return build_coefficients(*potential);
    case ProblemKind::Jacobi:
      return embed_on(*jacobi, jacobi->N1);
  }
  return nullptr;
}

ProblemFile parse_problem(std::string_view text, const std::string& name) {
  RawFile raw = scan_lines(text, name);

  ProblemFile out;
  out.path = name;

  int kinds = (int)raw.has("coefficients") + (int)raw.has("potential") +
              (int)raw.has("jacobi");
  if (kinds != 1)
    raw.fail(
        "expected exactly one of the sections [coefficients], [potential], "
        "[jacobi], found " +
        std::to_string(kinds));
  out.kind = raw.has("coefficients") ? ProblemKind::Coefficients
             : raw.has("potential")  ? ProblemKind::Potential
                                     : ProblemKind::Jacobi;

  read_params(raw, out);
  if (out.kind == ProblemKind::Jacobi) {
    read_jacobi(raw, out);
  } else {
    read_interval(raw, out);
    if (out.kind == ProblemKind::Coefficients)
      read_coefficients(raw, out);
    else
      read_potential(raw, out);
  }
  read_gauge(raw, out);
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

}  // namespace oscert
