#include "nhcurv/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "catalog_data.hpp"
#include "nhcurv/errors.hpp"

namespace nhcurv {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

struct Line {
  std::size_t number;
  std::string text;
};

class SystemParser {
 public:
  SystemParser(std::string_view text, std::string source)
      : source_(std::move(source)) {
    std::size_t number = 0;
    std::string section;
    std::istringstream is{std::string(text)};
    for (std::string raw; std::getline(is, raw);) {
      ++number;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(number, "malformed section header");
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        static const char* kKnown[] = {"chart", "params", "metric", "frame",
                                       "levels", "singular", "sample"};
        if (std::find(std::begin(kKnown), std::end(kKnown), section) == std::end(kKnown)) {
          fail(number, "unknown section [" + section + "]");
        }
        if (sections_.count(section)) fail(number, "duplicate section [" + section + "]");
        sections_[section];
        continue;
      }
      if (section.empty()) fail(number, "content outside of a section");
      sections_[section].push_back({number, line});
    }
  }

  SystemDef parse(const std::string& id) {
    SystemDef sys;
    sys.id = id;
    for (const char* required : {"chart", "metric", "frame", "levels"}) {
      if (!sections_.count(required)) fail(0, std::string("missing section [") + required + "]");
    }
    parse_chart(sys);
    parse_params(sys);
    const expr::Symbols symbols = sys.symbols();
    parse_metric(sys, symbols);
    parse_frame(sys, symbols);
    parse_levels(sys);
    parse_singular(sys, symbols);
    parse_sample(sys, symbols);
    try {
      validate_shape(sys);
    } catch (const ValidationError& e) {
      throw ValidationError(source_ + ": " + e.what());
    }
    return sys;
  }

 private:
  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw FileParseError(source_, line, what);
  }

  expr::Expr expression(const Line& l, const std::string& text,
                        const expr::Symbols& symbols) const {
    try {
      return expr::parse(text, symbols);
    } catch (const ParseError& e) {
      fail(l.number, std::string(e.what()) + " in '" + text + "'");
    }
  }

  double constant(const Line& l, const std::string& text, const SystemDef& sys) const {
    expr::Symbols s;
    for (const auto& p : sys.params) s.params.push_back(p.name);
    const expr::Expr e = expression(l, text, s);
    try {
      return expr::eval(e, {}, sys.param_values());
    } catch (const Error& err) {
      fail(l.number, err.what());
    }
  }

  std::size_t index(const Line& l, const std::string& text, std::size_t limit) const {
    std::size_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoul(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      fail(l.number, "expected an index, found '" + text + "'");
    }
    if (v < 1 || v > limit) {
      fail(l.number, "index " + text + " out of range 1.." + std::to_string(limit));
    }
    return v - 1;
  }

  const std::vector<Line>& lines(const std::string& section) const {
    static const std::vector<Line> kEmpty;
    auto it = sections_.find(section);
    return it == sections_.end() ? kEmpty : it->second;
  }

  void parse_chart(SystemDef& sys) {
    for (const auto& l : lines("chart")) {
      for (const auto& w : words(l.text)) {
        const bool ident = (std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_') &&
                           std::all_of(w.begin(), w.end(), [](char c) {
                             return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                           });
        if (!ident) fail(l.number, "invalid coordinate name '" + w + "'");
        if (std::find(sys.chart.begin(), sys.chart.end(), w) != sys.chart.end()) {
          fail(l.number, "duplicate coordinate '" + w + "'");
        }
        sys.chart.push_back(w);
      }
    }
    if (sys.chart.empty()) fail(0, "empty [chart]");
  }

  void parse_params(SystemDef& sys) {
    for (const auto& l : lines("params")) {
      const auto eq = l.text.find('=');
      if (eq == std::string::npos) fail(l.number, "expected 'name = value'");
      ParamSpec p;
      p.name = trim(std::string_view(l.text).substr(0, eq));
      if (std::find(sys.chart.begin(), sys.chart.end(), p.name) != sys.chart.end() ||
          sys.param_index(p.name)) {
        fail(l.number, "duplicate name '" + p.name + "'");
      }
      std::string rest = trim(std::string_view(l.text).substr(eq + 1));
      std::string range;
      if (auto in = rest.find(" in "); in != std::string::npos) {
        range = trim(std::string_view(rest).substr(in + 4));
        rest = trim(std::string_view(rest).substr(0, in));
      }
      p.value = constant(l, rest, sys);
      p.lo = p.hi = p.value;
      if (!range.empty()) std::tie(p.lo, p.hi) = interval(l, range, sys);
      sys.params.push_back(p);
    }
  }

  std::pair<double, double> interval(const Line& l, const std::string& text,
                                     const SystemDef& sys) const {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
      fail(l.number, "expected an interval [lo, hi]");
    }
    const auto parts = split(text.substr(1, text.size() - 2), ',');
    if (parts.size() != 2) fail(l.number, "expected an interval [lo, hi]");
    const double lo = constant(l, parts[0], sys);
    const double hi = constant(l, parts[1], sys);
    if (!(lo <= hi)) fail(l.number, "empty interval");
    return {lo, hi};
  }

  void parse_metric(SystemDef& sys, const expr::Symbols& symbols) {
    const std::size_t n = sys.dim();
    std::vector<std::vector<int>> given(n, std::vector<int>(n, 0));
    sys.metric.assign(n, std::vector<expr::Expr>(n, expr::Expr::constant(0.0)));
    for (const auto& l : lines("metric")) {
      const auto eq = l.text.find('=');
      if (eq == std::string::npos) fail(l.number, "expected 'i j = expr'");
      const auto ij = words(l.text.substr(0, eq));
      if (ij.size() != 2) fail(l.number, "expected 'i j = expr'");
      const std::size_t i = index(l, ij[0], n);
      const std::size_t j = index(l, ij[1], n);
      if (given[i][j]) fail(l.number, "metric entry given twice");
      const expr::Expr e = expression(l, trim(l.text.substr(eq + 1)), symbols);
      if (given[j][i] && !(sys.metric[j][i] == e)) {
        fail(l.number, "metric entry differs from its transpose");
      }
      sys.metric[i][j] = sys.metric[j][i] = e;
      given[i][j] = 1;
    }
  }

  void parse_frame(SystemDef& sys, const expr::Symbols& symbols) {
    const std::size_t n = sys.dim();
    std::vector<std::vector<expr::Expr>> rows(n);
    std::vector<int> seen(n, 0);
    for (const auto& l : lines("frame")) {
      const auto eq = l.text.find('=');
      if (eq == std::string::npos) fail(l.number, "expected 'a = expr, ...'");
      const std::size_t a = index(l, trim(l.text.substr(0, eq)), n);
      if (seen[a]) fail(l.number, "frame row given twice");
      const auto parts = split(l.text.substr(eq + 1), ',');
      if (parts.size() != n) {
        fail(l.number, "frame row needs " + std::to_string(n) + " components, found " +
                           std::to_string(parts.size()));
      }
      for (const auto& p : parts) rows[a].push_back(expression(l, p, symbols));
      seen[a] = 1;
    }
    std::size_t count = 0;
    while (count < n && seen[count]) ++count;
    for (std::size_t a = count; a < n; ++a) {
      if (seen[a]) fail(0, "frame rows must be numbered consecutively from 1");
    }
    rows.resize(count);
    sys.frame = std::move(rows);
  }

  void parse_levels(SystemDef& sys) {
    for (const auto& l : lines("levels")) {
      for (const auto& w : words(l.text)) sys.levels.push_back(index(l, w, sys.dim()) + 1);
    }
  }

  void parse_singular(SystemDef& sys, const expr::Symbols& symbols) {
    for (const auto& l : lines("singular")) {
      sys.singular.push_back(expression(l, l.text, symbols));
      sys.singular_text.push_back(l.text);
    }
  }

  void parse_sample(SystemDef& sys, const expr::Symbols& symbols) {
    for (const auto& l : lines("sample")) {
      if (l.text.rfind("guard ", 0) == 0) {
        const auto ge = l.text.find(">=");
        if (ge == std::string::npos) fail(l.number, "expected 'guard expr >= bound'");
        SampleGuard g;
        g.text = trim(l.text.substr(6, ge - 6));
        g.expr = expression(l, g.text, symbols);
        g.bound = constant(l, trim(l.text.substr(ge + 2)), sys);
        sys.sample_guards.push_back(std::move(g));
        continue;
      }
      const auto in = l.text.find(" in ");
      if (in == std::string::npos) fail(l.number, "expected 'name in [lo, hi]'");
      const std::string name = trim(l.text.substr(0, in));
      auto it = std::find(sys.chart.begin(), sys.chart.end(), name);
      if (it == sys.chart.end()) fail(l.number, "unknown coordinate '" + name + "'");
      SampleInterval iv;
      iv.coord = static_cast<std::size_t>(it - sys.chart.begin());
      std::tie(iv.lo, iv.hi) = interval(l, trim(l.text.substr(in + 4)), sys);
      sys.sample_box.push_back(iv);
    }
  }

  std::string source_;
  std::map<std::string, std::vector<Line>> sections_;
};

}  // namespace

SystemDef parse_system(std::string_view text, const std::string& source,
                       const std::string& id) {
  return SystemParser(text, source).parse(id.empty() ? source : id);
}

std::vector<std::string> builtin_ids() {
  std::vector<std::string> ids;
  for (const auto& entry : catalog_data::kSystems) ids.emplace_back(entry.id);
  return ids;
}

std::string_view builtin_text(const std::string& id) {
  for (const auto& entry : catalog_data::kSystems) {
    if (id == entry.id) return entry.text;
  }
  throw UsageError("unknown built-in system '" + id + "'");
}

SystemDef load_system(const std::string& id_or_path) {
  for (const auto& entry : catalog_data::kSystems) {
    if (id_or_path == entry.id) return parse_system(entry.text, id_or_path, id_or_path);
  }
  std::ifstream in(id_or_path);
  if (!in) {
    throw UsageError("'" + id_or_path + "' is neither a built-in system nor a readable file");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str(), id_or_path);
}

}  // namespace nhcurv
