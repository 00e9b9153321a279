#include "clrlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "clrlab/errors.hpp"
#include "clrlab/format.hpp"

namespace clrlab::config {

ConfigError::ConfigError(int line, std::string key, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line),
      key_(std::move(key)) {}

const Section* Document::find(const std::string& name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

bool is_bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
         c == '/' || c == '+';
}

bool is_key(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Cuts a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (!quoted && (c == '#' || c == ';')) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::optional<Scalar> parse_number(const std::string& tok) {
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (tok.find_first_of(".eE") == std::string::npos) {
    std::int64_t i = 0;
    const auto r = std::from_chars(first, last, i);
    if (r.ec == std::errc() && r.ptr == last) return Scalar(i);
  }
  double d = 0.0;
  const auto r = std::from_chars(first, last, d);
  if (r.ec == std::errc() && r.ptr == last && std::isfinite(d)) return Scalar(d);
  return std::nullopt;
}

Scalar parse_scalar(const std::string& tok, int line, const std::string& key) {
  if (tok.empty()) throw ConfigError(line, key, "missing value for '" + key + "'");
  if (tok.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < tok.size() && tok[i] != '"'; ++i) {
      if (tok[i] == '\\' && i + 1 < tok.size()) ++i;
      out += tok[i];
    }
    if (i != tok.size() - 1) throw ConfigError(line, key, "malformed string for '" + key + "'");
    return out;
  }
  if (tok == "true") return true;
  if (tok == "false") return false;
  if (auto num = parse_number(tok)) return *num;
  if (!std::all_of(tok.begin(), tok.end(), is_bare_char))
    throw ConfigError(line, key, "cannot parse value '" + tok + "' for '" + key + "'");
  return tok;
}

// Splits a list body on commas outside quotes.
std::vector<std::string> split_list(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (quoted && c == '\\' && i + 1 < body.size()) {
      cur += c;
      cur += body[++i];
      continue;
    }
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !parts.empty()) parts.push_back(trim(cur));
  return parts;
}

Value parse_value(const std::string& raw, int line, const std::string& key) {
  const std::string tok = trim(raw);
  if (!tok.empty() && tok.front() == '[') {
    if (tok.back() != ']') throw ConfigError(line, key, "unterminated list for '" + key + "'");
    std::vector<Scalar> items;
    for (const std::string& part : split_list(tok.substr(1, tok.size() - 2))) {
      if (!part.empty() && part.front() == '[')
        throw ConfigError(line, key, "nested lists are not supported ('" + key + "')");
      items.push_back(parse_scalar(part, line, key));
    }
    return {items};
  }
  return {parse_scalar(tok, line, key)};
}

std::string format_scalar(const Scalar& s) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      std::string out = format_double(d);
      if (out.find_first_of(".e") == std::string::npos) out += ".0";
      return out;
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& str) const {
      const bool bare = !str.empty() && std::all_of(str.begin(), str.end(), is_bare_char) &&
                        str != "true" && str != "false" && !parse_number(str);
      if (bare) return str;
      std::string out = "\"";
      for (char c : str) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, s);
}

}  // namespace

std::string format_value(const Value& v) {
  if (!v.is_list()) return format_scalar(std::get<Scalar>(v.data));
  std::string out = "[";
  const auto& items = std::get<std::vector<Scalar>>(v.data);
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + format_scalar(items[i]);
  return out + "]";
}

Document parse_document(const std::string& text) {
  Document doc;
  doc.sections.push_back({"", {}, 0});
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "", "malformed section header '" + s + "'");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (!is_key(name)) throw ConfigError(line, name, "invalid section name '" + name + "'");
      if (doc.find(name)) throw ConfigError(line, name, "duplicate section [" + name + "]");
      doc.sections.push_back({name, {}, line});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    if (!is_key(key)) throw ConfigError(line, key, "invalid key '" + key + "'");
    Section& sec = doc.sections.back();
    for (const Entry& e : sec.entries)
      if (e.key == key) throw ConfigError(line, key, "duplicate key '" + key + "'");
    sec.entries.push_back({key, parse_value(s.substr(eq + 1), line, key), line});
  }
  return doc;
}

std::string serialize(const Document& doc) {
  std::string out;
  for (const Section& sec : doc.sections) {
    if (sec.name.empty() && sec.entries.empty()) continue;
    if (!sec.name.empty()) out += (out.empty() ? "" : "\n") + std::string("[") + sec.name + "]\n";
    for (const Entry& e : sec.entries) out += e.key + " = " + format_value(e.value) + "\n";
  }
  return out;
}

// ---- typed experiment config -----------------------------------------------

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "kernel-check", "levy-khinchin", "gauge-check", "diamagnetic", "bs-count",
      "chain",        "bound-scan",    "lt-scan",     "fk-mc",       "fki-mc"};
  return names;
}

GridSpec ExperimentConfig::grid() const {
  GridSpec g;
  g.d = d;
  g.n = n;
  g.half_width = half_width;
  g.boundary = boundary;
  g.size_cap = size_cap;
  return g;
}

namespace {

std::string qualified(const Section& sec, const Entry& e) {
  return sec.name.empty() ? e.key : sec.name + "." + e.key;
}

[[noreturn]] void type_error(const Section& sec, const Entry& e, const std::string& expected) {
  throw ConfigError(e.line, qualified(sec, e),
                    "'" + qualified(sec, e) + "' must be " + expected + ", got " + format_value(e.value));
}

std::int64_t as_int(const Section& sec, const Entry& e) {
  if (!e.value.is_list())
    if (const auto* i = std::get_if<std::int64_t>(&std::get<Scalar>(e.value.data))) return *i;
  type_error(sec, e, "an integer");
}

double scalar_real(const Scalar& s, bool& ok) {
  ok = true;
  if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&s)) return *d;
  ok = false;
  return 0.0;
}

double as_real(const Section& sec, const Entry& e) {
  if (!e.value.is_list()) {
    bool ok = false;
    const double v = scalar_real(std::get<Scalar>(e.value.data), ok);
    if (ok) return v;
  }
  type_error(sec, e, "a number");
}

std::string as_string(const Section& sec, const Entry& e) {
  if (!e.value.is_list())
    if (const auto* s = std::get_if<std::string>(&std::get<Scalar>(e.value.data))) return *s;
  type_error(sec, e, "a string");
}

std::vector<double> as_real_list(const Section& sec, const Entry& e) {
  if (!e.value.is_list()) return {as_real(sec, e)};
  std::vector<double> out;
  for (const Scalar& s : std::get<std::vector<Scalar>>(e.value.data)) {
    bool ok = false;
    out.push_back(scalar_real(s, ok));
    if (!ok) type_error(sec, e, "a list of numbers");
  }
  return out;
}

std::vector<std::string> as_string_list(const Section& sec, const Entry& e) {
  if (!e.value.is_list()) return {as_string(sec, e)};
  std::vector<std::string> out;
  for (const Scalar& s : std::get<std::vector<Scalar>>(e.value.data)) {
    const auto* str = std::get_if<std::string>(&s);
    if (!str) type_error(sec, e, "a list of strings");
    out.push_back(*str);
  }
  return out;
}

[[noreturn]] void unknown_key(const Section& sec, const Entry& e) {
  const std::string where = sec.name.empty() ? "the root section" : "[" + sec.name + "]";
  throw ConfigError(e.line, qualified(sec, e), "unknown key '" + e.key + "' in " + where);
}

FieldRef read_field(const Section& sec, FieldKind kind) {
  const Entry* name_entry = nullptr;
  for (const Entry& e : sec.entries)
    if (e.key == "name") name_entry = &e;
  if (!name_entry) throw ConfigError(sec.line, sec.name + ".name", "[" + sec.name + "] needs a 'name' key");
  FieldRef ref{as_string(sec, *name_entry), {}};
  const CatalogEntry* entry = nullptr;
  try {
    entry = &catalog_entry(ref.name);
  } catch (const std::out_of_range&) {
    throw ConfigError(name_entry->line, sec.name + ".name",
                      "unknown field name '" + ref.name + "' for key '" + sec.name + ".name'");
  }
  if (entry->kind != kind)
    throw ConfigError(name_entry->line, sec.name + ".name",
                      "field '" + ref.name + "' cannot be used in [" + sec.name + "]");
  for (const Entry& e : sec.entries) {
    if (e.key == "name") continue;
    const auto it = std::find_if(entry->params.begin(), entry->params.end(),
                                 [&](const ParamSpec& p) { return p.name == e.key; });
    if (it == entry->params.end())
      throw ConfigError(e.line, qualified(sec, e),
                        "unknown parameter '" + e.key + "' for field '" + ref.name + "'");
    const double v = as_real(sec, e);
    if (v < it->min_value || v > it->max_value)
      throw ConfigError(e.line, qualified(sec, e),
                        "'" + qualified(sec, e) + "' = " + format_double(v) + " is outside [" +
                            format_double(it->min_value) + ", " + format_double(it->max_value) + "]");
    ref.params[e.key] = v;
  }
  return ref;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(0, key, what);
}

void validate(const ExperimentConfig& c) {
  const auto& cmds = commands();
  require(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(), "command",
          c.command.empty() ? "missing 'command'" : "unknown command '" + c.command + "'");
  try {
    c.grid().validate();
  } catch (const std::exception& e) {
    throw ConfigError(0, "grid", std::string("invalid [grid]: ") + e.what());
  }
  const bool needs_potential = c.command == "bs-count" || c.command == "chain" ||
                               c.command == "bound-scan" || c.command == "lt-scan";
  require(!needs_potential || c.potential, "potential", c.command + " needs a [potential] block");
  require(c.command != "gauge-check" || c.gauge, "gauge", "gauge-check needs a [gauge] block");
  require((c.command != "diamagnetic" && c.command != "fki-mc") || c.magnetic, "magnetic",
          c.command + " needs a [magnetic] block");
  if (c.command == "bs-count" || c.command == "chain")
    require(!c.alphas.empty(), "scan.alphas", c.command + " needs scan.alphas");
  if (c.command == "bound-scan" || c.command == "lt-scan") {
    require(!c.couplings.empty(), "scan.couplings", c.command + " needs scan.couplings");
    require(std::is_sorted(c.couplings.begin(), c.couplings.end()), "scan.couplings",
            "scan.couplings must be ascending");
  }
  if (c.command == "diamagnetic") {
    require(!c.times.empty(), "scan.times", "diamagnetic needs scan.times");
    require(!c.lambdas.empty(), "scan.lambdas", "diamagnetic needs scan.lambdas");
  }
  if (c.command == "kernel-check") require(!c.times.empty(), "scan.times", "kernel-check needs scan.times");
  if (c.command == "levy-khinchin") require(!c.xi.empty(), "scan.xi", "levy-khinchin needs scan.xi");
  for (double a : c.alphas) require(a > 0.0, "scan.alphas", "scan.alphas must be > 0");
  for (double t : c.times) require(t > 0.0, "scan.times", "scan.times must be > 0");
  for (double l : c.lambdas) require(l > 0.0, "scan.lambdas", "scan.lambdas must be > 0");
  for (double k : c.k_exponents) require(k > 0.0, "scan.k", "scan.k must be > 0");
  for (double g : c.couplings) require(g > 0.0, "scan.couplings", "scan.couplings must be > 0");
  require(c.floor >= 0.0, "scan.floor", "scan.floor must be >= 0");
  require(c.paths >= 2, "mc.paths", "mc.paths must be >= 2");
  require(c.steps >= 1, "mc.steps", "mc.steps must be >= 1");
  require(c.t > 0.0, "mc.t", "mc.t must be > 0");
  require(c.u_width > 0.0, "mc.u_width", "mc.u_width must be > 0");
  require(c.x.empty() || static_cast<int>(c.x.size()) == c.d, "mc.x", "mc.x must have d components");
  for (const std::string& f : c.formats)
    require(f == "csv" || f == "json", "output.formats", "unknown output format '" + f + "'");
  try {
    if (c.magnetic) (void)make_magnetic_field(c.magnetic->name, c.magnetic->params, c.d);
    if (c.gauge) (void)make_gauge(c.gauge->name, c.gauge->params, c.d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "magnetic", e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const Document doc = parse_document(text);
  ExperimentConfig c;
  for (const Section& sec : doc.sections) {
    const std::string& s = sec.name;
    if (s == "potential" || s == "magnetic" || s == "gauge") {
      const FieldKind kind = s == "potential"  ? FieldKind::Potential
                             : s == "magnetic" ? FieldKind::Magnetic
                                               : FieldKind::Gauge;
      FieldRef ref = read_field(sec, kind);
      (s == "potential" ? c.potential : s == "magnetic" ? c.magnetic : c.gauge) = std::move(ref);
      continue;
    }
    if (!s.empty() && s != "grid" && s != "scan" && s != "mc" && s != "output")
      throw ConfigError(sec.line, s, "unknown section [" + s + "]");
    for (const Entry& e : sec.entries) {
      const std::string& k = e.key;
      if (s.empty()) {
        if (k == "command") c.command = as_string(sec, e);
        else unknown_key(sec, e);
      } else if (s == "grid") {
        if (k == "d") c.d = static_cast<int>(as_int(sec, e));
        else if (k == "n") c.n = static_cast<int>(as_int(sec, e));
        else if (k == "L") c.half_width = as_real(sec, e);
        else if (k == "cap") c.size_cap = as_int(sec, e);
        else if (k == "boundary") {
          try {
            c.boundary = boundary_from_string(as_string(sec, e));
          } catch (const std::invalid_argument& err) {
            throw ConfigError(e.line, "grid.boundary", err.what());
          }
        } else unknown_key(sec, e);
      } else if (s == "scan") {
        if (k == "couplings") c.couplings = as_real_list(sec, e);
        else if (k == "alphas") c.alphas = as_real_list(sec, e);
        else if (k == "k") c.k_exponents = as_real_list(sec, e);
        else if (k == "times") c.times = as_real_list(sec, e);
        else if (k == "lambdas") c.lambdas = as_real_list(sec, e);
        else if (k == "xi") c.xi = as_real_list(sec, e);
        else if (k == "floor") c.floor = as_real(sec, e);
        else unknown_key(sec, e);
      } else if (s == "mc") {
        if (k == "paths") c.paths = as_int(sec, e);
        else if (k == "steps") c.steps = static_cast<int>(as_int(sec, e));
        else if (k == "seed") {
          const std::int64_t v = as_int(sec, e);
          if (v < 0) throw ConfigError(e.line, "mc.seed", "mc.seed must be >= 0");
          c.seed = static_cast<std::uint64_t>(v);
        } else if (k == "t") c.t = as_real(sec, e);
        else if (k == "x") c.x = as_real_list(sec, e);
        else if (k == "u_width") c.u_width = as_real(sec, e);
        else unknown_key(sec, e);
      } else {
        if (k == "directory") c.output_directory = as_string(sec, e);
        else if (k == "formats") c.formats = as_string_list(sec, e);
        else unknown_key(sec, e);
      }
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(0, "", "cannot read config file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

Value real_list(const std::vector<double>& v) {
  std::vector<Scalar> items(v.begin(), v.end());
  return {items};
}

Value real(double v) { return {Scalar(v)}; }
Value integer(std::int64_t v) { return {Scalar(v)}; }
Value string(const std::string& v) { return {Scalar(v)}; }

void add_field(Document& doc, const std::string& section, const std::optional<FieldRef>& ref) {
  if (!ref) return;
  Section sec{section, {{"name", string(ref->name), 0}}, 0};
  for (const auto& [k, v] : ref->params) sec.entries.push_back({k, real(v), 0});
  doc.sections.push_back(std::move(sec));
}

Document to_document(const ExperimentConfig& c, bool with_output) {
  Document doc;
  doc.sections.push_back({"", {{"command", string(c.command), 0}}, 0});
  doc.sections.push_back({"grid",
                          {{"d", integer(c.d), 0},
                           {"n", integer(c.n), 0},
                           {"L", real(c.half_width), 0},
                           {"boundary", string(to_string(c.boundary)), 0},
                           {"cap", integer(c.size_cap), 0}},
                          0});
  add_field(doc, "potential", c.potential);
  add_field(doc, "magnetic", c.magnetic);
  add_field(doc, "gauge", c.gauge);
  doc.sections.push_back({"scan",
                          {{"couplings", real_list(c.couplings), 0},
                           {"alphas", real_list(c.alphas), 0},
                           {"k", real_list(c.k_exponents), 0},
                           {"times", real_list(c.times), 0},
                           {"lambdas", real_list(c.lambdas), 0},
                           {"xi", real_list(c.xi), 0},
                           {"floor", real(c.floor), 0}},
                          0});
  doc.sections.push_back({"mc",
                          {{"paths", integer(c.paths), 0},
                           {"steps", integer(c.steps), 0},
                           {"seed", integer(static_cast<std::int64_t>(c.seed)), 0},
                           {"t", real(c.t), 0},
                           {"x", real_list(c.x), 0},
                           {"u_width", real(c.u_width), 0}},
                          0});
  if (with_output) {
    std::vector<Scalar> formats(c.formats.begin(), c.formats.end());
    doc.sections.push_back({"output",
                            {{"directory", string(c.output_directory), 0}, {"formats", {formats}, 0}},
                            0});
  }
  return doc;
}

}  // namespace

std::string serialize(const ExperimentConfig& cfg) { return serialize(to_document(cfg, true)); }

std::string config_hash(const ExperimentConfig& cfg) {
  // The output block only says where reports go, so it does not enter the hash.
  const std::string text = serialize(to_document(cfg, false));
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace clrlab::config
