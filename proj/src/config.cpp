#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rdr/error.hpp"
#include "rdr/harness.hpp"

namespace rdr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Reader {
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& key) const {
    throw ParseError(line, "invalid parameter: " + key);
  }

  double number(std::string_view key, std::string_view tok) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail(std::string(key));
    return v;
  }

  std::uint64_t unsigned_int(std::string_view key, std::string_view tok) const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(std::string(key));
    return v;
  }

  // "a, b, c" or an inclusive grid "lo:step:hi".
  Vector numbers(std::string_view key, std::string_view value) const {
    Vector out;
    if (value.find(':') != std::string_view::npos) {
      const auto parts = split(value, ':');
      if (parts.size() != 3) fail(std::string(key));
      const double lo = number(key, parts[0]);
      const double step = number(key, parts[1]);
      const double hi = number(key, parts[2]);
      if (!(step > 0.0) || hi < lo) fail(std::string(key));
      const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
      if (count > 100000) fail(std::string(key));
      for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
      return out;
    }
    for (auto tok : split(value, ',')) out.push_back(number(key, tok));
    return out;
  }

  std::vector<int> integers(std::string_view key, std::string_view value) const {
    std::vector<int> out;
    for (double v : numbers(key, value)) {
      if (v != std::round(v) || v < 1 || v > 1e6) fail(std::string(key));
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  bool boolean(std::string_view key, std::string_view v) const {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(std::string(key));
  }
};

Topology parse_topology(const Reader& rd, std::string_view v) {
  if (v == "line") return Topology::line;
  if (v == "cycle") return Topology::cycle;
  if (v == "geometric") return Topology::geometric;
  rd.fail("topology");
}

ProblemSource parse_source(const Reader& rd, std::string_view v) {
  for (ProblemSource s : {ProblemSource::synthetic, ProblemSource::conditioned, ProblemSource::mtx,
                          ProblemSource::ac_graph, ProblemSource::three_lines,
                          ProblemSource::near_dependent}) {
    std::string name(to_string(s));
    if (v == name) return s;
    std::replace(name.begin(), name.end(), '-', '_');
    if (v == name) return s;
  }
  rd.fail("source");
}

void validate_method(const MethodSpec& m, const ExperimentSpec& spec, std::size_t line) {
  for (double b : m.beta)
    if (!(b >= 0.0 && b < 1.0)) throw ParseError(line, "invalid parameter: beta");
  if (m.method == Method::rrdr)
    for (double b : m.beta)
      if (b != 0.0) throw ParseError(line, "invalid parameter: beta (rrdr has no momentum)");
  SolverConfig c;
  c.method = m.method;
  c.stop = spec.stop;
  for (int r : m.r)
    for (double a : m.alpha)
      for (double p : m.penalty) {
        c.r = r;
        c.alpha = a;
        c.penalty = p;
        c.beta = m.beta.front();
        try {
          c.validate();
        } catch (const Error& e) {
          throw ParseError(line, e.what());
        }
      }
}

}  // namespace

std::string_view to_string(ProblemSource s) {
  switch (s) {
    case ProblemSource::synthetic: return "synthetic";
    case ProblemSource::conditioned: return "conditioned";
    case ProblemSource::mtx: return "mtx";
    case ProblemSource::ac_graph: return "ac-graph";
    case ProblemSource::three_lines: return "three-lines";
    case ProblemSource::near_dependent: return "near-dependent";
  }
  return "?";
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  Reader rd;
  std::string section;
  std::set<std::string> seen;
  std::vector<std::size_t> method_lines;
  bool saw_method_name = true;

  auto close_section = [&]() {
    if (section == "method" && !saw_method_name)
      throw ParseError(method_lines.back(), "missing key 'name' in [method]");
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++rd.line;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(rd.line, "syntax error: unterminated section");
      close_section();
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section == "method") {
        spec.methods.emplace_back();
        method_lines.push_back(rd.line);
        saw_method_name = false;
      } else if (section != "experiment" && section != "problem" && section != "stop") {
        throw ParseError(rd.line, "unknown section [" + section + "]");
      } else if (seen.count("[" + section + "]")) {
        throw ParseError(rd.line, "duplicate section [" + section + "]");
      }
      seen.insert("[" + section + "]");
      if (section == "method") {
        for (auto it = seen.begin(); it != seen.end();)
          it = (it->rfind("method.", 0) == 0) ? seen.erase(it) : std::next(it);
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(rd.line, "syntax error: expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(rd.line, "syntax error: empty key");
    if (value.empty()) throw ParseError(rd.line, "syntax error: empty value for '" + key + "'");
    if (section.empty()) throw ParseError(rd.line, "key '" + key + "' outside a section");
    const std::string qualified = section + "." + key;
    if (!seen.insert(qualified).second) throw ParseError(rd.line, "duplicate key '" + key + "'");

    if (section == "experiment") {
      if (key == "name") {
        spec.name = std::string(value);
        for (char ch : spec.name)
          if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.'))
            rd.fail("name");
      } else if (key == "seed") {
        spec.seed = rd.unsigned_int(key, value);
      } else if (key == "trials") {
        spec.trials = rd.unsigned_int(key, value);
        if (spec.trials < 1) rd.fail(key);
      } else if (key == "trace_every") {
        spec.trace_every = rd.unsigned_int(key, value);
      } else if (key == "direction_metrics") {
        spec.direction_metrics = rd.boolean(key, value);
      } else if (key == "out") {
        spec.out = std::string(value);
      } else if (key == "threads") {
        spec.threads = rd.unsigned_int(key, value);
      } else {
        throw ParseError(rd.line, "unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "stop") {
      if (key == "rse_tol") {
        spec.stop.rse_tol = rd.number(key, value);
        if (!(spec.stop.rse_tol > 0.0)) rd.fail(key);
      } else if (key == "max_row_actions") {
        spec.stop.max_row_actions = value == "none" ? kUnbounded : rd.unsigned_int(key, value);
      } else if (key == "max_iterations") {
        spec.stop.max_iterations = value == "none" ? kUnbounded : rd.unsigned_int(key, value);
      } else {
        throw ParseError(rd.line, "unknown key '" + key + "' in [stop]");
      }
      if (spec.stop.max_row_actions == kUnbounded && spec.stop.max_iterations == kUnbounded)
        throw ParseError(rd.line, "invalid parameter: stop rule needs a finite budget");
    } else if (section == "problem") {
      ProblemSpec& p = spec.problem;
      if (key == "source") {
        p.source = parse_source(rd, value);
      } else if (key == "rows") {
        p.rows = rd.unsigned_int(key, value);
        if (p.rows < 1) rd.fail(key);
      } else if (key == "cols") {
        p.cols = rd.unsigned_int(key, value);
        if (p.cols < 1) rd.fail(key);
      } else if (key == "ratio") {
        p.ratio = rd.number(key, value);
        if (!(p.ratio > 0.0)) rd.fail(key);
      } else if (key == "path") {
        p.path = std::string(value);
      } else if (key == "topology") {
        p.topology = parse_topology(rd, value);
      } else if (key == "nodes") {
        p.nodes = rd.unsigned_int(key, value);
        if (p.nodes < 2) rd.fail(key);
      } else if (key == "radius") {
        p.radius = rd.number(key, value);
      } else if (key == "values") {
        p.values.clear();
        for (auto tok : split(value, ',')) p.values.push_back(rd.number(key, tok));
      } else {
        throw ParseError(rd.line, "unknown key '" + key + "' in [problem]");
      }
    } else {
      MethodSpec& m = spec.methods.back();
      if (key == "name") {
        try {
          m.method = parse_method(value);
        } catch (const Error&) {
          rd.fail("name");
        }
        saw_method_name = true;
      } else if (key == "label") {
        m.label = std::string(value);
      } else if (key == "r") {
        m.r = rd.integers(key, value);
      } else if (key == "alpha") {
        m.alpha = rd.numbers(key, value);
        for (double a : m.alpha)
          if (!(a > 0.0 && a < 1.0)) rd.fail(key);
      } else if (key == "beta") {
        m.beta = rd.numbers(key, value);
        for (double b : m.beta)
          if (!(b >= 0.0 && b < 1.0)) rd.fail(key);
      } else if (key == "penalty") {
        m.penalty = rd.numbers(key, value);
        for (double p : m.penalty)
          if (!(p > 0.0)) rd.fail(key);
      } else if (key == "mandatory") {
        m.mandatory = rd.boolean(key, value);
      } else {
        throw ParseError(rd.line, "unknown key '" + key + "' in [method]");
      }
    }
  }
  close_section();
  if (spec.methods.empty()) throw ParseError(rd.line, "no [method] section");
  if (spec.problem.source == ProblemSource::mtx && spec.problem.path.empty())
    throw ParseError(rd.line, "invalid parameter: path (required for source = mtx)");
  if (!spec.problem.values.empty() && spec.problem.values.size() != spec.problem.nodes)
    throw ParseError(rd.line, "invalid parameter: values (expected one per node)");
  for (std::size_t i = 0; i < spec.methods.size(); ++i)
    validate_method(spec.methods[i], spec, method_lines[i]);
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentSpec spec;
  try {
    spec = parse_config(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + std::string(e.what()).substr(
                                                      std::string(e.what()).find(": ") + 2));
  }
  if (spec.problem.source == ProblemSource::mtx && spec.problem.path.is_relative())
    spec.problem.path = path.parent_path() / spec.problem.path;
  return spec;
}

}  // namespace rdr
