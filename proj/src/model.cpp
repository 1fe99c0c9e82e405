#include "jetlag/model.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "jetlag/errors.hpp"

namespace jetlag {

namespace {

constexpr std::uint32_t kProbeSeed = 0x1f2e3d4cu;
constexpr int kProbeCount = 8;
constexpr double kDegeneracyTol = 1e-10;

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

ExprPtr zero_expr() {
  static const ExprPtr zero = [] {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprKind::Constant;
    node->constant = 0.0;
    return ExprPtr(node);
  }();
  return zero;
}

// Parses "h_1_2" style keys; returns false when the key does not match.
bool parse_indexed_key(const std::string& key, char prefix, int& a, int& b) {
  if (key.size() < 5 || key[0] != prefix || key[1] != '_') return false;
  std::size_t second = key.find('_', 2);
  if (second == std::string::npos || second + 1 >= key.size()) return false;
  for (std::size_t i = 2; i < key.size(); ++i) {
    if (i != second && !std::isdigit(static_cast<unsigned char>(key[i]))) return false;
  }
  a = std::atoi(key.substr(2, second - 2).c_str());
  b = std::atoi(key.substr(second + 1).c_str());
  return true;
}

bool parse_interval(const std::string& value, double& lo, double& hi) {
  std::string v = strip(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') return false;
  std::string inner = v.substr(1, v.size() - 2);
  std::size_t comma = inner.find(',');
  if (comma == std::string::npos) return false;
  try {
    lo = std::stod(strip(inner.substr(0, comma)));
    hi = std::stod(strip(inner.substr(comma + 1)));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

double det_lu(std::vector<double> m, int dim) {
  double det = 1.0;
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r = c + 1; r < dim; ++r) {
      if (std::abs(m[static_cast<std::size_t>(r) * dim + c]) >
          std::abs(m[static_cast<std::size_t>(piv) * dim + c]))
        piv = r;
    }
    if (piv != c) {
      for (int k = 0; k < dim; ++k) {
        std::swap(m[static_cast<std::size_t>(c) * dim + k], m[static_cast<std::size_t>(piv) * dim + k]);
      }
      det = -det;
    }
    double d = m[static_cast<std::size_t>(c) * dim + c];
    if (d == 0.0) return 0.0;
    det *= d;
    for (int r = c + 1; r < dim; ++r) {
      double f = m[static_cast<std::size_t>(r) * dim + c] / d;
      for (int k = c; k < dim; ++k) {
        m[static_cast<std::size_t>(r) * dim + k] -= f * m[static_cast<std::size_t>(c) * dim + k];
      }
    }
  }
  return det;
}

struct RawEntry {
  std::string value;
  int line = 0;
};

}  // namespace

ModelDef load_model(const std::string& document) {
  std::istringstream in(document);
  std::string line;
  std::string section;
  int line_no = 0;

  int p = -1, n = -1;
  std::string name, description;
  std::map<std::string, RawEntry> space_intervals;  // key -> interval text
  std::map<std::pair<int, int>, RawEntry> h_raw, g_raw, u_raw;
  RawEntry f_raw;
  bool have_f = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string s = strip(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("unterminated section header", line_no, 1);
      section = strip(s.substr(1, s.size() - 2));
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1);
    std::string key = strip(s.substr(0, eq));
    std::string value = strip(s.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no, 1);

    if (section == "space") {
      if (key == "p") {
        p = std::atoi(value.c_str());
      } else if (key == "n") {
        n = std::atoi(value.c_str());
      } else if (key == "name") {
        name = strip_quotes(value);
      } else if (key == "description") {
        description = strip_quotes(value);
      } else if ((key[0] == 't' || key[0] == 'x') && key.size() > 1) {
        space_intervals[key] = {value, line_no};
      } else {
        throw ParseError("unknown key '" + key + "' in [space]", line_no, 1);
      }
    } else if (section == "temporal_metric") {
      int a, b;
      if (!parse_indexed_key(key, 'h', a, b)) {
        throw ParseError("expected 'h_<a>_<b>' in [temporal_metric], got '" + key + "'", line_no, 1);
      }
      h_raw[{a, b}] = {strip_quotes(value), line_no};
    } else if (section == "spatial_metric") {
      int a, b;
      if (!parse_indexed_key(key, 'g', a, b)) {
        throw ParseError("expected 'g_<i>_<j>' in [spatial_metric], got '" + key + "'", line_no, 1);
      }
      g_raw[{a, b}] = {strip_quotes(value), line_no};
    } else if (section == "potential") {
      int a, b;
      if (!parse_indexed_key(key, 'U', a, b)) {
        throw ParseError("expected 'U_<alpha>_<i>' in [potential], got '" + key + "'", line_no, 1);
      }
      u_raw[{a, b}] = {strip_quotes(value), line_no};
    } else if (section == "scalar") {
      if (key != "F") throw ParseError("expected 'F' in [scalar], got '" + key + "'", line_no, 1);
      f_raw = {strip_quotes(value), line_no};
      have_f = true;
    } else if (section.empty()) {
      throw ParseError("entry before any section header", line_no, 1);
    } else {
      throw ParseError("unknown section '" + section + "'", line_no, 1);
    }
  }

  if (p < 1 || n < 1) throw ModelError("model must declare p >= 1 and n >= 1 in [space]");

  ModelDef model;
  model.p = p;
  model.n = n;
  model.name = name;
  model.description = description;
  model.probes.t.assign(static_cast<std::size_t>(p), {-1.0, 1.0});
  model.probes.x.assign(static_cast<std::size_t>(n), {-1.0, 1.0});

  for (const auto& [key, entry] : space_intervals) {
    double lo, hi;
    if (!parse_interval(entry.value, lo, hi) || !(lo < hi)) {
      throw ParseError("expected '" + key + " = [a, b]' with a < b", entry.line, 1);
    }
    int idx = std::atoi(key.c_str() + 1);
    bool temporal = key[0] == 't';
    int bound = temporal ? p : n;
    if (idx < 1 || idx > bound) {
      throw ParseError("probe domain coordinate '" + key + "' out of range", entry.line, 1);
    }
    auto& slot = temporal ? model.probes.t[static_cast<std::size_t>(idx - 1)]
                          : model.probes.x[static_cast<std::size_t>(idx - 1)];
    slot = {lo, hi};
  }

  auto parse_entry = [&](const RawEntry& entry, const char* what) -> ExprPtr {
    try {
      return parse_expression(entry.value, p, n);
    } catch (const ParseError& err) {
      std::ostringstream os;
      os << what << " (model line " << entry.line << "): " << err.what();
      throw ParseError(os.str(), entry.line, err.col);
    }
  };

  auto load_metric = [&](const std::map<std::pair<int, int>, RawEntry>& raw, int dim,
                         const char* label, bool temporal) -> std::vector<ExprPtr> {
    std::vector<ExprPtr> out(static_cast<std::size_t>(dim) * dim, zero_expr());
    for (const auto& [ij, entry] : raw) {
      auto [a, b] = ij;
      if (a < 1 || a > dim || b < 1 || b > dim) {
        throw ModelError(std::string(label) + " index (" + std::to_string(a) + "," +
                         std::to_string(b) + ") out of range");
      }
      ExprPtr e = parse_entry(entry, label);
      std::size_t fwd = static_cast<std::size_t>(a - 1) * dim + (b - 1);
      std::size_t rev = static_cast<std::size_t>(b - 1) * dim + (a - 1);
      if (a != b && raw.count({b, a})) {
        // Both triangle entries present: they must agree.
        ExprPtr other = parse_entry(raw.at({b, a}), label);
        if (print_expression(e) != print_expression(other)) {
          throw ModelError(std::string(label) + " symmetry conflict at (" + std::to_string(a) +
                           "," + std::to_string(b) + ")");
        }
      }
      out[fwd] = e;
      out[rev] = e;
    }
    for (const auto& e : out) {
      bool bad = temporal ? references_spatial(e) : references_temporal(e);
      if (bad) {
        throw ModelError(std::string(label) + " violates autonomy: " +
                         (temporal ? "temporal metric depends on x" : "spatial metric depends on t"));
      }
    }
    return out;
  };

  model.h = load_metric(h_raw, p, "temporal_metric", true);
  model.g = load_metric(g_raw, n, "spatial_metric", false);

  model.U.assign(static_cast<std::size_t>(p) * n, nullptr);
  for (const auto& [ai, entry] : u_raw) {
    auto [a, i] = ai;
    if (a < 1 || a > p || i < 1 || i > n) {
      throw ModelError("potential index (" + std::to_string(a) + "," + std::to_string(i) +
                       ") out of range");
    }
    model.U[static_cast<std::size_t>(a - 1) * n + (i - 1)] = parse_entry(entry, "potential");
  }
  if (have_f) model.F = parse_entry(f_raw, "scalar");

  // Nondegeneracy probes: fixed-seed pseudo-random points in the probe
  // domain, order-0 jet evaluation, |det| threshold.
  std::mt19937 rng(kProbeSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int probe = 0; probe < kProbeCount; ++probe) {
    JetEnv env;
    for (int a = 0; a < p; ++a) {
      auto [lo, hi] = model.probes.t[static_cast<std::size_t>(a)];
      env.t.push_back(Jet::constant(lo + (hi - lo) * unit(rng), p + n, 0));
    }
    for (int i = 0; i < n; ++i) {
      auto [lo, hi] = model.probes.x[static_cast<std::size_t>(i)];
      env.x.push_back(Jet::constant(lo + (hi - lo) * unit(rng), p + n, 0));
    }
    std::vector<double> hm(static_cast<std::size_t>(p) * p), gm(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        hm[static_cast<std::size_t>(a) * p + b] = eval_expression(model.h_at(a, b), env).value();
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gm[static_cast<std::size_t>(i) * n + j] = eval_expression(model.g_at(i, j), env).value();
      }
    }
    if (std::abs(det_lu(hm, p)) <= kDegeneracyTol) {
      throw ModelError("temporal metric degenerate at a probe point (|det h| <= 1e-10)");
    }
    if (std::abs(det_lu(gm, n)) <= kDegeneracyTol) {
      throw ModelError("spatial metric degenerate at a probe point (|det g| <= 1e-10)");
    }
  }

  return model;
}

ModelDef load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

}  // namespace jetlag
