#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace wh::cli {

namespace {

const std::vector<std::string> kKeys = {"n",        "v",         "sigma",    "m",       "vector",   "weights",
                                        "powers",   "lie",       "quadrature", "points", "angles",   "grid",
                                        "l",        "s",         "epsilon",  "ray",     "t",        "pairs",
                                        "seed",     "output"};

template <class T>
T get(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("invalid value for ") + what);
  }
}

cd parse_complex(const json& j) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return cd(j[0].get<double>(), j[1].get<double>());
  }
  throw ConfigError("v entries must be numbers or [re, im] pairs");
}

std::vector<std::vector<double>> parse_rows(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be a list");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (row.is_number()) {
      out.push_back({row.get<double>()});
    } else {
      out.push_back(get<std::vector<double>>(row, what));
    }
  }
  return out;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
}

}  // namespace

SpectralParam RunConfig::param() const { return SpectralParam(v, sigma); }

WhittakerCharacter RunConfig::character() const { return WhittakerCharacter(m); }

BoundaryFunction RunConfig::boundary_function() const {
  const SpectralParam p = param();
  BoundaryFunction f = [&] {
    if (vector == "spherical") return BoundaryFunction::spherical(p);
    std::vector<Vec> w;
    for (const auto& row : weights) {
      Vec x(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) x(i) = row[i];
      w.push_back(x);
    }
    return BoundaryFunction::k_finite(p, w, powers);
  }();
  if (!lie.empty()) f = lie_monomial(lie, f);
  return f;
}

QuadratureSpec RunConfig::spec_from(QuadratureSpec s) const {
  if (rel_tol) s.rel_tol = *rel_tol;
  if (abs_tol) s.abs_tol = *abs_tol;
  if (base_panels) s.base_panels = *base_panels;
  if (max_depth) s.max_depth = *max_depth;
  if (max_evals) s.max_evals = *max_evals;
  s.validate();
  return s;
}

QuadratureSpec RunConfig::spec() const { return spec_from(default_jacquet_spec(n)); }

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError("unknown configuration key: " + key);
  }
  RunConfig c;
  c.source = doc;

  if (doc.contains("v")) {
    if (!doc["v"].is_array()) throw ConfigError("v must be a list");
    for (const auto& x : doc["v"]) c.v.push_back(parse_complex(x));
    c.n = static_cast<int>(c.v.size());
  }
  if (doc.contains("n")) {
    c.n = get<int>(doc["n"], "n");
    if (!c.v.empty() && static_cast<int>(c.v.size()) != c.n) throw ConfigError("n does not match the length of v");
  }
  if (c.n < 2 || c.n > kMaxDim) throw ConfigError("n must lie in [2, 6]");
  if (c.v.empty()) {
    // Evenly spaced from -1/2 to 1/2.
    for (int i = 0; i < c.n; ++i) c.v.emplace_back(-0.5 + static_cast<double>(i) / (c.n - 1), 0.0);
  }
  for (const cd& z : c.v) {
    require_finite(z.real(), "v");
    require_finite(z.imag(), "v");
  }
  c.sigma = doc.contains("sigma") ? get<std::vector<int>>(doc["sigma"], "sigma") : std::vector<int>(c.n, 1);
  if (static_cast<int>(c.sigma.size()) != c.n) throw ConfigError("sigma must have n entries");
  c.m = doc.contains("m") ? get<std::vector<double>>(doc["m"], "m") : std::vector<double>(c.n - 1, 1.0);
  if (static_cast<int>(c.m.size()) != c.n - 1) throw ConfigError("m must have n-1 entries");
  for (double x : c.m) {
    require_finite(x, "m");
    if (x == 0.0) throw ConfigError("m entries must be nonzero");
  }

  if (doc.contains("vector")) c.vector = get<std::string>(doc["vector"], "vector");
  if (c.vector != "spherical" && c.vector != "k_finite") throw ConfigError("vector must be spherical or k_finite");
  if (c.vector == "k_finite") {
    if (!doc.contains("weights") || !doc.contains("powers")) throw ConfigError("k_finite needs weights and powers");
    c.weights = parse_rows(doc["weights"], "weights");
    c.powers = get<std::vector<int>>(doc["powers"], "powers");
  }
  if (doc.contains("lie")) c.lie = get<std::vector<int>>(doc["lie"], "lie");

  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    if (!q.is_object()) throw ConfigError("quadrature must be an object");
    for (const auto& [key, value] : q.items()) {
      if (key == "rel_tol") {
        c.rel_tol = get<double>(value, "rel_tol");
      } else if (key == "abs_tol") {
        c.abs_tol = get<double>(value, "abs_tol");
      } else if (key == "base_panels") {
        c.base_panels = get<int>(value, "base_panels");
      } else if (key == "max_depth") {
        c.max_depth = get<int>(value, "max_depth");
      } else if (key == "max_evals") {
        c.max_evals = get<long long>(value, "max_evals");
      } else {
        throw ConfigError("unknown quadrature key: " + key);
      }
    }
    c.spec();
  }

  if (doc.contains("points")) c.points = parse_rows(doc["points"], "points");
  for (const auto& p : c.points) {
    if (static_cast<int>(p.size()) != c.n - 1) throw ConfigError("each point needs n-1 ratios");
    for (double r : p) {
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("ratios must be positive and finite");
    }
  }
  if (doc.contains("angles")) {
    c.angles = parse_rows(doc["angles"], "angles");
    if (c.angles.size() != c.points.size()) throw ConfigError("angles must have one entry per point");
    for (const auto& a : c.angles) {
      if (static_cast<int>(a.size()) != c.n * (c.n - 1) / 2) throw ConfigError("each angle list needs n(n-1)/2 entries");
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) throw ConfigError("grid must be an object");
    for (const auto& [key, value] : g.items()) {
      if (key == "r_min") {
        c.grid.r_min = get<double>(value, "r_min");
      } else if (key == "r_max") {
        c.grid.r_max = get<double>(value, "r_max");
      } else if (key == "count") {
        c.grid.count = get<int>(value, "count");
      } else {
        throw ConfigError("unknown grid key: " + key);
      }
    }
  }
  c.grid.validate();

  if (doc.contains("l")) {
    const json& l = doc["l"];
    if (l.is_array() && !l.empty() && l[0].is_array()) {
      c.l = get<std::vector<std::vector<int>>>(l, "l");
    } else {
      c.l = {get<std::vector<int>>(l, "l")};
    }
    for (const auto& x : c.l) {
      if (static_cast<int>(x.size()) != c.n - 1) throw ConfigError("l must have n-1 entries");
      ExponentVector check(x);
    }
  }
  if (doc.contains("s")) {
    c.s = doc["s"].is_array() ? get<std::vector<double>>(doc["s"], "s") : std::vector<double>{get<double>(doc["s"], "s")};
    for (double x : c.s) {
      if (!(x >= 0.0)) throw ConfigError("s must be nonnegative");
    }
  }
  if (doc.contains("epsilon")) {
    c.epsilon = get<double>(doc["epsilon"], "epsilon");
    if (!(*c.epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  }
  if (doc.contains("t")) c.t = get<double>(doc["t"], "t");
  if (!(c.t > 0.0)) throw ConfigError("t must be positive");
  if (doc.contains("ray")) c.ray = get<std::vector<double>>(doc["ray"], "ray");
  for (double r : c.ray) {
    if (!(r >= c.t)) throw ConfigError("ray points must be >= t");
  }
  if (doc.contains("pairs")) c.pairs = get<int>(doc["pairs"], "pairs");
  if (c.pairs < 1) throw ConfigError("pairs must be positive");
  if (doc.contains("seed")) c.seed = get<unsigned>(doc["seed"], "seed");
  if (doc.contains("output")) c.output = get<std::string>(doc["output"], "output");

  if (const char* env = std::getenv("WHITTAKER_THREADS")) {
    char* end = nullptr;
    const long t = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || t < 0 || t > 1024) throw ConfigError("WHITTAKER_THREADS must be an integer in [0, 1024]");
    c.threads = static_cast<int>(t);
  }
  return c;
}

Mat k_from_angles(int n, const std::vector<double>& angles) {
  Mat k = Mat::Identity(n, n);
  std::size_t d = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++d) {
      const double th = d < angles.size() ? angles[d] : 0.0;
      Mat g = Mat::Identity(n, n);
      g(i, i) = std::cos(th);
      g(j, j) = std::cos(th);
      g(i, j) = -std::sin(th);
      g(j, i) = std::sin(th);
      k = k * g;
    }
  }
  return k;
}

}  // namespace wh::cli
