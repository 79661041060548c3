#pragma once

// JSON job configuration for the bqm command-line tool.
//
// {
//   "space":     {"dim": 2, "p": 3.0},
//   "operator":  {"scenario": "pauli1" | "pauli2" | "pauli3" | "oblique",
//                 "x": vec, "y": vec, "lambda1": 1, "lambda2": -1}   (oblique only)
//              | {"matrix": [[c, c], [c, c]]},
//   "event":     [[c, c], [c, c]],        (check only: test one projection; "operator" may be omitted)
//   "state":     {"vector": vec} | {"mixture": [{"weight": w, "vector": vec}, ...]},
//   "times":     {"start": t0, "stop": t1, "count": n} | {"values": [t, ...]},
//   "sweep":     {"theta_count": n, "phi_count": m},
//   "seed": 42, "samples": 0, "probabilities": false, "auto_normalize": true, "threads": 0,
//   "tolerances": {"verdict": 1e-9, "projection": 1e-9, "unit": 1e-9, "conservation": 1e-8,
//                  "grouping": 1e-8, "max_condition": 1e12, "real_spectrum": 1e-9}
// }
//
// A complex number c is either a JSON number or {"re": x, "im": y}. Unknown
// keys anywhere are rejected.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bqm/sip_space.hpp"
#include "bqm/types.hpp"

namespace bqm::cli {

using Json = nlohmann::json;

struct OperatorSource {
  std::optional<std::string> scenario;
  std::optional<CMatrix> matrix;
  std::optional<CVector> oblique_x;
  std::optional<CVector> oblique_y;
  double lambda1 = 1.0;
  double lambda2 = -1.0;
};

struct StateSource {
  struct Term {
    double weight;
    CVector vector;
  };
  std::vector<Term> terms;
  bool is_pure() const noexcept { return terms.size() == 1; }
};

struct TimeGrid {
  std::vector<double> values;
};

struct Sweep {
  int theta_count = 0;
  int phi_count = 0;
};

struct JobConfig {
  Eigen::Index dim = 0;
  double p = 2.0;
  OperatorSource op;
  std::optional<CMatrix> event;
  std::optional<StateSource> state;
  std::optional<TimeGrid> times;
  std::optional<Sweep> sweep;
  std::uint64_t seed = 0;
  int samples = 0;
  bool probabilities = false;
  bool auto_normalize = true;
  int threads = 0;
  Tolerances tol;

  PSpace space() const { return PSpace(dim, p); }
};

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

inline void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) fail(where + ": unknown field \"" + key + "\"");
  }
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + ": number is not finite");
  return v;
}

inline int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<int>();
}

inline Complex complex_value(const Json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (!j.is_object()) fail(where + ": expected a number or {\"re\", \"im\"}");
  only_keys(j, {"re", "im"}, where);
  if (!j.contains("re")) fail(where + ": missing \"re\"");
  const double re = number(j.at("re"), where + ".re");
  const double im = j.contains("im") ? number(j.at("im"), where + ".im") : 0.0;
  return {re, im};
}

inline CVector vector_value(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a non-empty array of complex numbers");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_value(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline CMatrix matrix_value(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) fail(where + ": rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(where + ": ragged matrix row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_value(row[static_cast<std::size_t>(c)],
                              where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

}  // namespace detail

inline void parse_operator(const Json& op, OperatorSource& out) {
  using namespace detail;
  only_keys(op, {"scenario", "matrix", "x", "y", "lambda1", "lambda2"}, "operator");
  if (op.contains("scenario") == op.contains("matrix")) fail("operator: give exactly one of \"scenario\", \"matrix\"");
  if (op.contains("scenario")) {
    if (!op.at("scenario").is_string()) fail("operator.scenario: expected a string");
    const std::string name = op.at("scenario").get<std::string>();
    static const std::set<std::string> names{"pauli1", "pauli2", "pauli3", "oblique"};
    if (!names.contains(name)) fail("operator.scenario: unknown scenario \"" + name + "\"");
    out.scenario = name;
    const bool oblique = name == "oblique";
    for (const char* key : {"x", "y", "lambda1", "lambda2"}) {
      if (op.contains(key) && !oblique) fail(std::string("operator.") + key + ": only valid for the oblique scenario");
    }
    if (op.contains("x")) out.oblique_x = vector_value(op.at("x"), "operator.x");
    if (op.contains("y")) out.oblique_y = vector_value(op.at("y"), "operator.y");
    if (op.contains("lambda1")) out.lambda1 = number(op.at("lambda1"), "operator.lambda1");
    if (op.contains("lambda2")) out.lambda2 = number(op.at("lambda2"), "operator.lambda2");
  } else {
    for (const char* key : {"x", "y", "lambda1", "lambda2"}) {
      if (op.contains(key)) fail(std::string("operator.") + key + ": only valid for the oblique scenario");
    }
    out.matrix = matrix_value(op.at("matrix"), "operator.matrix");
  }
}

inline JobConfig parse_config(const Json& root) {
  using namespace detail;
  only_keys(root,
            {"space", "operator", "event", "state", "times", "sweep", "seed", "samples", "probabilities",
             "auto_normalize", "threads", "tolerances"},
            "config");
  JobConfig cfg;

  if (!root.contains("space")) fail("config: missing \"space\"");
  const Json& space = root.at("space");
  only_keys(space, {"dim", "p"}, "space");
  if (!space.contains("dim") || !space.contains("p")) fail("space: needs \"dim\" and \"p\"");
  cfg.dim = integer(space.at("dim"), "space.dim");
  cfg.p = number(space.at("p"), "space.p");
  (void)cfg.space();  // validates dim and p

  if (!root.contains("operator")) {
    if (!root.contains("event")) fail("config: missing \"operator\"");
  } else {
    parse_operator(root.at("operator"), cfg.op);
  }

  if (root.contains("event")) cfg.event = matrix_value(root.at("event"), "event");

  if (root.contains("state")) {
    const Json& st = root.at("state");
    only_keys(st, {"vector", "mixture"}, "state");
    if (st.contains("vector") == st.contains("mixture")) fail("state: give exactly one of \"vector\", \"mixture\"");
    StateSource src;
    if (st.contains("vector")) {
      src.terms.push_back({1.0, vector_value(st.at("vector"), "state.vector")});
    } else {
      const Json& mix = st.at("mixture");
      if (!mix.is_array() || mix.empty()) fail("state.mixture: expected a non-empty array");
      for (std::size_t i = 0; i < mix.size(); ++i) {
        const std::string where = "state.mixture[" + std::to_string(i) + "]";
        only_keys(mix[i], {"weight", "vector"}, where);
        if (!mix[i].contains("weight") || !mix[i].contains("vector")) fail(where + ": needs \"weight\" and \"vector\"");
        src.terms.push_back({number(mix[i].at("weight"), where + ".weight"),
                             vector_value(mix[i].at("vector"), where + ".vector")});
      }
    }
    cfg.state = std::move(src);
  }

  if (root.contains("times")) {
    const Json& t = root.at("times");
    only_keys(t, {"start", "stop", "count", "values"}, "times");
    TimeGrid grid;
    if (t.contains("values")) {
      if (t.contains("start") || t.contains("stop") || t.contains("count")) {
        fail("times: \"values\" excludes \"start\"/\"stop\"/\"count\"");
      }
      const Json& vals = t.at("values");
      if (!vals.is_array() || vals.empty()) fail("times.values: expected a non-empty array");
      for (std::size_t i = 0; i < vals.size(); ++i) grid.values.push_back(number(vals[i], "times.values"));
    } else {
      if (!t.contains("start") || !t.contains("stop") || !t.contains("count")) {
        fail("times: needs \"start\", \"stop\" and \"count\" (or \"values\")");
      }
      const double start = number(t.at("start"), "times.start");
      const double stop = number(t.at("stop"), "times.stop");
      const int count = integer(t.at("count"), "times.count");
      if (count < 1) fail("times.count: must be >= 1");
      for (int i = 0; i < count; ++i) {
        grid.values.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
      }
    }
    cfg.times = std::move(grid);
  }

  if (root.contains("sweep")) {
    const Json& sw = root.at("sweep");
    only_keys(sw, {"theta_count", "phi_count"}, "sweep");
    if (!sw.contains("theta_count") || !sw.contains("phi_count")) fail("sweep: needs \"theta_count\" and \"phi_count\"");
    cfg.sweep = Sweep{integer(sw.at("theta_count"), "sweep.theta_count"), integer(sw.at("phi_count"), "sweep.phi_count")};
    if (cfg.sweep->theta_count < 1 || cfg.sweep->phi_count < 1) fail("sweep: counts must be >= 1");
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) fail("seed: expected a nonnegative integer");
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  if (root.contains("samples")) {
    cfg.samples = integer(root.at("samples"), "samples");
    if (cfg.samples < 0) fail("samples: must be >= 0");
  }
  if (root.contains("probabilities")) {
    if (!root.at("probabilities").is_boolean()) fail("probabilities: expected a boolean");
    cfg.probabilities = root.at("probabilities").get<bool>();
  }
  if (root.contains("auto_normalize")) {
    if (!root.at("auto_normalize").is_boolean()) fail("auto_normalize: expected a boolean");
    cfg.auto_normalize = root.at("auto_normalize").get<bool>();
  }
  if (root.contains("threads")) {
    cfg.threads = integer(root.at("threads"), "threads");
    if (cfg.threads < 0) fail("threads: must be >= 0");
  }
  if (root.contains("tolerances")) {
    const Json& t = root.at("tolerances");
    only_keys(t, {"verdict", "projection", "unit", "conservation", "grouping", "max_condition", "real_spectrum"},
              "tolerances");
    auto set = [&](const char* key, double& slot) {
      if (!t.contains(key)) return;
      slot = number(t.at(key), std::string("tolerances.") + key);
      if (slot < 0.0) fail(std::string("tolerances.") + key + ": must be >= 0");
    };
    set("verdict", cfg.tol.verdict);
    set("projection", cfg.tol.projection);
    set("unit", cfg.tol.unit);
    set("conservation", cfg.tol.conservation);
    set("grouping", cfg.tol.grouping);
    set("max_condition", cfg.tol.max_condition);
    set("real_spectrum", cfg.tol.real_spectrum);
  }
  return cfg;
}

}  // namespace bqm::cli
