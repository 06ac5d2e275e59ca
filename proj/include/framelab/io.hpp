#pragma once

#include "framelab/decomposition.hpp"
#include "framelab/frame.hpp"
#include "framelab/unconditional.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace framelab {

using nlohmann::json;

// Field-erased frame container for the CLI boundary; the math stays templated
// and callers dispatch with std::visit.
struct AnyFrame {
  std::variant<RealMatrix, ComplexMatrix> columns;

  bool is_complex() const { return columns.index() == 1; }
  Index dim() const {
    return std::visit([](const auto& m) { return m.rows(); }, columns);
  }
  Index count() const {
    return std::visit([](const auto& m) { return m.cols(); }, columns);
  }
};

using AnySymbol = std::variant<RealVector, ComplexVector>;

namespace detail {

inline double number_at(const json& v, const char* what, Index vec, Index coord) {
  if (!v.is_number()) {
    std::ostringstream msg;
    msg << what << ": entry at vector " << vec << ", coordinate " << coord
        << " is not a real number";
    throw ValidationError(msg.str());
  }
  return v.get<double>();
}

inline std::complex<double> complex_at(const json& v, const char* what, Index vec, Index coord) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  std::ostringstream msg;
  msg << what << ": entry at vector " << vec << ", coordinate " << coord
      << " must be a number or a [re, im] pair";
  throw ValidationError(msg.str());
}

}  // namespace detail

// {"field": "real"|"complex", "dim": d, "vectors": [[...], ...]}; complex
// coordinates are [re, im] pairs. A [re, im] entry under a real field is
// rejected rather than silently truncated.
inline AnyFrame frame_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("frame JSON must be an object");
  for (const char* key : {"field", "dim", "vectors"}) {
    if (!j.contains(key))
      throw ValidationError(std::string("frame JSON is missing required key \"") + key + "\"");
  }
  const std::string field = j["field"].is_string() ? j["field"].get<std::string>() : "";
  if (field != "real" && field != "complex")
    throw ValidationError("frame JSON key \"field\" must be \"real\" or \"complex\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<Index>() < 1)
    throw ValidationError("frame JSON key \"dim\" must be a positive integer");
  const Index dim = j["dim"].get<Index>();
  const json& vecs = j["vectors"];
  if (!vecs.is_array() || vecs.empty())
    throw ValidationError("frame JSON key \"vectors\" must be a non-empty array");
  const Index n = static_cast<Index>(vecs.size());

  AnyFrame out;
  if (field == "real") {
    RealMatrix m(dim, n);
    for (Index i = 0; i < n; ++i) {
      const json& v = vecs[static_cast<std::size_t>(i)];
      if (!v.is_array() || static_cast<Index>(v.size()) != dim) {
        std::ostringstream msg;
        msg << "vector " << i << " must be an array of length " << dim;
        throw ValidationError(msg.str());
      }
      for (Index k = 0; k < dim; ++k)
        m(k, i) = detail::number_at(v[static_cast<std::size_t>(k)], "real frame", i, k);
    }
    out.columns = std::move(m);
  } else {
    ComplexMatrix m(dim, n);
    for (Index i = 0; i < n; ++i) {
      const json& v = vecs[static_cast<std::size_t>(i)];
      if (!v.is_array() || static_cast<Index>(v.size()) != dim) {
        std::ostringstream msg;
        msg << "vector " << i << " must be an array of length " << dim;
        throw ValidationError(msg.str());
      }
      for (Index k = 0; k < dim; ++k)
        m(k, i) = detail::complex_at(v[static_cast<std::size_t>(k)], "complex frame", i, k);
    }
    out.columns = std::move(m);
  }
  return out;
}

inline json frame_to_json(const AnyFrame& f) {
  json out;
  out["field"] = f.is_complex() ? "complex" : "real";
  out["dim"] = f.dim();
  json vecs = json::array();
  if (f.is_complex()) {
    const auto& m = std::get<ComplexMatrix>(f.columns);
    for (Index i = 0; i < m.cols(); ++i) {
      json v = json::array();
      for (Index k = 0; k < m.rows(); ++k) v.push_back({m(k, i).real(), m(k, i).imag()});
      vecs.push_back(std::move(v));
    }
  } else {
    const auto& m = std::get<RealMatrix>(f.columns);
    for (Index i = 0; i < m.cols(); ++i) {
      json v = json::array();
      for (Index k = 0; k < m.rows(); ++k) v.push_back(m(k, i));
      vecs.push_back(std::move(v));
    }
  }
  out["vectors"] = std::move(vecs);
  return out;
}

// CSV carries real frames only: one coordinate per row, one vector per
// column, optional single header line. Complex data has to use JSON.
inline RealMatrix frame_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    bool numeric = true;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      std::size_t b = pos, e = comma;
      while (b < e && (line[b] == ' ' || line[b] == '\t' || line[b] == '\r')) ++b;
      while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
      double val = 0.0;
      const auto res = std::from_chars(line.data() + b, line.data() + e, val);
      if (res.ec != std::errc() || res.ptr != line.data() + e || b == e) {
        numeric = false;
        break;
      }
      row.push_back(val);
      pos = comma + 1;
      if (comma == line.size()) break;
    }
    if (!numeric) {
      if (header_allowed) {  // single header line with column labels
        header_allowed = false;
        continue;
      }
      std::ostringstream msg;
      msg << "CSV line " << lineno << ": non-numeric cell";
      throw ValidationError(msg.str());
    }
    header_allowed = false;
    if (!rows.empty() && rows.front().size() != row.size()) {
      std::ostringstream msg;
      msg << "CSV line " << lineno << ": expected " << rows.front().size() << " cells, got "
          << row.size();
      throw ValidationError(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("CSV contains no data rows");
  const Index d = static_cast<Index>(rows.size());
  const Index n = static_cast<Index>(rows.front().size());
  RealMatrix m(d, n);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < n; ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

inline AnyFrame load_frame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open frame file: " + path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
    return AnyFrame{frame_from_csv(in)};
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("frame JSON parse error: ") + e.what());
  }
  return frame_from_json(j);
}

// {"symbol": [...]} with real numbers or [re, im] pairs.
inline AnySymbol symbol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("symbol") || !j["symbol"].is_array() || j["symbol"].empty())
    throw ValidationError("symbol JSON must be {\"symbol\": [non-empty array]}");
  const json& arr = j["symbol"];
  const Index n = static_cast<Index>(arr.size());
  bool complex_entries = false;
  for (const json& v : arr)
    if (v.is_array()) complex_entries = true;
  if (complex_entries) {
    ComplexVector s(n);
    for (Index i = 0; i < n; ++i)
      s(i) = detail::complex_at(arr[static_cast<std::size_t>(i)], "symbol", i, 0);
    return s;
  }
  RealVector s(n);
  for (Index i = 0; i < n; ++i)
    s(i) = detail::number_at(arr[static_cast<std::size_t>(i)], "symbol", i, 0);
  return s;
}

inline AnySymbol load_symbol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open symbol file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("symbol JSON parse error: ") + e.what());
  }
  return symbol_from_json(j);
}

template <class Scalar>
json vector_to_json(const VectorX<Scalar>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) {
      out.push_back({v(i).real(), v(i).imag()});
    } else {
      out.push_back(v(i));
    }
  }
  return out;
}

inline json indices_to_json(const std::vector<Index>& idx) {
  json out = json::array();
  for (Index i : idx) out.push_back(i);
  return out;
}

template <class Scalar>
json report_to_json(const UnconditionalReport<Scalar>& rep) {
  json out;
  out["c_sigma"] = rep.c_sigma;
  out["c_epsilon"] = rep.c_epsilon;
  out["c_a"] = rep.c_a;
  out["bound"] = rep.bound;
  out["slack"] = rep.slack;
  out["mode"] = to_string(rep.mode);
  out["witness_sigma"] = indices_to_json(rep.witness_sigma.indices());
  out["witness_signs"] = rep.witness_signs;
  out["witness_x"] = vector_to_json(rep.witness_x);
  return out;
}

inline json decomposition_to_json(const DecomposeResult& result) {
  json out;
  if (const auto* fail = std::get_if<FailureWitness>(&result)) {
    json f;
    f["kind"] = to_string(fail->kind);
    f["index"] = fail->index;
    if (fail->index2 >= 0) f["index2"] = fail->index2;
    f["residual"] = fail->residual;
    out["failure"] = std::move(f);
    return out;
  }
  const auto& dec = std::get<TightDecomposition>(result);
  json groups = json::array();
  for (const TightGroup& g : dec.groups) {
    json gj;
    gj["indices"] = indices_to_json(g.indices);
    gj["lambda"] = g.lambda;
    gj["span_dim"] = g.span_dim;
    groups.push_back(std::move(gj));
  }
  out["groups"] = std::move(groups);
  out["null_indices"] = indices_to_json(dec.null_indices);
  out["min_bound"] = dec.min_bound;
  if (dec.ambiguous_clusters > 0) out["ambiguous_clusters"] = dec.ambiguous_clusters;
  return out;
}

}  // namespace framelab
