#pragma once

#include "framelab/gallery.hpp"
#include "framelab/io.hpp"
#include "framelab/multiplier.hpp"
#include "framelab/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

namespace framelab::cli {

// Exit codes: 0 success, 1 input or validation error, 2 property or
// decomposition failure.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kPropertyFailure = 2;

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string text_scalar(const json& j) {
  if (j.is_number_float()) return fmt17(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

// Flattened key = value rendering; numbers match the JSON output exactly.
inline void print_text(const json& j, std::ostream& out, const std::string& path = "") {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      print_text(value, out, path.empty() ? key : path + "." + key);
    return;
  }
  if (j.is_array()) {
    bool flat = true;
    for (const json& v : j)
      if (v.is_structured()) flat = false;
    if (flat) {
      out << path << " = [";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ", ";
        out << text_scalar(j[i]);
      }
      out << "]\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i)
      print_text(j[i], out, path + "[" + std::to_string(i) + "]");
    return;
  }
  out << path << " = " << text_scalar(j) << "\n";
}

inline void emit(const json& j, const std::string& format, std::ostream& out) {
  if (format == "text")
    print_text(j, out);
  else
    out << j.dump(2) << "\n";
}

inline ComplexMatrix to_complex(const AnyFrame& f) {
  if (f.is_complex()) return std::get<ComplexMatrix>(f.columns);
  return std::get<RealMatrix>(f.columns).cast<std::complex<double>>();
}

template <class Scalar>
UnconditionalReport<Scalar> resolve_report(const MatrixX<Scalar>& frame, const std::string& mode,
                                           Index exact_limit, Index budget, std::uint64_t seed,
                                           double tol) {
  const bool exact =
      mode == "exact" || (mode == "auto" && frame.cols() <= exact_limit);
  if (exact) return exact_report(frame, exact_limit, tol);
  return heuristic_report(frame, budget, seed, tol);
}

template <class Scalar>
json analyze_json(const MatrixX<Scalar>& frame, double tol) {
  const FrameBounds fb = frame_bounds(frame, tol);
  const FrameFlags flags = classify(frame, tol);
  const auto eig = hermitian_eig(MatrixX<Scalar>(frame_operator(frame)));

  json out;
  out["dim"] = frame.rows();
  out["count"] = frame.cols();
  out["A"] = fb.lower;
  out["B"] = fb.upper;
  out["B_over_A"] = fb.upper / fb.lower;
  out["sqrt_B_over_A"] = std::sqrt(fb.upper / fb.lower);
  out["rank"] = fb.rank;
  out["spanning"] = fb.spanning;
  json fl;
  fl["equal_norm"] = flags.equal_norm;
  fl["equiangular"] = flags.equiangular;
  fl["tight"] = flags.tight;
  fl["parseval"] = flags.parseval;
  fl["spanning"] = flags.spanning;
  out["flags"] = std::move(fl);
  json spectrum = json::array();
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) spectrum.push_back(eig.eigenvalues(k));
  out["spectrum"] = std::move(spectrum);
  return out;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"framelab: finite frame bounds, unconditional constants, decompositions"};
  app.require_subcommand(1);

  std::string frame_path, psi_path, symbol_path, output_path;
  std::string mode = "auto";
  std::string format = "json";
  std::string family;
  std::string field = "real";
  double tol = kRankTol;
  double dtol = 1e-8;
  double cluster_tol = 1e-8;
  Index exact_limit = 16;
  Index budget = 200;
  Index gal_n = 4, gal_dim = 3, gal_count = 6;
  std::uint64_t seed = 1;
  bool with_matrix = false, with_box_sup = false;

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  };
  const auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "constant computation mode")
        ->check(CLI::IsMember({"exact", "heuristic", "auto"}));
    cmd->add_option("--exact-limit", exact_limit, "largest N enumerated exactly")
        ->check(CLI::Range(Index(1), Index(24)));
    cmd->add_option("--budget", budget, "heuristic restart budget")
        ->check(CLI::Range(Index(0), Index(1000000)));
    cmd->add_option("--seed", seed, "heuristic random seed");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "frame bounds, classification, spectrum");
  analyze->add_option("frame", frame_path, "frame file (.json or .csv)")->required();
  analyze->add_option("--tol", tol, "rank and classification tolerance")
      ->check(CLI::PositiveNumber);
  add_format(analyze);

  CLI::App* constants = app.add_subcommand("constants", "unconditional constants and witnesses");
  constants->add_option("frame", frame_path, "frame file (.json or .csv)")->required();
  constants->add_option("--tol", tol, "rank tolerance")->check(CLI::PositiveNumber);
  add_search(constants);
  add_format(constants);

  CLI::App* decomp = app.add_subcommand("decompose", "orthogonal sum of tight frames, or witness");
  decomp->add_option("frame", frame_path, "frame file (.json or .csv)")->required();
  decomp->add_option("--tol", dtol, "eigenvector residual tolerance")->check(CLI::PositiveNumber);
  decomp->add_option("--cluster-tol", cluster_tol, "eigenvalue clustering tolerance")
      ->check(CLI::PositiveNumber);
  add_format(decomp);

  CLI::App* mult = app.add_subcommand("multiplier", "frame multiplier matrix and norm");
  mult->add_option("frame", frame_path, "synthesis frame file")->required();
  mult->add_option("--symbol", symbol_path, "symbol file {\"symbol\": [...]}")->required();
  mult->add_option("--psi", psi_path, "analysis frame file (defaults to the synthesis frame)");
  mult->add_flag("--matrix", with_matrix, "include the multiplier matrix");
  mult->add_flag("--box-sup", with_box_sup,
                 "include the box supremum of the relative multiplier norm");
  mult->add_option("--exact-limit", exact_limit, "largest N enumerated exactly")
      ->check(CLI::Range(Index(1), Index(24)));
  mult->add_option("--tol", tol, "rank tolerance")->check(CLI::PositiveNumber);
  add_format(mult);

  CLI::App* gallery = app.add_subcommand("gallery", "built-in frame families with expected facts");
  gallery->add_option("family", family, "simplex | subframe | shift | random")
      ->required()
      ->check(CLI::IsMember({"simplex", "subframe", "shift", "random"}));
  gallery->add_option("--n", gal_n, "size parameter for simplex/subframe/shift")
      ->check(CLI::Range(Index(1), Index(4096)));
  gallery->add_option("--dim", gal_dim, "dimension for random frames")
      ->check(CLI::Range(Index(1), Index(4096)));
  gallery->add_option("--count", gal_count, "vector count for random frames")
      ->check(CLI::Range(Index(1), Index(4096)));
  gallery->add_option("--seed", seed, "random frame seed");
  gallery->add_option("--field", field, "scalar field for random frames")
      ->check(CLI::IsMember({"real", "complex"}));
  gallery->add_option("-o,--output", output_path, "write the frame JSON to a file");
  add_format(gallery);

  CLI::App* verify = app.add_subcommand("verify", "run the property suite against a frame");
  verify->add_option("frame", frame_path, "frame file (.json or .csv)")->required();
  verify->add_option("--tol", tol, "rank tolerance")->check(CLI::PositiveNumber);
  add_search(verify);
  add_format(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 wants them reversed
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze) {
      const AnyFrame f = load_frame(frame_path);
      json j;
      std::visit([&](const auto& m) { j = detail::analyze_json(m, tol); }, f.columns);
      detail::emit(j, format, out);
      return kOk;
    }

    if (*constants) {
      const AnyFrame f = load_frame(frame_path);
      json j;
      std::visit(
          [&](const auto& m) {
            const auto rep = detail::resolve_report(m, mode, exact_limit, budget, seed, tol);
            j = report_to_json(rep);
            j["dim"] = m.rows();
            j["count"] = m.cols();
          },
          f.columns);
      detail::emit(j, format, out);
      return kOk;
    }

    if (*decomp) {
      const AnyFrame f = load_frame(frame_path);
      DecomposeResult result;
      std::visit([&](const auto& m) { result = decompose(m, dtol, cluster_tol); }, f.columns);
      detail::emit(decomposition_to_json(result), format, out);
      return std::holds_alternative<FailureWitness>(result) ? kPropertyFailure : kOk;
    }

    if (*mult) {
      const AnyFrame synth = load_frame(frame_path);
      const AnyFrame anal = psi_path.empty() ? synth : load_frame(psi_path);
      const AnySymbol symbol = load_symbol(symbol_path);
      if (with_box_sup && !psi_path.empty())
        throw ValidationError("--box-sup applies to the single-frame multiplier; drop --psi");

      const bool complex_mode = synth.is_complex() || anal.is_complex() ||
                                std::holds_alternative<ComplexVector>(symbol);
      json j;
      j["dim"] = synth.dim();
      j["count"] = synth.count();
      if (complex_mode) {
        const ComplexMatrix phi = detail::to_complex(synth);
        const ComplexMatrix psi = detail::to_complex(anal);
        const ComplexVector m = std::holds_alternative<ComplexVector>(symbol)
                                    ? std::get<ComplexVector>(symbol)
                                    : ComplexVector(std::get<RealVector>(symbol)
                                                        .cast<std::complex<double>>());
        const ComplexMatrix mm = multiplier_matrix(m, phi, psi);
        j["norm"] = spectral_norm(mm);
        if (with_matrix) {
          AnyFrame wrapped;
          wrapped.columns = mm;
          j["matrix"] = frame_to_json(wrapped)["vectors"];
        }
        if (with_box_sup) j["box_sup_relative"] = box_multiplier_sup_relative(phi, exact_limit);
      } else {
        const RealMatrix& phi = std::get<RealMatrix>(synth.columns);
        const RealMatrix& psi = std::get<RealMatrix>(anal.columns);
        const RealVector& m = std::get<RealVector>(symbol);
        const RealMatrix mm = multiplier_matrix(m, phi, psi);
        j["norm"] = spectral_norm(mm);
        if (with_matrix) {
          AnyFrame wrapped;
          wrapped.columns = mm;
          j["matrix"] = frame_to_json(wrapped)["vectors"];
        }
        if (with_box_sup) j["box_sup_relative"] = box_multiplier_sup_relative(phi, exact_limit);
      }
      detail::emit(j, format, out);
      return kOk;
    }

    if (*gallery) {
      AnyFrame f;
      json expected;
      if (family == "simplex") {
        f.columns = simplex_frame(gal_n);
        const double nn = static_cast<double>(gal_n);
        expected["gram_diagonal"] = 1.0 - 1.0 / nn;
        expected["gram_off_diagonal"] = -1.0 / nn;
        expected["lower"] = 1.0;
        expected["upper"] = 1.0;
        expected["rank"] = gal_n - 1;
        expected["parseval_on_span"] = true;
      } else if (family == "subframe") {
        f.columns = simplex_subframe(gal_n);
        expected["lower"] = 1.0 / static_cast<double>(gal_n);
        expected["upper"] = 1.0;
        expected["rank"] = gal_n - 1;
      } else if (family == "shift") {
        f.columns = shift_frame(gal_n);
        const double nn = static_cast<double>(gal_n);
        const double c = std::cos(M_PI / (nn + 1.0));
        expected["lower"] = 1.25 - c;
        expected["upper"] = 1.25 + c;
        expected["full_sum_sq"] = 1.25 + 9.0 * (nn - 1.0) / 4.0;
        expected["alt_sum_sq"] = 1.0 + nn / 4.0;
        expected["sum_sq_ratio"] = (9.0 * nn - 4.0) / (nn + 4.0);
        expected["ratio_limit"] = 9.0;
        expected["alternating_signs"] = alternating_witness(gal_n).signs;
      } else {
        if (field == "complex")
          f.columns = random_frame<std::complex<double>>(gal_dim, gal_count, seed);
        else
          f.columns = random_frame<double>(gal_dim, gal_count, seed);
        expected["seed"] = seed;
      }
      json j = frame_to_json(f);
      j["family"] = family;
      j["expected"] = std::move(expected);
      if (!output_path.empty()) {
        std::ofstream of(output_path);
        if (!of) throw ValidationError("cannot open output file: " + output_path);
        of << j.dump(2) << "\n";
        out << "wrote " << output_path << "\n";
      } else {
        detail::emit(j, format, out);
      }
      return kOk;
    }

    if (*verify) {
      const AnyFrame f = load_frame(frame_path);
      json props = json::array();
      bool all_pass = true;
      std::visit(
          [&](const auto& m) {
            const auto rep = detail::resolve_report(m, mode, exact_limit, budget, seed, tol);
            for (const PropertyResult& p : verify_properties(m, rep, seed)) {
              json pj;
              pj["name"] = p.name;
              pj["pass"] = p.pass;
              pj["detail"] = p.detail;
              props.push_back(std::move(pj));
              all_pass = all_pass && p.pass;
            }
          },
          f.columns);
      json j;
      j["properties"] = std::move(props);
      j["all_pass"] = all_pass;
      if (format == "text") {
        for (const json& p : j["properties"])
          out << (p["pass"].get<bool>() ? "PASS " : "FAIL ") << p["name"].get<std::string>()
              << ": " << p["detail"].get<std::string>() << "\n";
        out << (all_pass ? "all properties passed" : "property failure") << "\n";
      } else {
        detail::emit(j, format, out);
      }
      return all_pass ? kOk : kPropertyFailure;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace framelab::cli
