// matnet: controllability / observability analysis of matrix-weighted
// signed networks.
//
// Subcommands read a JSON network spec, print a machine-readable JSON
// report to stdout and a one-line summary to stderr. Exit codes: 0 success,
// 2 validation error, 3 corpus regression.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "matnet/corpus.hpp"
#include "matnet/report.hpp"
#include "matnet/spec_io.hpp"

namespace {

constexpr int kExitValidation = 2;

matnet::Backend default_backend() {
  if (const char* env = std::getenv("MATNET_BACKEND"))
    return matnet::backend_from_name(env);
  return matnet::Backend::exact;
}

int emit(const matnet::CommandResult& result, const std::string& dot_path) {
  if (result.dot && !dot_path.empty()) {
    std::ofstream out(dot_path);
    if (!out) {
      std::cerr << "error: cannot write " << dot_path << "\n";
      return kExitValidation;
    }
    out << *result.dot;
  }
  std::cout << result.report_json;
  std::cerr << result.human_summary << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis of matrix-weighted signed networks"};
  app.require_subcommand(1);

  std::string backend_text;
  app.add_option("--backend", backend_text,
                 "scalar backend: exact (default) or float")
      ->envname("MATNET_BACKEND");

  std::string spec_path, partition_text, dot_path, mode_text = "fixed",
                         union_factor = "t";
  bool include_timing = false;
  app.add_flag("--timing", include_timing,
               "include wall time in the JSON report (breaks byte-for-byte "
               "reproducibility)");

  CLI::App* laplacian = app.add_subcommand("laplacian", "print the Laplacian");
  laplacian->add_option("spec", spec_path, "network spec JSON")->required();

  CLI::App* ep = app.add_subcommand(
      "ep", "verify or discover an equitable partition");
  ep->add_option("spec", spec_path, "network spec JSON")->required();
  ep->add_option("--partition", partition_text,
                 "verify this partition, e.g. \"1|2,3|4\"");
  ep->add_option("--dot", dot_path, "write the quotient graph in DOT form");

  CLI::App* ctrb = app.add_subcommand("ctrb", "controllability analysis");
  ctrb->add_option("spec", spec_path, "network spec JSON")->required();
  ctrb->add_option("--mode", mode_text,
                   "fixed | heterogeneous | switching | union");
  ctrb->add_option("--union-a-factor", union_factor,
                   "A-block multiplier of the union system: t or 1");

  CLI::App* obsv =
      app.add_subcommand("obsv", "observability via the dual system");
  obsv->add_option("spec", spec_path, "network spec JSON")->required();

  CLI::App* corpus = app.add_subcommand(
      "corpus", "run the built-in example corpus against frozen expectations");
  std::string export_dir;
  corpus->add_option("--export", export_dir,
                     "also write the example spec files into this directory");

  // Global options (--backend, --timing) may appear after the subcommand.
  for (CLI::App* sub : {laplacian, ep, ctrb, obsv, corpus}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    matnet::RunOptions opts;
    opts.backend = backend_text.empty()
                       ? default_backend()
                       : matnet::backend_from_name(backend_text);
    opts.include_timing = include_timing;
    if (!partition_text.empty()) opts.partition_text = partition_text;
    if (union_factor == "1")
      opts.union_a_factor = matnet::UnionAFactor::one;
    else if (union_factor != "t")
      throw matnet::ValidationError("union-a-factor", "expected 't' or '1'");

    if (*laplacian)
      return emit(matnet::cmd_laplacian(matnet::load_spec_file(spec_path), opts),
                  "");
    if (*ep)
      return emit(matnet::cmd_ep(matnet::load_spec_file(spec_path), opts),
                  dot_path);
    if (*ctrb)
      return emit(matnet::cmd_ctrb(matnet::load_spec_file(spec_path),
                                   matnet::ctrb_mode_from_name(mode_text),
                                   opts),
                  "");
    if (*obsv)
      return emit(matnet::cmd_obsv(matnet::load_spec_file(spec_path), opts),
                  "");
    if (*corpus) {
      if (!export_dir.empty()) {
        for (const matnet::CorpusExample& ex : matnet::corpus()) {
          std::ofstream out(export_dir + "/" + ex.id + ".json");
          if (!out) {
            std::cerr << "error: cannot write into " << export_dir << "\n";
            return kExitValidation;
          }
          out << ex.spec_json << "\n";
        }
      }
      return emit(matnet::cmd_corpus(opts), "");
    }
  } catch (const matnet::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;  // unreachable: a subcommand is required
}
