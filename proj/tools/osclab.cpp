// osclab: command-line front end.
//
// Exit codes: 0 success, 1 a check failed, 2 usage, I/O or parse error.

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "osclab/error.hpp"
#include "osclab/parallel.hpp"

#ifndef OSCLAB_GOLDENS
#define OSCLAB_GOLDENS ""
#endif

namespace {

using namespace osclab::cli;

void add_source(CLI::App* cmd, Source& src, const std::string& what = "function") {
  cmd->add_option("--input", src.input, "cell " + what + " file (CSV or binary)")->check(CLI::ExistingFile);
  cmd->add_option("--function", src.function, "built-in " + what + ": log-reciprocal, indicator:theta, random-step:seed, power:delta");
  cmd->add_option("--depth", src.depth, "grid depth for built-in functions")->check(CLI::Range(0, 24));
  cmd->add_option("--measure", src.measure, "cell mass file; Lebesgue when omitted")->check(CLI::ExistingFile);
  cmd->add_option("--cube", src.cube, "dyadic cube as level:i0,i1,...; the root when omitted");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative John-Nirenberg toolkit on dyadic grids"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file mirroring the command-line flags");

  Common common;
  unsigned threads = 0;
  app.add_option("--seed", common.seed, "random seed, echoed in every output");
  app.add_option("--dim", common.dimension, "grid dimension of input files")->check(CLI::Range(1, 4));
  app.add_option("--format", common.format, "output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"json", Format::json}, {"csv", Format::csv}}));
  app.add_option("--threads", threads, "worker threads (default: OSC_LAB_THREADS or all cores)");

  NormArgs norm;
  auto* norm_cmd = app.add_subcommand("norm", "localized norm of a cell function on a cube");
  add_source(norm_cmd, norm.source);
  norm_cmd->add_option("--family", norm.family, "lp:p, weak-lp:p, orlicz:<young>, weak-orlicz:<young>, variable:<file>")
      ->required();
  norm_cmd->add_flag("--centered", norm.centered, "use f - f_Q");

  BmoArgs bmo;
  auto* bmo_cmd = app.add_subcommand("bmo", "dyadic BMO norm");
  add_source(bmo_cmd, bmo.source);
  bmo_cmd->add_option("--min-level", bmo.min_level, "skip the finest levels")->check(CLI::NonNegativeNumber);

  CzdArgs czd;
  auto* czd_cmd = app.add_subcommand("czd", "Calderon-Zygmund stopping cubes at level L");
  add_source(czd_cmd, czd.source);
  czd_cmd->add_option("--level,-L", czd.level, "stopping level L")->required();

  SparseArgs sparse;
  auto* sparse_cmd = app.add_subcommand("sparse", "sparse family with stopping factor Lambda");
  add_source(sparse_cmd, sparse.source);
  sparse_cmd->add_option("--lambda", sparse.lambda, "stopping factor (> 1)");

  AinftyArgs ainfty;
  auto* ainfty_cmd = app.add_subcommand("ainfty", "Fujii-Wilson constant of a weight");
  add_source(ainfty_cmd, ainfty.weight, "weight");
  ainfty_cmd->add_option("--functional", ainfty.functional, "measure, weight or wr:r");
  ainfty_cmd->add_flag("--embedding", ainfty.embedding, "also estimate the BMO embedding constant");

  ConstantsArgs constants;
  auto* constants_cmd = app.add_subcommand("constants", "explicit John-Nirenberg constants");
  constants_cmd->add_option("--psi", constants.psi, "identity, power:s or orlicz:<young>");
  constants_cmd->add_option("--young", constants.young, "power:p, plog:p:a or plog-alt:p:a");
  constants_cmd->add_option("--cy", constants.c_y, "C_Y");
  constants_cmd->add_option("--k", constants.k, "geometric constant K");
  constants_cmd->add_option("--cmu", constants.c_mu, "doubling constant c_mu");
  constants_cmd->add_option("--nmu", constants.n_mu, "doubling dimension n_mu");
  constants_cmd->add_option("--c1", constants.c1, "John-Nirenberg c1");
  constants_cmd->add_option("--c2", constants.c2, "John-Nirenberg c2");

  VerifyArgs verify;
  verify.goldens = OSCLAB_GOLDENS;
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
  verify_cmd->add_option("--suite", verify.suites, "suite name or all (repeatable)");
  verify_cmd->add_option("--depth", verify.depth, "grid depth override (0: suite defaults)")->check(CLI::Range(0, 20));
  verify_cmd->add_flag("--quick", verify.quick, "reduced depths and sample counts");
  verify_cmd->add_option("--report", verify.report, "write the JSON report here");
  verify_cmd->add_option("--plots", verify.plots, "write plot CSV files into this directory");
  verify_cmd->add_option("--goldens", verify.goldens, "reference band file");
  verify_cmd->add_option("--c1", verify.c1, "John-Nirenberg c1");
  verify_cmd->add_option("--c2", verify.c2, "John-Nirenberg c2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (threads > 0) osclab::set_thread_limit(threads);
  try {
    Result result;
    if (*norm_cmd) result = run_norm(common, norm);
    else if (*bmo_cmd) result = run_bmo(common, bmo);
    else if (*czd_cmd) result = run_czd(common, czd);
    else if (*sparse_cmd) result = run_sparse(common, sparse);
    else if (*ainfty_cmd) result = run_ainfty(common, ainfty);
    else if (*constants_cmd) result = run_constants(common, constants);
    else result = run_verify(common, verify);

    if (common.format == Format::csv) {
      std::cout << (result.csv.empty() ? flatten_csv(result.body) : result.csv);
    } else {
      std::cout << result.body.dump(2) << '\n';
    }
    for (const auto& line : result.failures) std::cerr << line << '\n';
    return result.pass ? 0 : 1;
  } catch (const osclab::ParseError& e) {
    std::cerr << "osclab: parse error at line " << e.line() << ": " << e.what() << '\n';
  } catch (const osclab::Error& e) {
    std::cerr << "osclab: " << osclab::to_string(e.kind()) << " error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "osclab: " << e.what() << '\n';
  }
  return 2;
}
