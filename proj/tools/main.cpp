#include "commands.hpp"
#include "verify.hpp"

#include "stiefel/errors.hpp"
#include "stiefel/logmap.hpp"
#include "stiefel/matrix_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace stiefel;
using namespace stiefel::cli;

namespace {

constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;

void add_shape(CLI::App *cmd, ExperimentConfig &cfg) {
  cmd->add_option("--n", cfg.n, "Rows of the frame")->capture_default_str();
  cmd->add_option("--p", cfg.p, "Columns of the frame")->capture_default_str();
}

void add_output(CLI::App *cmd, ExperimentConfig &cfg) {
  cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
  cmd->add_option("--format", cfg.format, "csv or svg")
      ->check(CLI::IsMember({"csv", "svg"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Geometry of the Stiefel manifold under the beta-metric family"};
  app.set_version_flag("--version", std::string(STIEFEL_VERSION));
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string u_file, v_file, delta_file;
  double tol_scale = 1.0;
  double delta_small = 1e-6;

  auto *exp_cmd = app.add_subcommand("exp", "Riemannian exponential of a tangent matrix");
  exp_cmd->add_option("--u", u_file, "Base point matrix file")->required();
  exp_cmd->add_option("--delta", delta_file, "Tangent matrix file")->required();
  exp_cmd->add_option("--beta", cfg.beta)->capture_default_str();
  exp_cmd->add_option("--out", cfg.out, "Output matrix file (default: stdout)");

  auto *log_cmd = app.add_subcommand("log", "Shooting logarithm with minimality certificate");
  log_cmd->add_option("--u", u_file, "Start point matrix file")->required();
  log_cmd->add_option("--utilde", v_file, "End point matrix file")->required();
  log_cmd->add_option("--beta", cfg.beta)->capture_default_str();
  log_cmd->add_option("--max-iter", cfg.max_iter)->capture_default_str();
  log_cmd->add_option("--tol", cfg.tol, "Residual tolerance")->capture_default_str();
  log_cmd->add_option("--out", cfg.out, "Write the tangent matrix to this file");

  auto *bounds_cmd = app.add_subcommand("bounds", "Envelope table over the Frobenius distance");
  add_shape(bounds_cmd, cfg);
  bounds_cmd->add_option("--beta", cfg.beta)->capture_default_str();
  bounds_cmd->add_option("--grid", cfg.grid)->capture_default_str();
  add_output(bounds_cmd, cfg);

  auto *sample_cmd = app.add_subcommand("sample", "Logarithms of random pairs");
  add_shape(sample_cmd, cfg);
  sample_cmd->add_option("--beta", cfg.beta)->capture_default_str();
  sample_cmd->add_option("--beta2", cfg.beta2, "Second metric for the equivalence experiment");
  sample_cmd->add_option("--samples", cfg.samples)->capture_default_str();
  sample_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  sample_cmd->add_option("--mode", cfg.mode, "random, roundtrip or antipodal")->capture_default_str();
  sample_cmd->add_option("--init", cfg.init, "shell or branches")->capture_default_str();
  sample_cmd->add_option("--threads", cfg.threads, "0: all cores")->capture_default_str();
  sample_cmd->add_option("--max-iter", cfg.max_iter)->capture_default_str();
  sample_cmd->add_option("--tol", cfg.tol)->capture_default_str();
  add_output(sample_cmd, cfg);

  auto *families_cmd = app.add_subcommand("families", "Distance traces of the flip geodesics");
  add_shape(families_cmd, cfg);
  families_cmd->add_option("--beta", cfg.beta)->capture_default_str();
  families_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  families_cmd->add_option("--grid", cfg.grid)->capture_default_str();
  add_output(families_cmd, cfg);

  auto *branch_cmd = app.add_subcommand("branch-demo", "Two geodesics from U to -U on St(3,2)");
  branch_cmd->add_option("--beta", cfg.beta)->capture_default_str();

  auto *slope_cmd = app.add_subcommand("slope", "d_beta / delta at small Frobenius distance");
  add_shape(slope_cmd, cfg);
  slope_cmd->add_option("--samples", cfg.samples, "Draws per beta and tangent kind")
      ->capture_default_str();
  slope_cmd->add_option("--grid", cfg.grid, "Number of beta values in [0.1, 1.5]")
      ->capture_default_str();
  slope_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  slope_cmd->add_option("--delta", delta_small)->capture_default_str();
  slope_cmd->add_option("--threads", cfg.threads)->capture_default_str();
  add_output(slope_cmd, cfg);

  auto *verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
  verify_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  verify_cmd->add_option("--tol-scale", tol_scale, "Multiplier on every suite tolerance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*exp_cmd) {
      const StiefelPoint U(read_matrix_file(u_file));
      const TangentVector d = TangentVector::decompose(U, read_matrix_file(delta_file));
      const Matrix Y = exp_map(BetaMetric(cfg.beta), d).matrix();
      if (cfg.out.empty()) {
        write_matrix(std::cout, Y);
      } else {
        write_matrix_file(cfg.out, Y);
      }
      return kExitOk;
    }
    if (*log_cmd) {
      const StiefelPoint U(read_matrix_file(u_file));
      const StiefelPoint V(read_matrix_file(v_file));
      LogOptions opts;
      opts.max_iter = cfg.max_iter;
      opts.residual_tol = cfg.tol;
      const LogResult r = log_shooting(BetaMetric(cfg.beta), U, V, opts);
      std::printf("length %.12g\nresidual %.3e\niterations %d\ncertificate %s\n", r.length,
                  r.residual, r.iterations, std::string(to_string(r.certificate)).c_str());
      std::printf("frob_dist %.12g\nlower %.12g\nupper %.12g\n", r.frob_dist, r.lower, r.upper);
      if (r.certificate == Certificate::ExceedsUpperBound && !r.upper_bound_proven) {
        std::printf("note: upper envelope is proven only for n >= 2p; verdict is advisory\n");
      }
      if (!cfg.out.empty()) write_matrix_file(cfg.out, r.delta.ambient());
      return r.converged() ? kExitOk : kExitNotConverged;
    }
    if (*bounds_cmd) {
      cfg.n = std::max(cfg.n, cfg.p);
      validate(cfg, std::cerr, true);
      emit(cmd_bounds(cfg), cfg, std::cout);
      return kExitOk;
    }
    if (*sample_cmd) {
      validate(cfg, std::cerr);
      emit(cmd_sample(cfg), cfg, std::cout);
      return kExitOk;
    }
    if (*families_cmd) {
      validate(cfg, std::cerr);
      emit(cmd_families(cfg), cfg, std::cout);
      return kExitOk;
    }
    if (*branch_cmd) {
      print_branch_report(cmd_branch_demo(cfg.beta), std::cout);
      return kExitOk;
    }
    if (*slope_cmd) {
      validate(cfg, std::cerr);
      emit(cmd_slope(cfg, delta_small), cfg, std::cout);
      return kExitOk;
    }
    if (*verify_cmd) {
      const bool ok = report(run_verify(cfg.seed, tol_scale), std::cout);
      std::cout << (ok ? "all suites passed\n" : "verification failed\n");
      return ok ? kExitOk : kExitVerifyFailed;
    }
  } catch (const NotApplicable &e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInput &e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalFailure &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitSoftware;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
