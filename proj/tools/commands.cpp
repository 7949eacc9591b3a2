#include "commands.hpp"

#include "svg.hpp"

#include "stiefel/bounds.hpp"
#include "stiefel/curves.hpp"
#include "stiefel/errors.hpp"
#include "stiefel/logmap.hpp"
#include "stiefel/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace stiefel::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string config_summary(const ExperimentConfig &cfg) {
  std::ostringstream os;
  os << "n=" << cfg.n << " p=" << cfg.p << " beta=" << format_number(cfg.beta);
  if (cfg.beta2) os << " beta2=" << format_number(*cfg.beta2);
  os << " samples=" << cfg.samples << " seed=" << cfg.seed << " grid=" << cfg.grid;
  return os.str();
}

// Runs job(i) for i in [0, count) on a worker pool. Rows are written to fixed
// slots, so the result does not depend on scheduling.
template <typename Job>
void parallel_for(long count, int threads, Job job) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<long>(1, count)));
  std::atomic<long> next{0};
  auto run = [&] {
    for (long i = next++; i < count; i = next++) job(i);
  };
  if (workers == 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto &t : pool) t.join();
}

TangentVector random_tangent(const StiefelPoint &U, RandomSource &rng) {
  return TangentVector::project(U, rng.gaussian(U.n(), U.p()));
}

std::string nan_text() { return "nan"; }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return nan_text();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void validate(const ExperimentConfig &cfg, std::ostream &warn, bool allow_square) {
  if (cfg.p < 1) throw InvalidInput("--p must be >= 1");
  if (cfg.n > kMaxN) throw InvalidInput("--n is capped at " + std::to_string(kMaxN));
  if (allow_square ? cfg.n < cfg.p : cfg.n <= cfg.p) {
    throw InvalidInput(allow_square ? "need n >= p" : "need n > p");
  }
  if (cfg.samples < 1 || cfg.samples > kMaxSamples) {
    throw InvalidInput("--samples must lie in [1, " + std::to_string(kMaxSamples) + "]");
  }
  if (!(cfg.beta > 0.0)) throw InvalidInput("--beta must be positive");
  if (cfg.beta2 && !(*cfg.beta2 > 0.0)) throw InvalidInput("--beta2 must be positive");
  if (cfg.grid < 2) throw InvalidInput("--grid must be >= 2");
  if (cfg.format != "csv" && cfg.format != "svg") throw InvalidInput("--format must be csv or svg");
  if (cfg.mode != "random" && cfg.mode != "roundtrip" && cfg.mode != "antipodal") {
    throw InvalidInput("--mode must be random, roundtrip or antipodal");
  }
  if (cfg.init != "shell" && cfg.init != "branches") {
    throw InvalidInput("--init must be shell or branches");
  }
  if (cfg.threads < 0) throw InvalidInput("--threads must be >= 0");
  if (cfg.max_iter < 0) throw InvalidInput("--max-iter must be >= 0");
  if (!(cfg.tol > 0.0)) throw InvalidInput("--tol must be positive");
  if (cfg.n > kWarnN) {
    warn << "warning: n = " << cfg.n << " exceeds " << kWarnN << "; runs may be slow\n";
  }
}

void write_csv(const Table &t, std::ostream &os) {
  os << "# stiefel " << STIEFEL_VERSION << " " << t.command << " " << t.comment << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

namespace {

void write_table_svg(const Table &t, std::ostream &os) {
  auto column = [&](const std::string &name) -> std::ptrdiff_t {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    if (it == t.columns.end()) throw InvalidInput("svg: unknown column " + name);
    return it - t.columns.begin();
  };
  const auto xi = column(t.x);
  const std::ptrdiff_t gi = t.group.empty() ? -1 : column(t.group);
  std::map<std::string, Series> by_name;
  std::vector<std::string> order;
  for (const auto &y : t.ys) {
    const auto yi = column(y);
    for (const auto &row : t.rows) {
      const std::string name = gi >= 0 ? row[gi] + ":" + y : y;
      auto [it, fresh] = by_name.try_emplace(name, Series{name, {}, {}});
      if (fresh) order.push_back(name);
      it->second.x.push_back(std::strtod(row[xi].c_str(), nullptr));
      it->second.y.push_back(std::strtod(row[yi].c_str(), nullptr));
    }
  }
  std::vector<Series> series;
  for (const auto &name : order) series.push_back(by_name.at(name));
  write_svg(os, "stiefel " + t.command + " (" + t.comment + ")", t.x,
            t.ys.size() == 1 ? t.ys.front() : "value", series);
}

}  // namespace

void emit(const Table &t, const ExperimentConfig &cfg, std::ostream &fallback) {
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw std::runtime_error("cannot open " + cfg.out + " for writing");
  }
  std::ostream &os = cfg.out.empty() ? fallback : file;
  if (cfg.format == "svg") {
    write_table_svg(t, os);
  } else {
    write_csv(t, os);
  }
  if (!os) throw std::runtime_error("write failed");
}

Table cmd_bounds(const ExperimentConfig &cfg) {
  Table t;
  t.command = "bounds";
  t.comment = config_summary(cfg);
  const bool with_w = cfg.p % 2 == 1 && cfg.beta >= 0.5 && cfg.beta <= 1.0;
  if (cfg.n > cfg.p) {
    t.comment += " attainment=" + std::string(to_string(lower_attained(cfg.beta, cfg.n, cfg.p)));
    t.comment += std::string(" upper_proven=") +
                 (upper_envelope_proven(cfg.n, cfg.p) ? "true" : "false");
  }
  t.columns = {"delta", "lower", "upper"};
  if (with_w) t.columns.push_back("w_upper_on_lower");
  const double top = 2.0 * std::sqrt(static_cast<double>(cfg.p));
  for (int i = 0; i < cfg.grid; ++i) {
    const double delta = i == cfg.grid - 1 ? top : top * i / (cfg.grid - 1);
    std::vector<std::string> row = {format_number(delta),
                                    format_number(lower_envelope(cfg.beta, cfg.p, delta)),
                                    format_number(upper_envelope(cfg.beta, cfg.p, delta))};
    if (with_w) row.push_back(format_number(w_upper_on_lower(cfg.beta, cfg.p, delta)));
    t.rows.push_back(std::move(row));
  }
  t.x = "delta";
  t.ys = {"lower", "upper"};
  if (with_w) t.ys.push_back("w_upper_on_lower");
  return t;
}

Table cmd_sample(const ExperimentConfig &cfg) {
  const bool branches = cfg.init == "branches";
  if (branches && (cfg.n != 3 || cfg.p != 2 || !(cfg.beta > 1.0))) {
    throw NotApplicable("--init branches needs n=3, p=2 and beta > 1");
  }
  const bool roundtrip = cfg.mode == "roundtrip";
  const BetaMetric metric(cfg.beta);
  LogOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.residual_tol = cfg.tol;

  Table t;
  t.command = "sample";
  t.comment = config_summary(cfg) + " mode=" + cfg.mode + " init=" + cfg.init;
  t.columns = {"pair_id"};
  if (branches) t.columns.push_back("init");
  for (const char *c : {"frob_dist", "length_beta", "certificate", "iterations"}) t.columns.push_back(c);
  if (cfg.beta2) {
    for (const char *c : {"length_beta2", "certificate_beta2"}) t.columns.push_back(c);
  }
  if (roundtrip) t.columns.push_back("target_length");
  t.columns.push_back("lower");
  t.columns.push_back("upper");

  const RandomSource root(cfg.seed);
  std::vector<std::vector<std::vector<std::string>>> slots(cfg.samples);
  parallel_for(cfg.samples, cfg.threads, [&](long i) {
    RandomSource rng = root.split(static_cast<std::uint64_t>(i));
    const StiefelPoint U = StiefelPoint::random(cfg.n, cfg.p, rng);
    std::optional<StiefelPoint> Ut;
    double target = std::nan("");
    if (cfg.mode == "antipodal") {
      Ut = -U;
    } else if (roundtrip) {
      TangentVector d = random_tangent(U, rng);
      target = rng.uniform(0.05, 1.0) * 0.5 * std::min(1.0, std::sqrt(cfg.beta)) * kPi;
      d = d.scaled(target / norm(metric, d));
      Ut = exp_map(metric, d);
    } else {
      Ut = StiefelPoint::random(cfg.n, cfg.p, rng);
    }

    auto describe = [&](const BetaMetric &m, const std::optional<TangentVector> &init)
        -> std::pair<std::vector<std::string>, LogResult> {
      LogResult r = log_shooting(m, U, *Ut, opts, init);
      return {{format_number(r.length), std::string(to_string(r.certificate)),
               std::to_string(r.iterations)},
              r};
    };

    std::vector<std::pair<std::string, std::optional<TangentVector>>> starts;
    if (branches) {
      const BranchPair bp = branch_pair(cfg.beta, U);
      const double scale = frobenius_distance(U, *Ut).value / (2.0 * std::sqrt(2.0));
      starts.emplace_back("branch_1", bp.first_tangent.scaled(scale));
      starts.emplace_back("branch_2", bp.second_tangent.scaled(scale));
    } else {
      starts.emplace_back("", std::nullopt);
    }

    for (const auto &[label, init] : starts) {
      std::vector<std::string> row = {std::to_string(i)};
      if (branches) row.push_back(label);
      try {
        auto [cells, r] = describe(metric, init);
        row.push_back(format_number(r.frob_dist));
        row.insert(row.end(), cells.begin(), cells.end());
        if (cfg.beta2) {
          auto [cells2, r2] = describe(BetaMetric(*cfg.beta2), std::nullopt);
          row.push_back(cells2[0]);
          row.push_back(cells2[1]);
        }
        if (roundtrip) row.push_back(format_number(target));
        row.push_back(format_number(r.lower));
        row.push_back(format_number(r.upper));
      } catch (const NumericalFailure &) {
        const double frob = frobenius_distance(U, *Ut).value;
        row.resize(branches ? 2 : 1);
        row.push_back(format_number(frob));
        row.insert(row.end(), {nan_text(), "numerical_failure", "0"});
        if (cfg.beta2) row.insert(row.end(), {nan_text(), "numerical_failure"});
        if (roundtrip) row.push_back(format_number(target));
        row.push_back(format_number(lower_envelope(cfg.beta, cfg.p, frob)));
        row.push_back(format_number(upper_envelope(cfg.beta, cfg.p, frob)));
      }
      slots[i].push_back(std::move(row));
    }
  });
  for (auto &rows : slots) {
    for (auto &row : rows) t.rows.push_back(std::move(row));
  }
  t.x = "frob_dist";
  t.ys = {"length_beta"};
  if (cfg.beta2) t.ys.push_back("length_beta2");
  t.ys.push_back("lower");
  t.ys.push_back("upper");
  if (branches) t.group = "init";
  return t;
}

Table cmd_families(const ExperimentConfig &cfg) {
  const BetaMetric metric(cfg.beta);
  RandomSource rng(cfg.seed);
  const StiefelPoint U = StiefelPoint::random(cfg.n, cfg.p, rng);

  Table t;
  t.command = "families";
  t.comment = config_summary(cfg);
  t.columns = {"curve_family", "t", "frob_dist", "geodesic_dist"};

  auto trace = [&](const std::string &name, const Curve &c) {
    for (int i = 0; i < cfg.grid; ++i) {
      const double s = static_cast<double>(i) / (cfg.grid - 1);
      const double frob = (c.eval(s) - U.matrix()).norm();
      const double len =
          s == 0.0 ? 0.0 : integrate([&](double x) { return c.speed(metric, x); }, 0.0, s, 64);
      t.rows.push_back({name, format_number(s), format_number(frob), format_number(len)});
    }
  };
  for (int k = 1; k <= cfg.p; ++k) {
    trace("gamma_" + std::to_string(k), gamma_k(U, k));
  }
  if (cfg.p % 2 == 0) {
    const Matrix Q = random_stiefel(cfg.p, cfg.p, rng);
    trace("planar_rotation", planar_rotation_curve(U, Q, kPi));
  }
  if (cfg.n >= 2 * cfg.p) {
    const Matrix Uhat = orthonormal_completion(U.matrix()).leftCols(cfg.p);
    trace("k_theta", k_theta_curve(U, Uhat, Matrix::Identity(2 * cfg.p, 2 * cfg.p), kPi / 2));
  }
  t.x = "frob_dist";
  t.ys = {"geodesic_dist"};
  t.group = "curve_family";
  return t;
}

Table cmd_slope(const ExperimentConfig &cfg, double delta_small) {
  Table t;
  t.command = "slope";
  t.comment = config_summary(cfg) + " delta=" + format_number(delta_small);
  t.columns = {"beta", "draw", "tangent_kind", "ratio", "lower_slope", "upper_slope"};
  const char *kinds[] = {"random", "a_only", "b_only"};
  const long per_beta = cfg.samples * 3;
  const long total = per_beta * cfg.grid;
  std::vector<std::vector<std::string>> slots(total);
  const RandomSource root(cfg.seed);
  parallel_for(total, cfg.threads, [&](long idx) {
    const int g = static_cast<int>(idx / per_beta);
    const long draw = (idx % per_beta) / 3;
    const int kind = static_cast<int>(idx % 3);
    const double beta = 0.1 + (1.5 - 0.1) * g / (cfg.grid - 1);
    const BetaMetric metric(beta);
    RandomSource rng = root.split(static_cast<std::uint64_t>(idx));
    const StiefelPoint U = StiefelPoint::random(cfg.n, cfg.p, rng);
    Matrix Z;
    if (kind == 0) {
      Z = rng.gaussian(cfg.n, cfg.p);
    } else if (kind == 1) {
      Z = U.matrix() * random_skew(cfg.p, rng);
    } else {
      Z = orthonormal_completion(U.matrix()) * rng.gaussian(cfg.n - cfg.p, cfg.p);
    }
    TangentVector d = TangentVector::project(U, Z);
    d = d.scaled(1.0 / norm(metric, d));
    const double ratio = slope_ratio(metric, d, delta_small);
    slots[idx] = {format_number(beta), std::to_string(draw), kinds[kind], format_number(ratio),
                  format_number(std::min(1.0, std::sqrt(beta))),
                  format_number(std::max(1.0, std::sqrt(beta)))};
  });
  t.rows = std::move(slots);
  t.x = "beta";
  t.ys = {"ratio"};
  t.group = "tangent_kind";
  return t;
}

BranchReport cmd_branch_demo(double beta) {
  const BranchPair bp = branch_pair(beta);
  const BetaMetric metric(beta);
  const auto [c1, c2] = branch_lengths(beta);
  const Matrix target = -StiefelPoint::identity(3, 2).matrix();
  return BranchReport{beta,
                      curve_length(bp.first, metric),
                      curve_length(bp.second, metric),
                      c1,
                      c2,
                      (bp.first.end() - target).norm(),
                      (bp.second.end() - target).norm()};
}

void print_branch_report(const BranchReport &r, std::ostream &os) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "beta %.6g on St(3,2), both geodesics run from U = I to -U\n"
                "gamma_1 (in-plane rotation)   length %.5f  closed form %.5f  endpoint error %.2e\n"
                "gamma_2 (leaves the plane)    length %.5f  closed form %.5f  endpoint error %.2e\n"
                "%.5f vs %.5f: gamma_1 is %s\n",
                r.beta, r.length_first, r.closed_first, r.endpoint_error_first, r.length_second,
                r.closed_second, r.endpoint_error_second, r.length_first, r.length_second,
                r.length_second < r.length_first ? "not minimal" : "not beaten by gamma_2");
  os << buf;
}

}  // namespace stiefel::cli
