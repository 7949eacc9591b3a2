#include "commands.hpp"
#include "verify.hpp"

#include "stiefel/curves.hpp"
#include "stiefel/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace stiefel;
using namespace stiefel::cli;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::string csv(const Table &t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

std::size_t col(const Table &t, const std::string &name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  REQUIRE(it != t.columns.end());
  return static_cast<std::size_t>(it - t.columns.begin());
}

double num(const std::string &s) { return std::stod(s); }

}  // namespace

TEST_CASE("config validation") {
  std::ostringstream warn;
  ExperimentConfig cfg;
  CHECK_NOTHROW(validate(cfg, warn));
  cfg.n = 65;
  CHECK_THROWS_AS(validate(cfg, warn), InvalidInput);
  cfg.n = 21;
  validate(cfg, warn);
  CHECK(warn.str().find("warning") != std::string::npos);
  cfg = {};
  cfg.n = cfg.p;
  CHECK_THROWS_AS(validate(cfg, warn), InvalidInput);
  CHECK_NOTHROW(validate(cfg, warn, true));
  cfg = {};
  cfg.samples = 0;
  CHECK_THROWS_AS(validate(cfg, warn), InvalidInput);
  cfg = {};
  cfg.format = "png";
  CHECK_THROWS_AS(validate(cfg, warn), InvalidInput);
}

TEST_CASE("bounds table") {
  ExperimentConfig cfg;
  cfg.n = 5;
  cfg.p = 3;
  cfg.beta = 0.75;
  cfg.grid = 11;
  const Table odd = cmd_bounds(cfg);
  CHECK(odd.rows.size() == 11);
  CHECK(odd.columns.back() == "w_upper_on_lower");
  CHECK(num(odd.rows.back()[0]) == Approx(2.0 * std::sqrt(3.0)));
  CHECK(odd.rows.front()[1] == "0");
  const std::string text = csv(odd);
  CHECK(text.rfind("# stiefel " STIEFEL_VERSION " bounds", 0) == 0);
  CHECK(text.find("attainment=conjectured_unattained") != std::string::npos);

  cfg.p = 4;
  cfg.beta = 1.0;
  const Table even = cmd_bounds(cfg);
  CHECK(even.columns.size() == 3);
  cfg.p = 1;
  cfg.n = 2;
  const Table sphere = cmd_bounds(cfg);
  CHECK(num(sphere.rows.back()[1]) == Approx(kPi));
  CHECK(num(sphere.rows.back()[2]) == Approx(kPi));
}

TEST_CASE("sample output is deterministic and independent of thread count") {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.p = 2;
  cfg.samples = 24;
  cfg.seed = 3;
  cfg.beta2 = 0.5;
  cfg.threads = 1;
  const std::string serial = csv(cmd_sample(cfg));
  cfg.threads = 4;
  const std::string parallel = csv(cmd_sample(cfg));
  CHECK(serial == parallel);
  CHECK(serial == csv(cmd_sample(cfg)));
  CHECK(serial.find("seed=3") != std::string::npos);
  CHECK(serial.find("pair_id,frob_dist,length_beta,certificate,iterations,length_beta2") !=
        std::string::npos);
}

TEST_CASE("equivalence experiment on roundtrip pairs stays inside the Lipschitz band") {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.p = 2;
  cfg.beta = 1.0;
  cfg.beta2 = 0.5;
  cfg.samples = 200;
  cfg.seed = 7;
  cfg.mode = "roundtrip";
  const Table t = cmd_sample(cfg);
  const auto l1 = col(t, "length_beta"), l2 = col(t, "length_beta2");
  const auto c1 = col(t, "certificate"), c2 = col(t, "certificate_beta2");
  const auto target = col(t, "target_length");
  int used = 0;
  for (const auto &row : t.rows) {
    if (row[c1] == "not_converged" || row[c2] == "not_converged") continue;
    if (std::abs(num(row[l1]) - num(row[target])) > 1e-8) continue;
    ++used;
    const double ratio = num(row[l2]) / num(row[l1]);
    CHECK(ratio >= std::sqrt(0.5) - 1e-6);
    CHECK(ratio <= 1.0 + 1e-6);
  }
  CHECK(used >= 190);
}

TEST_CASE("antipodal sample hits delta = 2 sqrt(p)") {
  ExperimentConfig cfg;
  cfg.n = 5;
  cfg.p = 2;
  cfg.samples = 1;
  cfg.mode = "antipodal";
  const Table t = cmd_sample(cfg);
  REQUIRE(t.rows.size() == 1);
  CHECK(num(t.rows[0][col(t, "frob_dist")]) == Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("branch initialisation exposes both clusters at beta = 2") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.p = 2;
  cfg.beta = 2.0;
  cfg.samples = 3;
  cfg.mode = "antipodal";
  cfg.init = "branches";
  const Table t = cmd_sample(cfg);
  REQUIRE(t.rows.size() == 6);
  bool first = false, second = false;
  for (const auto &row : t.rows) {
    const double len = num(row[col(t, "length_beta")]);
    if (std::abs(len - 2.0 * kPi) < 1e-6) first = true;
    if (std::abs(len - kPi * std::sqrt(8.0 / 3.0)) < 1e-6) second = true;
  }
  CHECK(first);
  CHECK(second);
  cfg.beta = 1.0;
  CHECK_THROWS_AS(cmd_sample(cfg), NotApplicable);
}

TEST_CASE("families trace the flip distance law") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.p = 3;
  cfg.grid = 21;
  const Table t = cmd_families(cfg);
  const auto fam = col(t, "curve_family"), tc = col(t, "t");
  const auto fc = col(t, "frob_dist"), gc = col(t, "geodesic_dist");
  int checked = 0;
  for (const auto &row : t.rows) {
    if (row[fam].rfind("gamma_", 0) != 0) continue;
    const int k = std::stoi(row[fam].substr(6));
    const double s = num(row[tc]);
    const auto [geo, frob] = gamma_k_distance_law(k, s);
    CHECK(num(row[fc]) == Approx(frob).epsilon(1e-9));
    CHECK(num(row[gc]) == Approx(geo).epsilon(1e-9));
    if (s == 0.0) {
      CHECK(num(row[fc]) == Approx(0.0));
      CHECK(num(row[gc]) == 0.0);
    }
    if (s == 1.0) {
      CHECK(num(row[fc]) == Approx(2.0 * std::sqrt(k)));
      CHECK(num(row[gc]) == Approx(kPi * std::sqrt(k)));
    }
    ++checked;
  }
  CHECK(checked == 3 * 21);
}

TEST_CASE("branch demo report") {
  std::ostringstream os;
  print_branch_report(cmd_branch_demo(2.0), os);
  CHECK(os.str().find("6.28319 vs 5.13020") != std::string::npos);
  const BranchReport near = cmd_branch_demo(1.0001);
  CHECK(std::abs(near.length_first - near.length_second) < 1e-3);
  CHECK_THROWS_AS(cmd_branch_demo(1.0), NotApplicable);
}

TEST_CASE("slope table stays between the Lipschitz slopes") {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.p = 2;
  cfg.samples = 5;
  cfg.grid = 8;
  const Table t = cmd_slope(cfg);
  CHECK(t.rows.size() == 5 * 3 * 8);
  for (const auto &row : t.rows) {
    const double r = num(row[col(t, "ratio")]);
    CHECK(r >= num(row[col(t, "lower_slope")]) - 1e-3);
    CHECK(r <= num(row[col(t, "upper_slope")]) + 1e-3);
    if (row[col(t, "tangent_kind")] == "b_only") CHECK(r == Approx(1.0).epsilon(1e-3));
    if (row[col(t, "tangent_kind")] == "a_only") {
      CHECK(r == Approx(std::sqrt(num(row[col(t, "beta")]))).epsilon(1e-3));
    }
  }
}

TEST_CASE("svg output") {
  ExperimentConfig cfg;
  cfg.grid = 5;
  cfg.format = "svg";
  std::ostringstream os;
  emit(cmd_bounds(cfg), cfg, os);
  CHECK(os.str().rfind("<svg", 0) == 0);
  CHECK(os.str().find("</svg>") != std::string::npos);
}

TEST_CASE("verify passes and fails under a corrupted tolerance") {
  std::ostringstream os;
  CHECK(report(run_verify(0), os));
  std::ostringstream bad;
  CHECK_FALSE(report(run_verify(0, 0.0), bad));
  CHECK(bad.str().find("FAIL") != std::string::npos);
}
