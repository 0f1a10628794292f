#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "needlekit/needlekit.h"

using Catch::Approx;

namespace {
const char* kLogLinear =
    R"({"domain": ["-inf", "inf"], "breakpoints": [0], "values": [0], "end_slopes": [1, 1]})";

std::string take(char* s) {
  std::string out = s ? s : "";
  nk_string_free(s);
  return out;
}
}  // namespace

TEST_CASE("space handles and masses") {
  nk_space* space = nullptr;
  REQUIRE(nk_space_from_json(kLogLinear, &space) == NK_OK);
  nk_set* set = nullptr;
  REQUIRE(nk_set_from_json(R"([["-inf", 0]])", &set) == NK_OK);
  double m = 0, c = 0;
  CHECK(nk_mass(space, set, &m) == NK_OK);
  CHECK(m == Approx(1.0));
  CHECK(nk_minkowski_content(space, set, &c) == NK_OK);
  CHECK(c == Approx(1.0));

  nk_set* right = nullptr;
  REQUIRE(nk_set_from_json(R"([[0, "inf"]])", &right) == NK_OK);
  CHECK(nk_mass(space, right, &m) == NK_ERR_INFINITE_MASS);
  CHECK(std::string(nk_last_error()).size() > 0);

  double mu = 0;
  int attained = 0;
  char* minimizer = nullptr;
  CHECK(nk_cheeger_constant(space, &mu, &attained, &minimizer) == NK_OK);
  CHECK(mu == Approx(1.0));
  CHECK(attained == 1);
  CHECK(take(minimizer).find("-inf") != std::string::npos);

  nk_rigidity rig{};
  CHECK(nk_rigidity_1d(space, &rig) == NK_OK);
  CHECK(rig.rigid == 1);

  char* json = nullptr;
  CHECK(nk_space_to_json(space, &json) == NK_OK);
  CHECK(take(json).find("breakpoints") != std::string::npos);

  nk_set_free(right);
  nk_set_free(set);
  nk_space_free(space);
}

TEST_CASE("errors map to status codes") {
  nk_space* space = nullptr;
  CHECK(nk_space_from_json("not json", &space) == NK_ERR_PARSE);
  CHECK(space == nullptr);
  CHECK(nk_space_from_json(
            R"({"domain": ["-inf", "inf"], "breakpoints": [0], "values": [0], "end_slopes": [-1, 1]})",
            &space) == NK_ERR_INVALID_ARGUMENT);
  double out = 0;
  CHECK(nk_milman_profile(1.0, 0.1, &out) == NK_OK);
  CHECK(out == Approx(0.45597785602729));
  CHECK(nk_milman_profile(1.0, 2.0, &out) != NK_OK);
  CHECK(std::string(nk_status_name(NK_ERR_DEGENERATE)).rfind("degenerate", 0) == 0);
  CHECK(nk_mass(nullptr, nullptr, &out) == NK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("localization through the C API") {
  nk_discrete* d = nullptr;
  REQUIRE(nk_discrete_from_json(
              R"({"coords": [[0], [1], [2], [3]], "weights": [1, 1, 1, 1]})", &d) == NK_OK);
  CHECK(nk_discrete_size(d) == 4);
  std::vector<unsigned char> omega(4, 0);
  REQUIRE(nk_mask_from_json(R"({"indices": [0, 1]})", 4, omega.data()) == NK_OK);
  nk_localization* loc = nullptr;
  REQUIRE(nk_localize(d, omega.data(), 0, INFINITY, &loc) == NK_OK);
  size_t needles = 0, branch = 0;
  CHECK(nk_localization_counts(loc, &needles, &branch) == NK_OK);
  CHECK(needles == 1);
  CHECK(branch == 0);
  nk_transport_check chk{};
  CHECK(nk_localization_check(loc, &chk) == NK_OK);
  CHECK(chk.lipschitz_excess <= 1e-12);
  CHECK(chk.partition_error <= 1e-12);
  char* csv = nullptr;
  CHECK(nk_localization_needles_csv(loc, &csv) == NK_OK);
  CHECK(take(csv).rfind("needle_id,point_id,arclength,phi,mass,logdensity", 0) == 0);
  CHECK(nk_localization_flows_csv(loc, &csv) == NK_OK);
  CHECK(take(csv).rfind("src,dst,mass,cost", 0) == 0);
  nk_localization_free(loc);
  nk_discrete_free(d);
}

TEST_CASE("strip and splitting through the C API") {
  nk_strip* strip = nullptr;
  REQUIRE(nk_strip_from_model(
              R"({"kind": "product_strip", "h": 1, "n_rows": 3, "n_cols": 30, "spacing": 0.1})",
              &strip) == NK_OK);
  nk_discrete* d = nullptr;
  REQUIRE(nk_strip_space(strip, &d) == NK_OK);
  std::vector<unsigned char> omega(nk_discrete_size(d));
  REQUIRE(nk_strip_omega(strip, omega.data()) == NK_OK);
  char* info = nullptr;
  REQUIRE(nk_strip_info_json(strip, &info) == NK_OK);
  CHECK(take(info).find("center") != std::string::npos);
  nk_localization* loc = nullptr;
  REQUIRE(nk_localize(d, omega.data(), 1, INFINITY, &loc) == NK_OK);
  int splits = 0;
  char* verdict = nullptr;
  CHECK(nk_split_detect(loc, 0.05, 1e-6, -1.0, &splits, &verdict) == NK_OK);
  CHECK(splits == 1);
  CHECK(take(verdict).find("h_est") != std::string::npos);
  nk_localization_free(loc);
  nk_discrete_free(d);
  nk_strip_free(strip);
}

TEST_CASE("suites through the C API") {
  nk_suite_options opt{3, 100, 1e-9, 2, 0};
  size_t violations = 7;
  double worst = 0;
  char* csv = nullptr;
  char* cex = nullptr;
  CHECK(nk_run_suite("iso", &opt, &violations, &worst, &csv, &cex) == NK_OK);
  CHECK(violations == 0);
  CHECK(cex == nullptr);
  CHECK(!take(csv).empty());
  CHECK(nk_run_suite("nope", &opt, &violations, &worst, &csv, nullptr) == NK_ERR_INVALID_ARGUMENT);
  CHECK(std::string(nk_version()).size() > 0);
}
