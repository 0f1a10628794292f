// needlekit command line driver. Every computation goes through the C API.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "needlekit/needlekit.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct CliError {
  int code;
  std::string message;
};

void check(nk_status s, const std::string& what) {
  if (s != NK_OK) {
    throw CliError{kExitConfig, what + ": " + nk_status_name(s) + ": " + nk_last_error()};
  }
}

struct StringDeleter {
  void operator()(char* s) const { nk_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <class T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using Space = std::unique_ptr<nk_space, HandleDeleter<nk_space, nk_space_free>>;
using Set = std::unique_ptr<nk_set, HandleDeleter<nk_set, nk_set_free>>;
using Density = std::unique_ptr<nk_density, HandleDeleter<nk_density, nk_density_free>>;
using Discrete = std::unique_ptr<nk_discrete, HandleDeleter<nk_discrete, nk_discrete_free>>;
using Loc = std::unique_ptr<nk_localization, HandleDeleter<nk_localization, nk_localization_free>>;
using Strip = std::unique_ptr<nk_strip, HandleDeleter<nk_strip, nk_strip_free>>;

std::string take(char* s) {
  OwnedString owned(s);
  return s ? std::string(s) : std::string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitConfig, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON or a path to a JSON file.
std::string inline_or_file(const std::string& arg) {
  const auto p = arg.find_first_not_of(" \t\n");
  if (p != std::string::npos && (arg[p] == '{' || arg[p] == '[')) return arg;
  return read_file(arg);
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

struct Options {
  std::string space;
  std::string set;
  std::string model;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  std::optional<double> tol;
  bool svg = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--space", o.space, "space JSON file");
  sub->add_option("--set", o.set, "interval set JSON file");
  sub->add_option("--model", o.model, "model spec (inline JSON or file)");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--trials", o.trials, "number of random trials");
  sub->add_option("--tol", o.tol, "tolerance override");
  sub->add_option("--out", o.out, "output directory");
  sub->add_flag("--svg", o.svg, "also write an SVG chart");
}

class Runner {
 public:
  explicit Runner(const Options& o) : o_(o) { fs::create_directories(o_.out); }

  void write(const std::string& name, const std::string& text) const {
    const auto path = fs::path(o_.out) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitConfig, "cannot write " + path.string()};
    out << text;
  }

  Space space() const {
    nk_space* s = nullptr;
    if (!o_.space.empty()) {
      check(nk_space_from_json(read_file(o_.space).c_str(), &s), "reading --space");
    } else if (!o_.model.empty()) {
      check(nk_space_from_model(inline_or_file(o_.model).c_str(), &s), "building --model");
    } else {
      throw CliError{kExitConfig, "a space is required (--space or --model)"};
    }
    return Space(s);
  }

  Set set() const {
    if (o_.set.empty()) throw CliError{kExitConfig, "--set is required"};
    nk_set* s = nullptr;
    check(nk_set_from_json(read_file(o_.set).c_str(), &s), "reading --set");
    return Set(s);
  }

  Set set_from_text(const std::string& text) const {
    nk_set* s = nullptr;
    check(nk_set_from_json(text.c_str(), &s), "reading set");
    return Set(s);
  }

  std::size_t trials(std::size_t fallback) const { return o_.trials ? o_.trials : fallback; }
  double tol(double fallback) const { return o_.tol.value_or(fallback); }

  nk_suite_options suite(std::size_t default_trials, double default_tol) const {
    nk_suite_options s{};
    s.seed = o_.seed;
    s.trials = trials(default_trials);
    s.tol = tol(default_tol);
    s.threads = 0;
    s.quantiles = 0;
    return s;
  }

  // Runs a suite, writes CSV and the first counterexample; returns violations.
  std::size_t run_suite(const char* name, const nk_suite_options& s, const std::string& stem) const {
    std::size_t violations = 0;
    double worst = 0.0;
    char* csv = nullptr;
    char* cx = nullptr;
    check(nk_run_suite(name, &s, &violations, &worst, &csv, &cx), std::string("suite ") + name);
    write(stem + ".csv", take(csv));
    const std::string counterexample = take(cx);
    if (!counterexample.empty()) write(stem + "-counterexample.json", counterexample);
    std::cout << stem << ": " << s.trials << " trials, " << violations << " violations, worst "
              << num(worst) << '\n';
    return violations;
  }

  const Options& options() const { return o_; }

 private:
  Options o_;
};

void write_svg(const Runner& run, const std::string& name, const std::string& title,
               const std::vector<double>& xs, const std::vector<double>& ys) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) continue;
    x0 = std::min(x0, xs[i]);
    x1 = std::max(x1, xs[i]);
    y0 = std::min(y0, ys[i]);
    y1 = std::max(y1, ys[i]);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double W = 640, H = 400, pad = 40;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title
    << "</text>\n"
    << "<text x=\"" << pad << "\" y=\"" << H - 8 << "\" font-family=\"sans-serif\" font-size=\"11\">x: ["
    << num(x0) << ", " << num(x1) << "]  y: [" << num(y0) << ", " << num(y1) << "]</text>\n"
    << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) continue;
    const double px = pad + (xs[i] - x0) / (x1 - x0) * (W - 2 * pad);
    const double py = H - pad - (ys[i] - y0) / (y1 - y0) * (H - 2 * pad);
    s << px << ',' << py << ' ';
  }
  s << "\"/>\n</svg>\n";
  run.write(name, s.str());
}

json space_json(const nk_space* s) {
  char* text = nullptr;
  check(nk_space_to_json(s, &text), "serializing space");
  return json::parse(take(text));
}

double domain_number(const json& v) {
  if (v.is_string()) return v.get<std::string>() == "-inf" ? -std::numeric_limits<double>::infinity()
                                                            : std::numeric_limits<double>::infinity();
  return v.get<double>();
}

// ---- subcommands -------------------------------------------------------

int cmd_entropy(const Runner& run, std::optional<double> x0_opt, std::optional<double> r1,
                std::optional<double> r2) {
  auto space = run.space();
  double lo = 0.0, hi = 0.0;
  check(nk_space_domain(space.get(), &lo, &hi), "domain");
  const double x0 = x0_opt.value_or(std::clamp(0.0, lo, hi));
  double window[2] = {r1.value_or(0.0), r2.value_or(0.0)};
  if (r1.has_value() != r2.has_value()) throw CliError{kExitConfig, "--r1 and --r2 go together"};
  nk_entropy_report rep{};
  check(nk_volume_entropy(space.get(), x0, r1 ? window : nullptr, &rep), "volume entropy");
  run.write("entropy.csv", "x0,h,estimator_slope,r1,r2\n" + num(x0) + ',' + num(rep.h) + ',' +
                               num(rep.estimator_slope) + ',' + num(rep.r1) + ',' + num(rep.r2) + '\n');
  std::cout << "h = " << num(rep.h) << " (window fit " << num(rep.estimator_slope) << ")\n";
  return kExitOk;
}

int cmd_cheeger(const Runner& run) {
  auto space = run.space();
  double mu = 0.0;
  int attained = 0;
  char* minimizer = nullptr;
  check(nk_cheeger_constant(space.get(), &mu, &attained, &minimizer), "cheeger constant");
  const auto m = json::parse(take(minimizer));
  std::string lo = "", hi = "";
  if (m.is_array() && !m.empty()) {
    lo = num(domain_number(m[0][0]));
    hi = num(domain_number(m[0][1]));
  }
  run.write("cheeger.csv", "mu,attained,minimizer_lo,minimizer_hi\n" + num(mu) + ',' +
                               (attained ? "true" : "false") + ',' + lo + ',' + hi + '\n');
  std::cout << "mu = " << num(mu) << (attained ? " (attained)" : " (not attained)") << '\n';
  if (run.options().svg) {
    const auto sj = space_json(space.get());
    const auto& bp = sj["breakpoints"];
    double a = bp.front().get<double>() - 5.0, b = bp.back().get<double>() + 5.0;
    a = std::max(a, domain_number(sj["domain"][0]));
    b = std::min(b, domain_number(sj["domain"][1]));
    std::vector<double> xs, ys;
    for (int k = 0; k <= 400; ++k) {
      const double x = a + (b - a) * k / 400.0;
      double r = 0.0;
      if (nk_left_half_line_ratio(space.get(), x, &r) != NK_OK) continue;
      xs.push_back(x);
      ys.push_back(r);
    }
    write_svg(run, "cheeger.svg", "Cheeger ratio of (-inf, b]", xs, ys);
  }
  return kExitOk;
}

int cmd_profile(const Runner& run, bool milman, double diameter, int samples) {
  if (samples < 1) throw CliError{kExitConfig, "--samples must be positive"};
  std::vector<double> vs, is;
  std::string csv;
  if (milman) {
    csv = "v,milman\n";
    for (int k = 1; k <= samples; ++k) {
      const double v = 0.5 * k / samples;
      double I = 0.0;
      check(nk_milman_profile(diameter, v, &I), "milman profile");
      vs.push_back(v);
      is.push_back(I);
      csv += num(v) + ',' + num(I) + '\n';
    }
  } else {
    auto space = run.space();
    double lo = 0.0, hi = 0.0;
    check(nk_space_domain(space.get(), &lo, &hi), "domain");
    auto whole = run.set_from_text(json::array({json::array({num(lo), num(hi)})}).dump());
    double total = 0.0;
    check(nk_mass(space.get(), whole.get(), &total), "total mass (profile needs a finite-mass space)");
    csv = "v,profile\n";
    for (int k = 1; k <= samples; ++k) {
      const double v = total * k / (samples + 1.0);
      double I = 0.0;
      check(nk_isoperimetric_profile(space.get(), v, &I), "isoperimetric profile");
      vs.push_back(v);
      is.push_back(I);
      csv += num(v) + ',' + num(I) + '\n';
    }
  }
  run.write("profile.csv", csv);
  if (run.options().svg) write_svg(run, "profile.svg", milman ? "Milman profile" : "isoperimetric profile", vs, is);
  std::cout << "wrote " << samples << " profile samples\n";
  return kExitOk;
}

int cmd_verify_iso(const Runner& run) {
  if (run.options().space.empty()) {
    return run.run_suite("iso", run.suite(10000, 1e-9), "verify-iso") ? kExitViolation : kExitOk;
  }
  auto space = run.space();
  auto set = run.set();
  const auto sj = space_json(space.get());
  nk_entropy_report rep{};
  check(nk_volume_entropy(space.get(), sj["breakpoints"][0].get<double>(), nullptr, &rep), "volume entropy");
  double lc = 0.0, lm = 0.0;
  check(nk_log_minkowski_content(space.get(), set.get(), &lc), "minkowski content");
  check(nk_log_mass(space.get(), set.get(), &lm), "mass");
  const bool violated = rep.h > 0.0 && std::log(rep.h) + lm - lc > run.tol(1e-9);
  const double lhs = std::exp(lc), rhs = rep.h * std::exp(lm);
  run.write("verify-iso.csv", "h,lhs,rhs,verdict\n" + num(rep.h) + ',' + num(lhs) + ',' + num(rhs) + ',' +
                                  (violated ? "FAIL" : "ok") + '\n');
  if (violated) {
    run.write("verify-iso-counterexample.json",
              json{{"space", sj}, {"set", json::parse(read_file(run.options().set))}, {"lhs", lhs}, {"rhs", rhs}}
                  .dump(2));
  }
  std::cout << "m+ = " << num(lhs) << ", h m = " << num(rhs) << (violated ? "  VIOLATION\n" : "\n");
  return violated ? kExitViolation : kExitOk;
}

int cmd_verify_convexity(const Runner& run, const std::string& d0, const std::string& d1, std::size_t quantiles) {
  if (run.options().space.empty()) {
    auto conv = run.suite(500, 1e-6);
    conv.quantiles = quantiles;
    std::size_t bad = run.run_suite("convexity", conv, "verify-convexity");
    bad += run.run_suite("brunn-minkowski", run.suite(500, 1e-9), "verify-bm");
    return bad ? kExitViolation : kExitOk;
  }
  auto space = run.space();
  const std::string f0 = d0.empty() ? run.options().space : d0;
  const std::string f1 = d1.empty() ? run.options().space : d1;
  nk_density *m0 = nullptr, *m1 = nullptr;
  check(nk_density_from_json(space.get(), read_file(f0).c_str(), "density0", &m0), "reading density0");
  Density mu0(m0);
  check(nk_density_from_json(space.get(), read_file(f1).c_str(), "density1", &m1), "reading density1");
  Density mu1(m1);
  double worst = 0.0;
  char* csv = nullptr;
  check(nk_convexity_check(space.get(), mu0.get(), mu1.get(), nullptr, 0, quantiles, &worst, &csv),
        "convexity check");
  run.write("verify-convexity.csv", take(csv));
  const bool violated = worst > run.tol(1e-6);
  std::cout << "max violation " << num(worst) << (violated ? "  VIOLATION\n" : "\n");
  return violated ? kExitViolation : kExitOk;
}

int cmd_verify_lemma41(const Runner& run, std::optional<double> h, std::optional<double> R) {
  if (run.options().space.empty()) {
    return run.run_suite("lemma41", run.suite(1000, 1e-9), "verify-lemma41") ? kExitViolation : kExitOk;
  }
  auto space = run.space();
  auto set = run.set();
  auto doc = json::parse(read_file(run.options().set));
  const double hv = h ? *h : doc.value("h", std::numeric_limits<double>::quiet_NaN());
  const double Rv = R ? *R : doc.value("R", std::numeric_limits<double>::quiet_NaN());
  if (std::isnan(hv) || std::isnan(Rv)) throw CliError{kExitConfig, "--h and --R are required"};
  nk_check c{};
  check(nk_lemma41_check(space.get(), set.get(), hv, Rv, &c), "lemma 4.1 check");
  run.write("verify-lemma41.csv", "h,R,lhs,rhs,verdict\n" + num(hv) + ',' + num(Rv) + ',' + num(c.lhs) + ',' +
                                      num(c.rhs) + ',' + (c.holds ? "ok" : "FAIL") + '\n');
  std::cout << "lhs = " << num(c.lhs) << ", rhs = " << num(c.rhs) << (c.holds ? "\n" : "  VIOLATION\n");
  return c.holds ? kExitOk : kExitViolation;
}

std::string lemma42_row(const std::string& name, const json& r) {
  return name + ',' + num(r["eps"].get<double>()) + ',' + num(r["h"].get<double>()) + ',' +
         num(r["L"].get<double>()) + ',' + num(r["R"].get<double>()) + ',' + num(r["D"].get<double>()) + ',' +
         num(r["b"].get<double>()) + ',' + num(r["window_lo"].get<double>()) + ',' +
         num(r["window_hi"].get<double>()) + ',' + num(r["slope_min"].get<double>()) + ',' +
         num(r["slope_max"].get<double>()) + ',' + num(r["slope_lower_bound"].get<double>()) + ',' +
         num(r["slope_upper_bound"].get<double>()) + ',' + (r["hypothesis_holds"].get<bool>() ? "true" : "false") +
         ',' + (r["conclusion_holds"].get<bool>() ? "true" : "false") + ',' +
         (r["verdict"].get<bool>() ? "true" : "false") + ',' + std::to_string(r["precondition_violations"].size());
}

constexpr const char* kLemma42Header =
    "name,eps,h,L,R,D,b,window_lo,window_hi,slope_min,slope_max,slope_lower,slope_upper,hypothesis,"
    "conclusion,verdict,precondition_violations\n";

int cmd_verify_lemma42(const Runner& run, std::vector<double> eps_list, std::optional<double> h,
                       std::optional<double> L, std::optional<double> R) {
  std::string csv = kLemma42Header;
  bool bad = false;
  if (!run.options().space.empty()) {
    if (eps_list.size() != 1 || !h || !L || !R) {
      throw CliError{kExitConfig, "a single instance needs --h, --eps, --L and --R"};
    }
    auto space = run.space();
    auto set = run.set();
    char* text = nullptr;
    check(nk_lemma42_report(space.get(), set.get(), *h, eps_list[0], *L, *R, &text), "lemma 4.2 report");
    const auto r = json::parse(take(text));
    if (!r["precondition_violations"].empty()) {
      std::string msg = "violated preconditions:";
      for (const auto& v : r["precondition_violations"]) msg += " [" + v.get<std::string>() + "]";
      throw CliError{kExitConfig, msg};
    }
    csv += lemma42_row("input", r) + '\n';
    bad = !r["verdict"].get<bool>();
  } else {
    if (eps_list.empty()) eps_list = {1e-3, 1e-4};
    json failures = json::array();
    for (double eps : eps_list) {
      char* text = nullptr;
      check(nk_lemma42_instances(eps, &text), "lemma 4.2 instances");
      for (const auto& inst : json::parse(take(text))) {
        nk_space* sp = nullptr;
        check(nk_space_from_json(inst["space"].dump().c_str(), &sp), "instance space");
        Space space(sp);
        auto set = run.set_from_text(inst["set"].dump());
        char* rep = nullptr;
        check(nk_lemma42_report(space.get(), set.get(), inst["h"], inst["eps"], inst["L"], inst["R"], &rep),
              "lemma 4.2 report");
        const auto r = json::parse(take(rep));
        const std::string name = inst["name"];
        csv += lemma42_row(name, r) + '\n';
        const bool ok = r["precondition_violations"].empty() && r["verdict"].get<bool>() &&
                        r["hypothesis_holds"].get<bool>() == inst["expect_hypothesis"].get<bool>();
        if (!ok) failures.push_back({{"instance", inst}, {"report", r}});
      }
    }
    if (!failures.empty()) {
      run.write("verify-lemma42-counterexample.json", failures.dump(2));
      bad = true;
    }
  }
  run.write("verify-lemma42.csv", csv);
  std::cout << (bad ? "lemma 4.2: VIOLATION\n" : "lemma 4.2: ok\n");
  return bad ? kExitViolation : kExitOk;
}

int cmd_rigidity(const Runner& run) {
  if (run.options().space.empty() && run.options().model.empty()) {
    return run.run_suite("rigidity", run.suite(100, 0.0), "rigidity1d") ? kExitViolation : kExitOk;
  }
  auto space = run.space();
  nk_rigidity r{};
  check(nk_rigidity_1d(space.get(), &r), "rigidity");
  run.write("rigidity1d.csv", std::string("rigid,b,affine\n") + (r.rigid ? "true" : "false") + ',' +
                                  (r.rigid ? num(r.b) : "") + ',' + (r.affine ? "true" : "false") + '\n');
  std::cout << (r.rigid ? "rigid" : "not rigid") << '\n';
  // Attainment must coincide with affinity.
  return (r.rigid != 0) == (r.affine != 0) ? kExitOk : kExitViolation;
}

struct DiscreteInput {
  Discrete space;
  std::vector<unsigned char> omega;
  std::size_t center = 0;
  double radius = std::numeric_limits<double>::infinity();
};

DiscreteInput discrete_input(const Runner& run, const std::string& omega_file, std::optional<std::size_t> center,
                             std::optional<double> radius, std::optional<double> wedge) {
  DiscreteInput in;
  const auto& o = run.options();
  if (!o.model.empty()) {
    nk_strip* st = nullptr;
    check(nk_strip_from_model(inline_or_file(o.model).c_str(), &st), "building strip model");
    Strip strip(st);
    nk_discrete* d = nullptr;
    check(nk_strip_space(strip.get(), &d), "strip space");
    in.space.reset(d);
    in.omega.resize(nk_discrete_size(d));
    if (wedge) {
      check(nk_strip_wedge(strip.get(), *wedge, in.omega.data()), "wedge mask");
    } else {
      check(nk_strip_omega(strip.get(), in.omega.data()), "strip mask");
    }
    char* info = nullptr;
    check(nk_strip_info_json(strip.get(), &info), "strip info");
    const auto j = json::parse(take(info));
    in.center = j["center"].get<std::size_t>();
    in.radius = j["radius"].get<double>();
  } else if (!o.space.empty()) {
    nk_discrete* d = nullptr;
    check(nk_discrete_from_json(read_file(o.space).c_str(), &d), "reading --space");
    in.space.reset(d);
    if (omega_file.empty()) throw CliError{kExitConfig, "--omega is required with --space"};
    in.omega.resize(nk_discrete_size(d));
    check(nk_mask_from_json(read_file(omega_file).c_str(), in.omega.size(), in.omega.data()), "reading --omega");
  } else {
    throw CliError{kExitConfig, "a discrete space is required (--space or --model)"};
  }
  if (wedge && o.model.empty()) throw CliError{kExitConfig, "--wedge needs a product_strip --model"};
  if (center) in.center = *center;
  if (radius) in.radius = *radius;
  return in;
}

Loc run_localize(const DiscreteInput& in) {
  nk_localization* l = nullptr;
  check(nk_localize(in.space.get(), in.omega.data(), in.center, in.radius, &l), "localization");
  return Loc(l);
}

int cmd_needles(const Runner& run, const DiscreteInput& in) {
  auto loc = run_localize(in);
  char *needles = nullptr, *flows = nullptr, *summary = nullptr;
  check(nk_localization_needles_csv(loc.get(), &needles), "needle dump");
  run.write("needles.csv", take(needles));
  check(nk_localization_flows_csv(loc.get(), &flows), "flow dump");
  run.write("flows.csv", take(flows));
  check(nk_localization_summary_json(loc.get(), &summary), "summary");
  run.write("needles-summary.json", take(summary));
  nk_transport_check c{};
  check(nk_localization_check(loc.get(), &c), "transport check");
  std::size_t count = 0, branch = 0;
  check(nk_localization_counts(loc.get(), &count, &branch), "counts");
  const double tol = run.tol(1e-9);
  const bool ok = c.lipschitz_excess <= tol && c.slackness_gap <= tol && c.marginal_error <= tol &&
                  c.partition_error <= 1e-12;
  std::cout << count << " needles, " << branch << " branch points; lipschitz excess "
            << num(c.lipschitz_excess) << ", slackness gap " << num(c.slackness_gap) << '\n';
  return ok ? kExitOk : kExitViolation;
}

int cmd_split(const Runner& run, const DiscreteInput& in, double h_tol, double dir_tol,
              std::optional<double> position_tol, const std::string& expect) {
  if (!expect.empty() && expect != "split" && expect != "no-split") {
    throw CliError{kExitConfig, "--expect must be split or no-split"};
  }
  auto loc = run_localize(in);
  int splits = 0;
  char* verdict = nullptr;
  check(nk_split_detect(loc.get(), h_tol, dir_tol, position_tol.value_or(-1.0), &splits, &verdict),
        "splitting detector");
  const auto v = json::parse(take(verdict));
  auto b = [&](const char* k) { return std::string(v[k].get<bool>() ? "true" : "false"); };
  run.write("split-detect.csv",
            "splits,h_est,slopes_agree,directions_parallel,boundaries_agree,max_slope_deviation,"
            "max_direction_defect,boundary_spread,position_tol,needles\n" +
                b("splits") + ',' + num(v["h_est"]) + ',' + b("slopes_agree") + ',' + b("directions_parallel") +
                ',' + b("boundaries_agree") + ',' + num(v["max_slope_deviation"]) + ',' +
                num(v["max_direction_defect"]) + ',' + num(v["boundary_spread"]) + ',' +
                num(v["position_tol"]) + ',' + std::to_string(v["needles"].get<std::size_t>()) + '\n');
  std::cout << (splits ? "splits" : "does not split") << ", h_est = " << num(v["h_est"]) << '\n';
  if (expect.empty()) return kExitOk;
  return (expect == "split") == (splits != 0) ? kExitOk : kExitViolation;
}

int cmd_model(const Runner& run) {
  const auto& o = run.options();
  if (o.model.empty()) throw CliError{kExitConfig, "--model is required"};
  const auto text = inline_or_file(o.model);
  const auto spec = json::parse(text, nullptr, false);
  if (spec.is_discarded() || !spec.is_object()) throw CliError{kExitConfig, "--model is not a JSON object"};
  if (spec.value("kind", "") == "product_strip") {
    nk_strip* st = nullptr;
    check(nk_strip_from_model(text.c_str(), &st), "building strip model");
    Strip strip(st);
    nk_discrete* d = nullptr;
    check(nk_strip_space(strip.get(), &d), "strip space");
    Discrete space(d);
    char* sj = nullptr;
    check(nk_discrete_to_json(space.get(), &sj), "serializing strip");
    run.write("strip-space.json", take(sj));
    std::vector<unsigned char> mask(nk_discrete_size(space.get()));
    check(nk_strip_omega(strip.get(), mask.data()), "strip mask");
    json m = json::array();
    for (auto x : mask) m.push_back(x != 0);
    run.write("strip-omega.json", m.dump());
    char* info = nullptr;
    check(nk_strip_info_json(strip.get(), &info), "strip info");
    run.write("strip-info.json", take(info));
  } else {
    auto space = run.space();
    run.write("space.json", space_json(space.get()).dump(2));
  }
  std::cout << "model written to " << o.out << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"needlekit: isoperimetry, needle decomposition and displacement convexity checks"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* entropy = app.add_subcommand("entropy", "volume entropy of a 1-D space");
  add_common(entropy, o);
  std::optional<double> x0, r1, r2;
  entropy->add_option("--x0", x0, "ball centre");
  entropy->add_option("--r1", r1, "fit window start");
  entropy->add_option("--r2", r2, "fit window end");

  auto* cheeger = app.add_subcommand("cheeger", "Cheeger constant of an infinite-mass 1-D space");
  add_common(cheeger, o);

  auto* profile = app.add_subcommand("profile", "isoperimetric or Milman profile sweep");
  add_common(profile, o);
  bool milman = false;
  double diameter = 1.0;
  int samples = 50;
  profile->add_flag("--milman", milman, "sweep the Milman profile instead");
  profile->add_option("--diameter", diameter, "diameter for the Milman profile");
  profile->add_option("--samples", samples, "number of volume samples");

  auto* iso = app.add_subcommand("verify-iso", "isoperimetric inequality m+ >= h m");
  add_common(iso, o);

  auto* conv = app.add_subcommand("verify-convexity", "entropy convexity and Brunn-Minkowski");
  add_common(conv, o);
  std::string d0, d1;
  std::size_t quantiles = 10000;
  conv->add_option("--density0", d0, "density JSON for mu0");
  conv->add_option("--density1", d1, "density JSON for mu1");
  conv->add_option("--quantiles", quantiles, "quantile grid size");

  auto* l41 = app.add_subcommand("verify-lemma41", "one-dimensional long-interval bound");
  add_common(l41, o);
  std::optional<double> h41, R41;
  l41->add_option("--h", h41, "h");
  l41->add_option("--R", R41, "R");

  auto* l42 = app.add_subcommand("verify-lemma42", "almost-linearity of the density");
  add_common(l42, o);
  std::vector<double> eps42;
  std::optional<double> h42, L42, R42;
  l42->add_option("--eps", eps42, "epsilon values");
  l42->add_option("--h", h42, "h");
  l42->add_option("--L", L42, "L");
  l42->add_option("--R", R42, "R");

  auto* rig = app.add_subcommand("rigidity1d", "attainment of the sharp Cheeger constant");
  add_common(rig, o);

  std::string omega_file, expect;
  std::optional<std::size_t> center;
  std::optional<double> radius, wedge, position_tol;
  double h_tol = 0.05, dir_tol = 1e-6;
  auto* needles = app.add_subcommand("needles", "full localization pipeline with dumps");
  auto* split = app.add_subcommand("split-detect", "splitting signature of the needle family");
  for (auto* sub : {needles, split}) {
    add_common(sub, o);
    sub->add_option("--omega", omega_file, "Omega mask JSON");
    sub->add_option("--center", center, "ball centre point index");
    sub->add_option("--radius", radius, "ball radius");
    sub->add_option("--wedge", wedge, "use a tilted Omega on a product strip");
  }
  split->add_option("--h-tol", h_tol, "relative slope tolerance");
  split->add_option("--dir-tol", dir_tol, "direction tolerance (1 - cos)");
  split->add_option("--position-tol", position_tol, "boundary position tolerance");
  split->add_option("--expect", expect, "split or no-split; exit 1 on mismatch");

  auto* model = app.add_subcommand("model", "write a model as JSON");
  add_common(model, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    Runner run(o);
    if (*entropy) return cmd_entropy(run, x0, r1, r2);
    if (*cheeger) return cmd_cheeger(run);
    if (*profile) return cmd_profile(run, milman, diameter, samples);
    if (*iso) return cmd_verify_iso(run);
    if (*conv) return cmd_verify_convexity(run, d0, d1, quantiles);
    if (*l41) return cmd_verify_lemma41(run, h41, R41);
    if (*l42) return cmd_verify_lemma42(run, eps42, h42, L42, R42);
    if (*rig) return cmd_rigidity(run);
    if (*needles) return cmd_needles(run, discrete_input(run, omega_file, center, radius, wedge));
    if (*split) {
      return cmd_split(run, discrete_input(run, omega_file, center, radius, wedge), h_tol, dir_tol, position_tol,
                       expect);
    }
    if (*model) return cmd_model(run);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
