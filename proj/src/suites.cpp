#include "needlekit/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/io.hpp"
#include "needlekit/random_instances.hpp"

namespace needlekit {

namespace {

using json_io::json;

struct TrialOutcome {
  std::string row;
  bool violated = false;
  double measure = -std::numeric_limits<double>::infinity();
  json counterexample;
};

using TrialFn = std::function<TrialOutcome(std::size_t trial, std::mt19937_64& rng)>;

SuiteResult run_suite(const char* name, const char* header, const SuiteOptions& opt,
                      const TrialFn& fn) {
  std::vector<TrialOutcome> out(opt.trials);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(effective_threads(opt.threads), static_cast<unsigned>(opt.trials)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t k = w; k < opt.trials; k += workers) {
        auto rng = trial_rng(opt.seed, k);
        out[k] = fn(k, rng);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SuiteResult r;
  r.name = name;
  r.trials = opt.trials;
  r.worst = -std::numeric_limits<double>::infinity();
  std::ostringstream csv;
  csv << header << '\n';
  for (std::size_t k = 0; k < out.size(); ++k) {
    csv << k << ',' << out[k].row << ',' << (out[k].violated ? "FAIL" : "ok") << '\n';
    r.worst = std::max(r.worst, out[k].measure);
    if (out[k].violated) {
      if (r.violations == 0) {
        json cx = out[k].counterexample;
        cx["suite"] = name;
        cx["seed"] = opt.seed;
        cx["trial"] = k;
        cx["tol"] = opt.tol;
        r.counterexample = cx.dump(2);
      }
      ++r.violations;
    }
  }
  r.csv = csv.str();
  return r;
}

std::string fmt(double x) { return format_number(x); }

json density_json(const Density1D& d) {
  return json{{"edges", d.edges()}, {"rho", d.rho()}};
}

}  // namespace

unsigned effective_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NEEDLEKIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

SuiteResult verify_isoperimetric(const SuiteOptions& opt) {
  return run_suite("verify-iso", "trial,h,lhs,rhs,verdict", opt, [&](std::size_t, std::mt19937_64& rng) {
    const auto space = random_space(rng, std::bernoulli_distribution(0.7)(rng) ? SpaceShape::infinite_mass
                                                                                : SpaceShape::any);
    const auto set = random_finite_set(space, rng);
    const double h = volume_entropy(space, space.breakpoints().front()).h;
    const double lc = log_minkowski_content(space, set);
    const double lm = log_mass(space, set);
    TrialOutcome o;
    const double rhs_log = h > 0.0 ? std::log(h) + lm : -std::numeric_limits<double>::infinity();
    o.measure = rhs_log - lc;
    o.violated = h > 0.0 && o.measure > opt.tol;
    o.row = fmt(h) + ',' + fmt(std::exp(lc)) + ',' + fmt(h * std::exp(lm));
    o.counterexample = {{"space", json_io::to_json(space)}, {"set", json_io::to_json(set)},
                        {"lhs", std::exp(lc)}, {"rhs", h * std::exp(lm)}};
    return o;
  });
}

SuiteResult verify_convexity(const SuiteOptions& opt) {
  return run_suite("verify-convexity", "trial,max_violation,max_mass_error,verdict", opt,
                   [&](std::size_t, std::mt19937_64& rng) {
                     const auto space = random_space(rng);
                     const auto mu0 = random_density(space, rng);
                     const auto mu1 = random_density(space, rng);
                     const auto rep = displacement_convexity_check(space, mu0, mu1, default_t_grid(),
                                                                   opt.quantiles);
                     TrialOutcome o;
                     o.measure = rep.max_violation;
                     o.violated = rep.max_violation > opt.tol || rep.max_mass_error > 1e-9;
                     o.row = fmt(rep.max_violation) + ',' + fmt(rep.max_mass_error);
                     o.counterexample = {{"space", json_io::to_json(space)},
                                         {"density0", density_json(mu0)},
                                         {"density1", density_json(mu1)},
                                         {"max_violation", rep.max_violation}};
                     return o;
                   });
}

SuiteResult verify_brunn_minkowski(const SuiteOptions& opt) {
  return run_suite("verify-bm", "trial,max_violation,verdict", opt, [&](std::size_t, std::mt19937_64& rng) {
    const auto space = random_space(rng);
    const auto omega = random_bounded_set(space, rng);
    const auto b = random_bounded_set(space, rng);
    const auto rep = brunn_minkowski_check(space, omega, b, default_t_grid(), opt.tol);
    TrialOutcome o;
    o.measure = rep.max_violation;
    o.violated = !rep.holds;
    o.row = fmt(rep.max_violation);
    o.counterexample = {{"space", json_io::to_json(space)}, {"set", json_io::to_json(omega)},
                        {"set_b", json_io::to_json(b)}, {"max_violation", rep.max_violation}};
    return o;
  });
}

SuiteResult verify_lemma41(const SuiteOptions& opt) {
  return run_suite("verify-lemma41", "trial,h,R,lhs,rhs,verdict", opt, [&](std::size_t, std::mt19937_64& rng) {
    const auto inst = random_lemma41_instance(rng);
    const auto c = lemma_1dim_check(inst.space, inst.omega, inst.h, inst.R);
    TrialOutcome o;
    o.measure = c.rhs > 0.0 ? (c.rhs - c.lhs) / c.rhs : -1.0;
    o.violated = !c.holds;
    o.row = fmt(inst.h) + ',' + fmt(inst.R) + ',' + fmt(c.lhs) + ',' + fmt(c.rhs);
    o.counterexample = {{"space", json_io::to_json(inst.space)}, {"set", json_io::to_json(inst.omega)},
                        {"h", inst.h}, {"R", inst.R}, {"lhs", c.lhs}, {"rhs", c.rhs}};
    return o;
  });
}

SuiteResult verify_growth(const SuiteOptions& opt) {
  return run_suite("verify-growth", "trial,x0,r,delta,eps,lhs,rhs,verdict", opt,
                   [&](std::size_t, std::mt19937_64& rng) {
                     const auto g = random_growth_instance(rng);
                     const auto c = entropy_growth_inequality_check(g.space, g.x0, g.r, g.delta, g.eps, opt.tol);
                     TrialOutcome o;
                     o.measure = c.rhs - c.lhs;
                     o.violated = !c.holds;
                     o.row = fmt(g.x0) + ',' + fmt(g.r) + ',' + fmt(g.delta) + ',' + fmt(g.eps) + ',' +
                             fmt(c.lhs) + ',' + fmt(c.rhs);
                     o.counterexample = {{"space", json_io::to_json(g.space)}, {"x0", g.x0}, {"r", g.r},
                                         {"delta", g.delta}, {"eps", g.eps}};
                     return o;
                   });
}

SuiteResult verify_rigidity(const SuiteOptions& opt) {
  return run_suite("verify-rigidity", "trial,h,rigid,verdict", opt, [&](std::size_t, std::mt19937_64& rng) {
    const double h = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    const auto space = random_concave_perturbation(h, rng);
    const auto r = rigidity_1d(space);
    TrialOutcome o;
    o.measure = r.rigid ? 1.0 : 0.0;
    o.violated = r.rigid;
    o.row = fmt(h) + ',' + (r.rigid ? "rigid" : "not_rigid");
    o.counterexample = {{"space", json_io::to_json(space)}};
    return o;
  });
}

std::vector<Lemma42Instance> lemma42_instances(double eps) {
  require(eps > 0.0 && eps < 1.0 / 128.0, "eps must lie in (0, 1/128)");
  const double h = 1.0;
  const double b = std::ceil(-std::log(eps)) + 3.0;
  // Long enough that the window [l(eps), D/10] and the R range are nonempty.
  const double D = std::max(2e4, 2.0 * (b + std::log(2.0)) / eps);
  std::vector<Lemma42Instance> out;

  auto add = [&](std::string name, std::vector<double> t, std::vector<double> w, bool expect) {
    auto space = PLConcave::create(0.0, D, std::move(t), std::move(w));
    space = space.shifted(-space.log_total_mass());
    const IntervalSet omega{{0.0, b}};
    // Midpoint of the admissible range of R.
    const double r_max = -log_mass(space, omega) / ((1.0 - eps) * h);
    const double r_min = ((1.0 - 2.0 * eps) * h * D + std::log(2.0)) / ((1.0 - eps) * h);
    out.push_back({std::move(name), space, omega, h, eps, b, 0.5 * (r_min + r_max), expect});
  };

  add("affine", {0.0, D}, {0.0, h * D}, true);
  for (double frac : {1.0 / 40.0, 1.0 / 20.0, 1.0 / 12.0}) {
    const double k = frac * D;
    const double s1 = (1.0 + 0.5 * eps) * h, s2 = (1.0 - 0.5 * eps) * h;
    add("kink_at_" + format_number(k), {0.0, k, D}, {0.0, s1 * k, s1 * k + s2 * (D - k)}, true);
  }
  add("contrapositive", {0.0, 0.5 * D, D}, {0.0, h * D, 1.5 * h * D}, false);
  return out;
}

}  // namespace needlekit
