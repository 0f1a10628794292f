#include "needlekit/needlekit.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "json_io.hpp"
#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/io.hpp"
#include "needlekit/localize.hpp"
#include "needlekit/models.hpp"
#include "needlekit/suites.hpp"

using namespace needlekit;
using json_io::json;

struct nk_space {
  PLConcave value;
};
struct nk_set {
  IntervalSet value;
};
struct nk_density {
  Density1D value;
};
struct nk_discrete {
  DiscreteSpace value;
};
struct nk_localization {
  DiscreteSpace space;
  Localization value;
};
struct nk_strip {
  StripModel value;
};

namespace {

thread_local std::string g_last_error;

nk_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return NK_ERR_INVALID_ARGUMENT;
    case ErrorCode::precondition: return NK_ERR_PRECONDITION;
    case ErrorCode::infinite_mass: return NK_ERR_INFINITE_MASS;
    case ErrorCode::finite_mass: return NK_ERR_FINITE_MASS;
    case ErrorCode::degenerate: return NK_ERR_DEGENERATE;
    case ErrorCode::parse: return NK_ERR_PARSE;
    case ErrorCode::io: return NK_ERR_IO;
    case ErrorCode::unsupported: return NK_ERR_UNSUPPORTED;
    case ErrorCode::internal: return NK_ERR_INTERNAL;
  }
  return NK_ERR_INTERNAL;
}

template <class F>
nk_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return NK_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<double> t_grid(const double* t, std::size_t nt) {
  if (!t) return default_t_grid();
  return std::vector<double>(t, t + nt);
}

std::vector<bool> mask_vector(const unsigned char* mask, std::size_t n) {
  std::vector<bool> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = mask[i] != 0;
  return m;
}

void fill_mask(const std::vector<bool>& m, unsigned char* out) {
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 1 : 0;
}

json needle_json(const Needle& nd, std::size_t id) {
  const auto diag = needle_diagnostics(nd);
  json j{{"id", id},
         {"size", nd.points.size()},
         {"boundary", nd.boundary},
         {"slope_fit", diag.slope_fit},
         {"balance", diag.balance},
         {"length", nd.arclength.back()},
         {"first_point", nd.points.front()},
         {"last_point", nd.points.back()}};
  j["concavity_defect"] = diag.concavity_defect ? json(*diag.concavity_defect) : json(nullptr);
  if (!nd.direction.empty()) j["direction"] = nd.direction;
  return j;
}

}  // namespace

extern "C" {

const char* nk_last_error(void) { return g_last_error.c_str(); }

const char* nk_status_name(nk_status s) {
  switch (s) {
    case NK_OK: return "ok";
    case NK_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NK_ERR_PRECONDITION: return "precondition violated";
    case NK_ERR_INFINITE_MASS: return "infinite mass";
    case NK_ERR_FINITE_MASS: return "finite mass";
    case NK_ERR_DEGENERATE: return "degenerate partition";
    case NK_ERR_PARSE: return "parse error";
    case NK_ERR_IO: return "i/o error";
    case NK_ERR_UNSUPPORTED: return "unsupported";
    case NK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nk_version(void) { return "0.1.0"; }

void nk_string_free(char* s) { std::free(s); }

nk_status nk_space_from_json(const char* text, nk_space** out) {
  return guard([&] {
    need(text, "json");
    need(out, "out");
    *out = new nk_space{space_from_json(text)};
  });
}

nk_status nk_space_from_model(const char* model_json, nk_space** out) {
  return guard([&] {
    need(model_json, "model_json");
    need(out, "out");
    *out = new nk_space{build_1d(model_spec_from_json(model_json))};
  });
}

nk_status nk_space_to_json(const nk_space* space, char** out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    *out = dup(space_to_json(space->value));
  });
}

nk_status nk_space_domain(const nk_space* space, double* lo, double* hi) {
  return guard([&] {
    need(space, "space");
    if (lo) *lo = space->value.domain_lo();
    if (hi) *hi = space->value.domain_hi();
  });
}

void nk_space_free(nk_space* space) { delete space; }

nk_status nk_set_from_json(const char* text, nk_set** out) {
  return guard([&] {
    need(text, "json");
    need(out, "out");
    *out = new nk_set{interval_set_from_json(text)};
  });
}

nk_status nk_set_to_json(const nk_set* set, char** out) {
  return guard([&] {
    need(set, "set");
    need(out, "out");
    *out = dup(interval_set_to_json(set->value));
  });
}

void nk_set_free(nk_set* set) { delete set; }

nk_status nk_mass(const nk_space* space, const nk_set* set, double* out) {
  return guard([&] {
    need(space, "space");
    need(set, "set");
    need(out, "out");
    const auto m = mass(space->value, set->value);
    if (!m) fail(ErrorCode::infinite_mass, "infinite mass");
    *out = *m;
  });
}

nk_status nk_log_mass(const nk_space* space, const nk_set* set, double* out) {
  return guard([&] {
    need(space, "space");
    need(set, "set");
    need(out, "out");
    *out = log_mass(space->value, set->value);
  });
}

nk_status nk_minkowski_content(const nk_space* space, const nk_set* set, double* out) {
  return guard([&] {
    need(space, "space");
    need(set, "set");
    need(out, "out");
    *out = minkowski_content(space->value, set->value);
  });
}

nk_status nk_log_minkowski_content(const nk_space* space, const nk_set* set, double* out) {
  return guard([&] {
    need(space, "space");
    need(set, "set");
    need(out, "out");
    *out = log_minkowski_content(space->value, set->value);
  });
}

nk_status nk_volume_entropy(const nk_space* space, double x0, const double* window,
                            nk_entropy_report* out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    std::optional<std::pair<double, double>> w;
    if (window) w = std::make_pair(window[0], window[1]);
    const auto r = volume_entropy(space->value, x0, w);
    *out = {r.h, r.estimator_slope, r.r1, r.r2};
  });
}

nk_status nk_entropy_growth_check(const nk_space* space, double x0, double r, double delta,
                                  double eps, double tol, nk_check* out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    const auto c = entropy_growth_inequality_check(space->value, x0, r, delta, eps, tol);
    *out = {c.lhs, c.rhs, c.holds ? 1 : 0};
  });
}

nk_status nk_cheeger_constant(const nk_space* space, double* mu, int* attained, char** minimizer_json) {
  return guard([&] {
    need(space, "space");
    const auto c = cheeger_constant(space->value);
    if (mu) *mu = c.mu;
    if (attained) *attained = c.attained ? 1 : 0;
    if (minimizer_json) *minimizer_json = dup(c.minimizer ? interval_set_to_json(*c.minimizer) : "null");
  });
}

nk_status nk_left_half_line_ratio(const nk_space* space, double b, double* out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    *out = left_half_line_ratio(space->value, b);
  });
}

nk_status nk_isoperimetric_profile(const nk_space* space, double v, double* out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    *out = isoperimetric_profile(space->value, v);
  });
}

nk_status nk_milman_profile(double diameter, double v, double* out) {
  return guard([&] {
    need(out, "out");
    *out = milman_profile(diameter, v);
  });
}

nk_status nk_lemma41_check(const nk_space* space, const nk_set* omega, double h, double R, nk_check* out) {
  return guard([&] {
    need(space, "space");
    need(omega, "omega");
    need(out, "out");
    const auto c = lemma_1dim_check(space->value, omega->value, h, R);
    *out = {c.lhs, c.rhs, c.holds ? 1 : 0};
  });
}

nk_status nk_lemma42_report(const nk_space* space, const nk_set* omega, double h, double eps,
                            double L, double R, char** out_json) {
  return guard([&] {
    need(space, "space");
    need(omega, "omega");
    need(out_json, "out_json");
    const auto r = evaluate_quantitative_rigidity(space->value, omega->value, h, eps, L, R);
    json j{{"h", r.h},
           {"eps", r.eps},
           {"L", r.L},
           {"R", r.R},
           {"D", r.D},
           {"b", r.b},
           {"width", r.width},
           {"window_lo", r.window_lo},
           {"window_hi", r.window_hi},
           {"window_empty", r.window_empty},
           {"slope_min", r.slope_min},
           {"slope_max", r.slope_max},
           {"slope_lower_bound", r.slope_lower_bound},
           {"slope_upper_bound", r.slope_upper_bound},
           {"log_content", json_io::number_json(r.log_content)},
           {"log_hypothesis_rhs", json_io::number_json(r.log_hypothesis_rhs)},
           {"hypothesis_holds", r.hypothesis_holds},
           {"width_ok", r.width_ok},
           {"slopes_ok", r.slopes_ok},
           {"conclusion_holds", r.conclusion_holds},
           {"verdict", r.verdict},
           {"precondition_violations", r.precondition_violations}};
    *out_json = dup(j.dump());
  });
}

nk_status nk_lemma42_instances(double eps, char** out_json) {
  return guard([&] {
    need(out_json, "out_json");
    json arr = json::array();
    for (const auto& in : lemma42_instances(eps)) {
      arr.push_back({{"name", in.name},
                     {"space", json_io::to_json(in.space)},
                     {"set", json_io::to_json(in.omega)},
                     {"h", in.h},
                     {"eps", in.eps},
                     {"L", in.L},
                     {"R", in.R},
                     {"expect_hypothesis", in.expect_hypothesis}});
    }
    *out_json = dup(arr.dump());
  });
}

nk_status nk_rigidity_1d(const nk_space* space, nk_rigidity* out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    const auto r = rigidity_1d(space->value);
    *out = {r.rigid ? 1 : 0, r.b, r.affine ? 1 : 0};
  });
}

nk_status nk_neighborhood_growth_check(const nk_space* space, const nk_set* omega, double sigma,
                                       double tol, nk_growth* out) {
  return guard([&] {
    need(space, "space");
    need(omega, "omega");
    need(out, "out");
    const auto r = neighborhood_growth_check(space->value, omega->value, sigma, tol);
    *out = {r.mass_ratio, r.expected_ratio, r.content_ratio, r.holds ? 1 : 0};
  });
}

nk_status nk_density_from_json(const nk_space* reference, const char* text, const char* key,
                               nk_density** out) {
  return guard([&] {
    need(reference, "reference");
    need(text, "json");
    need(out, "out");
    *out = new nk_density{density_from_json(reference->value, text, key ? key : "density")};
  });
}

nk_status nk_density_uniform(const nk_space* reference, const nk_set* set, nk_density** out) {
  return guard([&] {
    need(reference, "reference");
    need(set, "set");
    need(out, "out");
    *out = new nk_density{Density1D::uniform_on(reference->value, set->value)};
  });
}

void nk_density_free(nk_density* density) { delete density; }

nk_status nk_entropy(const nk_density* density, double* out) {
  return guard([&] {
    need(density, "density");
    need(out, "out");
    *out = entropy(density->value);
  });
}

nk_status nk_convexity_check(const nk_space* space, const nk_density* mu0, const nk_density* mu1,
                             const double* t, size_t nt, size_t quantiles, double* max_violation,
                             char** csv) {
  return guard([&] {
    need(space, "space");
    need(mu0, "mu0");
    need(mu1, "mu1");
    const auto rep = displacement_convexity_check(space->value, mu0->value, mu1->value, t_grid(t, nt),
                                                  quantiles ? quantiles : 10000);
    if (max_violation) *max_violation = rep.max_violation;
    if (csv) {
      std::ostringstream s;
      s << "t,entropy,bound,violation\n";
      for (const auto& r : rep.rows) {
        s << format_number(r.t) << ',' << format_number(r.entropy) << ',' << format_number(r.bound) << ','
          << format_number(r.violation) << '\n';
      }
      *csv = dup(s.str());
    }
  });
}

nk_status nk_intermediate_set(const nk_set* omega, const nk_set* b, double t, nk_set** out) {
  return guard([&] {
    need(omega, "omega");
    need(b, "b");
    need(out, "out");
    *out = new nk_set{intermediate_set(omega->value, b->value, t)};
  });
}

nk_status nk_brunn_minkowski_check(const nk_space* space, const nk_set* omega, const nk_set* b,
                                   const double* t, size_t nt, double tol, int* holds, char** csv) {
  return guard([&] {
    need(space, "space");
    need(omega, "omega");
    need(b, "b");
    const auto rep = brunn_minkowski_check(space->value, omega->value, b->value, t_grid(t, nt), tol);
    if (holds) *holds = rep.holds ? 1 : 0;
    if (csv) {
      std::ostringstream s;
      s << "t,lhs,rhs,violation\n";
      for (const auto& r : rep.rows) {
        s << format_number(r.t) << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
          << format_number(r.violation) << '\n';
      }
      *csv = dup(s.str());
    }
  });
}

nk_status nk_discrete_from_json(const char* text, nk_discrete** out) {
  return guard([&] {
    need(text, "json");
    need(out, "out");
    *out = new nk_discrete{discrete_space_from_json(text)};
  });
}

nk_status nk_discrete_to_json(const nk_discrete* space, char** out) {
  return guard([&] {
    need(space, "space");
    need(out, "out");
    *out = dup(discrete_space_to_json(space->value));
  });
}

size_t nk_discrete_size(const nk_discrete* space) { return space ? space->value.size() : 0; }

void nk_discrete_free(nk_discrete* space) { delete space; }

nk_status nk_mask_from_json(const char* text, size_t n, unsigned char* mask) {
  return guard([&] {
    need(text, "json");
    need(mask, "mask");
    fill_mask(mask_from_json(text, n), mask);
  });
}

nk_status nk_localize(const nk_discrete* space, const unsigned char* omega, size_t center, double radius,
                      nk_localization** out) {
  return guard([&] {
    need(space, "space");
    need(omega, "omega");
    need(out, "out");
    auto loc = localize(space->value, mask_vector(omega, space->value.size()), center, radius);
    *out = new nk_localization{space->value, std::move(loc)};
  });
}

void nk_localization_free(nk_localization* loc) { delete loc; }

nk_status nk_localization_needles_csv(const nk_localization* loc, char** out) {
  return guard([&] {
    need(loc, "loc");
    need(out, "out");
    std::ostringstream s;
    s << "needle_id,point_id,arclength,phi,mass,logdensity\n";
    const auto& needles = loc->value.needles.needles;
    for (std::size_t q = 0; q < needles.size(); ++q) {
      const auto& nd = needles[q];
      const auto diag = needle_diagnostics(nd);
      for (std::size_t k = 0; k < nd.points.size(); ++k) {
        s << q << ',' << nd.points[k] << ',' << format_number(nd.arclength[k]) << ','
          << format_number(nd.phi[k]) << ',' << format_number(nd.mass[k]) << ','
          << format_number(diag.log_density[k]) << '\n';
      }
    }
    *out = dup(s.str());
  });
}

nk_status nk_localization_flows_csv(const nk_localization* loc, char** out) {
  return guard([&] {
    need(loc, "loc");
    need(out, "out");
    std::ostringstream s;
    s << "src,dst,mass,cost\n";
    for (const auto& f : loc->value.transport.flow) {
      s << f.src << ',' << f.dst << ',' << format_number(f.mass) << ','
        << format_number(loc->space.distance(f.src, f.dst)) << '\n';
    }
    *out = dup(s.str());
  });
}

nk_status nk_localization_summary_json(const nk_localization* loc, char** out) {
  return guard([&] {
    need(loc, "loc");
    need(out, "out");
    const auto& v = loc->value;
    const auto chk = check_transport(loc->space, v.transport);
    const auto& d = v.disintegration;
    json j;
    j["points"] = loc->space.size();
    j["center"] = v.g.center;
    j["radius"] = json_io::number_json(v.g.radius);
    j["total_cost"] = v.transport.total_cost;
    j["flows"] = v.transport.flow.size();
    j["check"] = {{"lipschitz_excess", chk.max_lipschitz_excess},
                  {"slackness_gap", chk.max_slackness_gap},
                  {"marginal_error", chk.max_marginal_error}};
    j["branch_points"] = v.needles.branch_points;
    j["disintegration"] = {{"needle_mass", d.needle_mass},
                           {"residual_mass", d.residual_mass},
                           {"total_mass", d.total_mass},
                           {"partition_error", d.partition_error},
                           {"residual_points", d.residual.size()},
                           {"residual_g_max", d.residual_g_max}};
    json needles = json::array();
    for (std::size_t q = 0; q < v.needles.needles.size(); ++q) needles.push_back(needle_json(v.needles.needles[q], q));
    j["needles"] = needles;
    *out = dup(j.dump(2));
  });
}

nk_status nk_localization_counts(const nk_localization* loc, size_t* needles, size_t* branch_points) {
  return guard([&] {
    need(loc, "loc");
    if (needles) *needles = loc->value.needles.needles.size();
    if (branch_points) *branch_points = loc->value.needles.branch_points.size();
  });
}

nk_status nk_localization_check(const nk_localization* loc, nk_transport_check* out) {
  return guard([&] {
    need(loc, "loc");
    need(out, "out");
    const auto c = check_transport(loc->space, loc->value.transport);
    *out = {c.max_lipschitz_excess, c.max_slackness_gap, c.max_marginal_error,
            loc->value.disintegration.partition_error};
  });
}

nk_status nk_split_detect(const nk_localization* loc, double h_tol, double dir_tol, double position_tol,
                          int* splits, char** verdict_json) {
  return guard([&] {
    need(loc, "loc");
    std::optional<double> ptol;
    if (position_tol >= 0.0) ptol = position_tol;
    const auto v = splitting_detector(loc->value.needles.needles, h_tol, dir_tol, ptol);
    if (splits) *splits = v.splits ? 1 : 0;
    if (verdict_json) {
      json j{{"splits", v.splits},
             {"h_est", v.h_est},
             {"slopes_agree", v.slopes_agree},
             {"directions_parallel", v.directions_parallel},
             {"boundaries_agree", v.boundaries_agree},
             {"max_slope_deviation", v.max_slope_deviation},
             {"max_direction_defect", v.max_direction_defect},
             {"boundary_spread", v.boundary_spread},
             {"position_tol", v.position_tol},
             {"needles", loc->value.needles.needles.size()}};
      *verdict_json = dup(j.dump());
    }
  });
}

nk_status nk_strip_from_model(const char* model_json, nk_strip** out) {
  return guard([&] {
    need(model_json, "model_json");
    need(out, "out");
    *out = new nk_strip{build_strip(model_spec_from_json(model_json))};
  });
}

void nk_strip_free(nk_strip* strip) { delete strip; }

nk_status nk_strip_space(const nk_strip* strip, nk_discrete** out) {
  return guard([&] {
    need(strip, "strip");
    need(out, "out");
    *out = new nk_discrete{strip->value.space};
  });
}

nk_status nk_strip_omega(const nk_strip* strip, unsigned char* mask) {
  return guard([&] {
    need(strip, "strip");
    need(mask, "mask");
    fill_mask(strip->value.omega, mask);
  });
}

nk_status nk_strip_wedge(const nk_strip* strip, double tilt, unsigned char* mask) {
  return guard([&] {
    need(strip, "strip");
    need(mask, "mask");
    fill_mask(wedge_mask(strip->value, tilt), mask);
  });
}

nk_status nk_strip_info_json(const nk_strip* strip, char** out) {
  return guard([&] {
    need(strip, "strip");
    need(out, "out");
    const auto& s = strip->value;
    json j{{"n_rows", s.n_rows},
           {"n_cols", s.n_cols},
           {"spacing", s.spacing},
           {"h", s.h},
           {"cut", s.cut},
           {"omega_mass", s.omega_mass},
           {"omega_mass_closed", s.omega_mass_closed},
           {"e_discrete", s.e_discrete},
           {"center", s.center},
           {"radius", s.radius},
           {"rows", s.rows}};
    *out = dup(j.dump());
  });
}

nk_status nk_run_suite(const char* name, const nk_suite_options* options, size_t* violations,
                       double* worst, char** csv, char** counterexample) {
  return guard([&] {
    need(name, "name");
    need(options, "options");
    SuiteOptions opt;
    opt.seed = options->seed;
    opt.trials = options->trials;
    opt.tol = options->tol;
    opt.threads = options->threads;
    if (options->quantiles) opt.quantiles = options->quantiles;
    const std::string n = name;
    SuiteResult r;
    if (n == "iso") {
      r = verify_isoperimetric(opt);
    } else if (n == "convexity") {
      r = verify_convexity(opt);
    } else if (n == "brunn-minkowski") {
      r = verify_brunn_minkowski(opt);
    } else if (n == "lemma41") {
      r = verify_lemma41(opt);
    } else if (n == "growth") {
      r = verify_growth(opt);
    } else if (n == "rigidity") {
      r = verify_rigidity(opt);
    } else {
      fail(ErrorCode::invalid_argument, "unknown suite: " + n);
    }
    if (violations) *violations = r.violations;
    if (worst) *worst = r.worst;
    if (csv) *csv = dup(r.csv);
    if (counterexample) *counterexample = r.counterexample.empty() ? nullptr : dup(r.counterexample);
  });
}

}  // extern "C"
