#include "needlekit/localize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "needlekit/error.hpp"
#include "network_simplex.hpp"

namespace needlekit {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

BalancedFunction balanced_function(const DiscreteSpace& space, const std::vector<bool>& omega,
                                   std::size_t center, double radius) {
  const std::size_t n = space.size();
  require(omega.size() == n, "omega mask must have one entry per point");
  require(center < n, "center index out of range");
  require(radius > 0.0, "radius must be positive");
  BalancedFunction bf;
  bf.omega = omega;
  bf.ball.assign(n, false);
  bf.g.assign(n, 0.0);
  bf.center = center;
  bf.radius = radius;
  double in = 0.0, out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(space.distance(center, i) < radius)) continue;
    bf.ball[i] = true;
    (omega[i] ? in : out) += space.weight(i);
  }
  if (in <= 0.0 || out <= 0.0) fail(ErrorCode::degenerate, "degenerate partition");
  const double ratio = in / out;
  for (std::size_t i = 0; i < n; ++i) {
    if (bf.ball[i]) bf.g[i] = omega[i] ? 1.0 : -ratio;
  }
  return bf;
}

TransportSolution solve_l1(const DiscreteSpace& space, const BalancedFunction& bf) {
  const std::size_t n = space.size();
  require(bf.g.size() == n, "balanced function must have one value per point");
  require(bf.center < n, "center index out of range");

  TransportSolution sol;
  sol.input = bf;
  sol.phi.assign(n, 0.0);

  std::vector<std::size_t> src, dst;
  std::vector<double> supply, demand;
  double total_s = 0.0, total_d = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gm = bf.g[i] * space.weight(i);
    scale += std::abs(gm);
    if (gm > 0.0) {
      src.push_back(i);
      supply.push_back(gm);
      total_s += gm;
    } else if (gm < 0.0) {
      dst.push_back(i);
      demand.push_back(-gm);
      total_d += -gm;
    }
  }
  if (std::abs(total_s - total_d) > 1e-9 * std::max(scale, 1e-300)) {
    fail(ErrorCode::invalid_argument, "unbalanced input");
  }
  if (src.empty() || dst.empty()) return sol;
  for (auto& d : demand) d *= total_s / total_d;

  const std::size_t S = src.size(), T = dst.size();
  std::vector<double> cost(S * T);
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t j = 0; j < T; ++j) cost[i * T + j] = space.distance(src[i], dst[j]);
  }

  const auto plan = detail::solve_transportation(supply, demand, cost);
  for (const auto& arc : plan.arcs) {
    sol.flow.push_back({src[arc.source], dst[arc.sink], arc.flow});
    sol.total_cost += arc.flow * cost[arc.source * T + arc.sink];
  }
  const auto& pi_t = plan.sink_pi;

  // Sink duals, then the c-transform over the sinks for every point.
  for (std::size_t x = 0; x < n; ++x) {
    double best = kInfD;
    for (std::size_t j = 0; j < T; ++j) {
      best = std::min(best, -pi_t[j] + space.distance(x, dst[j]));
    }
    sol.phi[x] = best;
  }
  const double shift = sol.phi[bf.center];
  for (auto& p : sol.phi) p -= shift;
  return sol;
}

TransportCheck check_transport(const DiscreteSpace& space, const TransportSolution& sol) {
  TransportCheck c;
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      c.max_lipschitz_excess =
          std::max(c.max_lipschitz_excess, sol.phi[x] - sol.phi[y] - space.distance(x, y));
    }
  }
  std::vector<double> out(n, 0.0), in(n, 0.0);
  for (const auto& f : sol.flow) {
    c.max_slackness_gap = std::max(
        c.max_slackness_gap, std::abs(sol.phi[f.src] - sol.phi[f.dst] - space.distance(f.src, f.dst)));
    out[f.src] += f.mass;
    in[f.dst] += f.mass;
  }
  for (std::size_t x = 0; x < n; ++x) {
    const double gm = sol.input.g[x] * space.weight(x);
    const double want_out = std::max(gm, 0.0), want_in = std::max(-gm, 0.0);
    c.max_marginal_error =
        std::max({c.max_marginal_error, std::abs(out[x] - want_out), std::abs(in[x] - want_in)});
  }
  return c;
}

NeedleReport extract_needles(const DiscreteSpace& space, const TransportSolution& sol,
                             double collinear_tol) {
  NeedleReport report;
  const std::size_t n = space.size();
  const auto& phi = sol.phi;

  // Each flow pair links the points on its segment that the potential
  // traverses at unit slope, in potential order.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> ray;
  for (const auto& f : sol.flow) {
    const double len = space.distance(f.src, f.dst);
    const double tol = collinear_tol * len;
    ray.clear();
    for (std::size_t x = 0; x < n; ++x) {
      const double a = space.distance(f.src, x), b = space.distance(x, f.dst);
      if (a + b - len > tol) continue;
      if (std::abs(phi[f.src] - phi[x] - a) > tol || std::abs(phi[x] - phi[f.dst] - b) > tol) continue;
      ray.push_back(x);
    }
    std::sort(ray.begin(), ray.end(), [&](std::size_t u, std::size_t v) { return phi[u] > phi[v]; });
    for (std::size_t k = 0; k + 1 < ray.size(); ++k) {
      edges.emplace_back(std::min(ray[k], ray[k + 1]), std::max(ray[k], ray[k + 1]));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  // Three points are aligned when, ordered by phi, the outer distance is the
  // sum of the inner ones.
  auto aligned = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::size_t p[3] = {a, b, c};
    std::sort(p, p + 3, [&](std::size_t u, std::size_t v) { return phi[u] > phi[v]; });
    const double outer = space.distance(p[0], p[2]);
    return std::abs(outer - space.distance(p[0], p[1]) - space.distance(p[1], p[2])) <=
           collinear_tol * outer;
  };

  std::vector<char> branch(n, 0), in_support(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    if (adj[p].empty()) continue;
    in_support[p] = 1;
    const auto& nb = adj[p];
    for (std::size_t a = 0; a < nb.size() && !branch[p]; ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (!aligned(nb[a], p, nb[b])) {
          branch[p] = 1;
          break;
        }
      }
    }
  }

  UnionFind uf(n);
  for (const auto& [u, v] : edges) {
    if (!branch[u] && !branch[v]) uf.unite(u, v);
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (in_support[p] && !branch[p]) groups[uf.find(p)].push_back(p);
  }

  const bool bounded_ball = std::isfinite(sol.input.radius);
  for (auto& pts : groups) {
    if (pts.size() < 2) continue;
    std::sort(pts.begin(), pts.end(), [&](std::size_t u, std::size_t v) { return phi[u] > phi[v]; });
    const double span = space.distance(pts.front(), pts.back());
    double chain = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) chain += space.distance(pts[k], pts[k + 1]);
    const bool straight = std::abs(chain - span) <= collinear_tol * span &&
                          std::abs(phi[pts.front()] - phi[pts.back()] - span) <= collinear_tol * span;
    if (!straight) {
      for (std::size_t p : pts) branch[p] = 1;
      continue;
    }

    Needle nd;
    nd.points = pts;
    double max_gap = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const std::size_t p = pts[k];
      nd.phi.push_back(phi[p]);
      nd.arclength.push_back(phi[pts.front()] - phi[p]);
      nd.mass.push_back(space.weight(p));
      nd.g.push_back(sol.input.g[p]);
      nd.in_omega.push_back(sol.input.omega.empty() ? false : static_cast<bool>(sol.input.omega[p]));
      if (k > 0) max_gap = std::max(max_gap, nd.arclength[k] - nd.arclength[k - 1]);
    }
    if (bounded_ball) {
      for (std::size_t p : pts) {
        if (space.distance(sol.input.center, p) > sol.input.radius - max_gap) nd.boundary = true;
      }
    }
    if (space.embedded()) {
      const auto a = space.coords(pts.front());
      const auto b = space.coords(pts.back());
      nd.direction.resize(a.size());
      for (std::size_t d = 0; d < a.size(); ++d) nd.direction[d] = (b[d] - a[d]) / span;
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (nd.in_omega[k] && !nd.in_omega[k + 1]) {
          const auto u = space.coords(pts[k]);
          const auto v = space.coords(pts[k + 1]);
          for (std::size_t d = 0; d < u.size(); ++d) nd.omega_exit.push_back(0.5 * (u[d] + v[d]));
          break;
        }
      }
    }
    const auto diag = needle_diagnostics(nd);
    nd.slope_fit = diag.slope_fit;
    nd.concavity_defect = diag.concavity_defect;
    report.needles.push_back(std::move(nd));
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (branch[p]) report.branch_points.push_back(p);
  }
  return report;
}

Disintegration disintegrate(const DiscreteSpace& space, const std::vector<Needle>& needles,
                            std::span<const double> g) {
  const std::size_t n = space.size();
  require(g.empty() || g.size() == n, "g must have one value per point");
  Disintegration out;
  std::vector<char> used(n, 0);
  for (const auto& nd : needles) {
    std::vector<double> cond;
    for (std::size_t p : nd.points) {
      require(p < n, "needle point out of range");
      if (used[p]) fail(ErrorCode::internal, "needles overlap at a point");
      used[p] = 1;
      cond.push_back(space.weight(p));
      out.needle_mass += space.weight(p);
    }
    out.conditional.push_back(std::move(cond));
  }
  for (std::size_t p = 0; p < n; ++p) {
    out.total_mass += space.weight(p);
    if (used[p]) continue;
    out.residual.push_back(p);
    out.residual_mass += space.weight(p);
    if (!g.empty()) out.residual_g_max = std::max(out.residual_g_max, std::abs(g[p]));
  }
  out.partition_error =
      std::abs(out.needle_mass + out.residual_mass - out.total_mass) / out.total_mass;
  return out;
}

NeedleDiagnostics needle_diagnostics(const Needle& needle) {
  const std::size_t k = needle.points.size();
  require(k >= 2, "needle diagnostics need at least two points");
  require(needle.arclength.size() == k && needle.mass.size() == k, "needle arrays differ in length");
  NeedleDiagnostics d;
  const auto& s = needle.arclength;
  for (std::size_t i = 0; i < k; ++i) {
    if (!needle.g.empty()) d.balance += needle.g[i] * needle.mass[i];
    double cell;
    if (i == 0) {
      cell = s[1] - s[0];
    } else if (i + 1 == k) {
      cell = s[k - 1] - s[k - 2];
    } else {
      cell = 0.5 * (s[i + 1] - s[i - 1]);
    }
    require(cell > 0.0, "needle arclengths must be strictly increasing");
    d.log_density.push_back(std::log(needle.mass[i] / cell));
  }
  d.slope_fit = ls_slope(s, d.log_density);
  if (k >= 3) {
    double defect = 0.0;
    for (std::size_t i = 1; i + 1 < k; ++i) {
      const double left = (d.log_density[i] - d.log_density[i - 1]) / (s[i] - s[i - 1]);
      const double right = (d.log_density[i + 1] - d.log_density[i]) / (s[i + 1] - s[i]);
      defect = std::max(defect, right - left);
    }
    d.concavity_defect = defect;
  }
  return d;
}

SplitVerdict splitting_detector(const std::vector<Needle>& needles, double h_tol, double dir_tol,
                                std::optional<double> position_tol) {
  require(needles.size() >= 2, "splitting detector needs at least two needles");
  for (const auto& nd : needles) {
    if (nd.direction.empty()) fail(ErrorCode::unsupported, "splitting detector needs an embedded space");
  }
  SplitVerdict v;
  const std::size_t dim = needles.front().direction.size();

  for (const auto& nd : needles) v.h_est += nd.slope_fit;
  v.h_est /= static_cast<double>(needles.size());
  const double scale = std::max(std::abs(v.h_est), 1.0);
  for (const auto& nd : needles) {
    v.max_slope_deviation = std::max(v.max_slope_deviation, std::abs(nd.slope_fit - v.h_est) / scale);
  }
  v.slopes_agree = v.max_slope_deviation <= h_tol;

  std::vector<double> mean(dim, 0.0);
  for (std::size_t a = 0; a < needles.size(); ++a) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += needles[a].direction[d];
    for (std::size_t b = a + 1; b < needles.size(); ++b) {
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += needles[a].direction[d] * needles[b].direction[d];
      v.max_direction_defect = std::max(v.max_direction_defect, 1.0 - dot);
    }
  }
  v.directions_parallel = v.max_direction_defect <= dir_tol;

  double norm = 0.0;
  for (double x : mean) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<double> positions, gaps;
  for (const auto& nd : needles) {
    for (std::size_t k = 1; k < nd.arclength.size(); ++k) gaps.push_back(nd.arclength[k] - nd.arclength[k - 1]);
    if (nd.omega_exit.empty() || norm == 0.0) continue;
    double proj = 0.0;
    for (std::size_t d = 0; d < dim; ++d) proj += nd.omega_exit[d] * mean[d] / norm;
    positions.push_back(proj);
  }
  if (position_tol) {
    v.position_tol = *position_tol;
  } else {
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    v.position_tol = gaps[gaps.size() / 2];
  }
  if (positions.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(positions.begin(), positions.end());
    v.boundary_spread = *hi - *lo;
  }
  // Every needle must cross the boundary for the positions to be comparable.
  v.boundaries_agree = positions.size() == needles.size() && v.boundary_spread <= v.position_tol;
  v.splits = v.slopes_agree && v.directions_parallel && v.boundaries_agree;
  return v;
}

Localization localize(const DiscreteSpace& space, const std::vector<bool>& omega,
                      std::size_t center, double radius) {
  Localization out;
  out.g = balanced_function(space, omega, center, radius);
  out.transport = solve_l1(space, out.g);
  out.needles = extract_needles(space, out.transport);
  out.disintegration = disintegrate(space, out.needles.needles, out.g.g);
  return out;
}

std::vector<LadderRow> potential_ladder(const DiscreteSpace& space, const std::vector<bool>& omega,
                                        std::size_t center, const std::vector<double>& radii,
                                        double core_radius) {
  require(radii.size() >= 2, "the ladder needs at least two radii");
  require(std::is_sorted(radii.begin(), radii.end()), "radii must be increasing");
  std::vector<LadderRow> rows;
  std::vector<double> prev;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const auto sol = solve_l1(space, balanced_function(space, omega, center, radii[k]));
    if (k > 0) {
      double change = 0.0;
      for (std::size_t p = 0; p < space.size(); ++p) {
        if (space.distance(center, p) <= core_radius) change = std::max(change, std::abs(sol.phi[p] - prev[p]));
      }
      rows.push_back({radii[k - 1], radii[k], change});
    }
    prev = sol.phi;
  }
  return rows;
}

}  // namespace needlekit
