#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "needlekit/error.hpp"

namespace needlekit::detail {

namespace {

constexpr int kUp = 1;
constexpr int kDown = -1;
constexpr double kInfD = std::numeric_limits<double>::infinity();

// Spanning tree bookkeeping follows the usual thread/preorder layout: every
// node stores its parent, the tree arc to it, the next node in preorder, the
// size of its subtree and the last node of its subtree. Node N is an
// artificial root joined to every node by an artificial arc.
class Simplex {
 public:
  using Arc = std::int64_t;
  using Node = std::int64_t;

  Simplex(const std::vector<double>& supply, const std::vector<double>& demand,
          const std::vector<double>& cost)
      : S_(static_cast<Node>(supply.size())),
        T_(static_cast<Node>(demand.size())),
        N_(S_ + T_),
        A_(S_ * T_),
        root_(N_),
        cost_(cost),
        flow_(static_cast<std::size_t>(A_), 0.0),
        in_tree_(static_cast<std::size_t>(A_), 0) {
    const std::size_t nodes = static_cast<std::size_t>(N_ + 1);
    node_supply_.assign(nodes, 0.0);
    for (Node u = 0; u < S_; ++u) node_supply_[u] = supply[u];
    for (Node j = 0; j < T_; ++j) node_supply_[S_ + j] = -demand[j];
    double max_cost = 0.0;
    for (double c : cost_) max_cost = std::max(max_cost, c);
    // Any unit routed through the root costs more than the direct arc.
    art_cost_value_ = 2.0 * max_cost + 1.0;
    tol_ = 1e-12 * art_cost_value_;
    block_ = std::max<Arc>(10, static_cast<Arc>(std::ceil(std::sqrt(static_cast<double>(A_)))));

    art_flow_.assign(static_cast<std::size_t>(N_), 0.0);
    art_cost_.assign(static_cast<std::size_t>(N_), 0.0);
    art_up_.assign(static_cast<std::size_t>(N_), 0);
    parent_.assign(nodes, -1);
    pred_.assign(nodes, -1);
    thread_.assign(nodes, 0);
    rev_thread_.assign(nodes, 0);
    succ_num_.assign(nodes, 1);
    last_succ_.assign(nodes, 0);
    pred_dir_.assign(nodes, kUp);
    pi_.assign(nodes, 0.0);

    thread_[root_] = 0;
    rev_thread_[0] = root_;
    succ_num_[root_] = N_ + 1;
    last_succ_[root_] = root_ - 1;
    for (Node u = 0; u < N_; ++u) {
      parent_[u] = root_;
      pred_[u] = A_ + u;
      thread_[u] = u + 1;
      rev_thread_[u + 1] = u;
      last_succ_[u] = u;
      if (node_supply_[u] >= 0.0) {
        pred_dir_[u] = kUp;
        art_up_[u] = 1;
        art_flow_[u] = node_supply_[u];
      } else {
        pred_dir_[u] = kDown;
        pi_[u] = art_cost_value_;
        art_cost_[u] = art_cost_value_;
        art_flow_[u] = -node_supply_[u];
      }
    }
  }

  TransportPlan run() {
    const std::size_t limit = 64 * static_cast<std::size_t>(A_ + N_) + 100000;
    for (int round = 0; round < 16; ++round) {
      while (find_entering()) {
        pivot();
        if (++pivots_ > limit) fail(ErrorCode::internal, "network simplex did not converge");
      }
      recompute();
      if (!find_entering()) return result();
      pivot();
    }
    fail(ErrorCode::internal, "network simplex did not settle");
  }

 private:
  Node source(Arc e) const {
    if (e < A_) return e / T_;
    const Node u = e - A_;
    return art_up_[u] ? u : root_;
  }
  Node target(Arc e) const {
    if (e < A_) return S_ + e % T_;
    const Node u = e - A_;
    return art_up_[u] ? root_ : u;
  }
  double cost(Arc e) const { return e < A_ ? cost_[e] : art_cost_[e - A_]; }
  double& flow(Arc e) { return e < A_ ? flow_[e] : art_flow_[e - A_]; }

  bool find_entering() {
    double best = -tol_;
    Arc count = block_;
    Arc e = next_arc_;
    Node i = e / T_, j = e % T_;
    for (Arc k = 0; k < A_; ++k) {
      if (!in_tree_[e]) {
        const double rc = cost_[e] + pi_[i] - pi_[S_ + j];
        if (rc < best) {
          best = rc;
          in_arc_ = e;
        }
      }
      ++e;
      if (++j == T_) {
        j = 0;
        ++i;
      }
      if (e == A_) {
        e = 0;
        i = 0;
        j = 0;
      }
      if (--count == 0) {
        if (best < -tol_) break;
        count = block_;
      }
    }
    next_arc_ = e;
    return best < -tol_;
  }

  void pivot() {
    // Join node of the cycle closed by the entering arc.
    Node u = source(in_arc_), v = target(in_arc_);
    while (u != v) {
      if (succ_num_[u] < succ_num_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    join_ = u;

    // Leaving arc: the first blocking arc in the direction of the cycle.
    const Node first = source(in_arc_), second = target(in_arc_);
    double delta = kInfD;
    int side = 0;
    for (Node w = first; w != join_; w = parent_[w]) {
      if (pred_dir_[w] == kUp && flow(pred_[w]) < delta) {
        delta = flow(pred_[w]);
        u_out_ = w;
        side = 1;
      }
    }
    for (Node w = second; w != join_; w = parent_[w]) {
      if (pred_dir_[w] == kDown && flow(pred_[w]) <= delta) {
        delta = flow(pred_[w]);
        u_out_ = w;
        side = 2;
      }
    }
    if (side == 0) fail(ErrorCode::internal, "transport problem is unbounded");
    if (side == 1) {
      u_in_ = first;
      v_in_ = second;
    } else {
      u_in_ = second;
      v_in_ = first;
    }

    delta = std::max(delta, 0.0);
    if (delta > 0.0) {
      flow(in_arc_) += delta;
      for (Node w = first; w != join_; w = parent_[w]) flow(pred_[w]) -= pred_dir_[w] * delta;
      for (Node w = second; w != join_; w = parent_[w]) flow(pred_[w]) += pred_dir_[w] * delta;
    }
    in_tree_[in_arc_] = 1;
    const Arc leaving = pred_[u_out_];
    flow(leaving) = 0.0;
    if (leaving < A_) in_tree_[leaving] = 0;

    update_tree();
    update_potential();
  }

  void update_tree() {
    const Node old_rev_thread = rev_thread_[u_out_];
    const Node old_succ_num = succ_num_[u_out_];
    const Node old_last_succ = last_succ_[u_out_];
    v_out_ = parent_[u_out_];

    if (u_in_ == u_out_) {
      parent_[u_in_] = v_in_;
      pred_[u_in_] = in_arc_;
      pred_dir_[u_in_] = u_in_ == source(in_arc_) ? kUp : kDown;
      if (thread_[v_in_] != u_out_) {
        Node after = thread_[old_last_succ];
        thread_[old_rev_thread] = after;
        rev_thread_[after] = old_rev_thread;
        after = thread_[v_in_];
        thread_[v_in_] = u_out_;
        rev_thread_[u_out_] = v_in_;
        thread_[old_last_succ] = after;
        rev_thread_[after] = old_last_succ;
      }
    } else {
      const Node thread_continue =
          old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

      // Re-hang the stem u_in ... u_out below v_in, reversing its parents.
      Node stem = u_in_;
      Node par_stem = v_in_;
      Node last = last_succ_[u_in_];
      Node after = thread_[last];
      thread_[v_in_] = u_in_;
      dirty_revs_.clear();
      dirty_revs_.push_back(v_in_);
      while (stem != u_out_) {
        const Node next_stem = parent_[stem];
        thread_[last] = next_stem;
        dirty_revs_.push_back(last);

        const Node before = rev_thread_[stem];
        thread_[before] = after;
        rev_thread_[after] = before;

        parent_[stem] = par_stem;
        par_stem = stem;
        stem = next_stem;

        last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
        after = thread_[last];
      }
      parent_[u_out_] = par_stem;
      thread_[last] = thread_continue;
      rev_thread_[thread_continue] = last;
      last_succ_[u_out_] = last;

      if (old_rev_thread != v_in_) {
        thread_[old_rev_thread] = after;
        rev_thread_[after] = old_rev_thread;
      }
      for (Node w : dirty_revs_) rev_thread_[thread_[w]] = w;

      Node tmp_sc = 0;
      const Node tmp_ls = last_succ_[u_out_];
      for (Node w = u_out_, p = parent_[w]; w != u_in_; w = p, p = parent_[w]) {
        pred_[w] = pred_[p];
        pred_dir_[w] = -pred_dir_[p];
        tmp_sc += succ_num_[w] - succ_num_[p];
        succ_num_[w] = tmp_sc;
        last_succ_[p] = tmp_ls;
      }
      pred_[u_in_] = in_arc_;
      pred_dir_[u_in_] = u_in_ == source(in_arc_) ? kUp : kDown;
      succ_num_[u_in_] = old_succ_num;
    }

    const Node up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
    const Node last_succ_out = last_succ_[u_out_];
    for (Node w = v_in_; w != -1 && last_succ_[w] == v_in_; w = parent_[w]) {
      last_succ_[w] = last_succ_out;
    }
    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
      for (Node w = v_out_; w != up_limit_out && last_succ_[w] == old_last_succ; w = parent_[w]) {
        last_succ_[w] = old_rev_thread;
      }
    } else if (last_succ_out != old_last_succ) {
      for (Node w = v_out_; w != up_limit_out && last_succ_[w] == old_last_succ; w = parent_[w]) {
        last_succ_[w] = last_succ_out;
      }
    }
    for (Node w = v_in_; w != join_; w = parent_[w]) succ_num_[w] += old_succ_num;
    for (Node w = v_out_; w != join_; w = parent_[w]) succ_num_[w] -= old_succ_num;
  }

  void update_potential() {
    const double sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * cost(in_arc_);
    const Node end = thread_[last_succ_[u_in_]];
    for (Node w = u_in_; w != end; w = thread_[w]) pi_[w] += sigma;
  }

  // Potentials and tree flows straight from the basis, clearing drift.
  void recompute() {
    pi_[root_] = 0.0;
    for (Node w = thread_[root_]; w != root_; w = thread_[w]) {
      const double c = cost(pred_[w]);
      pi_[w] = pred_dir_[w] == kUp ? pi_[parent_[w]] - c : pi_[parent_[w]] + c;
    }
    std::vector<double> net = node_supply_;
    for (Node w = rev_thread_[root_]; w != root_; w = rev_thread_[w]) {
      flow(pred_[w]) = std::max(pred_dir_[w] == kUp ? net[w] : -net[w], 0.0);
      net[parent_[w]] += net[w];
    }
  }

  TransportPlan result() {
    double total = 0.0;
    for (Node u = 0; u < S_; ++u) total += node_supply_[u];
    for (Node u = 0; u < N_; ++u) {
      if (art_flow_[u] > 1e-12 * total) fail(ErrorCode::internal, "transport problem is infeasible");
    }
    TransportPlan plan;
    plan.pivots = pivots_;
    for (Arc e = 0; e < A_; ++e) {
      // Rounding residue on degenerate basic arcs is not transport.
      if (in_tree_[e] && flow_[e] > 1e-12 * total) {
        plan.arcs.push_back({static_cast<std::size_t>(e / T_), static_cast<std::size_t>(e % T_), flow_[e]});
      }
    }
    plan.source_pi.assign(pi_.begin(), pi_.begin() + S_);
    plan.sink_pi.assign(pi_.begin() + S_, pi_.begin() + N_);
    return plan;
  }

  Node S_, T_, N_;
  Arc A_;
  Node root_;
  const std::vector<double>& cost_;
  std::vector<double> flow_;
  std::vector<char> in_tree_;
  std::vector<double> node_supply_;
  std::vector<double> art_flow_, art_cost_;
  std::vector<char> art_up_;
  double art_cost_value_ = 1.0;
  double tol_ = 0.0;
  Arc block_ = 10;
  Arc next_arc_ = 0;

  std::vector<Node> parent_, thread_, rev_thread_, succ_num_, last_succ_, dirty_revs_;
  std::vector<Arc> pred_;
  std::vector<int> pred_dir_;
  std::vector<double> pi_;

  Arc in_arc_ = 0;
  Node join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace

TransportPlan solve_transportation(const std::vector<double>& supply,
                                   const std::vector<double>& demand,
                                   const std::vector<double>& cost) {
  require(!supply.empty() && !demand.empty(), "transport needs sources and sinks");
  require(cost.size() == supply.size() * demand.size(), "cost matrix has the wrong size");
  return Simplex(supply, demand, cost).run();
}

}  // namespace needlekit::detail
