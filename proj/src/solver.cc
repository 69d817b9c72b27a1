#include "gopac/solver.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <memory>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gopac/domain.h"
#include "gopac/estimators.h"
#include "gopac/kernels.h"

namespace gopac {
namespace {

using Clock = std::chrono::steady_clock;

// Deepest rotation level the search will split to; keeps octree indices in
// range whatever the configured minimum width.
constexpr int kMaxRotationLevel = 28;

// Volume with zero-width axes counted as unit length, so flat domains still
// report progress.
double Measure(const Cuboid& c) {
  double v = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (c.half_widths[a] > 0.0) v *= 2.0 * c.half_widths[a];
  }
  return v;
}

bool Admissible(const Vec3& t, const ProblemInstance& inst) {
  return inst.translation_domain.Contains(t) &&
         ZetaAdmissible(t, inst.points, inst.translation_domain.zeta);
}

// Best pose found so far, the pruning threshold and the trace, shared by all
// workers of one run.
class SharedState {
 public:
  SharedState(int n, int seed, int found, const Pose& pose, int workers,
              double total_measure, Clock::time_point start,
              std::optional<Clock::time_point> deadline, bool record,
              int upper_cap)
      : n_(n),
        threshold_(std::max(seed, found)),
        found_(found),
        pose_(pose),
        slots_(workers),
        total_measure_(total_measure),
        start_(start),
        deadline_(deadline),
        record_(record),
        upper_cap_(upper_cap) {
    for (Slot& s : slots_) s.upper = n;
  }

  int threshold() const { return threshold_.load(std::memory_order_acquire); }

  int found() const {
    std::lock_guard<std::mutex> lock(mu_);
    return found_;
  }

  void Offer(int nu, const Pose& pose) {
    std::lock_guard<std::mutex> lock(mu_);
    if (nu <= found_) return;
    found_ = nu;
    pose_ = pose;
    int current = threshold_.load(std::memory_order_relaxed);
    while (current < nu && !threshold_.compare_exchange_weak(
                               current, nu, std::memory_order_acq_rel)) {
    }
  }

  bool Expired() {
    if (!deadline_) return false;
    if (timed_out_.load(std::memory_order_relaxed)) return true;
    if (Clock::now() >= *deadline_) {
      timed_out_.store(true, std::memory_order_relaxed);
      return true;
    }
    return false;
  }
  bool timed_out() const { return timed_out_.load(std::memory_order_relaxed); }

  void Publish(int worker, int upper, double measure, int queue_size) {
    std::lock_guard<std::mutex> lock(mu_);
    slots_[worker] = {upper, measure, queue_size};
    if (record_) trace_.push_back(SampleLocked());
  }

  void RecordFinal() {
    std::lock_guard<std::mutex> lock(mu_);
    trace_.push_back(SampleLocked());
  }

  Pose pose() const {
    std::lock_guard<std::mutex> lock(mu_);
    return pose_;
  }
  std::vector<TraceSample> TakeTrace() { return std::move(trace_); }

 private:
  struct Slot {
    int upper = 0;
    double measure = 0.0;
    int queue_size = 0;
  };

  TraceSample SampleLocked() const {
    TraceSample s;
    s.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
    s.lower = found_;
    int upper = threshold_.load(std::memory_order_relaxed);
    double measure = 0.0;
    int queue = 0;
    for (const Slot& slot : slots_) {
      upper = std::max(upper, slot.upper);
      measure += slot.measure;
      queue += slot.queue_size;
    }
    s.upper = std::max(std::min(upper, upper_cap_), found_);
    s.remaining_volume = total_measure_ > 0.0 ? measure / total_measure_ : 0.0;
    s.queue_size = queue;
    return s;
  }

  int n_;
  std::atomic<int> threshold_;
  mutable std::mutex mu_;
  int found_;
  Pose pose_;
  std::vector<Slot> slots_;
  std::vector<TraceSample> trace_;
  double total_measure_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  std::atomic<bool> timed_out_{false};
  bool record_;
  int upper_cap_;
};

struct SearchContext {
  const ProblemInstance& inst;
  const SolverConfig& cfg;
  const RotationCache* cache;
  SharedState* shared;  // null for standalone rotation searches
  std::atomic<std::int64_t>* rotation_nodes;
};

struct RbbOutcome {
  int best_lower = -1;  // exact objective in the fixed-centre run
  Vec3 r = Vec3::Zero();
  int bound = 0;  // relaxed runs: valid upper bound
  bool timed_out = false;
};

NestedBounds EvaluateNode(const SearchContext& ctx, const RotationNode& node,
                          const TranslationTerms& trans, int prune_at) {
  const bool tight = ctx.cfg.bound_mode != BoundMode::kWeakSphere &&
                    node.level <= ctx.cfg.tight_rotation_max_level;
  const Cuboid cube = node.Cube();
  RotationTerms terms;
  std::optional<LazySurfaceSampler> lazy;
  if (tight) lazy.emplace(cube, ctx.cfg.pitch_divisor);
  RotationTermsBuffer buffer;
  if (ctx.cache == nullptr ||
      !ctx.cache->Lookup(node, tight, lazy ? &*lazy : nullptr, &terms)) {
    buffer.Reset(cube, ctx.inst.bearings,
                 tight ? ctx.cfg.bound_mode : BoundMode::kWeakSphere,
                 ctx.cfg.pitch_divisor);
    terms = buffer.view();
  }
  if (ctx.rotation_nodes) {
    ctx.rotation_nodes->fetch_add(1, std::memory_order_relaxed);
  }
  return ctx.cfg.parallel_kernels
             ? CountCubeParallel(terms, trans, ctx.inst.theta, prune_at)
             : CountCubeSerial(terms, trans, ctx.inst.theta, prune_at);
}

// Best-first search over the rotation octree. `threshold` is the count to
// beat; cubes whose bound does not exceed it, or the best lower count found,
// are dropped.
RbbOutcome RunRbb(const SearchContext& ctx, const TranslationTerms& trans,
                  const Vec3& t0, bool relaxed, int threshold,
                  int parent_bound) {
  struct Item {
    int bound;
    std::uint64_t seq;
    RotationNode node;
    bool operator<(const Item& o) const {
      if (bound != o.bound) return bound < o.bound;
      return seq > o.seq;
    }
  };
  RbbOutcome out;
  int residual = 0;
  std::uint64_t seq = 0;
  std::priority_queue<Item> queue;
  const double min_width = ctx.cfg.min_rotation_half_width;

  auto consider = [&](const RotationNode& node, int cap) {
    // Relaxed runs may skip exact box tests for cubes the cones already
    // prune; their lower count is then 0, which never moves best_lower.
    const int prune_at = relaxed ? std::max(threshold, out.best_lower) : -1;
    const NestedBounds nb = EvaluateNode(ctx, node, trans, prune_at);
    const int upper = std::min(nb.upper, cap);
    if (nb.lower > out.best_lower) {
      const Vec3 center = node.Cube().center;
      if (relaxed) {
        out.best_lower = std::min(nb.lower, upper);
        out.r = center;
      } else {
        const int exact = Objective({center, t0}, ctx.inst);
        if (exact > out.best_lower) {
          out.best_lower = exact;
          out.r = center;
        }
      }
    }
    if (upper > std::max(threshold, out.best_lower)) {
      queue.push({upper, seq++, node});
    }
  };

  consider(RotationNode{}, parent_bound);
  int pops = 0;
  while (!queue.empty()) {
    const Item top = queue.top();
    if (top.bound <= std::max(threshold, out.best_lower)) break;
    if (ctx.shared && (++pops & 63) == 0 && ctx.shared->Expired()) {
      out.timed_out = true;
      residual = std::max(residual, top.bound);
      break;
    }
    queue.pop();
    if (top.node.level >= kMaxRotationLevel ||
        top.node.Cube().half_widths.x() < min_width) {
      residual = std::max(residual, top.bound);
      continue;
    }
    for (int k = 0; k < 8; ++k) {
      const RotationNode child = top.node.Child(k);
      if (!IntersectsPiBall(child.Cube())) continue;
      consider(child, top.bound);
    }
  }
  out.bound = std::max({threshold, out.best_lower, residual});
  return out;
}

class Worker {
 public:
  Worker(const SearchContext& ctx, int id, std::vector<Cuboid> domain)
      : ctx_(ctx), id_(id), domain_(std::move(domain)) {}

  void Run();
  bool certified() const { return certified_; }
  std::int64_t translation_nodes() const { return translation_nodes_; }
  std::int64_t refinements() const { return refinements_; }

 private:
  struct Entry {
    QueueEntry e;
    bool operator<(const Entry& o) const {
      const double wa = e.cuboid.MaxHalfWidth();
      const double wb = o.e.cuboid.MaxHalfWidth();
      if (wa != wb) return wa < wb;
      if (e.bound != o.e.bound) return e.bound < o.e.bound;
      return e.seq > o.e.seq;
    }
  };

  void Process(const Cuboid& ct, int parent_bound);
  void Refine(const Pose& coarse, int* nu, Pose* pose);
  void Push(const Cuboid& ct, int bound);
  int MaxBound();
  void Publish(int upper) {
    ctx_.shared->Publish(id_, upper, measure_, static_cast<int>(queue_.size()));
  }

  const SearchContext& ctx_;
  int id_;
  std::vector<Cuboid> domain_;
  std::priority_queue<Entry> queue_;
  std::vector<int> histogram_;
  int max_bound_ = 0;
  double measure_ = 0.0;
  int residual_ = 0;
  std::uint64_t seq_ = 0;
  bool certified_ = false;
  std::int64_t translation_nodes_ = 0;
  std::int64_t refinements_ = 0;
};

void Worker::Push(const Cuboid& ct, int bound) {
  QueueEntry e;
  e.cuboid = ct;
  e.bound = bound;
  e.kind = QueueKind::kTranslation;
  e.seq = seq_++;
  queue_.push({e});
  ++histogram_[bound];
  max_bound_ = std::max(max_bound_, bound);
  measure_ += Measure(ct);
}

int Worker::MaxBound() {
  while (max_bound_ > 0 && histogram_[max_bound_] == 0) --max_bound_;
  return histogram_[max_bound_] > 0 ? max_bound_ : 0;
}

void Worker::Refine(const Pose& coarse, int* nu, Pose* pose) {
  const std::vector<Correspondence> corrs =
      ExtractCorrespondences(coarse, ctx_.inst);
  if (corrs.size() < 3) return;
  ++refinements_;
  const RefineResult refined = RefinePnP(corrs, ctx_.inst, coarse);
  if (refined.diverged || !Admissible(refined.pose.t, ctx_.inst)) return;
  const int count = Objective(refined.pose, ctx_.inst);
  if (count >= *nu) {
    *nu = count;
    *pose = refined.pose;
  }
}

void Worker::Process(const Cuboid& ct, int parent_bound) {
  const ProblemInstance& inst = ctx_.inst;
  if (InsideZetaBall(ct, inst.points, inst.translation_domain.zeta)) return;
  if (ctx_.shared->threshold() >= inst.num_bearings()) return;
  ++translation_nodes_;
  const Vec3& t0 = ct.center;

  const TranslationTerms at_center =
      TranslationTerms::Build(inst.points, ct, ctx_.cfg.bound_mode, false);
  const RbbOutcome low = RunRbb(ctx_, at_center, t0, /*relaxed=*/false,
                                ctx_.shared->threshold(), inst.num_bearings());
  const Pose coarse{CanonicalRotationVec(low.r), t0};
  // The refined pose stands in for the coarse one when it scores no lower.
  int candidate_nu = Admissible(t0, inst) ? low.best_lower : 0;
  Pose candidate = coarse;
  if (ctx_.cfg.refine &&
      PnpTrigger(low.best_lower,
                 std::max(ctx_.shared->found(), candidate_nu))) {
    Refine(coarse, &candidate_nu, &candidate);
  }
  if (candidate_nu > 0) ctx_.shared->Offer(candidate_nu, candidate);
  if (low.timed_out) {
    Push(ct, parent_bound);
    return;
  }

  const TranslationTerms over_box =
      TranslationTerms::Build(inst.points, ct, ctx_.cfg.bound_mode, true);
  const int threshold = ctx_.shared->threshold();
  const RbbOutcome up = RunRbb(ctx_, over_box, t0, /*relaxed=*/true, threshold,
                               parent_bound);
  const int bound = std::min(up.bound, parent_bound);
  if (bound > threshold || up.timed_out) Push(ct, bound);
}

void Worker::Run() {
  const int n = ctx_.inst.num_bearings();
  histogram_.assign(n + 1, 0);
  for (const Cuboid& c : domain_) {
    if (ctx_.shared->Expired()) break;
    Process(c, n);
  }
  for (;;) {
    const int threshold = ctx_.shared->threshold();
    const int upper = std::max(MaxBound(), residual_);
    if (ctx_.shared->timed_out() || ctx_.shared->Expired()) {
      Publish(upper);
      return;
    }
    if (queue_.empty() || threshold >= upper) {
      certified_ = residual_ <= threshold;
      measure_ = 0.0;
      while (!queue_.empty()) queue_.pop();
      Publish(certified_ ? 0 : upper);
      return;
    }
    Publish(upper);
    const QueueEntry top = queue_.top().e;
    queue_.pop();
    --histogram_[top.bound];
    measure_ -= Measure(top.cuboid);
    if (top.bound <= threshold) continue;
    if (top.cuboid.MaxHalfWidth() < ctx_.cfg.min_translation_half_width) {
      residual_ = std::max(residual_, top.bound);
      continue;
    }
    for (const Cuboid& child : Subdivide(top.cuboid)) {
      Process(child, top.bound);
    }
  }
}

// Splits the domain cuboids until there are at least `parts` pieces by
// bisecting the widest piece along its widest axis.
std::vector<Cuboid> SplitDomain(std::vector<Cuboid> pieces, int parts) {
  while (static_cast<int>(pieces.size()) < parts) {
    auto widest = std::max_element(
        pieces.begin(), pieces.end(), [](const Cuboid& a, const Cuboid& b) {
          return a.MaxHalfWidth() < b.MaxHalfWidth();
        });
    if (!(widest->MaxHalfWidth() > 0.0)) break;
    Cuboid c = *widest;
    int axis = 0;
    c.half_widths.maxCoeff(&axis);
    c.half_widths[axis] *= 0.5;
    Cuboid lo = c, hi = c;
    lo.center[axis] -= c.half_widths[axis];
    hi.center[axis] += c.half_widths[axis];
    *widest = lo;
    pieces.insert(widest + 1, hi);
  }
  return pieces;
}

struct RoundResult {
  Solution solution;
  bool certified = false;
  bool timed_out = false;
};

class Solver {
 public:
  Solver(const ProblemInstance& inst, const SolverConfig& cfg)
      : cfg_(cfg), start_(Clock::now()) {
    cfg.Validate();
    inst_ = inst;
    if (cfg.zeta) inst_.translation_domain.zeta = *cfg.zeta;
    inst_.Validate();
    if (cfg.time_budget) {
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(*cfg.time_budget));
    }
    if (cfg.precompute_depth > 0 && inst_.num_bearings() > 0) {
      cache_ = std::make_unique<RotationCache>(inst_.bearings,
                                               cfg.precompute_depth);
    }
    const Cuboid& first = inst_.translation_domain.cuboids.front();
    best_pose_ = {Vec3::Zero(), first.center};
    best_found_ = Admissible(first.center, inst_) ? Objective(best_pose_, inst_)
                                                  : 0;
  }

  RoundResult Round(int seed, int upper_cap);
  Solution Finish(const RoundResult& last, bool optimal, int rounds);

  const ProblemInstance& inst() const { return inst_; }
  bool Expired() const { return deadline_ && Clock::now() >= *deadline_; }

 private:
  SolverConfig cfg_;
  ProblemInstance inst_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  std::unique_ptr<RotationCache> cache_;
  int best_found_ = 0;
  Pose best_pose_;
  std::vector<TraceSample> trace_;
  SolverStats stats_;
};

RoundResult Solver::Round(int seed, int upper_cap) {
  const int n = inst_.num_bearings();
  const int workers = cfg_.threads;
  std::vector<Cuboid> pieces =
      SplitDomain(inst_.translation_domain.cuboids, workers);
  double total = 0.0;
  for (const Cuboid& c : inst_.translation_domain.cuboids) total += Measure(c);

  SharedState shared(n, seed, best_found_, best_pose_, workers, total, start_,
                     deadline_, cfg_.record_trace, upper_cap);
  std::atomic<std::int64_t> rotation_nodes{0};
  const SearchContext ctx{inst_, cfg_, cache_.get(), &shared, &rotation_nodes};

  std::vector<std::vector<Cuboid>> assignment(workers);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    assignment[k % workers].push_back(pieces[k]);
  }
  std::vector<std::unique_ptr<Worker>> pool;
  for (int w = 0; w < workers; ++w) {
    pool.push_back(std::make_unique<Worker>(ctx, w, assignment[w]));
  }
  if (workers == 1) {
    pool[0]->Run();
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          pool[w]->Run();
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  shared.RecordFinal();

  RoundResult result;
  result.timed_out = shared.timed_out();
  result.certified = !result.timed_out;
  for (const auto& w : pool) {
    result.certified = result.certified && w->certified();
    stats_.translation_nodes += w->translation_nodes();
    stats_.refinements += w->refinements();
  }
  stats_.rotation_nodes += rotation_nodes.load();
  ++stats_.guess_rounds;
  best_found_ = shared.found();
  best_pose_ = shared.pose();
  std::vector<TraceSample> trace = shared.TakeTrace();
  trace_.insert(trace_.end(), trace.begin(), trace.end());
  result.solution.nu_star = best_found_;
  return result;
}

Solution Solver::Finish(const RoundResult& last, bool optimal, int rounds) {
  (void)last;
  Solution s;
  s.pose = {CanonicalRotationVec(best_pose_.r), best_pose_.t};
  s.nu_star = Objective(s.pose, inst_);
  s.correspondences = ExtractCorrespondences(s.pose, inst_);
  s.optimal = optimal;
  s.trace = std::move(trace_);
  s.stats = stats_;
  s.stats.guess_rounds = rounds;
  s.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
  return s;
}

}  // namespace

void SolverConfig::Validate() const {
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (precompute_depth < 0) {
    throw std::invalid_argument("precompute_depth must be >= 0");
  }
  if (pitch_divisor < 1) {
    throw std::invalid_argument("pitch_divisor must be >= 1");
  }
  if (zeta && !(*zeta > 0.0)) throw std::invalid_argument("zeta must be > 0");
  if (time_budget && !(*time_budget >= 0.0)) {
    throw std::invalid_argument("time budget must be >= 0");
  }
}

Solution GopacSolve(const ProblemInstance& inst, const SolverConfig& cfg) {
  if (cfg.guess_verify) return GuessAndVerify(inst, cfg);
  Solver solver(inst, cfg);
  if (solver.inst().num_bearings() == 0) {
    return solver.Finish({}, true, 0);
  }
  const RoundResult r = solver.Round(0, solver.inst().num_bearings());
  return solver.Finish(r, r.certified, 1);
}

Solution GuessAndVerify(const ProblemInstance& inst, const SolverConfig& cfg) {
  Solver solver(inst, cfg);
  const int n = solver.inst().num_bearings();
  if (n == 0) return solver.Finish({}, true, 0);
  const int step = GuessStep(n);
  int seed = GuessInitialSeed(n);
  int cap = n;
  for (int rounds = 1;; ++rounds) {
    const RoundResult r = solver.Round(seed, cap);
    if (r.timed_out) return solver.Finish(r, false, rounds);
    if (r.certified && r.solution.nu_star >= seed) {
      return solver.Finish(r, true, rounds);
    }
    // The round still proves the optimum is at most the seed.
    if (r.certified) cap = std::min(cap, seed);
    if (seed == 0) return solver.Finish(r, r.certified, rounds);
    seed = std::max(seed - step, 0);
  }
}

RbbResult Rbb(const ProblemInstance& inst, const Vec3& t0,
              const std::optional<Cuboid>& ct, int nu_best,
              const SolverConfig& cfg, const RotationCache* cache) {
  RbbResult result;
  result.nu = nu_best;
  if (nu_best >= inst.num_bearings()) return result;
  std::atomic<std::int64_t> nodes{0};
  const SearchContext ctx{inst, cfg, cache, nullptr, &nodes};
  const bool relaxed = ct.has_value();
  const Cuboid domain = relaxed ? *ct : Cuboid{t0, Vec3::Zero()};
  const TranslationTerms trans =
      TranslationTerms::Build(inst.points, domain, cfg.bound_mode, relaxed);
  const RbbOutcome out = RunRbb(ctx, trans, domain.center, relaxed, nu_best,
                                inst.num_bearings());
  result.timed_out = out.timed_out;
  result.rotation_nodes = nodes.load();
  if (relaxed) {
    result.nu = out.bound;
    result.r = out.r;
  } else if (out.best_lower > nu_best) {
    result.nu = out.best_lower;
    result.r = CanonicalRotationVec(out.r);
  }
  return result;
}

}  // namespace gopac
