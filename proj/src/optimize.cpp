#include "uframe/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "uframe/errors.hpp"
#include "uframe/frame_io.hpp"
#include "uframe/geometry.hpp"
#include "uframe/rng.hpp"
#include "uframe/sections.hpp"

namespace uframe {

double Objective::eval(const UFrame& s) const {
  return kind == ObjectiveKind::ProjectionVolume ? hull_volume(s)
                                                 : cube_section(s).volume;
}

UFrame apply_move(const UFrame& s, const Move& m) {
  if (m.i < 0 || m.i >= s.n()) throw PreconditionError("apply_move: index out of range");
  Mat t = s.matrix();
  switch (m.kind) {
    case MoveKind::ScaleVertex:
      if (!(m.factor > 0.0)) throw PreconditionError("apply_move: factor must be positive");
      t.col(m.i) *= m.factor;
      break;
    case MoveKind::ZeroVector:
      t.col(m.i).setZero();
      break;
    case MoveKind::ReplaceVector:
      if (m.j < 0 || m.j >= s.n())
        throw PreconditionError("apply_move: replacement index out of range");
      if (s.vector(m.i).norm() >= 1.0 - 1e-9)
        throw PreconditionError("apply_move: replace requires |v_i| < 1 - 1e-9");
      t.col(m.i) = t.col(m.j);
      break;
    case MoveKind::Gaussian:
      if (!(m.magnitude > 0.0)) throw PreconditionError("apply_move: magnitude must be positive");
      if (m.direction.size() != s.k())
        throw PreconditionError("apply_move: direction has wrong dimension");
      t.col(m.i) += m.magnitude * m.direction;
      break;
  }
  return whiten(Frame(std::move(t)));
}

namespace {

/// |B_{S\i} w| with B_{S\i} = (I - v_i (x) v_i)^{-1/2}.
double removed_whitener_norm(const Vec& vi, const Vec& w) {
  const double n2 = vi.squaredNorm();
  if (n2 == 0.0) return w.norm();
  const double along = vi.dot(w) / std::sqrt(n2);
  const double rest2 = std::max(0.0, w.squaredNorm() - along * along);
  const double stretched = along / std::sqrt(1.0 - n2);
  return std::sqrt(rest2 + stretched * stretched);
}

/// True when v_i lies in the hull of the remaining generators, so zeroing
/// it cannot lose volume.
bool inside_rest(const UFrame& s, int i) {
  const int n = s.n();
  const int k = s.k();
  if (n - 1 < k) return false;
  Mat rest(k, n - 1);
  int col = 0;
  for (int j = 0; j < n; ++j)
    if (j != i) rest.col(col++) = s.vector(j);
  try {
    const Frame f(std::move(rest));
    return gauge_l1(f, s.vector(i)) <= 1.0 + 1e-9;
  } catch (const Error&) {
    return false;  // rest does not span; v_i carries rank
  }
}

}  // namespace

OptimizationReport local_search(const UFrame& s0, const Objective& obj,
                                const SearchParams& params, std::uint64_t seed) {
  if (s0.k() != 2 && s0.k() != 3)
    throw DimensionError("local_search: exact objectives only for k in {2, 3}");
  DetRng rng(seed);
  UFrame current = s0;
  double value = obj.eval(current);
  std::vector<std::pair<int, double>> trajectory{{0, value}};

  const int n = s0.n();
  const int k = s0.k();
  double step = params.step0;
  int round = 0;
  bool converged = false;

  auto try_move = [&](const Move& m) -> bool {
    try {
      UFrame cand = apply_move(current, m);
      const double cand_value = obj.eval(cand);
      if (obj.improves(cand_value, value)) {
        current = std::move(cand);
        value = cand_value;
        trajectory.push_back({round, value});
        return true;
      }
    } catch (const Error&) {
      // Rank-deficient or otherwise inapplicable move; skip it.
    }
    return false;
  };

  while (step >= params.tol_step && round < params.max_iters) {
    ++round;
    bool improved = false;

    for (int i = 0; i < n; ++i) {
      Vec g = rng.gaussian_vector(k);
      const double gn = g.norm();
      if (gn <= 1e-12) continue;
      Move m;
      m.kind = MoveKind::Gaussian;
      m.i = i;
      m.magnitude = step;
      m.direction = g / gn;
      improved |= try_move(m);
    }
    for (int i = 0; i < n; ++i) {
      Move m;
      m.kind = MoveKind::ScaleVertex;
      m.i = i;
      m.factor = 1.0 + step;
      improved |= try_move(m);
      m.factor = 1.0 / (1.0 + step);
      improved |= try_move(m);
    }
    if (obj.direction == OptDirection::Maximize) {
      for (int i = 0; i < n; ++i) {
        if (current.vector(i).norm() <= 1e-12) continue;
        if (!inside_rest(current, i)) continue;
        Move m;
        m.kind = MoveKind::ZeroVector;
        m.i = i;
        improved |= try_move(m);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const Vec vi = current.vector(i);
        if (vi.norm() >= 1.0 - 1e-9) continue;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const Vec vj = current.vector(j);
          if ((vi - vj).norm() <= 1e-12) continue;
          if (removed_whitener_norm(vi, vi) > removed_whitener_norm(vi, vj) + 1e-12)
            continue;
          Move m;
          m.kind = MoveKind::ReplaceVector;
          m.i = i;
          m.j = j;
          improved |= try_move(m);
        }
      }
    }

    if (!improved) step *= params.shrink;
  }
  if (step < params.tol_step) converged = true;

  OptimizationReport rep{s0,
                         current,
                         value,
                         std::move(trajectory),
                         necessary_condition(current),
                         classify(current),
                         converged,
                         round};
  return rep;
}

MultiStartResult multi_start(int n, int k, const Objective& obj, int starts,
                             std::uint64_t seed, const SearchParams& params,
                             int threads) {
  if (starts < 1) throw PreconditionError("multi_start: need at least one start");
  if (k != 2 && k != 3) throw DimensionError("multi_start: k must be 2 or 3");

  std::vector<std::optional<OptimizationReport>> slots(starts);
  auto run_one = [&](int idx) {
    const UFrame start =
        random_uframe(n, k, DetRng::derive(seed, 2 * static_cast<std::uint64_t>(idx)));
    slots[idx] = local_search(start, obj, params,
                              DetRng::derive(seed, 2 * static_cast<std::uint64_t>(idx) + 1));
  };

  const int workers = std::max(1, std::min(threads, starts));
  if (workers == 1) {
    for (int i = 0; i < starts; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const int idx = next.fetch_add(1);
          if (idx >= starts) return;
          run_one(idx);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  MultiStartResult out{*slots[0], {}, {}};
  for (int i = 0; i < starts; ++i) {
    const OptimizationReport& r = *slots[i];
    if (obj.improves(r.final_value, out.best.final_value)) out.best = r;
    out.all.push_back(r);
  }
  if (n > search_cap(k))
    out.warning = "n exceeds the search cap k^3 = " + std::to_string(search_cap(k));
  return out;
}

namespace {

constexpr double kClassifyTol = 1e-6;

bool hexagon_config(const std::vector<Vec>& vs) {
  if (vs.size() != 3) return false;
  for (const Vec& v : vs)
    if (std::abs(v.squaredNorm() - 2.0 / 3.0) > 2.0 * kClassifyTol) return false;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      if (std::abs(std::abs(vs[a].dot(vs[b])) - 1.0 / 3.0) > 2.0 * kClassifyTol)
        return false;
  return true;
}

}  // namespace

std::string Classification::name() const {
  switch (kind) {
    case Coordinate:
      return "coordinate";
    case CanonicalMin:
      return "canonical_min";
    case HexagonLift:
      return "hexagon_lift";
    default:
      return "other";
  }
}

Classification classify(const UFrame& s) {
  if (s.k() != 2 && s.k() != 3) throw DimensionError("classify: k must be 2 or 3");
  const int n = s.n();
  const int k = s.k();
  std::vector<int> nonzero;
  for (int i = 0; i < n; ++i)
    if (s.vector(i).norm() > kClassifyTol) nonzero.push_back(i);

  Classification cls;

  // Coordinate frame: k unit vectors, pairwise orthogonal, rest zero.
  if (static_cast<int>(nonzero.size()) == k) {
    bool ok = true;
    for (int a : nonzero)
      if (std::abs(s.vector(a).norm() - 1.0) > kClassifyTol) ok = false;
    for (std::size_t a = 0; a < nonzero.size() && ok; ++a)
      for (std::size_t b = a + 1; b < nonzero.size(); ++b)
        if (std::abs(s.vector(nonzero[a]).dot(s.vector(nonzero[b]))) > kClassifyTol)
          ok = false;
    if (ok) {
      cls.kind = Classification::Coordinate;
      return cls;
    }
  }

  // Canonical minimum frame: k collinear groups, group j of size d with
  // members of norm 1/sqrt(d), groups pairwise orthogonal, no zeros.
  if (static_cast<int>(nonzero.size()) == n) {
    std::vector<std::vector<int>> groups;
    std::vector<Vec> dirs;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const Vec u = s.vector(i) / s.vector(i).norm();
      int g = -1;
      for (std::size_t a = 0; a < dirs.size(); ++a) {
        const double c = std::abs(dirs[a].dot(u));
        if (c >= 1.0 - kClassifyTol) {
          g = static_cast<int>(a);
          break;
        }
        if (c > kClassifyTol) ok = false;  // neither collinear nor orthogonal
      }
      if (!ok) break;
      if (g < 0) {
        dirs.push_back(u);
        groups.emplace_back();
        g = static_cast<int>(dirs.size()) - 1;
      }
      groups[g].push_back(i);
    }
    if (ok && static_cast<int>(groups.size()) == k) {
      for (const auto& grp : groups) {
        const double want = 1.0 / std::sqrt(static_cast<double>(grp.size()));
        for (int i : grp)
          if (std::abs(s.vector(i).norm() - want) > kClassifyTol) ok = false;
      }
      if (ok) {
        Partition part;
        for (const auto& grp : groups) part.parts.push_back(static_cast<int>(grp.size()));
        std::sort(part.parts.rbegin(), part.parts.rend());
        cls.kind = Classification::CanonicalMin;
        cls.partition = std::move(part);
        return cls;
      }
    }
  }

  // Hexagon family: the hexagon itself (k = 2, optionally zero-padded) or
  // its lift (k = 3: one unit vector with a hexagon in its orthogonal plane).
  if (k == 2 && nonzero.size() == 3) {
    std::vector<Vec> vs;
    for (int i : nonzero) vs.push_back(s.vector(i));
    if (hexagon_config(vs)) {
      cls.kind = Classification::HexagonLift;
      return cls;
    }
  }
  if (k == 3 && nonzero.size() == 4) {
    for (std::size_t a = 0; a < nonzero.size(); ++a) {
      const Vec axis = s.vector(nonzero[a]);
      if (std::abs(axis.norm() - 1.0) > kClassifyTol) continue;
      std::vector<Vec> vs;
      bool ortho = true;
      for (std::size_t b = 0; b < nonzero.size(); ++b) {
        if (b == a) continue;
        const Vec v = s.vector(nonzero[b]);
        if (std::abs(v.dot(axis)) > kClassifyTol) ortho = false;
        vs.push_back(v);
      }
      if (ortho && hexagon_config(vs)) {
        cls.kind = Classification::HexagonLift;
        return cls;
      }
    }
  }
  return cls;
}

nlohmann::json to_json(const OptimizationReport& r, int trajectory_limit) {
  nlohmann::json traj = nlohmann::json::array();
  const std::size_t cap = trajectory_limit < 0
                              ? r.trajectory.size()
                              : std::min<std::size_t>(trajectory_limit, r.trajectory.size());
  for (std::size_t i = 0; i < cap; ++i)
    traj.push_back(nlohmann::json::array({r.trajectory[i].first, r.trajectory[i].second}));
  nlohmann::json cls{{"kind", r.classification.name()}};
  if (r.classification.partition) cls["partition"] = to_json(*r.classification.partition);
  return nlohmann::json{{"start", frame_to_json(r.start)},
                        {"final", frame_to_json(r.final_frame)},
                        {"final_value", r.final_value},
                        {"trajectory", std::move(traj)},
                        {"nc_report", to_json(r.nc_report)},
                        {"classification", std::move(cls)},
                        {"converged", r.converged},
                        {"iterations", r.iterations}};
}

nlohmann::json to_json(const MultiStartResult& r, int trajectory_limit) {
  nlohmann::json finals = nlohmann::json::array();
  for (const OptimizationReport& rep : r.all) finals.push_back(rep.final_value);
  nlohmann::json j{{"best", to_json(r.best, trajectory_limit)},
                   {"all_final_values", std::move(finals)},
                   {"starts", static_cast<int>(r.all.size())}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

}  // namespace uframe
