#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uframe/extremal.hpp"
#include "uframe/frame.hpp"

namespace uframe {

enum class MoveKind { ScaleVertex, ZeroVector, ReplaceVector, Gaussian };

/// One perturbation of the scheme S -> T(S) -> whiten. Gaussian moves carry
/// the realized unit direction so that apply_move stays a pure function.
struct Move {
  MoveKind kind;
  int i = -1;
  int j = -1;              // ReplaceVector: source index
  double factor = 1.0;     // ScaleVertex: must be positive
  double magnitude = 0.0;  // Gaussian: step length, must be positive
  Vec direction;           // Gaussian: unit direction
};

enum class ObjectiveKind { ProjectionVolume, SectionVolume };
enum class OptDirection { Maximize, Minimize };

/// A positively homogeneous volume functional plus a search direction.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::ProjectionVolume;
  OptDirection direction = OptDirection::Maximize;

  double eval(const UFrame& s) const;
  bool improves(double candidate, double incumbent) const {
    return direction == OptDirection::Maximize ? candidate > incumbent
                                               : candidate < incumbent;
  }
};

struct SearchParams {
  double step0 = 0.1;
  double shrink = 0.5;
  double tol_step = 1e-8;
  int max_iters = 10000;
};

struct Classification {
  enum Kind { Coordinate, CanonicalMin, HexagonLift, Other };
  Kind kind = Other;
  std::optional<Partition> partition;  // CanonicalMin only

  std::string name() const;
};

struct OptimizationReport {
  UFrame start;
  UFrame final_frame;
  double final_value;
  std::vector<std::pair<int, double>> trajectory;  // (round, value) per accepted move
  NecessaryConditionReport nc_report;
  Classification classification;
  bool converged;  // false when the round budget ran out first
  int iterations;
};

/// Applies T, then whitens. Throws ConditioningError when T(S) is rank
/// deficient; ReplaceVector requires |v_i| < 1 - 1e-9.
UFrame apply_move(const UFrame& s, const Move& m);

/// Pattern search over the move family: per round one Gaussian direction
/// per vector at the current step length, both scalings of each vector,
/// zero moves on vectors inside the hull of the others (maximization), and
/// replacements by longer-image vectors (minimization). Strict improvements
/// only; the step shrinks when a round stalls.
OptimizationReport local_search(const UFrame& s0, const Objective& obj,
                                const SearchParams& params = {},
                                std::uint64_t seed = 0);

struct MultiStartResult {
  OptimizationReport best;
  std::vector<OptimizationReport> all;
  std::string warning;  // set when n exceeds the search cap k^3
};

/// Independent local searches from `starts` seeded random uframes; the
/// per-start seeds derive deterministically from `seed`, so results do not
/// depend on `threads`.
MultiStartResult multi_start(int n, int k, const Objective& obj, int starts,
                             std::uint64_t seed, const SearchParams& params = {},
                             int threads = 1);

/// Matches a frame, up to orthogonal maps, sign flips and reindexing,
/// against the coordinate frames, the canonical minimum frames, and the
/// hexagon family (the hexagon, zero-padded hexagons and their lifts).
/// Tolerance 1e-6 on the vector set.
Classification classify(const UFrame& s);

nlohmann::json to_json(const OptimizationReport& r, int trajectory_limit = -1);
nlohmann::json to_json(const MultiStartResult& r, int trajectory_limit = -1);

}  // namespace uframe
