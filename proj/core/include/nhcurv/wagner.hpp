#pragma once

// Iterated curvature along the flag: level metrics, mu components, level
// connections Pi, level curvatures and the final Wagner tensor.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nhcurv/connection.hpp"

namespace nhcurv {

/// Gram matrix of the bivector basis e_a ^ e_b (a < b) under g.
Eigen::MatrixXd wedge_metric(const Eigen::MatrixXd& g);

/// Pairs (a, b), a < b, in the order used by wedge_metric.
std::vector<std::pair<std::size_t, std::size_t>> bivector_basis(std::size_t k);

struct LevelData {
  int level = 0;
  std::size_t begin = 0;  // block [begin, end) added at this level
  std::size_t end = 0;
  JetMatrix gup;          // contravariant metric on the block
  JetMatrix glow;         // its inverse
  JetArray mstar;         // (P - begin, a, b), a, b < begin
  JetArray pi;            // (d, a, c), a < end
  JetArray curvature;     // (d, a, b, c), a, b < end
};

/// Block-diagonal inverse metric on V_{i-1}, built up level by level.
JetMatrix lower_inverse_metric(const ConnectionTable& ct,
                               const std::vector<LevelData>& done, std::size_t size);

/// g^{PQ} = sum over all ordered (a,b), (c,d) of C^P_ab C^Q_cd g^ac g^bd.
JetMatrix extend_metric_level(const JetArray& C, const JetMatrix& ginv_lower,
                              std::size_t begin, std::size_t end);

/// M*^{ab}_P = sum_Q g_PQ C^Q_cd g^ca g^db.
JetArray mu_components(const JetArray& C, const JetMatrix& ginv_lower,
                       const JetMatrix& glow, std::size_t begin, std::size_t end);

/// Pi at the next level: copies the lower table on V_{i-1} and fills the new
/// block from M* and the lower curvature plus the Lambda term.
JetArray pi_level(const JetArray& prev_pi, const JetArray& prev_curvature,
                  const JetArray& mstar, const JetArray& C, std::size_t m,
                  std::size_t begin, std::size_t end);

struct WagnerResult {
  FrameEval frame;
  ConnectionTable connection;
  JetArray schouten;
  std::vector<LevelData> levels;
  CurvatureBlock schouten_block;
  CurvatureBlock wagner;
  int degree = 0;

  /// Level-i curvature block (level 0 is the Schouten tensor).
  CurvatureBlock level_block(int i) const;
};

/// Full pipeline at a point. Order defaults to N + 2.
WagnerResult wagner_tensor(const SystemDef& sys, const Point& q,
                           std::optional<int> order = std::nullopt);

struct FlatnessEntry {
  double value = 0.0;
  double max_component = 0.0;
  bool flat = false;
  std::vector<Point> points;
};

struct FlatnessReport {
  std::string param;
  double flat_tol = 1e-8;
  std::vector<FlatnessEntry> entries;
  bool all_non_flat() const;
};

/// Max |Wagner component| over random regular points for each value of
/// `param`. Work is spread over `threads` workers (0 = hardware).
FlatnessReport flatness_scan(const SystemDef& sys, const std::string& param,
                             const std::vector<double>& values, int points_per_value,
                             std::uint64_t seed, double flat_tol = 1e-8,
                             unsigned threads = 0);

/// Runs fn(i) for i in [0, count) on a worker pool; exceptions are rethrown
/// for the lowest failing index.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace nhcurv
