#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "cfn/group.hpp"

namespace cfn {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// A square family H(z, t); paths are tracked in t with H(z(t), t) = 0.
struct Homotopy {
  std::int64_t dim = 0;
  std::function<CVec(const CVec&, double)> F;
  std::function<CMat(const CVec&, double)> J;  // dF/dz
};

struct TrackOptions {
  double newton_tol = 1e-12;
  double step_init = 0.05;
  double step_min = 1e-12;
  int newton_iters = 16;
  int retries = 5;  // consecutive failed step reductions before giving up
  double t_end = 1.0;
  double escape_norm = 1e7;  // declare the path divergent beyond this
  int max_steps = 20000;     // hard cap on predictor-corrector iterations
};

struct PathPoint {
  CVec z;
  double t = 0.0;
  bool ok = false;
};

/// Predictor-corrector tracking of one path from (z0, t=0) to t_end.
PathPoint track_path(const Homotopy& h, CVec z0, const TrackOptions& opts = {});

/// Newton iteration for F(., t) at fixed t; true on convergence to tol.
bool newton_refine(const Homotopy& h, CVec& z, double t, double tol, int iters);

/// All roots of a square system whose components have total degree deg,
/// by a gamma-trick homotopy from z_i^deg = r_i (deg^dim start points).
struct TotalDegreeResult {
  std::vector<CVec> endpoints;  // refined ends of the successful paths
  std::int64_t paths = 0;
  std::int64_t failures = 0;
};
TotalDegreeResult total_degree_solve(std::int64_t dim, int deg,
                                     const std::function<CVec(const CVec&)>& F,
                                     const std::function<CMat(const CVec&)>& J,
                                     std::uint64_t seed,
                                     const TrackOptions& opts = {});

/// Greedy clustering of endpoints within the given radius.
struct Cluster {
  CVec point;
  std::int64_t multiplicity = 0;
};
std::vector<Cluster> cluster_points(const std::vector<CVec>& pts, double radius);

}  // namespace cfn
