#pragma once

#include "gpdevopt/lhd.hpp"

#include <Eigen/Core>

#include <vector>

namespace gpdev {

struct KMeansResult {
    Eigen::MatrixXd centers;              ///< k x d
    std::vector<std::size_t> assignment;  ///< cluster of each input row
    double sse = 0.0;                     ///< within-cluster sum of squares
    std::vector<double> restart_sse;      ///< SSE of every restart, in order
};

/// Lloyd's algorithm from k distinct random rows; an emptied cluster is
/// re-seeded from a random row. Stops when assignments settle or after
/// max_iters sweeps.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng, int max_iters = 100);

/// Lowest-SSE result of `restarts` independent kmeans() runs.
KMeansResult kmeans_best_of(const Eigen::MatrixXd& points, std::size_t k, std::size_t restarts,
                            Rng& rng, int max_iters = 100);

}  // namespace gpdev
