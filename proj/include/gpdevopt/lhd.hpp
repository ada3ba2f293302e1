#pragma once

#include "gpdevopt/search_box.hpp"

#include <Eigen/Core>

#include <random>
#include <vector>

namespace gpdev {

using Rng = std::mt19937_64;

/// Random Latin hypercube in [0,1]^d: each column visits every stratum
/// [i/count, (i+1)/count) exactly once, jittered uniformly inside it.
Eigen::MatrixXd random_lhd(std::size_t count, std::size_t d, Rng& rng);

struct MaximinDesign {
    Eigen::MatrixXd points;               ///< count x d, in box coordinates
    Eigen::MatrixXd unit_points;          ///< same design in [0,1]^d
    double score = 0.0;                   ///< min pairwise distance in [0,1]^d
    std::vector<double> candidate_scores;
};

/// Best of `candidates` random Latin hypercubes by minimum pairwise distance.
MaximinDesign lhd_maximin_design(std::size_t count, const SearchBox& box, Rng& rng,
                                 std::size_t candidates = 50);

inline Eigen::MatrixXd lhd_maximin(std::size_t count, const SearchBox& box, Rng& rng,
                                   std::size_t candidates = 50) {
    return lhd_maximin_design(count, box, rng, candidates).points;
}

/// Maximin LHD on the unit cube.
Eigen::MatrixXd unit_lhd_maximin(std::size_t count, std::size_t d, Rng& rng,
                                 std::size_t candidates = 50);

/// Stratum index of every coordinate of a unit-cube design (used by tests).
std::vector<std::vector<std::size_t>> lhd_strata(const Eigen::MatrixXd& unit_points);

}  // namespace gpdev
