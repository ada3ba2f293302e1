#include "gpdevopt/lhd.hpp"

#include "gpdevopt/errors.hpp"
#include "gpdevopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gpdev {

Eigen::MatrixXd random_lhd(std::size_t count, std::size_t d, Rng& rng) {
    const auto n = static_cast<Eigen::Index>(count);
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(d));
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::vector<std::size_t> perm(count);
    for (std::size_t k = 0; k < d; ++k) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < count; ++i) {
            const double stratum = static_cast<double>(perm[i]);
            const double cnt = static_cast<double>(count);
            double u = (stratum + jitter(rng)) / cnt;
            // rounding may push u onto the next stratum edge
            while (std::floor(u * cnt) > stratum) u = std::nextafter(u, 0.0);
            while (std::floor(u * cnt) < stratum) u = std::nextafter(u, 1.0);
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = u;
        }
    }
    return out;
}

MaximinDesign lhd_maximin_design(std::size_t count, const SearchBox& box, Rng& rng,
                                 std::size_t candidates) {
    if (count < 2) throw InvalidInput("a maximin design needs at least two points");
    if (candidates < 1) throw InvalidInput("need at least one LHD candidate");
    const std::size_t d = box.dim();

    // candidates are drawn serially so the RNG stream does not depend on threads
    std::vector<Eigen::MatrixXd> pool;
    pool.reserve(candidates);
    for (std::size_t c = 0; c < candidates; ++c) pool.push_back(random_lhd(count, d, rng));

    MaximinDesign out;
    out.candidate_scores.resize(candidates);
    for (std::size_t c = 0; c < candidates; ++c)
        out.candidate_scores[c] = kernels::min_pairwise_distance_parallel(pool[c]);

    const auto best = static_cast<std::size_t>(
        std::max_element(out.candidate_scores.begin(), out.candidate_scores.end()) -
        out.candidate_scores.begin());
    out.unit_points = std::move(pool[best]);
    out.score = out.candidate_scores[best];
    out.points.resize(out.unit_points.rows(), out.unit_points.cols());
    for (Eigen::Index i = 0; i < out.unit_points.rows(); ++i)
        out.points.row(i) = box.from_unit(out.unit_points.row(i).transpose()).transpose();
    return out;
}

Eigen::MatrixXd unit_lhd_maximin(std::size_t count, std::size_t d, Rng& rng,
                                 std::size_t candidates) {
    const auto n = static_cast<Eigen::Index>(d);
    const SearchBox unit(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
    return lhd_maximin_design(count, unit, rng, candidates).unit_points;
}

std::vector<std::vector<std::size_t>> lhd_strata(const Eigen::MatrixXd& unit_points) {
    const auto n = static_cast<double>(unit_points.rows());
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(unit_points.cols()));
    for (Eigen::Index k = 0; k < unit_points.cols(); ++k)
        for (Eigen::Index i = 0; i < unit_points.rows(); ++i)
            out[static_cast<std::size_t>(k)].push_back(
                static_cast<std::size_t>(std::floor(unit_points(i, k) * n)));
    return out;
}

}  // namespace gpdev
