#include "gpdevopt/kmeans.hpp"

#include "gpdevopt/errors.hpp"

#include <limits>
#include <numeric>

namespace gpdev {
namespace {

std::size_t nearest(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& points, Eigen::Index i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        const double dist = (points.row(i) - centers.row(c)).squaredNorm();
        if (dist < best_d) {
            best_d = dist;
            best = static_cast<std::size_t>(c);
        }
    }
    return best;
}

double within_sse(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers,
                  const std::vector<std::size_t>& assignment) {
    double sse = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        sse += (points.row(i) - centers.row(static_cast<Eigen::Index>(
                                    assignment[static_cast<std::size_t>(i)])))
                   .squaredNorm();
    return sse;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng, int max_iters) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k < 1 || k > n) throw InvalidInput("k-means needs 1 <= k <= number of points");
    const auto d = points.cols();
    const auto kk = static_cast<Eigen::Index>(k);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
    }
    Eigen::MatrixXd centers(kk, d);
    for (Eigen::Index c = 0; c < kk; ++c)
        centers.row(c) = points.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(c)]));

    std::uniform_int_distribution<std::size_t> any_row(0, n - 1);
    std::vector<std::size_t> assignment(n, k);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = nearest(centers, points, static_cast<Eigen::Index>(i));
            if (c != assignment[i]) {
                assignment[i] = c;
                changed = true;
            }
        }
        if (!changed) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(assignment[i])) += points.row(static_cast<Eigen::Index>(i));
            ++counts[assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            const auto cc = static_cast<Eigen::Index>(c);
            if (counts[c] == 0) {
                centers.row(cc) = points.row(static_cast<Eigen::Index>(any_row(rng)));
            } else {
                centers.row(cc) = sums.row(cc) / static_cast<double>(counts[c]);
            }
        }
    }

    KMeansResult out;
    out.centers = std::move(centers);
    out.assignment = std::move(assignment);
    out.sse = within_sse(points, out.centers, out.assignment);
    out.restart_sse = {out.sse};
    return out;
}

KMeansResult kmeans_best_of(const Eigen::MatrixXd& points, std::size_t k, std::size_t restarts,
                            Rng& rng, int max_iters) {
    if (restarts < 1) throw InvalidInput("k-means needs at least one restart");
    std::vector<Rng::result_type> seeds(restarts);
    for (auto& s : seeds) s = rng();
    std::vector<KMeansResult> runs(restarts);
#pragma omp parallel for schedule(static) if (points.rows() >= 2048)
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng local(seeds[r]);
        runs[r] = kmeans(points, k, local, max_iters);
    }
    std::size_t best = 0;
    std::vector<double> sse;
    for (std::size_t r = 0; r < restarts; ++r) {
        sse.push_back(runs[r].sse);
        if (runs[r].sse < runs[best].sse) best = r;
    }
    KMeansResult out = std::move(runs[best]);
    out.restart_sse = std::move(sse);
    return out;
}

}  // namespace gpdev
