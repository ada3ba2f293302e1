#include "helpers.hpp"

#include "gpdevopt/kernels.hpp"

#include <doctest.h>
#include <omp.h>

using namespace gpdev;

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels reproduce the serial reference bit for bit") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
    Rng rng(31);
    for (const Eigen::Index n : {5, 64, 300}) {
        for (const Eigen::Index d : {1, 3, 6}) {
            const Eigen::MatrixXd x = random_lhd(static_cast<std::size_t>(n), static_cast<std::size_t>(d), rng);
            const Eigen::VectorXd beta = Eigen::VectorXd::LinSpaced(d, -1.0, 1.0);
            for (const double p : {2.0, 1.99}) {
                const DistanceCache cache(x, Eigen::VectorXd::Constant(d, p));
                MatrixR serial;
                MatrixR parallel;
                kernels::correlation_serial(cache, beta, serial);
                kernels::correlation_parallel(cache, beta, parallel);
                CHECK(serial == parallel);

                const Eigen::MatrixXd pts = random_lhd(200, static_cast<std::size_t>(d), rng);
                const CorrelationSpec spec = CorrelationSpec::uniform(beta, p);
                MatrixR cs;
                MatrixR cp;
                kernels::cross_correlation_serial(x, pts, spec, cs);
                kernels::cross_correlation_parallel(x, pts, spec, cp);
                CHECK(cs == cp);
            }
            CHECK(kernels::min_pairwise_distance_serial(x) == kernels::min_pairwise_distance_parallel(x));
        }
    }
    omp_set_num_threads(saved);
}

TEST_CASE("minimum pairwise distance") {
    Eigen::MatrixXd x(3, 2);
    x << 0, 0, 3, 4, 0, 1;
    CHECK(kernels::min_pairwise_distance_serial(x) == 1.0);
    CHECK(std::isinf(kernels::min_pairwise_distance_serial(Eigen::MatrixXd::Zero(1, 2))));
}

TEST_CASE("powered gap") {
    CHECK(kernels::powered_gap(0.25, 0.75, 2.0) == 0.25L);
    CHECK(kernels::powered_gap(0.75, 0.25, 2.0) == 0.25L);
    CHECK(static_cast<double>(kernels::powered_gap(0.0, 0.5, 1.0)) == 0.5);
    CHECK(static_cast<double>(kernels::powered_gap(0.0, 0.5, 1.99)) == doctest::Approx(std::pow(0.5, 1.99)));
    CHECK(kernels::powered_gap(0.3, 0.3, 1.99) == 0.0L);
}

}
