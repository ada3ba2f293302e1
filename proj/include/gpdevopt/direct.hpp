#pragma once

#include "gpdevopt/opt_report.hpp"
#include "gpdevopt/search_box.hpp"

#include <span>
#include <vector>

namespace gpdev {

struct DirectOptions {
    std::int64_t fe_budget = 0;
    double epsilon = 1e-4;  ///< required relative improvement over the incumbent
};

/// DIRECT (dividing rectangles) over a box.
///
/// Rectangles live in the unit cube. Each iteration selects the potentially
/// optimal rectangles and trisects each along its longest side (lowest index
/// on ties), sampling the two new centres. Evaluation stops as soon as the
/// budget is spent, even mid-iteration, so fe_used == min(budget, needed).
OptReport direct_search(const Objective& objective, const SearchBox& box,
                        const DirectOptions& options);

inline OptReport direct_search(const Objective& objective, const SearchBox& box,
                               std::int64_t fe_budget) {
    return direct_search(objective, box, DirectOptions{fe_budget, 1e-4});
}

/// Indices of potentially optimal rectangles given each rectangle's size
/// measure and centre value (+inf allowed). At most one rectangle (the
/// lowest-valued, lowest index on ties) is chosen per distinct size.
std::vector<std::size_t> potentially_optimal(std::span<const double> sizes,
                                             std::span<const double> values, double epsilon);

}  // namespace gpdev
