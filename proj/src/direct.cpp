#include "gpdevopt/direct.hpp"

#include "gpdevopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace gpdev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rect {
    Eigen::VectorXd center;  // unit cube
    std::vector<int> levels;  // side length along k is 3^-levels[k]
    double value = kInf;
    double size = 0.0;
};

double half_diagonal(const std::vector<int>& levels) {
    std::vector<int> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    double s = 0.0;
    for (const int l : sorted) s += std::pow(3.0, -2.0 * l);
    return 0.5 * std::sqrt(s);
}

}  // namespace

std::vector<std::size_t> potentially_optimal(std::span<const double> sizes,
                                             std::span<const double> values, double epsilon) {
    if (sizes.size() != values.size()) throw InvalidInput("sizes and values differ in length");
    if (sizes.empty()) return {};

    // +inf centres rank just above the worst finite value
    double fmin = kInf;
    double fmax = -kInf;
    for (const double v : values) {
        if (std::isfinite(v)) {
            fmin = std::min(fmin, v);
            fmax = std::max(fmax, v);
        }
    }
    const double penalty = std::isfinite(fmax) ? fmax + (fmax - fmin) + 1.0 : 0.0;
    if (!std::isfinite(fmin)) fmin = penalty;
    auto val = [&](std::size_t i) { return std::isfinite(values[i]) ? values[i] : penalty; };

    // group minimum per distinct size, ascending size
    std::map<double, std::size_t> group;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        auto it = group.find(sizes[i]);
        if (it == group.end()) {
            group.emplace(sizes[i], i);
        } else if (val(i) < val(it->second)) {
            it->second = i;
        }
    }
    std::vector<std::pair<double, std::size_t>> mins(group.begin(), group.end());

    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < mins.size(); ++g) {
        const double sj = mins[g].first;
        const double fj = val(mins[g].second);
        double low_k = -kInf;
        double up_k = kInf;
        for (std::size_t h = 0; h < g; ++h)
            low_k = std::max(low_k, (fj - val(mins[h].second)) / (sj - mins[h].first));
        for (std::size_t h = g + 1; h < mins.size(); ++h)
            up_k = std::min(up_k, (val(mins[h].second) - fj) / (mins[h].first - sj));
        if (!(up_k > 0.0) || low_k > up_k) continue;
        if (std::isfinite(up_k)) {
            if (fmin != 0.0) {
                if ((fmin - fj) / std::abs(fmin) + sj * up_k / std::abs(fmin) < epsilon) continue;
            } else if (fj > sj * up_k) {
                continue;
            }
        }
        out.push_back(mins[g].second);
    }
    return out;
}

OptReport direct_search(const Objective& objective, const SearchBox& box,
                        const DirectOptions& options) {
    if (options.fe_budget < 1) throw InvalidInput("DIRECT needs a budget of at least one FE");
    const auto d = static_cast<Eigen::Index>(box.dim());
    EvaluationLog log(objective, options.fe_budget);
    auto eval = [&](const Eigen::VectorXd& unit) { return log(box.from_unit(unit)); };

    std::vector<Rect> rects;
    try {
        Rect root;
        root.center = Eigen::VectorXd::Constant(d, 0.5);
        root.levels.assign(static_cast<std::size_t>(d), 0);
        root.size = half_diagonal(root.levels);
        root.value = eval(root.center);
        rects.push_back(std::move(root));

        for (;;) {
            std::vector<double> sizes(rects.size());
            std::vector<double> values(rects.size());
            for (std::size_t i = 0; i < rects.size(); ++i) {
                sizes[i] = rects[i].size;
                values[i] = rects[i].value;
            }
            std::vector<std::size_t> selected = potentially_optimal(sizes, values, options.epsilon);
            std::sort(selected.begin(), selected.end(), [&](std::size_t a, std::size_t b) {
                if (rects[a].size != rects[b].size) return rects[a].size > rects[b].size;
                return a < b;
            });

            for (const std::size_t idx : selected) {
                const Rect& parent = rects[idx];
                const auto longest = static_cast<std::size_t>(
                    std::min_element(parent.levels.begin(), parent.levels.end()) -
                    parent.levels.begin());
                const int level = parent.levels[longest] + 1;
                const double offset = std::pow(3.0, -level);
                const auto k = static_cast<Eigen::Index>(longest);

                Rect right;
                right.center = parent.center;
                right.center[k] += offset;
                right.value = eval(right.center);
                Rect left;
                left.center = parent.center;
                left.center[k] -= offset;
                left.value = eval(left.center);

                right.levels = parent.levels;
                right.levels[longest] = level;
                right.size = half_diagonal(right.levels);
                left.levels = right.levels;
                left.size = right.size;
                rects[idx].levels = right.levels;
                rects[idx].size = right.size;
                rects.push_back(std::move(left));
                rects.push_back(std::move(right));
            }
            if (log.exhausted()) break;
        }
    } catch (const BudgetExhausted&) {
    }
    return log.report();
}

}  // namespace gpdev
