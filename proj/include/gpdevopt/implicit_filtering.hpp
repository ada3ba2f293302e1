#pragma once

#include "gpdevopt/opt_report.hpp"
#include "gpdevopt/search_box.hpp"

#include <optional>
#include <vector>

namespace gpdev {

struct IfOptions {
    SearchBox box;
    /// Stencil scales h, strictly decreasing in (0,1). Empty means 2^-1 .. 2^-7.
    std::vector<double> scales;
    std::optional<std::int64_t> max_fe;
    /// Step halvings tried on the model step before it is discarded.
    int max_backtracks = 3;
    /// Stencil phases allowed at one scale before it is forced to advance.
    int max_phases_per_scale = 200;

    [[nodiscard]] std::vector<double> effective_scales() const;
    void validate() const;
};

/// Box-constrained Implicit Filtering.
///
/// Each phase evaluates the 2d-point coordinate stencil x +/- h (U_j - L_j) e_j
/// (clamped to the box), fits an affine model by least squares to every point
/// sampled at the current scale and tries a projected quasi-Newton step on it.
/// The scale advances only when no stencil point beats the incumbent.
///
/// The object keeps its state between run() calls so a capped run can later
/// be continued to completion.
class ImplicitFilter {
public:
    ImplicitFilter(const Objective& objective, const Eigen::VectorXd& x0, IfOptions options);

    /// Runs until the scales are exhausted or the total evaluation count reaches
    /// `total_cap` (falls back to options.max_fe when empty).
    void run(std::optional<std::int64_t> total_cap = std::nullopt);

    [[nodiscard]] bool finished() const { return scale_index_ >= scales_.size(); }
    [[nodiscard]] double value() const { return fx_; }
    [[nodiscard]] std::int64_t fe_used() const { return log_.calls(); }
    [[nodiscard]] OptReport report() const;

private:
    struct Sample {
        Eigen::VectorXd x;
        double f;
    };

    void phase();
    void next_scale();
    [[nodiscard]] std::optional<Eigen::VectorXd> model_gradient() const;

    const Objective* objective_;
    IfOptions options_;
    std::vector<double> scales_;
    EvaluationLog log_;
    Eigen::VectorXd x_;
    double fx_ = 0.0;
    bool started_ = false;
    std::size_t scale_index_ = 0;
    int phases_at_scale_ = 0;
    std::vector<Sample> samples_;  // everything evaluated at the current scale
    Eigen::MatrixXd h_inv_;
    bool h_scaled_ = false;
    std::optional<Eigen::VectorXd> prev_x_;
    std::optional<Eigen::VectorXd> prev_g_;
    std::vector<std::string> warnings_;
};

OptReport implicit_filtering(const Objective& objective, const Eigen::VectorXd& x0,
                             const IfOptions& options);

}  // namespace gpdev
