#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gpdev {

/// Objective over beta. May return +inf; must be safe to call concurrently
/// when used by the parallel multistart drivers.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct TracePoint {
    std::int64_t fe = 0;  ///< cumulative evaluations when this value was reached
    double best_value = std::numeric_limits<double>::infinity();
};

struct OptReport {
    Eigen::VectorXd beta_star;
    double value = std::numeric_limits<double>::infinity();
    std::int64_t fe_used = 0;
    std::vector<TracePoint> trace;
    std::vector<std::string> warnings;
};

/// Thrown by EvaluationLog when the next call would exceed the budget.
struct BudgetExhausted {};

/// Counts objective calls, enforces an optional budget and remembers the best
/// point seen. Every optimizer routes its evaluations through one of these so
/// that fe_used is exactly the number of objective invocations.
class EvaluationLog {
public:
    EvaluationLog(const Objective& objective, std::optional<std::int64_t> budget)
        : objective_(&objective), budget_(budget) {}

    double operator()(const Eigen::VectorXd& x) {
        if (budget_ && calls_ >= *budget_) throw BudgetExhausted{};
        const double v = (*objective_)(x);
        ++calls_;
        if (v < best_value_ || best_.size() == 0) {
            if (v < best_value_) {
                best_value_ = v;
                trace_.push_back({calls_, v});
            }
            best_ = x;
        }
        return v;
    }

    [[nodiscard]] std::int64_t calls() const { return calls_; }
    [[nodiscard]] bool exhausted() const { return budget_ && calls_ >= *budget_; }
    [[nodiscard]] std::optional<std::int64_t> remaining() const {
        if (!budget_) return std::nullopt;
        return *budget_ - calls_;
    }
    void set_budget(std::optional<std::int64_t> budget) { budget_ = budget; }

    [[nodiscard]] OptReport report() const {
        OptReport out;
        out.beta_star = best_;
        out.value = best_value_;
        out.fe_used = calls_;
        out.trace = trace_;
        if (out.trace.empty() || out.trace.back().fe != calls_)
            out.trace.push_back({calls_, best_value_});
        return out;
    }

private:
    const Objective* objective_;
    std::optional<std::int64_t> budget_;
    std::int64_t calls_ = 0;
    Eigen::VectorXd best_;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<TracePoint> trace_;
};

}  // namespace gpdev
