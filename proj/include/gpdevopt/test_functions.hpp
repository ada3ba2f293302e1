#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace gpdev {

/// Closed-form simulator stand-in. Inputs arrive in [0,1]^d and are mapped
/// affinely onto the function's native box before evaluation.
struct TestFunction {
    std::string name;
    std::size_t d = 0;
    Eigen::VectorXd native_lower;
    Eigen::VectorXd native_upper;
    std::function<double(const Eigen::VectorXd&)> native;

    [[nodiscard]] Eigen::VectorXd to_native(const Eigen::Ref<const Eigen::VectorXd>& unit) const {
        return native_lower + unit.cwiseProduct(native_upper - native_lower);
    }
    [[nodiscard]] double operator()(const Eigen::Ref<const Eigen::VectorXd>& unit) const {
        return native(to_native(unit));
    }
    /// Row-wise evaluation of unit-cube points.
    [[nodiscard]] Eigen::VectorXd evaluate(const Eigen::MatrixXd& unit_points) const;
};

/// hump, goldstein-price, schwefel, hartmann6, rastrigin10, rosenbrock10, perm12.
TestFunction test_function(const std::string& name);
const std::vector<std::string>& test_function_names();

namespace functions {
double hump(const Eigen::VectorXd& x);
double goldstein_price(const Eigen::VectorXd& x);
double schwefel(const Eigen::VectorXd& x);
double hartmann6(const Eigen::VectorXd& x);
double rastrigin(const Eigen::VectorXd& x);
double rosenbrock(const Eigen::VectorXd& x);
double perm(const Eigen::VectorXd& x);
}  // namespace functions

}  // namespace gpdev
