#pragma once

#include "gpdevopt/fit.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gpdev::cli {

/// Per-column min-max map from raw inputs onto [0,1].
struct InputScaling {
    Eigen::VectorXd min;
    Eigen::VectorXd max;

    static InputScaling fit(const Eigen::MatrixXd& raw);
    [[nodiscard]] Eigen::VectorXd to_unit(const Eigen::Ref<const Eigen::VectorXd>& raw) const;
    [[nodiscard]] Eigen::VectorXd to_raw(const Eigen::Ref<const Eigen::VectorXd>& unit) const;
};

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to rebuild a fitted emulator without the training CSV.
struct ModelFile {
    int version = kModelFormatVersion;
    std::string strategy;
    double p = 2.0;
    double a = 25.0;
    double box_scale = 1.0;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    InputScaling scaling;
    Eigen::MatrixXd design;  ///< scaled to [0,1]
    Eigen::VectorXd y;
    Eigen::VectorXd beta;
    double mu_hat = 0.0;
    double sigma2_hat = 0.0;
    double delta = 0.0;
    double deviance = 0.0;
    std::int64_t fe_count = 0;
};

nlohmann::ordered_json to_json(const ModelFile& model);
ModelFile model_from_json(const nlohmann::json& j);

ModelFile load_model(const std::string& path);
void save_model(const ModelFile& model, const std::string& path);

/// Refactors R at the stored beta.
FittedGP rebuild(const ModelFile& model);

}  // namespace gpdev::cli
