#include "model_io.hpp"

#include "gpdevopt/errors.hpp"

#include <fstream>

namespace gpdev::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> as_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

InputScaling InputScaling::fit(const Eigen::MatrixXd& raw) {
    InputScaling s;
    s.min = raw.colwise().minCoeff().transpose();
    s.max = raw.colwise().maxCoeff().transpose();
    return s;
}

Eigen::VectorXd InputScaling::to_unit(const Eigen::Ref<const Eigen::VectorXd>& raw) const {
    Eigen::VectorXd out(raw.size());
    for (Eigen::Index k = 0; k < raw.size(); ++k) {
        const double span = max[k] - min[k];
        out[k] = span > 0.0 ? (raw[k] - min[k]) / span : 0.0;
    }
    return out;
}

Eigen::VectorXd InputScaling::to_raw(const Eigen::Ref<const Eigen::VectorXd>& unit) const {
    return min + unit.cwiseProduct(max - min);
}

ordered_json to_json(const ModelFile& m) {
    ordered_json j;
    j["format"] = "gpdevopt-model";
    j["version"] = m.version;
    j["strategy"] = m.strategy;
    j["p"] = m.p;
    j["a"] = m.a;
    j["box_scale"] = m.box_scale;
    j["seed"] = m.seed;
    j["inputs"] = m.inputs;
    j["scaling"] = {{"min", as_vector(m.scaling.min)}, {"max", as_vector(m.scaling.max)}};
    j["beta"] = as_vector(m.beta);
    j["mu_hat"] = m.mu_hat;
    j["sigma2_hat"] = m.sigma2_hat;
    j["delta"] = m.delta;
    j["deviance"] = m.deviance;
    j["fe_count"] = m.fe_count;
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.design.rows(); ++i)
        rows.push_back(as_vector(m.design.row(i).transpose()));
    j["design"] = std::move(rows);
    j["y"] = as_vector(m.y);
    return j;
}

ModelFile model_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "gpdevopt-model")
            throw InvalidInput("not a gpdevopt model file");
        ModelFile m;
        m.version = j.at("version").get<int>();
        if (m.version != kModelFormatVersion)
            throw InvalidInput("unsupported model file version " + std::to_string(m.version));
        m.strategy = j.at("strategy").get<std::string>();
        m.p = j.at("p").get<double>();
        m.a = j.at("a").get<double>();
        m.box_scale = j.at("box_scale").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.inputs = j.at("inputs").get<std::vector<std::string>>();
        m.scaling.min = to_eigen(j.at("scaling").at("min").get<std::vector<double>>());
        m.scaling.max = to_eigen(j.at("scaling").at("max").get<std::vector<double>>());
        m.beta = to_eigen(j.at("beta").get<std::vector<double>>());
        m.mu_hat = j.at("mu_hat").get<double>();
        m.sigma2_hat = j.at("sigma2_hat").get<double>();
        m.delta = j.at("delta").get<double>();
        m.deviance = j.at("deviance").get<double>();
        m.fe_count = j.at("fe_count").get<std::int64_t>();
        const auto rows = j.at("design").get<std::vector<std::vector<double>>>();
        const auto d = static_cast<Eigen::Index>(m.inputs.size());
        m.design.resize(static_cast<Eigen::Index>(rows.size()), d);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != d)
                throw InvalidInput("design row " + std::to_string(i) + " has wrong length");
            m.design.row(static_cast<Eigen::Index>(i)) = to_eigen(rows[i]).transpose();
        }
        m.y = to_eigen(j.at("y").get<std::vector<double>>());
        if (m.beta.size() != d || m.scaling.min.size() != d || m.scaling.max.size() != d)
            throw InvalidInput("model file dimensions are inconsistent");
        return m;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed model file: ") + e.what());
    }
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open model file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInput("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

void save_model(const ModelFile& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write model file '" + path + "'");
    out << to_json(model).dump(2) << '\n';
}

FittedGP rebuild(const ModelFile& model) {
    DevianceOptions opts;
    opts.p = model.p;
    opts.a = model.a;
    const DevianceFunction deviance(DesignSet(model.design, model.y), opts);
    return FittedGP(deviance, model.beta, model.fe_count);
}

}  // namespace gpdev::cli
