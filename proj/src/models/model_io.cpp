#include <fstream>

#include <json.hpp>

#include "physio/ingest.hpp"
#include "physio/models.hpp"

namespace physio {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    for (const auto& row : j) m.push_row(row.get<std::vector<double>>());
    return m;
}

json labels_to_json(const std::vector<ClassLabel>& labels) {
    json out = json::array();
    for (ClassLabel l : labels) out.push_back(label_name(l));
    return out;
}

std::vector<ClassLabel> labels_from_json(const json& j) {
    std::vector<ClassLabel> out;
    for (const auto& name : j) out.push_back(label_from_name(name.get<std::string>()));
    return out;
}

json kernel_to_json(const KernelSpec& k) {
    return {{"type", k.type == KernelSpec::Type::Linear ? "linear" : "rbf"},
            {"gamma", k.gamma}};
}

KernelSpec kernel_from_json(const json& j) {
    KernelSpec k;
    k.type = j.at("type").get<std::string>() == "linear" ? KernelSpec::Type::Linear
                                                         : KernelSpec::Type::Rbf;
    k.gamma = j.at("gamma").get<double>();
    return k;
}

json gnb_to_json(const GnbModel& m) {
    return {{"classes", labels_to_json(m.classes)},
            {"log_prior", m.log_prior},
            {"mean", m.mean},
            {"var", m.var}};
}

GnbModel gnb_from_json(const json& j) {
    GnbModel m;
    m.classes = labels_from_json(j.at("classes"));
    m.log_prior = j.at("log_prior").get<std::vector<double>>();
    m.mean = j.at("mean").get<std::vector<std::vector<double>>>();
    m.var = j.at("var").get<std::vector<std::vector<double>>>();
    return m;
}

json svm_binary_to_json(const SvmBinaryModel& m) {
    return {{"support_vectors", matrix_to_json(m.support_vectors)},
            {"coef", m.coef},
            {"alpha", m.alpha},
            {"sv_y", m.sv_y},
            {"bias", m.bias},
            {"kernel", kernel_to_json(m.kernel)},
            {"c", m.c}};
}

SvmBinaryModel svm_binary_from_json(const json& j) {
    SvmBinaryModel m;
    m.support_vectors = matrix_from_json(j.at("support_vectors"));
    m.coef = j.at("coef").get<std::vector<double>>();
    m.alpha = j.at("alpha").get<std::vector<double>>();
    m.sv_y = j.at("sv_y").get<std::vector<int>>();
    m.bias = j.at("bias").get<double>();
    m.kernel = kernel_from_json(j.at("kernel"));
    m.c = j.at("c").get<double>();
    return m;
}

json svm_to_json(const SvmModel& m) {
    json pairs = json::array();
    for (const auto& p : m.pairwise) pairs.push_back(svm_binary_to_json(p));
    return {{"classes", labels_to_json(m.classes)},
            {"pairwise", pairs},
            {"c", m.c},
            {"kernel", kernel_to_json(m.kernel)}};
}

SvmModel svm_from_json(const json& j) {
    SvmModel m;
    m.classes = labels_from_json(j.at("classes"));
    for (const auto& p : j.at("pairwise")) m.pairwise.push_back(svm_binary_from_json(p));
    m.c = j.at("c").get<double>();
    m.kernel = kernel_from_json(j.at("kernel"));
    return m;
}

json tree_to_json(const GbtTree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"weight", n.weight}});
    }
    return nodes;
}

GbtTree tree_from_json(const json& j) {
    GbtTree t;
    for (const auto& n : j) {
        GbtNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.weight = n.at("weight").get<double>();
        t.nodes.push_back(node);
    }
    return t;
}

json gbt_to_json(const GbtModel& m) {
    json rounds = json::array();
    for (const auto& round : m.rounds) {
        json heads = json::array();
        for (const auto& tree : round) heads.push_back(tree_to_json(tree));
        rounds.push_back(heads);
    }
    return {{"classes", labels_to_json(m.classes)},
            {"params",
             {{"n_rounds", m.params.n_rounds},
              {"learning_rate", m.params.learning_rate},
              {"max_depth", m.params.max_depth},
              {"lambda", m.params.lambda},
              {"min_child_weight", m.params.min_child_weight}}},
            {"rounds", rounds},
            {"train_logloss", m.train_logloss}};
}

GbtModel gbt_from_json(const json& j) {
    GbtModel m;
    m.classes = labels_from_json(j.at("classes"));
    const auto& p = j.at("params");
    m.params.n_rounds = p.at("n_rounds").get<int>();
    m.params.learning_rate = p.at("learning_rate").get<double>();
    m.params.max_depth = p.at("max_depth").get<int>();
    m.params.lambda = p.at("lambda").get<double>();
    m.params.min_child_weight = p.at("min_child_weight").get<double>();
    for (const auto& round : j.at("rounds")) {
        std::vector<GbtTree> heads;
        for (const auto& tree : round) heads.push_back(tree_from_json(tree));
        m.rounds.push_back(std::move(heads));
    }
    m.train_logloss = j.at("train_logloss").get<std::vector<double>>();
    return m;
}

constexpr int kFormatVersion = 1;

}  // namespace

std::string model_to_text(const ModelArtifact& model) {
    json j;
    j["format"] = "physioclass-model";
    j["version"] = kFormatVersion;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GnbModel>) {
                j["kind"] = "gnb";
                j["model"] = gnb_to_json(m);
            } else if constexpr (std::is_same_v<T, SvmModel>) {
                j["kind"] = "svm";
                j["model"] = svm_to_json(m);
            } else {
                j["kind"] = "gbt";
                j["model"] = gbt_to_json(m);
            }
        },
        model);
    return j.dump(2) + "\n";
}

ModelArtifact model_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadModelFile, std::string("not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "physioclass-model" ||
            j.at("version").get<int>() != kFormatVersion) {
            throw Error(ErrorCode::BadModelFile, "unknown model format or version");
        }
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "gnb") return gnb_from_json(j.at("model"));
        if (kind == "svm") return svm_from_json(j.at("model"));
        if (kind == "gbt") return gbt_from_json(j.at("model"));
        throw Error(ErrorCode::BadModelFile, "unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadModelFile, std::string("malformed model file: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelArtifact& model) {
    save_text(path, model_to_text(model));
}

ModelArtifact load_model(const std::filesystem::path& path) {
    return model_from_text(load_text(path));
}

}  // namespace physio
