#include "invnet/model_io.hpp"

#include "invnet/csv.hpp"
#include "invnet/error.hpp"
#include "json.hpp"

namespace invnet {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", m.values()}};
}

Matrix matrix_from_json(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("values").get<std::vector<double>>());
}

json subnet_to_json(const Subnet& s) {
    return json{{"w1", matrix_to_json(s.w1)},
                {"b1", s.b1},
                {"w2", matrix_to_json(s.w2)},
                {"b2", s.b2}};
}

Subnet subnet_from_json(const json& j) {
    return Subnet{matrix_from_json(j.at("w1")), j.at("b1").get<Vector>(),
                  matrix_from_json(j.at("w2")), j.at("b2").get<Vector>()};
}

}  // namespace

std::string model_to_json(const InvNetModel& model, const std::string& provenance) {
    model.validate();
    json blocks = json::array();
    for (const auto& block : model.blocks) {
        blocks.push_back(json{{"f", subnet_to_json(block.f)}, {"g", subnet_to_json(block.g)}});
    }
    json doc;
    doc["format"] = "invnet-model";
    doc["format_version"] = kModelFormatVersion;
    doc["provenance"] = provenance;
    doc["input_dim"] = model.input_dim;
    doc["padded"] = model.padded;
    doc["hidden_dim"] = model.hidden_dim();
    doc["blocks"] = std::move(blocks);
    doc["w"] = model.w;
    doc["b"] = model.b;
    return doc.dump(1) + "\n";
}

InvNetModel model_from_json(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": malformed model file: " + e.what());
    }
    try {
        if (doc.value("format", std::string()) != "invnet-model") {
            throw InputError(source + ": not an invnet model file");
        }
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw InputError(source + ": unsupported model format_version " +
                             std::to_string(version));
        }
        InvNetModel model;
        model.input_dim = doc.at("input_dim").get<std::size_t>();
        model.padded = doc.at("padded").get<bool>();
        for (const auto& b : doc.at("blocks")) {
            model.blocks.push_back({subnet_from_json(b.at("f")), subnet_from_json(b.at("g"))});
        }
        model.w = doc.at("w").get<Vector>();
        model.b = doc.at("b").get<double>();
        model.validate();
        if (model.hidden_dim() != doc.at("hidden_dim").get<std::size_t>()) {
            throw InputError(source + ": hidden_dim does not match the block shapes");
        }
        return model;
    } catch (const json::exception& e) {
        throw InputError(source + ": malformed model file: " + e.what());
    } catch (const DimensionError& e) {
        throw InputError(source + ": " + e.what());
    }
}

void save_model(const std::filesystem::path& path, const InvNetModel& model,
                const std::string& provenance) {
    write_text_file(path, model_to_json(model, provenance));
}

InvNetModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_text_file(path), path.string());
}

}  // namespace invnet
