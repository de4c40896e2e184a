#include "gspec/kernel_io.hpp"

#include <fstream>
#include <optional>
#include <vector>

#include "gspec/error.hpp"

namespace gspec {

namespace {

using nlohmann::json;

std::vector<SpectralComponent> parse_components(const json& doc, const char* key) {
    std::vector<SpectralComponent> out;
    if (!doc.contains(key)) {
        return out;
    }
    const json& list = doc.at(key);
    if (!list.is_array()) {
        throw ParseError(std::string("'") + key + "' must be an array");
    }
    for (const json& item : list) {
        if (!item.is_object() || !item.contains("eigenvalue") || !item.at("eigenvalue").is_number()) {
            throw ParseError(std::string("every entry of '") + key + "' needs a numeric 'eigenvalue'");
        }
        const std::string basis = item.value("basis", std::string("shifted-legendre"));
        if (basis != "shifted-legendre") {
            throw ParseError("unsupported basis '" + basis + "' (only shifted-legendre can be read from files)");
        }
        if (!item.contains("degree") || !item.at("degree").is_number_integer()) {
            throw ParseError("shifted-legendre components need an integer 'degree'");
        }
        out.push_back({item.at("eigenvalue").get<double>(),
                       BasisFunction::shifted_legendre(item.at("degree").get<int>())});
    }
    return out;
}

std::optional<double> optional_number(const json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) {
        return std::nullopt;
    }
    if (!doc.at(key).is_number()) {
        throw ParseError(std::string("'") + key + "' must be a number");
    }
    return doc.at(key).get<double>();
}

json components_to_json(const std::vector<SpectralComponent>& comps) {
    json out = json::array();
    for (const auto& c : comps) {
        json item{{"eigenvalue", c.eigenvalue}};
        if (c.basis.is_polynomial()) {
            item["basis"] = "shifted-legendre";
            item["degree"] = c.basis.degree();
        } else {
            item["basis"] = "tabulated-callable";
            item["label"] = c.basis.label();
        }
        out.push_back(item);
    }
    return out;
}

}  // namespace

KernelDefinition kernel_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ParseError("kernel definition must be a JSON object");
    }
    if (!doc.contains("components")) {
        throw ParseError("kernel definition needs 'components'");
    }
    auto positive = parse_components(doc, "components");
    auto negative = parse_components(doc, "negative_components");
    const bool graphon = doc.value("graphon", false);
    std::string name = doc.value("name", std::string("custom"));
    return {SpectralKernel(std::move(positive), std::move(negative), optional_number(doc, "lipschitz_bound"),
                           optional_number(doc, "sup_bound"), std::move(name)),
            graphon};
}

KernelDefinition load_kernel_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open kernel file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("malformed kernel file " + path.string() + ": " + e.what());
    }
    return kernel_from_json(doc);
}

json kernel_to_json(const SpectralKernel& kernel, bool graphon) {
    return json{{"name", kernel.name()},
                {"components", components_to_json(kernel.positive())},
                {"negative_components", components_to_json(kernel.negative())},
                {"sup_bound", kernel.sup_bound()},
                {"lipschitz_bound", kernel.lipschitz_bound()},
                {"graphon", graphon}};
}

PaperKernel parse_paper_kernel(std::string_view name) {
    if (name == "W1") return PaperKernel::W1;
    if (name == "W2") return PaperKernel::W2;
    throw ParseError("unknown built-in kernel '" + std::string(name) + "' (expected W1 or W2)");
}

}  // namespace gspec
