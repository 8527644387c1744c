#include "hilco/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hilco/mmio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hilco {

std::string writeComplexManifest(const std::string& dir, const std::string& name,
                                 const HilbertComplex& cx) {
    fs::create_directories(dir);
    json doc;
    doc["schema_version"] = kManifestSchemaVersion;
    doc["length"] = cx.length();
    json dims = json::array();
    json grams = json::array();
    for (int s = 0; s < cx.slots(); ++s) {
        dims.push_back(cx.space(s).dim());
        if (cx.space(s).identityGram()) {
            grams.push_back(nullptr);
        } else {
            std::string file = name + "_gram" + std::to_string(s) + ".mtx";
            writeMatrixMarketArray((fs::path(dir) / file).string(), cx.space(s).gram());
            grams.push_back(file);
        }
    }
    json maps = json::array();
    for (int k = 0; k < cx.length(); ++k) {
        std::string file = name + "_map" + std::to_string(k) + ".mtx";
        writeMatrixMarketCoordinate((fs::path(dir) / file).string(),
                                    cx.map(k).entries());
        maps.push_back(file);
    }
    doc["dims"] = dims;
    doc["grams"] = grams;
    doc["maps"] = maps;
    doc["tol"] = cx.tol();

    std::string manifestPath = (fs::path(dir) / (name + ".json")).string();
    atomicWriteFile(manifestPath, doc.dump(2) + "\n");
    return manifestPath;
}

HilbertComplex readComplexManifest(const std::string& manifestPath) {
    std::ifstream in(manifestPath);
    if (!in) throw std::runtime_error("cannot open " + manifestPath);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error(manifestPath + ": bad JSON (" + e.what() + ")");
    }
    if (!doc.contains("schema_version") ||
        doc["schema_version"].get<std::string>() != kManifestSchemaVersion)
        throw std::runtime_error(manifestPath + ": unsupported schema_version");
    const fs::path base = fs::path(manifestPath).parent_path();

    const auto& dims = doc.at("dims");
    const int slots = static_cast<int>(dims.size());
    const int length = doc.at("length").get<int>();
    if (length + 1 != slots)
        throw std::runtime_error(manifestPath + ": length and dims disagree");

    std::vector<InnerProductSpace> spaces;
    const auto& grams = doc.at("grams");
    if (static_cast<int>(grams.size()) != slots)
        throw std::runtime_error(manifestPath + ": grams and dims disagree");
    for (int s = 0; s < slots; ++s) {
        const int d = dims[s].get<int>();
        if (d < 0) throw std::runtime_error(manifestPath + ": negative dimension");
        if (grams[s].is_null()) {
            spaces.emplace_back(d);
        } else {
            Matrix g = readMatrixMarket((base / grams[s].get<std::string>()).string());
            if (g.rows() != d || g.cols() != d)
                throw std::runtime_error(manifestPath + ": Gram shape mismatch in slot " +
                                         std::to_string(s));
            spaces.emplace_back(std::move(g));
        }
    }

    std::vector<LinearMap> maps;
    const auto& mapFiles = doc.at("maps");
    if (static_cast<int>(mapFiles.size()) != length)
        throw std::runtime_error(manifestPath + ": maps and length disagree");
    for (int k = 0; k < length; ++k) {
        Matrix e = readMatrixMarket((base / mapFiles[k].get<std::string>()).string());
        if (e.cols() != spaces[k].dim() || e.rows() != spaces[k + 1].dim())
            throw std::runtime_error(manifestPath + ": map shape mismatch at index " +
                                     std::to_string(k));
        maps.emplace_back(spaces[k], spaces[k + 1], std::move(e));
    }

    const double tol = doc.value("tol", kDefaultRankTol);
    return HilbertComplex(std::move(spaces), std::move(maps), tol);
}

}  // namespace hilco
