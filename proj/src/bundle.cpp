#include "qpg/bundle.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qpg/laurent_io.hpp"

namespace qpg {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void save_bundle(const std::string& dir,
                 const std::vector<std::pair<std::string, LaurentOperator>>& entries) {
    fs::create_directories(dir);
    ordered_json manifest;
    manifest["format_version"] = 1;
    ordered_json list = ordered_json::array();
    int index = 0;
    for (const auto& [name, op] : entries) {
        std::string file = "op_" + std::to_string(index++) + ".json";
        save_file(op, (fs::path(dir) / file).string());
        ordered_json item;
        item["name"] = name;
        item["file"] = file;
        list.push_back(std::move(item));
    }
    manifest["entries"] = std::move(list);
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw Error("cannot write bundle manifest in '" + dir + "'");
    out << manifest.dump(1) << '\n';
}

std::vector<std::pair<std::string, LaurentOperator>> load_bundle(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw Error("bundle manifest not found in '" + dir + "'");
    ordered_json manifest;
    try {
        manifest = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("bundle manifest parse error: ") + err.what());
    }
    if (!manifest.contains("entries") || !manifest["entries"].is_array())
        throw ParseError("bundle manifest: missing entries");
    std::vector<std::pair<std::string, LaurentOperator>> out;
    for (const auto& item : manifest["entries"]) {
        if (!item.contains("name") || !item.contains("file"))
            throw ParseError("bundle manifest: malformed entry");
        std::string name = item["name"].get<std::string>();
        std::string file = item["file"].get<std::string>();
        fs::path path = fs::path(dir) / file;
        if (!fs::exists(path))
            throw Error("bundle entry '" + name + "': missing file '" + file + "'");
        out.emplace_back(name, load_file(path.string()));
    }
    return out;
}

} // namespace qpg
