#include "qpg/conv_io.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

namespace qpg {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

const char* kind_name(GroupoidSpec::Kind k) {
    switch (k) {
    case GroupoidSpec::Kind::Toeplitz: return "toeplitz";
    case GroupoidSpec::Kind::Augmented: return "augmented";
    case GroupoidSpec::Kind::SphereSub: return "sphere";
    case GroupoidSpec::Kind::ProjectiveSub: return "projective";
    case GroupoidSpec::Kind::PodlesSub: return "podles";
    case GroupoidSpec::Kind::NonstandardAmbient: return "nonstandard";
    }
    return "unknown";
}

GroupoidSpec spec_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ParseError("element file: spec is not an object");
    auto need_int = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number_integer())
            throw ParseError(std::string("element file: spec missing integer '") + key + "'");
        return j[key].get<int>();
    };
    std::string kind = j.value("kind", std::string());
    int K = need_int("K");
    int B = need_int("B");
    try {
        if (kind == "toeplitz") return GroupoidSpec::toeplitz(need_int("m"), K, B);
        if (kind == "augmented") return GroupoidSpec::augmented(need_int("p"), need_int("m"), K, B);
        if (kind == "sphere") return GroupoidSpec::sphere_sub(need_int("n"), K, B);
        if (kind == "projective") return GroupoidSpec::projective_sub(need_int("n"), K, B);
        if (kind == "podles") return GroupoidSpec::podles_sub(K, B);
        if (kind == "nonstandard") return GroupoidSpec::nonstandard_ambient(need_int("n"), K, B);
    } catch (const ConstraintError& err) {
        throw ParseError(std::string("element file: invalid spec: ") + err.what());
    }
    throw ParseError("element file: unknown groupoid kind '" + kind + "'");
}

ordered_json spec_to_json(const GroupoidSpec& s) {
    ordered_json j;
    j["kind"] = kind_name(s.kind);
    switch (s.kind) {
    case GroupoidSpec::Kind::Toeplitz:
        j["m"] = s.n;
        break;
    case GroupoidSpec::Kind::Augmented:
        j["p"] = s.p;
        j["m"] = s.n;
        break;
    case GroupoidSpec::Kind::SphereSub:
    case GroupoidSpec::Kind::ProjectiveSub:
    case GroupoidSpec::Kind::NonstandardAmbient:
        j["n"] = s.n;
        break;
    case GroupoidSpec::Kind::PodlesSub:
        break;
    }
    j["K"] = s.K;
    j["B"] = s.B;
    return j;
}

} // namespace

void save_conv(const ConvElement& e, std::ostream& sink) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["spec"] = spec_to_json(e.spec);
    ordered_json terms = ordered_json::array();
    for (const auto& [g, v] : e.terms) {
        ordered_json t;
        t["aux"] = g.aux;
        t["x"] = g.x;
        ordered_json w = ordered_json::array();
        for (Level lv : g.w.c) {
            if (is_inf(lv))
                w.push_back("inf");
            else
                w.push_back(lv);
        }
        t["w"] = std::move(w);
        t["re"] = v.real();
        t["im"] = v.imag();
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    sink << j.dump(1) << '\n';
}

ConvElement load_conv(std::istream& source) {
    ordered_json j;
    try {
        j = ordered_json::parse(source);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("element file parse error: ") + err.what());
    }
    if (!j.is_object() || !j.contains("spec"))
        throw ParseError("element file: missing spec");
    if (j.value("format_version", -1) != kFormatVersion)
        throw ParseError("element file: unsupported format_version");
    ConvElement e{spec_from_json(j["spec"]), {}};
    if (!j.contains("terms") || !j["terms"].is_array())
        throw ParseError("element file: missing terms");
    int no = 0;
    for (const auto& t : j["terms"]) {
        std::string where = "terms[" + std::to_string(no++) + "]";
        GroupoidMorphism g;
        if (!t.contains("aux") || !t["aux"].is_array() || !t.contains("x") || !t["x"].is_array() ||
            !t.contains("w") || !t["w"].is_array())
            throw ParseError("element file: malformed " + where);
        for (const auto& v : t["aux"]) g.aux.push_back(v.get<int>());
        for (const auto& v : t["x"]) g.x.push_back(v.get<int>());
        for (const auto& v : t["w"]) {
            if (v.is_string()) {
                if (v.get<std::string>() != "inf")
                    throw ParseError("element file: bad level sentinel in " + where);
                g.w.c.push_back(kInfLevel);
            } else if (v.is_number_integer()) {
                g.w.c.push_back(v.get<int>());
            } else {
                throw ParseError("element file: bad level in " + where);
            }
        }
        if (!t.contains("re") || !t["re"].is_number() || !t.contains("im") || !t["im"].is_number())
            throw ParseError("element file: missing re/im in " + where);
        if (!member(e.spec, g))
            throw ParseError("element file: non-member morphism in " + where);
        Complex v(t["re"].get<double>(), t["im"].get<double>());
        auto [it, fresh] = e.terms.try_emplace(canonicalize(e.spec, g), v);
        if (!fresh) it->second += v;
    }
    return e;
}

void save_conv_file(const ConvElement& e, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_conv(e, out);
}

ConvElement load_conv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    try {
        return load_conv(in);
    } catch (const ParseError& err) {
        throw ParseError(path + ": " + err.what());
    }
}

} // namespace qpg
