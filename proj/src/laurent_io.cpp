#include "qpg/laurent_io.hpp"

#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

namespace qpg {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

ordered_json entries_to_json(const std::vector<OperatorEntry>& entries) {
    // group by exponent, preserving the sorted entry order
    ordered_json terms = ordered_json::array();
    size_t i = 0;
    while (i < entries.size()) {
        const ExponentVec& e = entries[i].exponent;
        ordered_json term;
        term["exponent"] = e;
        ordered_json list = ordered_json::array();
        while (i < entries.size() && entries[i].exponent == e) {
            ordered_json ent;
            ent["row"] = entries[i].row;
            ent["col"] = entries[i].col;
            ent["re"] = entries[i].value.real();
            ent["im"] = entries[i].value.imag();
            list.push_back(std::move(ent));
            ++i;
        }
        term["entries"] = std::move(list);
        terms.push_back(std::move(term));
    }
    return terms;
}

std::vector<int> get_int_vector(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_array())
        throw ParseError("missing or non-array field '" + std::string(key) + "' in " + where);
    std::vector<int> v;
    for (const auto& x : j[key]) {
        if (!x.is_number_integer()) throw ParseError("non-integer element in '" + std::string(key) + "' in " + where);
        v.push_back(x.get<int>());
    }
    return v;
}

} // namespace

void save(const LaurentOperator& op, std::ostream& sink) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["torus_rank"] = op.trunc().torus_rank;
    j["fock_dims"] = op.trunc().fock_dims;
    std::vector<int> hi(op.trunc().fock_dims.size());
    for (size_t s = 0; s < hi.size(); ++s) hi[s] = op.trunc().fock_dims[s] - 1;
    j["terms"] = entries_to_json(entries_within(op, hi));
    sink << j.dump(1) << '\n';
}

LaurentOperator load(std::istream& source) {
    ordered_json j;
    try {
        j = ordered_json::parse(source);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("operator file parse error: ") + err.what());
    }
    if (!j.is_object()) throw ParseError("operator file: top level is not an object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        throw ParseError("operator file: missing format_version");
    if (j["format_version"].get<int>() != kFormatVersion)
        throw ParseError("operator file: unsupported format_version");
    if (!j.contains("torus_rank") || !j["torus_rank"].is_number_integer())
        throw ParseError("operator file: missing torus_rank");
    int rank = j["torus_rank"].get<int>();
    std::vector<int> dims = get_int_vector(j, "fock_dims", "header");
    TruncationSpec trunc;
    try {
        trunc = TruncationSpec(dims, rank);
    } catch (const Error& err) {
        throw ParseError(std::string("operator file: invalid header: ") + err.what());
    }
    const int nslots = trunc.factors();

    std::map<ExponentVec, FockOperator> terms;
    if (!j.contains("terms") || !j["terms"].is_array())
        throw ParseError("operator file: missing terms array");
    int term_no = 0;
    for (const auto& term : j["terms"]) {
        std::string where = "terms[" + std::to_string(term_no++) + "]";
        ExponentVec e = get_int_vector(term, "exponent", where);
        if (static_cast<int>(e.size()) != rank)
            throw ParseError("operator file: exponent length mismatch in " + where);
        if (!term.contains("entries") || !term["entries"].is_array())
            throw ParseError("operator file: missing entries in " + where);

        // Reassemble product terms: entries sharing a band profile and the
        // trailing column indices become one slot-0 weight vector.
        std::map<std::vector<int>, ProductTerm> groups; // key: bands + cols[1..]
        std::vector<ProductTerm> scalars;
        int entry_no = 0;
        for (const auto& ent : term["entries"]) {
            std::string ewhere = where + ".entries[" + std::to_string(entry_no++) + "]";
            std::vector<int> row = get_int_vector(ent, "row", ewhere);
            std::vector<int> col = get_int_vector(ent, "col", ewhere);
            if (static_cast<int>(row.size()) != nslots || static_cast<int>(col.size()) != nslots)
                throw ParseError("operator file: index length does not match fock_dims in " + ewhere);
            for (int s = 0; s < nslots; ++s)
                if (row[s] < 0 || row[s] >= dims[s] || col[s] < 0 || col[s] >= dims[s])
                    throw ParseError("operator file: index out of range in " + ewhere);
            if (!ent.contains("re") || !ent["re"].is_number() || !ent.contains("im") ||
                !ent["im"].is_number())
                throw ParseError("operator file: missing re/im in " + ewhere);
            Complex v(ent["re"].get<double>(), ent["im"].get<double>());

            if (nslots == 0) {
                ProductTerm t;
                t.coeff = v;
                scalars.push_back(std::move(t));
                continue;
            }
            std::vector<int> key;
            key.reserve(2 * nslots);
            for (int s = 0; s < nslots; ++s) key.push_back(row[s] - col[s]);
            for (int s = 1; s < nslots; ++s) key.push_back(col[s]);
            auto it = groups.find(key);
            if (it == groups.end()) {
                ProductTerm t;
                t.coeff = Complex(1.0, 0.0);
                t.factors.resize(nslots);
                for (int s = 0; s < nslots; ++s) {
                    t.factors[s].band = row[s] - col[s];
                    t.factors[s].w.assign(dims[s], Complex(0.0, 0.0));
                    if (s > 0) t.factors[s].w[col[s]] = Complex(1.0, 0.0);
                }
                it = groups.emplace(std::move(key), std::move(t)).first;
            }
            it->second.factors[0].w[col[0]] += v;
        }
        FockOperator f;
        for (auto& [key, t] : groups) f.terms.push_back(std::move(t));
        for (auto& t : scalars) f.terms.push_back(std::move(t));
        if (!f.terms.empty()) terms.emplace(std::move(e), std::move(f));
    }
    return LaurentOperator::from_terms(std::move(trunc), std::move(terms));
}

void save_file(const LaurentOperator& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save(op, out);
}

LaurentOperator load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    try {
        return load(in);
    } catch (const ParseError& err) {
        throw ParseError(path + ": " + err.what());
    }
}

} // namespace qpg
