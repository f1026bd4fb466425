#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "qpg/bundle.hpp"
#include "qpg/laurent_io.hpp"
#include "qpg/qgroup.hpp"
#include "test_oracles.hpp"

using namespace qpg;

namespace {

bool entries_identical(const LaurentOperator& a, const LaurentOperator& b) {
    std::vector<int> hi(a.trunc().fock_dims.size());
    for (size_t i = 0; i < hi.size(); ++i) hi[i] = a.trunc().fock_dims[i] - 1;
    auto ea = entries_within(a, hi);
    auto eb = entries_within(b, hi);
    if (ea.size() != eb.size()) return false;
    for (size_t i = 0; i < ea.size(); ++i) {
        if (ea[i].exponent != eb[i].exponent || ea[i].row != eb[i].row || ea[i].col != eb[i].col)
            return false;
        if (ea[i].value.real() != eb[i].value.real()) return false;
        if (ea[i].value.imag() != eb[i].value.imag()) return false;
    }
    return true;
}

} // namespace

TEST_CASE("save then load is the identity on random elements, bit-exact") {
    std::mt19937 rng(13);
    TruncationSpec tr({4, 5}, 2);
    for (int rep = 0; rep < 8; ++rep) {
        LaurentOperator a = oracle::random_operator(rng, tr);
        std::stringstream io;
        save(a, io);
        LaurentOperator b = load(io);
        CHECK(b.trunc() == a.trunc());
        CHECK(entries_identical(a, b));
    }
}

TEST_CASE("empty element round-trips") {
    TruncationSpec tr({4}, 1);
    std::stringstream io;
    save(LaurentOperator::zero(tr), io);
    LaurentOperator b = load(io);
    CHECK(b.is_structurally_zero());
    CHECK(b.trunc() == tr);
}

TEST_CASE("scalar element with no fock factors round-trips") {
    TruncationSpec tr({}, 1);
    LaurentOperator a = Complex(0.25, -1.5) * LaurentOperator::torus_monomial(tr, {3});
    std::stringstream io;
    save(a, io);
    CHECK(entries_identical(a, load(io)));
}

TEST_CASE("header and entry validation") {
    // entry indices incompatible with the declared fock dimensions
    std::string bad_index = R"({
      "format_version": 1, "torus_rank": 0, "fock_dims": [3],
      "terms": [{"exponent": [], "entries": [{"row": [5], "col": [0], "re": 1.0, "im": 0.0}]}]
    })";
    std::stringstream s1(bad_index);
    CHECK_THROWS_AS(load(s1), ParseError);

    std::string bad_len = R"({
      "format_version": 1, "torus_rank": 0, "fock_dims": [3, 3],
      "terms": [{"exponent": [], "entries": [{"row": [1], "col": [0], "re": 1.0, "im": 0.0}]}]
    })";
    std::stringstream s2(bad_len);
    CHECK_THROWS_AS(load(s2), ParseError);

    std::stringstream s3("{ not json");
    CHECK_THROWS_AS(load(s3), ParseError);
    try {
        std::stringstream s4("{ not json");
        load(s4);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("parse error") != std::string::npos);
    }

    std::string bad_version =
        R"({"format_version": 99, "torus_rank": 0, "fock_dims": [3], "terms": []})";
    std::stringstream s5(bad_version);
    CHECK_THROWS_AS(load(s5), ParseError);
}

TEST_CASE("derived images survive the round trip exactly") {
    auto gens = sphere_generators(2, 2.0, 8);
    for (const auto& g : gens) {
        std::stringstream io;
        save(g, io);
        CHECK(entries_identical(g, load(io)));
    }
}

TEST_CASE("bundle round trip and missing file reporting") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qpg_bundle_test";
    fs::remove_all(dir);

    auto gens = sphere_generators(1, 2.0, 6);
    std::vector<std::pair<std::string, LaurentOperator>> entries;
    for (size_t m = 0; m < gens.size(); ++m)
        entries.emplace_back("u" + std::to_string(m + 1), gens[m]);
    save_bundle(dir.string(), entries);

    auto loaded = load_bundle(dir.string());
    REQUIRE(loaded.size() == entries.size());
    for (size_t m = 0; m < loaded.size(); ++m) {
        CHECK(loaded[m].first == entries[m].first);
        CHECK(entries_identical(loaded[m].second, entries[m].second));
    }

    fs::remove(dir / "op_1.json");
    try {
        load_bundle(dir.string());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("u2") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("bundles at different q share the sparsity pattern but differ in values") {
    auto g2 = sphere_generators(2, 2.0, 6);
    auto g3 = sphere_generators(2, 3.0, 6);
    std::vector<int> hi{5, 5};
    for (size_t m = 0; m < g2.size(); ++m) {
        auto e2 = entries_within(g2[m], hi);
        auto e3 = entries_within(g3[m], hi);
        REQUIRE(e2.size() == e3.size());
        bool differ = false;
        for (size_t i = 0; i < e2.size(); ++i) {
            CHECK(e2[i].row == e3[i].row);
            CHECK(e2[i].col == e3[i].col);
            if (e2[i].value != e3[i].value) differ = true;
        }
        CHECK(differ);
    }
}
