#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hilco/complexes.hpp"
#include "hilco/manifest.hpp"
#include "hilco/mmio.hpp"

using namespace hilco;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mmio_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("coordinate round trip") {
    TempDir dir;
    Matrix m(3, 2);
    m << 1.5, 0, 0, -2.25, 1e-17, 3;
    writeMatrixMarketCoordinate(dir.file("m.mtx"), m);
    Matrix back = readMatrixMarket(dir.file("m.mtx"));
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("array round trip") {
    TempDir dir;
    Matrix m(2, 3);
    m << 1, 2, 3, 4, 5, 1.0 / 3.0;
    writeMatrixMarketArray(dir.file("m.mtx"), m);
    CHECK((readMatrixMarket(dir.file("m.mtx")) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vector round trip") {
    TempDir dir;
    Vector v(4);
    v << -1, 0.5, 2, 1e-30;
    writeVectorMarket(dir.file("v.mtx"), v);
    CHECK((readVectorMarket(dir.file("v.mtx")) - v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetric and skew-symmetric storage expand") {
    TempDir dir;
    {
        std::ofstream out(dir.file("s.mtx"));
        out << "%%MatrixMarket matrix coordinate real symmetric\n"
            << "2 2 2\n"
            << "1 1 4\n"
            << "2 1 -1\n";
    }
    Matrix s = readMatrixMarket(dir.file("s.mtx"));
    CHECK(s(0, 1) == -1.0);
    CHECK(s(1, 0) == -1.0);
    CHECK(s(0, 0) == 4.0);

    {
        std::ofstream out(dir.file("k.mtx"));
        out << "%%MatrixMarket matrix coordinate real skew-symmetric\n"
            << "2 2 1\n"
            << "2 1 3\n";
    }
    Matrix k = readMatrixMarket(dir.file("k.mtx"));
    CHECK(k(1, 0) == 3.0);
    CHECK(k(0, 1) == -3.0);
}

TEST_CASE("bad input is rejected") {
    TempDir dir;
    CHECK_THROWS(readMatrixMarket(dir.file("missing.mtx")));
    {
        std::ofstream out(dir.file("garbage.mtx"));
        out << "not a matrix market file\n";
    }
    CHECK_THROWS(readMatrixMarket(dir.file("garbage.mtx")));
    {
        std::ofstream out(dir.file("short.mtx"));
        out << "%%MatrixMarket matrix coordinate real general\n"
            << "2 2 2\n"
            << "1 1 1\n";
    }
    CHECK_THROWS(readMatrixMarket(dir.file("short.mtx")));
}

TEST_CASE("atomic writes leave no temp files") {
    TempDir dir;
    atomicWriteFile(dir.file("a.txt"), "payload\n");
    std::ifstream in(dir.file("a.txt"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "payload");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++entries;
    CHECK(entries == 1);
}

TEST_CASE("complex manifest round trip with weighted grams") {
    TempDir dir;
    HilbertComplex cx = HilbertComplex::random({3, 4, 3}, {2, 1}, 99, true);
    std::string manifest = writeComplexManifest(dir.path.string(), "cx", cx);
    HilbertComplex back = readComplexManifest(manifest);
    REQUIRE(back.length() == 2);
    for (int k = 0; k < 2; ++k) {
        double scale = 1 + cx.map(k).entries().cwiseAbs().maxCoeff();
        CHECK((back.map(k).entries() - cx.map(k).entries()).cwiseAbs().maxCoeff() <
              1e-13 * scale);
    }
    for (int s = 0; s < 3; ++s)
        CHECK((back.space(s).gram() - cx.space(s).gram()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(back.isComplex());
}

TEST_CASE("manifest with identity grams stores null gram entries") {
    TempDir dir;
    HilbertComplex cx = HilbertComplex::random({2, 3, 2}, {1, 1}, 5);
    writeComplexManifest(dir.path.string(), "plain", cx);
    std::ifstream in(dir.file("plain.json"));
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("null") != std::string::npos);
    CHECK(text.find("\"schema_version\": \"1\"") != std::string::npos);
    HilbertComplex back = readComplexManifest(dir.file("plain.json"));
    CHECK(back.space(0).identityGram());
}

TEST_CASE("manifest validation failures") {
    TempDir dir;
    CHECK_THROWS(readComplexManifest(dir.file("missing.json")));
    {
        std::ofstream out(dir.file("badver.json"));
        out << "{\"schema_version\": \"2\", \"length\": 0, \"dims\": [1], "
               "\"grams\": [null], \"maps\": []}\n";
    }
    CHECK_THROWS(readComplexManifest(dir.file("badver.json")));
    {
        std::ofstream out(dir.file("mismatch.json"));
        out << "{\"schema_version\": \"1\", \"length\": 2, \"dims\": [1, 1], "
               "\"grams\": [null, null], \"maps\": [\"a.mtx\", \"b.mtx\"]}\n";
    }
    CHECK_THROWS(readComplexManifest(dir.file("mismatch.json")));
}
