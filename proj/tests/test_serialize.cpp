#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "dimlab/error.hpp"
#include "dimlab/serialize.hpp"

using namespace dimlab;
namespace fs = std::filesystem;

namespace {

bool same(const PointSet& a, const PointSet& b) {
    const auto ca = a.coords(), cb = b.coords();
    return a.ambient_dim() == b.ambient_dim() && a.resolution() == b.resolution() &&
           std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

bool same(const CarpetSpec& a, const CarpetSpec& b) {
    return a.base_x() == b.base_x() && a.base_y() == b.base_y() && a.digits() == b.digits();
}

}  // namespace

TEST_CASE("json and binary round trips are exact") {
    const PointSet x = gen_radial_stretch_grid(0.7, 2, 0.4, 9);
    CHECK(same(point_set_from_json(to_json(x)), x));
    CHECK(point_set_from_json(to_json(x)).provenance() == x.provenance());

    std::stringstream ss;
    write_binary(ss, x);
    CHECK(same(read_binary(ss), x));

    std::stringstream bad("XXXX0000");
    CHECK_THROWS_AS(read_binary(bad), ParameterError);
}

TEST_CASE("files load in either format") {
    const fs::path dir = fs::temp_directory_path() / "dimlab_serialize_test";
    fs::create_directories(dir);
    const PointSet x = gen_sequence_set(2.0, 77);
    save_point_set(dir / "x.json", x, PointFormat::json);
    save_point_set(dir / "x.bin", x, PointFormat::binary);
    CHECK(same(load_point_set(dir / "x.json"), x));
    CHECK(same(load_point_set(dir / "x.bin"), x));
    CHECK_THROWS(load_point_set(dir / "missing.json"));
    fs::remove_all(dir);
}

TEST_CASE("malformed point set json") {
    CHECK_THROWS(point_set_from_json(nlohmann::json::parse(R"({"ambient_dim": 2})")));
    CHECK_THROWS(point_set_from_json(nlohmann::json::parse(
        R"({"ambient_dim": 1, "resolution": 0.1, "points": [[0.0], [0.0]]})")));
}

TEST_CASE("carpet specs") {
    const CarpetSpec e = example_carpet_e();
    CHECK(same(carpet_spec_from_json(to_json(e)), e));
    CHECK(same(load_carpet_spec(fs::path(DIMLAB_DATA_DIR) / "example_E.json"), e));
    CHECK(same(load_carpet_spec(fs::path(DIMLAB_DATA_DIR) / "example_E_prime.json"), example_carpet_e_prime()));
    CHECK_THROWS_AS(carpet_spec_from_json(nlohmann::json::parse(R"({"base_x": 2, "base_y": 3, "digits": [[5, 1]]})")),
                    ParameterError);
}
