#include "dimlab/serialize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

constexpr std::array<char, 4> kMagic{'D', 'L', 'P', 'S'};

template <class T>
void put_le(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw ParameterError("binary point set: truncated input");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

nlohmann::json to_json(const PointSet& x) {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        pts.push_back(std::vector<double>(p.begin(), p.end()));
    }
    return {{"ambient_dim", x.ambient_dim()},
            {"resolution", x.resolution()},
            {"provenance", x.provenance()},
            {"points", std::move(pts)}};
}

PointSet point_set_from_json(const nlohmann::json& j) {
    try {
        const std::size_t n = j.at("ambient_dim").get<std::size_t>();
        const double res = j.at("resolution").get<double>();
        const std::string prov = j.value("provenance", std::string{});
        std::vector<double> coords;
        for (const auto& p : j.at("points")) {
            if (p.size() != n) throw ParameterError("point set JSON: point of wrong dimension");
            for (const auto& v : p) coords.push_back(v.get<double>());
        }
        return PointSet(n, std::move(coords), res, prov);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("point set JSON: ") + e.what());
    }
}

void write_binary(std::ostream& os, const PointSet& x) {
    os.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(x.ambient_dim()));
    put_le<std::uint64_t>(os, x.size());
    put_le<double>(os, x.resolution());
    for (double v : x.coords()) put_le<double>(os, v);
}

PointSet read_binary(std::istream& is) {
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw ParameterError("binary point set: bad magic");
    const auto n = get_le<std::uint32_t>(is);
    const auto count = get_le<std::uint64_t>(is);
    const double res = get_le<double>(is);
    if (n == 0 || count == 0 || count > (std::uint64_t{1} << 40))
        throw ParameterError("binary point set: implausible header");
    std::vector<double> coords(count * n);
    for (double& v : coords) v = get_le<double>(is);
    return PointSet(n, std::move(coords), res, "binary");
}

void save_point_set(const std::filesystem::path& path, const PointSet& x, PointFormat fmt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParameterError("cannot open " + path.string() + " for writing");
    if (fmt == PointFormat::binary)
        write_binary(os, x);
    else
        os << to_json(x).dump() << '\n';
    if (!os) throw ParameterError("write failed: " + path.string());
}

PointSet load_point_set(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParameterError("cannot open " + path.string());
    char head[4] = {};
    is.read(head, 4);
    is.clear();
    is.seekg(0);
    if (std::memcmp(head, kMagic.data(), 4) == 0) return read_binary(is);
    try {
        return point_set_from_json(nlohmann::json::parse(is));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(path.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const CarpetSpec& spec) {
    nlohmann::json digits = nlohmann::json::array();
    for (auto [i, j] : spec.digits()) digits.push_back({i, j});
    return {{"base_x", spec.base_x()}, {"base_y", spec.base_y()}, {"digits", std::move(digits)}};
}

CarpetSpec carpet_spec_from_json(const nlohmann::json& j) {
    try {
        std::vector<std::pair<int, int>> digits;
        for (const auto& d : j.at("digits")) {
            if (d.size() != 2) throw ParameterError("carpet JSON: digits must be [i, j] pairs");
            digits.emplace_back(d[0].get<int>(), d[1].get<int>());
        }
        return CarpetSpec(j.at("base_x").get<int>(), j.at("base_y").get<int>(), std::move(digits));
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("carpet JSON: ") + e.what());
    }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(path.string() + ": " + e.what());
    }
}

CarpetSpec load_carpet_spec(const std::filesystem::path& path) {
    return carpet_spec_from_json(read_json_file(path));
}

}  // namespace dimlab
