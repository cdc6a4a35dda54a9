#include "zlab/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace zlab {

namespace {
constexpr char kMagic[8] = {'Z', 'F', 'L', 'D', '1', 0, 0, 0};
constexpr std::size_t kHeaderSize = 64;
}  // namespace

void write_field(const std::string& path, const SampledField3& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    char header[kHeaderSize] = {};
    std::memcpy(header, kMagic, sizeof(kMagic));
    std::uint32_t n[3];
    for (int a = 0; a < 3; ++a) n[a] = static_cast<std::uint32_t>(field.grid.points[a]);
    std::memcpy(header + 8, n, sizeof(n));
    std::memcpy(header + 24, field.grid.half_extent.data(), 3 * sizeof(double));
    os.write(header, kHeaderSize);
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: short write to " + path);
}

SampledField3 read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    char header[kHeaderSize];
    is.read(header, kHeaderSize);
    if (!is || std::memcmp(header, kMagic, 5) != 0)
        throw std::runtime_error("read_field: bad magic in " + path);
    std::uint32_t n[3];
    std::memcpy(n, header + 8, sizeof(n));
    std::array<double, 3> ext;
    std::memcpy(ext.data(), header + 24, 3 * sizeof(double));
    SampledField3 field;
    field.grid = make_grid(ext, {n[0], n[1], n[2]});
    field.values.resize(field.grid.size());
    is.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_field: truncated payload in " + path);
    return field;
}

void write_field_csv(const std::string& path, const SampledField3& field) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("write_field_csv: cannot open " + path);
    std::fputs("x1,x2,x3,value\n", fp);
    const Grid3& g = field.grid;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.points[0]; ++i)
        for (std::size_t j = 0; j < g.points[1]; ++j)
            for (std::size_t k = 0; k < g.points[2]; ++k)
                std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", g.coord(0, i),
                             g.coord(1, j), g.coord(2, k), field.values[idx++]);
    std::fclose(fp);
}

}  // namespace zlab
