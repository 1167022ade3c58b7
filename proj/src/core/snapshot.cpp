#include "invlab/core/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace invlab {

namespace {
constexpr char kMagic[8] = {'I', 'N', 'V', 'F', 'L', 'D', '0', '1'};

struct Header {
    int64_t ncomp, n1, n2, n3;
    double period, H, map_c, time;
};
} // namespace

void save_field(const Field& f, const std::string& path) {
    const Grid& g = f.grid();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    Header h{f.ncomp(), g.n1, g.n2, g.n3, g.P, g.map.H, g.map.c, f.time()};
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(f.data()),
              std::streamsize(f.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write to " + path);

    std::ofstream meta(path + ".meta");
    meta << "format invlab-field-v1\n"
         << "byte_order little-endian\n"
         << "scalar float64\n"
         << "ncomp " << f.ncomp() << "\n"
         << "n1 " << g.n1 << "\nn2 " << g.n2 << "\nn3 " << g.n3 << "\n"
         << "period " << g.P << "\nheight " << g.map.H << "\nmap_c " << g.map.c << "\n"
         << "time " << f.time() << "\n";
}

LoadedField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw std::runtime_error(path + ": not an invlab field snapshot");
    Header h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    auto grid = std::make_shared<Grid>(int(h.n1), int(h.n2), int(h.n3), h.period,
                                       GridMap{h.H, h.map_c});
    Field f(*grid, int(h.ncomp), h.time);
    in.read(reinterpret_cast<char*>(f.data()), std::streamsize(f.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated snapshot");
    return LoadedField{grid, std::move(f)};
}

} // namespace invlab
