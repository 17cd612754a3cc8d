#include "sqg/snapshot.hpp"

#include "sqg/errors.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace sqg {

namespace {

constexpr char kMagic[8] = {'S', 'Q', 'G', 'S', 'N', 'A', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

double read_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void save_snapshot(const std::string& path, const RealField& theta, double s, double kappa,
                   double t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open snapshot file for writing: " + path);
    out.write(kMagic, sizeof kMagic);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(theta.grid.n));
    write_f64(out, s);
    write_f64(out, kappa);
    write_f64(out, t);
    out.write(reinterpret_cast<const char*>(theta.v.data()),
              static_cast<std::streamsize>(theta.v.size() * sizeof(double)));
    if (!out) throw ConfigError("write failure on snapshot file: " + path);
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot file: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw ConfigError("not a snapshot file: " + path);
    const std::uint32_t ver = read_u32(in);
    if (ver != kVersion)
        throw ConfigError("unsupported snapshot version " + std::to_string(ver) + ": " + path);
    const std::uint32_t n = read_u32(in);
    if (n < 8 || n % 2 != 0 || n > (1u << 20))
        throw ConfigError("snapshot has invalid grid size " + std::to_string(n) + ": " + path);
    Snapshot snap;
    snap.s = read_f64(in);
    snap.kappa = read_f64(in);
    snap.t = read_f64(in);
    snap.theta = RealField(Grid(static_cast<int>(n)));
    in.read(reinterpret_cast<char*>(snap.theta.v.data()),
            static_cast<std::streamsize>(snap.theta.v.size() * sizeof(double)));
    if (!in || in.gcount() !=
                   static_cast<std::streamsize>(snap.theta.v.size() * sizeof(double)))
        throw ConfigError("truncated snapshot file: " + path);
    return snap;
}

} // namespace sqg
