#include "fdkp/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fdkp/errors.hpp"

namespace fdkp {

namespace {

std::uint64_t to_le(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little) return v;
    else return __builtin_bswap64(v);
}

} // namespace

void write_field(std::ostream& os, const Field& f)
{
    std::ostringstream hdr;
    hdr << std::setprecision(17) << "FDKP1 " << f.grid.nx << ' ' << f.grid.ny << ' ' << f.grid.lx << ' '
        << f.grid.ly << ' ' << (f.rep == Rep::physical ? "physical" : "spectral") << ' '
        << (f.realTagged ? 1 : 0) << '\n';
    os << hdr.str();
    std::string buf(f.size() * 16, '\0');
    char* out = buf.data();
    for (const auto& v : f.values) {
        const double parts[2] = {v.real(), v.imag()};
        for (double d : parts) {
            const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(d));
            std::memcpy(out, &bits, 8);
            out += 8;
        }
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw IoError("failed writing FDKP1 payload");
}

Field read_field(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw IoError("missing FDKP1 header");
    std::istringstream hdr(line);
    std::string magic, rep;
    int nx = 0, ny = 0, tag = 0;
    double lx = 0.0, ly = 0.0;
    if (!(hdr >> magic >> nx >> ny >> lx >> ly >> rep >> tag) || magic != "FDKP1")
        throw IoError("malformed FDKP1 header: " + line);
    if (rep != "physical" && rep != "spectral") throw IoError("unknown representation in FDKP1 header: " + rep);
    Field f(Grid2D(nx, ny, lx, ly), rep == "physical" ? Rep::physical : Rep::spectral, tag != 0);
    std::string buf(f.size() * 16, '\0');
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (is.gcount() != static_cast<std::streamsize>(buf.size())) throw IoError("truncated FDKP1 payload");
    const char* in = buf.data();
    for (auto& v : f.values) {
        double parts[2];
        for (double& d : parts) {
            std::uint64_t bits;
            std::memcpy(&bits, in, 8);
            in += 8;
            d = std::bit_cast<double>(to_le(bits));
        }
        v = cplx(parts[0], parts[1]);
    }
    return f;
}

void save_field(const std::filesystem::path& path, const Field& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write_field(os, f);
}

Field load_field(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    try {
        return read_field(is);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

} // namespace fdkp
