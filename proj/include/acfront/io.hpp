#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

#include "acfront/grid.hpp"

namespace acfront {

namespace detail {

template <typename T>
inline void put(std::string& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf.append(tmp, sizeof(T));  // host is little-endian; format is LE
}

template <typename T>
inline T take(std::istream& in, const char* what) {
    T v;
    char tmp[sizeof(T)];
    if (!in.read(tmp, sizeof(T))) throw std::runtime_error(std::string("read_field: truncated ") + what);
    std::memcpy(&v, tmp, sizeof(T));
    return v;
}

/// Write to a temp file in the same directory, then rename into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// AFLD field container: magic "AFLD", u16 version (= 1), u16 dim, u64 point
/// count per axis, f64 extent, f64 time, row-major f64 payload, u32 CRC32 of
/// the payload. All little-endian.
inline void write_field(const Field& f, const std::filesystem::path& path) {
    std::string buf;
    buf.reserve(32 + f.size() * 8 + 4);
    buf.append("AFLD", 4);
    detail::put<std::uint16_t>(buf, 1);
    detail::put<std::uint16_t>(buf, static_cast<std::uint16_t>(f.grid.dim));
    for (int a = 0; a < f.grid.dim; ++a) detail::put<std::uint64_t>(buf, f.grid.n);
    detail::put<double>(buf, f.grid.extent);
    detail::put<double>(buf, f.time);
    const std::size_t payload_off = buf.size();
    for (double v : f.values) detail::put<double>(buf, v);
    const auto* payload = reinterpret_cast<const Bytef*>(buf.data() + payload_off);
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, payload, static_cast<uInt>(buf.size() - payload_off)));
    detail::put<std::uint32_t>(buf, crc);
    detail::atomic_write(path, buf);
}

inline Field read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "AFLD", 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path.string());
    const auto version = detail::take<std::uint16_t>(in, "version");
    if (version != 1) throw std::runtime_error("read_field: unsupported version");
    const auto dim = detail::take<std::uint16_t>(in, "dim");
    if (dim < 1 || dim > 8) throw std::runtime_error("read_field: implausible dim");
    std::uint64_t n = 0;
    for (int a = 0; a < dim; ++a) {
        const auto na = detail::take<std::uint64_t>(in, "axis count");
        if (a == 0)
            n = na;
        else if (na != n)
            throw std::runtime_error("read_field: anisotropic grids unsupported");
    }
    const double extent = detail::take<double>(in, "extent");
    const double time = detail::take<double>(in, "time");
    Grid g = make_grid(dim, static_cast<std::size_t>(n), extent);
    Field f(g, 0.0, time);
    std::vector<char> payload(f.size() * 8);
    if (!in.read(payload.data(), static_cast<std::streamsize>(payload.size())))
        throw std::runtime_error("read_field: truncated payload");
    const auto crc_stored = detail::take<std::uint32_t>(in, "crc");
    const auto crc_actual = static_cast<std::uint32_t>(crc32(
        0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size())));
    if (crc_stored != crc_actual)
        throw std::runtime_error("read_field: CRC mismatch in " + path.string());
    std::memcpy(f.values.data(), payload.data(), payload.size());
    return f;
}

/// RFC-4180 style CSV with a header row; fields quoted only when needed.
inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::string buf;
    auto emit_row = [&buf](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) buf += ',';
            buf += csv_escape(row[i]);
        }
        buf += "\r\n";
    };
    emit_row(header);
    for (const auto& row : rows) emit_row(row);
    detail::atomic_write(path, buf);
}

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

/// 8-bit binary PGM; values map linearly from [-1.2, 1.2] to [0, 255],
/// clipped, which keeps the saturation plateaus visible.
inline void write_pgm(const Field& f, const std::filesystem::path& path) {
    if (f.grid.dim != 2) throw std::invalid_argument("write_pgm: 2-d fields only");
    const std::size_t n = f.grid.n;
    std::string buf = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = std::clamp((f[i] + 1.2) / 2.4, 0.0, 1.0);
        buf += static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0)));
    }
    detail::atomic_write(path, buf);
}

/// Nodal polylines as (curve_id, vertex_index, x, y) rows.
inline void write_nodal_csv(const std::vector<std::vector<std::array<double, 2>>>& polylines,
                            const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t c = 0; c < polylines.size(); ++c)
        for (std::size_t v = 0; v < polylines[c].size(); ++v)
            rows.push_back({std::to_string(c), std::to_string(v), fmt(polylines[c][v][0]),
                            fmt(polylines[c][v][1])});
    write_csv(path, {"curve_id", "vertex_index", "x", "y"}, rows);
}

}  // namespace acfront
