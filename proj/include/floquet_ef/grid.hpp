// grid.hpp — precomputed field lattice, bilinear interpolation and persistence
//
// File layout (all little-endian, see docs/grid_format.md):
//   magic "FEFGRID\0" | u8 version | f64 x_min x_max y_min y_max | i32 nx ny | u8 policy |
//   u64 fingerprint | u32 doubles_per_sample | f64 samples[ny][nx][doubles_per_sample] |
//   u64 payload checksum (FNV-1a over the sample bytes)

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "floquet_ef/fields.hpp"
#include "floquet_ef/parallel.hpp"
#include "floquet_ef/transport.hpp"

namespace floquet_ef {

enum class OutOfBoundsPolicy : std::uint8_t { Error = 0, Clamp = 1 };

struct GridSpec {
    double x_min{-8.0};
    double x_max{2.0};
    double y_min{-7.0};
    double y_max{3.0};
    int nx{101};
    int ny{101};
    OutOfBoundsPolicy out_of_bounds{OutOfBoundsPolicy::Error};

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
    NuclearPoint node(int ix, int iy) const { return {x_min + ix * dx(), y_min + iy * dy()}; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    bool contains(NuclearPoint r) const { return r.x >= x_min && r.x <= x_max && r.y >= y_min && r.y <= y_max; }
};

inline void validate(const GridSpec& g) {
    if (g.nx < 2 || g.ny < 2) throw ConfigError("grid.nx and grid.ny must be >= 2");
    if (!std::isfinite(g.x_min) || !std::isfinite(g.x_max) || !std::isfinite(g.y_min) || !std::isfinite(g.y_max))
        throw ConfigError("grid bounds must be finite");
    if (!(g.x_min < g.x_max) || !(g.y_min < g.y_max)) throw ConfigError("grid bounds must satisfy min < max");
}

inline constexpr std::uint8_t kGridFormatVersion = 1;
inline constexpr int kDoublesPerSample = 10;

namespace detail {

class Fnv1a {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001b3ULL;
        }
    }
    void f64(double v) {
        if (v == 0.0) v = 0.0;  // fold -0.0
        bytes(&v, sizeof v);
    }
    void i64(std::int64_t v) { bytes(&v, sizeof v); }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_{0xcbf29ce484222325ULL};
};

inline std::array<double, kDoublesPerSample> pack(const EFSample& s) {
    return {s.force(0),        s.force(1),        s.gamma(0, 0),     s.gamma(0, 1),     s.gamma(1, 0),
            s.gamma(1, 1),     s.diffusion(0, 0), s.diffusion(0, 1), s.diffusion(1, 1), s.local_current};
}

inline EFSample unpack(const double* v) {
    EFSample s;
    s.force << v[0], v[1];
    s.gamma << v[2], v[3], v[4], v[5];
    s.diffusion << v[6], v[7], v[7], v[8];
    s.local_current = v[9];
    return s;
}

}  // namespace detail

/// Hash of everything that determines the physics stored in a grid.
inline std::uint64_t params_fingerprint(const ModelParams& p, const QuadratureSpec& q) {
    detail::Fnv1a h;
    for (double v : {p.kT, p.delta, p.amp, p.omega, p.gamma_tilde, p.mu_left, p.mu_right, p.lambda_x, p.lambda_y,
                     p.mass, q.e_max, q.de, q.tail_tol})
        h.f64(v);
    h.i64(p.n_floquet);
    h.i64(p.d);
    h.i64(kGridFormatVersion);
    return h.value();
}

struct FieldGrid {
    GridSpec spec;
    std::uint64_t params_fingerprint{0};
    std::vector<EFSample> samples;  // row-major: samples[iy * nx + ix]

    const EFSample& at(int ix, int iy) const {
        return samples[static_cast<std::size_t>(iy) * static_cast<std::size_t>(spec.nx) + static_cast<std::size_t>(ix)];
    }
};

inline FieldGrid precompute(const ModelParams& p, const QuadratureSpec& q, const GridSpec& g, unsigned threads = 0) {
    validate(p);
    validate(q);
    validate(g);
    FieldGrid grid{g, params_fingerprint(p, q), std::vector<EFSample>(g.size())};
    parallel_for(g.size(), threads, [&](std::size_t k) {
        const int ix = static_cast<int>(k % static_cast<std::size_t>(g.nx));
        const int iy = static_cast<int>(k / static_cast<std::size_t>(g.nx));
        grid.samples[k] = evaluate_sample(g.node(ix, iy), p, q);
    });
    return grid;
}

/// Bilinear interpolation of every field component; exact at nodes.
inline EFSample interpolate(const FieldGrid& grid, NuclearPoint r) {
    const GridSpec& g = grid.spec;
    if (!std::isfinite(r.x) || !std::isfinite(r.y)) throw OutOfBounds("non-finite nuclear point", r);
    if (!g.contains(r)) {
        if (g.out_of_bounds == OutOfBoundsPolicy::Error)
            throw OutOfBounds("nuclear point " + format_point(r) + " outside the field grid", r);
        r.x = std::clamp(r.x, g.x_min, g.x_max);
        r.y = std::clamp(r.y, g.y_min, g.y_max);
    }
    auto snap = [](double f) {
        const double nearest = std::round(f);
        return std::abs(f - nearest) < 1e-9 ? nearest : f;
    };
    const double fx = snap((r.x - g.x_min) / g.dx());
    const double fy = snap((r.y - g.y_min) / g.dy());
    const int ix = std::min(static_cast<int>(fx), g.nx - 2);
    const int iy = std::min(static_cast<int>(fy), g.ny - 2);
    const double tx = fx - ix;
    const double ty = fy - iy;

    const EFSample& s00 = grid.at(ix, iy);
    const EFSample& s10 = grid.at(ix + 1, iy);
    const EFSample& s01 = grid.at(ix, iy + 1);
    const EFSample& s11 = grid.at(ix + 1, iy + 1);
    const double w00 = (1 - tx) * (1 - ty), w10 = tx * (1 - ty), w01 = (1 - tx) * ty, w11 = tx * ty;

    // Exact node hits return the stored sample bit-for-bit.
    if (tx == 0.0 && ty == 0.0) return s00;

    EFSample out;
    out.force = w00 * s00.force + w10 * s10.force + w01 * s01.force + w11 * s11.force;
    out.gamma = w00 * s00.gamma + w10 * s10.gamma + w01 * s01.gamma + w11 * s11.gamma;
    out.diffusion = w00 * s00.diffusion + w10 * s10.diffusion + w01 * s01.diffusion + w11 * s11.diffusion;
    out.local_current = w00 * s00.local_current + w10 * s10.local_current + w01 * s01.local_current +
                        w11 * s11.local_current;
    return out;
}

namespace detail {

template <class T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw Error("field grid file truncated");
    return v;
}

inline constexpr char kGridMagic[8] = {'F', 'E', 'F', 'G', 'R', 'I', 'D', '\0'};

}  // namespace detail

inline void save(const FieldGrid& grid, const std::string& path) {
    static_assert(std::endian::native == std::endian::little, "grid files are little-endian");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path + " for writing");
    os.write(detail::kGridMagic, sizeof detail::kGridMagic);
    detail::write_pod(os, kGridFormatVersion);
    const GridSpec& g = grid.spec;
    for (double v : {g.x_min, g.x_max, g.y_min, g.y_max}) detail::write_pod(os, v);
    detail::write_pod(os, static_cast<std::int32_t>(g.nx));
    detail::write_pod(os, static_cast<std::int32_t>(g.ny));
    detail::write_pod(os, static_cast<std::uint8_t>(g.out_of_bounds));
    detail::write_pod(os, grid.params_fingerprint);
    detail::write_pod(os, static_cast<std::uint32_t>(kDoublesPerSample));
    detail::Fnv1a checksum;
    for (const auto& s : grid.samples) {
        const auto packed = detail::pack(s);
        os.write(reinterpret_cast<const char*>(packed.data()), sizeof packed);
        checksum.bytes(packed.data(), sizeof packed);
    }
    detail::write_pod(os, checksum.value());
    if (!os) throw Error("failed writing " + path);
}

/// Loads a grid; when expected_fingerprint is non-zero a mismatch is fatal.
inline FieldGrid load(const std::string& path, std::uint64_t expected_fingerprint = 0) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open field grid " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, detail::kGridMagic, sizeof magic) != 0) throw Error(path + " is not a field grid file");
    const auto version = detail::read_pod<std::uint8_t>(is);
    if (version != kGridFormatVersion)
        throw Error(path + ": unsupported grid format version " + std::to_string(version));
    FieldGrid grid;
    GridSpec& g = grid.spec;
    g.x_min = detail::read_pod<double>(is);
    g.x_max = detail::read_pod<double>(is);
    g.y_min = detail::read_pod<double>(is);
    g.y_max = detail::read_pod<double>(is);
    g.nx = detail::read_pod<std::int32_t>(is);
    g.ny = detail::read_pod<std::int32_t>(is);
    const auto policy = detail::read_pod<std::uint8_t>(is);
    if (policy > 1) throw Error(path + ": bad out-of-bounds policy");
    g.out_of_bounds = static_cast<OutOfBoundsPolicy>(policy);
    validate(g);
    grid.params_fingerprint = detail::read_pod<std::uint64_t>(is);
    if (expected_fingerprint != 0 && grid.params_fingerprint != expected_fingerprint)
        throw ConfigError(path + ": parameter fingerprint mismatch (grid was computed for different physics)");
    if (detail::read_pod<std::uint32_t>(is) != kDoublesPerSample) throw Error(path + ": unexpected sample width");

    grid.samples.resize(g.size());
    detail::Fnv1a checksum;
    std::array<double, kDoublesPerSample> buf{};
    for (auto& s : grid.samples) {
        is.read(reinterpret_cast<char*>(buf.data()), sizeof buf);
        if (!is) throw Error(path + ": truncated sample data");
        checksum.bytes(buf.data(), sizeof buf);
        s = detail::unpack(buf.data());
    }
    if (detail::read_pod<std::uint64_t>(is) != checksum.value()) throw Error(path + ": checksum mismatch");
    return grid;
}

}  // namespace floquet_ef
