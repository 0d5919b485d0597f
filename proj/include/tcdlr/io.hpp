#ifndef TCDLR_IO_HPP
#define TCDLR_IO_HPP

//
// Bit-exact file formats.
//
// TNS3: magic "TNS3", three uint32 little-endian dims (n1, n2, n3), then
// n1*n2*n3 IEEE-754 little-endian float64 values, slice-major (third index
// outermost), column-major within each slice.
// MSK3: magic "MSK3", same header, payload of bytes 0/1.
//
// See docs/formats.md.
//

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcdlr/tensor.hpp"

namespace tcdlr {

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void write_header(std::ostream& os, const char magic[4], uint32_t n1,
                         uint32_t n2, uint32_t n3)
{
    os.write(magic, 4);
    uint32_t dims[3] = {n1, n2, n3};
    // assumes little-endian host; asserted once below
    os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
}

inline void read_header(std::istream& is, const char magic[4], const std::string& path,
                        uint32_t dims[3])
{
    char got[4];
    if (!is.read(got, 4) || std::memcmp(got, magic, 4) != 0)
        throw FormatError(path + ": bad magic, expected " + std::string(magic, 4));
    if (!is.read(reinterpret_cast<char*>(dims), 3 * sizeof(uint32_t)))
        throw FormatError(path + ": truncated header");
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
        throw FormatError(path + ": zero dimension in header");
}

static_assert(sizeof(double) == 8);

}  // namespace detail

inline void save_tensor(const Tensor3& t, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError(path + ": cannot open for writing");
    detail::write_header(os, "TNS3", uint32_t(t.n1()), uint32_t(t.n2()), uint32_t(t.n3()));
    os.write(reinterpret_cast<const char*>(t.data()),
             std::streamsize(t.size() * sizeof(double)));
    if (!os) throw FormatError(path + ": write failed");
}

inline Tensor3 load_tensor(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError(path + ": cannot open");
    uint32_t dims[3];
    detail::read_header(is, "TNS3", path, dims);
    Tensor3 t{int(dims[0]), int(dims[1]), int(dims[2])};
    if (!is.read(reinterpret_cast<char*>(t.data()),
                 std::streamsize(t.size() * sizeof(double))))
        throw FormatError(path + ": payload shorter than header dims");
    is.peek();
    if (!is.eof()) throw FormatError(path + ": trailing bytes after payload");
    return t;
}

inline void save_mask(const std::vector<uint8_t>& mask, int n1, int n2, int n3,
                      const std::string& path)
{
    if (mask.size() != size_t(n1) * n2 * n3)
        throw std::invalid_argument("save_mask: size/dims mismatch");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError(path + ": cannot open for writing");
    detail::write_header(os, "MSK3", uint32_t(n1), uint32_t(n2), uint32_t(n3));
    os.write(reinterpret_cast<const char*>(mask.data()), std::streamsize(mask.size()));
    if (!os) throw FormatError(path + ": write failed");
}

struct MaskFile {
    int n1 = 0, n2 = 0, n3 = 0;
    std::vector<uint8_t> mask;
};

inline MaskFile load_mask(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError(path + ": cannot open");
    uint32_t dims[3];
    detail::read_header(is, "MSK3", path, dims);
    MaskFile out{int(dims[0]), int(dims[1]), int(dims[2]), {}};
    out.mask.resize(size_t(dims[0]) * dims[1] * dims[2]);
    if (!is.read(reinterpret_cast<char*>(out.mask.data()), std::streamsize(out.mask.size())))
        throw FormatError(path + ": payload shorter than header dims");
    for (uint8_t v : out.mask)
        if (v > 1) throw FormatError(path + ": mask bytes must be 0 or 1");
    is.peek();
    if (!is.eof()) throw FormatError(path + ": trailing bytes after payload");
    return out;
}

// 8-bit interleaved RGB (row-major, rows x cols) -> rows x cols x 3 tensor in
// [0, 1]; channel c becomes frontal slice c
inline Tensor3 image_to_tensor(const std::vector<uint8_t>& rgb, int rows, int cols)
{
    if (rgb.size() != size_t(rows) * cols * 3)
        throw std::invalid_argument("image_to_tensor: buffer size mismatch");
    Tensor3 t(rows, cols, 3);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            for (int c = 0; c < 3; ++c)
                t(i, j, c) = rgb[(size_t(i) * cols + j) * 3 + c] / 255.0;
    return t;
}

inline std::vector<uint8_t> tensor_to_image(const Tensor3& t)
{
    if (t.n3() != 3) throw std::invalid_argument("tensor_to_image: needs n3 == 3");
    std::vector<uint8_t> rgb(size_t(t.n1()) * t.n2() * 3);
    for (int i = 0; i < t.n1(); ++i)
        for (int j = 0; j < t.n2(); ++j)
            for (int c = 0; c < 3; ++c) {
                double v = std::min(std::max(t(i, j, c), 0.0), 1.0);
                rgb[(size_t(i) * t.n2() + j) * 3 + c] = uint8_t(std::lround(v * 255.0));
            }
    return rgb;
}

}  // namespace tcdlr

#endif
