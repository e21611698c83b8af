#include "wavespec/image_io.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/rng.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace wavespec {

namespace {

std::vector<std::uint8_t> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

int next_pnm_number(const std::vector<std::uint8_t>& b, std::size_t& pos) {
    // skip whitespace and '#' comments
    while (pos < b.size()) {
        if (std::isspace(b[pos])) {
            ++pos;
        } else if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    if (pos >= b.size() || !std::isdigit(b[pos])) throw DataError("malformed PGM header");
    int v = 0;
    while (pos < b.size() && std::isdigit(b[pos])) {
        v = v * 10 + (b[pos] - '0');
        ++pos;
    }
    return v;
}

} // namespace

RawImage read_pgm(const std::string& path) {
    const auto bytes = read_all(path);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw DataError(path + ": not a binary PGM (P5) file");
    std::size_t pos = 2;
    RawImage img;
    img.cols = next_pnm_number(bytes, pos);
    img.rows = next_pnm_number(bytes, pos);
    img.maxval = next_pnm_number(bytes, pos);
    if (img.cols <= 0 || img.rows <= 0) throw DataError(path + ": bad PGM dimensions");
    if (img.maxval <= 0 || img.maxval > 65535) throw DataError(path + ": bad PGM maxval");
    ++pos; // single whitespace after maxval
    const std::size_t n = static_cast<std::size_t>(img.rows) * img.cols;
    const int bpp = img.maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + n * static_cast<std::size_t>(bpp))
        throw DataError(path + ": truncated PGM pixel data");
    img.px.resize(n);
    if (bpp == 1) {
        for (std::size_t i = 0; i < n; ++i) img.px[i] = bytes[pos + i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            img.px[i] = static_cast<std::uint16_t>((bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1]);
    }
    return img;
}

void write_pgm(const std::string& path, const RawImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "P5\n" << img.cols << " " << img.rows << "\n" << img.maxval << "\n";
    if (img.maxval < 256) {
        for (std::uint16_t v : img.px) out.put(static_cast<char>(v & 0xFF));
    } else {
        for (std::uint16_t v : img.px) {
            out.put(static_cast<char>(v >> 8));
            out.put(static_cast<char>(v & 0xFF));
        }
    }
}

namespace {

std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in,
                                       std::size_t expected_out) {
    std::vector<std::uint8_t> out(expected_out);
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit(&zs) != Z_OK) throw DataError("zlib init failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.avail_out != 0)
        throw DataError("PNG: compressed image data is corrupt or has unexpected size");
    return out;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

} // namespace

RawImage read_png_gray(const std::string& path) {
    const auto bytes = read_all(path);
    static const std::uint8_t magic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (bytes.size() < 8 || std::memcmp(bytes.data(), magic, 8) != 0)
        throw DataError(path + ": not a PNG file");

    int width = 0, height = 0, bitdepth = 0, colortype = -1;
    std::vector<std::uint8_t> idat;
    std::size_t pos = 8;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t len = be32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) throw DataError(path + ": truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const std::uint8_t* data = &bytes[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw DataError(path + ": bad IHDR");
            width = static_cast<int>(be32(data));
            height = static_cast<int>(be32(data + 4));
            bitdepth = data[8];
            colortype = data[9];
            if (data[12] != 0) throw DataError(path + ": interlaced PNG is not supported");
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (width <= 0 || height <= 0) throw DataError(path + ": missing IHDR");
    if (colortype != 0)
        throw DataError(path + ": only grayscale (color type 0) PNG is supported");
    if (bitdepth != 8 && bitdepth != 16)
        throw DataError(path + ": only 8- and 16-bit PNG is supported");

    const int bpp = bitdepth / 8;
    const std::size_t stride = static_cast<std::size_t>(width) * bpp;
    const auto raw = zlib_inflate(idat, (stride + 1) * static_cast<std::size_t>(height));

    RawImage img;
    img.rows = height;
    img.cols = width;
    img.maxval = bitdepth == 8 ? 255 : 65535;
    img.px.resize(static_cast<std::size_t>(width) * height);

    std::vector<std::uint8_t> cur(stride, 0), prev(stride, 0);
    for (int r = 0; r < height; ++r) {
        const std::uint8_t* line = &raw[static_cast<std::size_t>(r) * (stride + 1)];
        const int filter = line[0];
        for (std::size_t i = 0; i < stride; ++i) {
            const int x = line[1 + i];
            const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
            const int b = prev[i];
            const int c = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
            int v;
            switch (filter) {
                case 0: v = x; break;
                case 1: v = x + a; break;
                case 2: v = x + b; break;
                case 3: v = x + (a + b) / 2; break;
                case 4: v = x + paeth(a, b, c); break;
                default: throw DataError(path + ": unknown PNG filter type");
            }
            cur[i] = static_cast<std::uint8_t>(v & 0xFF);
        }
        for (int cix = 0; cix < width; ++cix) {
            const std::size_t o = static_cast<std::size_t>(cix) * bpp;
            img.px[static_cast<std::size_t>(r) * width + cix] =
                bpp == 1 ? cur[o] : static_cast<std::uint16_t>((cur[o] << 8) | cur[o + 1]);
        }
        std::swap(cur, prev);
    }
    return img;
}

namespace {
constexpr char kF64Magic[8] = {'W', 'S', 'F', '6', '4', '\0', '\0', '\1'};
}

GridR read_grid_f64(const std::string& path) {
    const auto bytes = read_all(path);
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kF64Magic, 8) != 0)
        throw DataError(path + ": not a WSF64 grid file");
    std::uint32_t rows, cols;
    std::memcpy(&rows, &bytes[8], 4);
    std::memcpy(&cols, &bytes[12], 4);
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    if (bytes.size() != 16 + n * 8) throw DataError(path + ": truncated WSF64 grid file");
    GridR g(static_cast<int>(rows), static_cast<int>(cols));
    std::memcpy(g.data.data(), &bytes[16], n * 8);
    return g;
}

void write_grid_f64(const std::string& path, const GridR& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(kF64Magic, 8);
    const std::uint32_t rows = static_cast<std::uint32_t>(g.rows);
    const std::uint32_t cols = static_cast<std::uint32_t>(g.cols);
    out.write(reinterpret_cast<const char*>(&rows), 4);
    out.write(reinterpret_cast<const char*>(&cols), 4);
    out.write(reinterpret_cast<const char*>(g.data.data()),
              static_cast<std::streamsize>(g.data.size() * 8));
}

GridR to_unit_grid(const RawImage& img) {
    GridR g(img.rows, img.cols);
    const double inv = 1.0 / static_cast<double>(img.maxval);
    for (std::size_t i = 0; i < img.px.size(); ++i) g.data[i] = img.px[i] * inv;
    return g;
}

RawImage to_raw_image(const GridR& g, int maxval) {
    RawImage img;
    img.rows = g.rows;
    img.cols = g.cols;
    img.maxval = maxval;
    img.px.resize(g.data.size());
    double lo = g.data.empty() ? 0.0 : g.data[0], hi = lo;
    for (double v : g.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    for (std::size_t i = 0; i < g.data.size(); ++i)
        img.px[i] = static_cast<std::uint16_t>(
            std::lround((g.data[i] - lo) / span * static_cast<double>(maxval)));
    return img;
}

GridR read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    char head[8] = {};
    in.read(head, 8);
    in.close();
    if (head[0] == 'P' && head[1] == '5') return to_unit_grid(read_pgm(path));
    if (static_cast<unsigned char>(head[0]) == 0x89 && head[1] == 'P')
        return to_unit_grid(read_png_gray(path));
    if (std::memcmp(head, kF64Magic, 8) == 0) return read_grid_f64(path);
    throw DataError(path + ": unrecognized image format (expected PGM, PNG or WSF64)");
}

Orientation parse_orientation(const std::string& s) {
    if (s == "left") return Orientation::left;
    if (s == "right") return Orientation::right;
    if (s == "auto") return Orientation::auto_detect;
    throw std::invalid_argument("orientation must be left, right or auto");
}

GridR crop_region(const GridR& image, const CropSpec& spec) {
    if (!is_pow2(spec.size)) throw std::invalid_argument("crop size must be a power of two");
    if (spec.edge_offset < 0) throw std::invalid_argument("edge offset must be nonnegative");
    if (image.rows < spec.size || image.cols < spec.size + spec.edge_offset)
        throw DataError("image too small for the requested crop");

    Orientation orient = spec.orientation;
    if (orient == Orientation::auto_detect) {
        // the breast points away from the brighter (tissue/chest-wall) half
        double left_sum = 0.0, right_sum = 0.0;
        const int half = image.cols / 2;
        for (int r = 0; r < image.rows; ++r) {
            const double* row = image.row(r);
            for (int c = 0; c < half; ++c) left_sum += row[c];
            for (int c = half; c < image.cols; ++c) right_sum += row[c];
        }
        orient = left_sum >= right_sum ? Orientation::right : Orientation::left;
    }
    // orientation names the direction the breast points; the region is
    // anchored at the opposite edge plus the offset
    const int col0 = orient == Orientation::right ? spec.edge_offset
                                                  : image.cols - spec.edge_offset - spec.size;
    if (col0 < 0) throw DataError("image too small for the requested crop");

    int row0;
    if (image.rows == spec.size) {
        row0 = 0;
    } else {
        Philox gen(derive_seed(spec.vertical_seed, 0x63726f70u), 0);
        const int center = static_cast<int>(gen.next64() % static_cast<std::uint64_t>(image.rows));
        const int half = spec.size / 2;
        if (center >= half && image.rows - center >= half) {
            row0 = center - half;
        } else if (center < image.rows - center) {
            row0 = 0; // region extends from the top
        } else {
            row0 = image.rows - spec.size; // region extends from the bottom
        }
    }

    GridR out(spec.size, spec.size);
    for (int r = 0; r < spec.size; ++r)
        std::memcpy(out.row(r), image.row(row0 + r) + col0,
                    static_cast<std::size_t>(spec.size) * sizeof(double));
    return out;
}

} // namespace wavespec
