#include "fundusquant/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace fundusquant {

namespace {

struct MemoryReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t n) {
    auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (r->pos + n > r->size) png_error(png, "truncated file");
    std::memcpy(out, r->data + r->pos, n);
    r->pos += n;
}

void silent_warning(png_structp, png_const_charp) {}

// libpng's default error handler prints to stderr; keep the message for the exception instead.
struct ErrorText {
    char text[160] = "corrupt PNG data";
};

[[noreturn]] void record_error(png_structp png, png_const_charp msg) {
    if (auto* sink = static_cast<ErrorText*>(png_get_error_ptr(png)); sink && msg) {
        std::snprintf(sink->text, sizeof sink->text, "%s", msg);
    }
    png_longjmp(png, 1);
}

[[noreturn]] void decode_fail(const std::filesystem::path& path, const std::string& why) {
    throw Error(ErrorCode::DecodeError, path.string() + ": " + why);
}

// Runs the libpng read sequence; returns false on a libpng error. Keeps only trivially
// destructible state live across setjmp.
bool decode_into(const std::vector<std::uint8_t>& bytes, DecodedPng& out, std::vector<png_bytep>& rows,
                 std::vector<std::uint8_t>& buffer, ErrorText& err) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, record_error, silent_warning);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    MemoryReader reader{bytes.data(), bytes.size(), 0};
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, &reader, read_from_memory);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (w == 0 || h == 0 || w > (1u << 15) || h > (1u << 15)) png_error(png, "unsupported dimensions");

    if (color == PNG_COLOR_TYPE_PALETTE) {
        if (depth < 8) png_set_packing(png);
        png_colorp pal = nullptr;
        int n = 0;
        if (png_get_PLTE(png, info, &pal, &n)) {
            for (int i = 0; i < n; ++i) out.palette_colors.push_back({pal[i].red, pal[i].green, pal[i].blue, 255});
        }
        out.palette = true;
    } else if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = buffer.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

template <typename Fill>
void encode(const std::filesystem::path& path, int w, int h, int color, int depth, std::size_t rowbytes, Fill fill,
            const std::vector<png_color>* palette = nullptr) {
    std::vector<std::uint8_t> buffer(rowbytes * static_cast<std::size_t>(h));
    fill(buffer);
    std::vector<png_bytep> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + static_cast<std::size_t>(y) * rowbytes;

    FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw Error(ErrorCode::EncodeError, path.string() + ": cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, record_error, silent_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    volatile bool ok = png && info;
    if (ok) {
        if (setjmp(png_jmpbuf(png))) {
            ok = false;
        } else {
            png_init_io(png, fp);
            png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth, color,
                         PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
            if (palette) png_set_PLTE(png, info, palette->data(), static_cast<int>(palette->size()));
            png_write_info(png, info);
            png_write_image(png, rows.data());
            png_write_end(png, nullptr);
        }
    }
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    const bool closed = std::fclose(fp) == 0;
    if (!ok || !closed) throw Error(ErrorCode::EncodeError, path.string() + ": PNG encoding failed");
}

std::uint16_t sample(const DecodedPng& d, int x, int y, int c) {
    return d.samples[(static_cast<std::size_t>(y) * d.width + x) * d.channels + c];
}

int color_channels(const DecodedPng& d) { return d.channels == 2 ? 1 : (d.channels == 4 ? 3 : d.channels); }

}  // namespace

DecodedPng decode_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) decode_fail(path, "cannot open file");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) decode_fail(path, "not a PNG file");

    DecodedPng out;
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> buffer;
    ErrorText err;
    if (!decode_into(bytes, out, rows, buffer, err)) decode_fail(path, err.text);

    const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(n);
    if (out.bit_depth == 16) {
        for (std::size_t i = 0; i < n; ++i) out.samples[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
    } else {
        for (std::size_t i = 0; i < n; ++i) out.samples[i] = buffer[i];
    }
    return out;
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    const DecodedPng d = decode_png(path);
    BinaryMask m(d.width, d.height);
    const int cc = color_channels(d);
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) {
            bool on = false;
            if (d.palette) {
                const auto idx = sample(d, x, y, 0);
                on = idx < d.palette_colors.size() ? (d.palette_colors[idx].r | d.palette_colors[idx].g | d.palette_colors[idx].b) != 0 : idx != 0;
            } else {
                for (int c = 0; c < cc; ++c) on = on || sample(d, x, y, c) != 0;
            }
            m.set(x, y, on);
        }
    }
    return m;
}

LabelMap read_label_png(const std::filesystem::path& path) {
    const DecodedPng d = decode_png(path);
    if (!d.palette && !(d.channels <= 2 && d.bit_depth == 8)) decode_fail(path, "label map must be indexed or 8-bit gray");
    LabelMap m(d.width, d.height);
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) m(x, y) = static_cast<std::uint8_t>(sample(d, x, y, 0));
    }
    return m;
}

ProbMap read_prob_png(const std::filesystem::path& path) {
    const DecodedPng d = decode_png(path);
    if (d.palette || d.channels > 2) decode_fail(path, "probability map must be grayscale");
    const double scale = d.bit_depth == 16 ? 65535.0 : 255.0;
    ProbMap p(d.width, d.height);
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) p(x, y) = sample(d, x, y, 0) / scale;
    }
    return p;
}

RgbImage read_rgb_png(const std::filesystem::path& path) {
    const DecodedPng d = decode_png(path);
    RgbImage img(d.width, d.height);
    const int cc = color_channels(d);
    const int shift = d.bit_depth == 16 ? 8 : 0;
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) {
            std::uint8_t* px = img.at(x, y);
            if (d.palette) {
                const auto idx = sample(d, x, y, 0);
                const Rgba c = idx < d.palette_colors.size() ? d.palette_colors[idx] : Rgba{};
                px[0] = c.r;
                px[1] = c.g;
                px[2] = c.b;
            } else {
                for (int c = 0; c < 3; ++c) px[c] = static_cast<std::uint8_t>(sample(d, x, y, cc == 1 ? 0 : c) >> shift);
            }
        }
    }
    return img;
}

RealRaster read_gray_png(const std::filesystem::path& path) {
    const DecodedPng d = decode_png(path);
    RealRaster g(d.width, d.height);
    const double scale = d.bit_depth == 16 ? 65535.0 : 255.0;
    const int cc = color_channels(d);
    if (d.palette || cc == 3) {
        const RgbImage rgb = read_rgb_png(path);
        for (int y = 0; y < d.height; ++y) {
            for (int x = 0; x < d.width; ++x) {
                const std::uint8_t* p = rgb.at(x, y);
                g(x, y) = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
            }
        }
        return g;
    }
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) g(x, y) = sample(d, x, y, 0) / scale;
    }
    return g;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    encode(path, w, h, PNG_COLOR_TYPE_GRAY, 8, static_cast<std::size_t>(w), [&](std::vector<std::uint8_t>& buf) {
        const auto src = mask.data();
        for (std::size_t i = 0; i < src.size(); ++i) buf[i] = src[i] ? 255 : 0;
    });
}

void write_label_png(const std::filesystem::path& path, const LabelMap& labels, const Registry& registry) {
    const int w = labels.width(), h = labels.height();
    int max_id = 0;
    for (auto v : labels.data()) max_id = std::max<int>(max_id, v);
    for (const auto& c : registry.classes()) max_id = std::max<int>(max_id, c.id);
    std::vector<png_color> palette(static_cast<std::size_t>(max_id) + 1, png_color{0, 0, 0});
    for (const auto& c : registry.classes()) palette[c.id] = png_color{c.color.r, c.color.g, c.color.b};
    encode(
        path, w, h, PNG_COLOR_TYPE_PALETTE, 8, static_cast<std::size_t>(w),
        [&](std::vector<std::uint8_t>& buf) {
            const auto src = labels.data();
            std::copy(src.begin(), src.end(), buf.begin());
        },
        &palette);
}

void write_prob_png(const std::filesystem::path& path, const ProbMap& prob) {
    prob.validate();
    const int w = prob.width(), h = prob.height();
    encode(path, w, h, PNG_COLOR_TYPE_GRAY, 16, static_cast<std::size_t>(w) * 2, [&](std::vector<std::uint8_t>& buf) {
        const auto src = prob.data();
        for (std::size_t i = 0; i < src.size(); ++i) {
            const auto v = static_cast<std::uint16_t>(std::lround(src[i] * 65535.0));
            buf[2 * i] = static_cast<std::uint8_t>(v >> 8);
            buf[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
    });
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
    encode(path, image.width, image.height, PNG_COLOR_TYPE_RGB, 8, static_cast<std::size_t>(image.width) * 3,
           [&](std::vector<std::uint8_t>& buf) { std::copy(image.rgb.begin(), image.rgb.end(), buf.begin()); });
}

}  // namespace fundusquant
