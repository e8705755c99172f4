#include "projwarp/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <vector>

#include "projwarp/errors.hpp"

#ifdef PROJWARP_HAVE_PNG
#include <png.h>
#endif

namespace projwarp {

std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    unsigned y = 299u * r + 587u * g + 114u * b;
    return std::uint8_t((y + 500u) / 1000u);
}

namespace {

bool has_png_extension(const std::string& path) {
    if (path.size() < 4) return false;
    std::string ext = path.substr(path.size() - 4);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return ext == ".png";
}

int pgm_next_token(std::istream& in) {
    // Skips whitespace and '#' comments, returns a nonnegative integer.
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw data_error("malformed PGM header");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1u << 30) throw data_error("PGM header value out of range");
        c = in.get();
    }
    if (c != EOF) in.unget();
    return int(value);
}

ImageBuffer load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open image file: " + path);
    char magic[2];
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') {
        throw data_error("not a binary PGM (P5) file: " + path);
    }
    int w = pgm_next_token(in);
    int h = pgm_next_token(in);
    int maxval = pgm_next_token(in);
    if (w <= 0 || h <= 0) throw data_error("PGM has non-positive dimensions: " + path);
    if (maxval != 255) {
        throw data_error("unsupported PGM maxval " + std::to_string(maxval) +
                         " (only 8-bit maxval 255): " + path);
    }
    in.get();  // single whitespace after maxval
    ImageBuffer img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels().data()),
            std::streamsize(img.pixels().size()));
    if (std::size_t(in.gcount()) != img.pixels().size()) {
        throw data_error("PGM pixel data truncated: " + path);
    }
    return img;
}

void save_pgm(const ImageBuffer& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write image file: " + path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              std::streamsize(img.pixels().size()));
    if (!out) throw data_error("failed writing PGM data: " + path);
}

#ifdef PROJWARP_HAVE_PNG

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

ImageBuffer load_png(const std::string& path) {
    PngReader r;
    r.fp = std::fopen(path.c_str(), "rb");
    if (!r.fp) throw data_error("cannot open image file: " + path);
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw data_error("libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw data_error("libpng init failed");
    if (setjmp(png_jmpbuf(r.png))) throw data_error("malformed PNG file: " + path);

    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    png_uint_32 w = png_get_image_width(r.png, r.info);
    png_uint_32 h = png_get_image_height(r.png, r.info);
    int depth = png_get_bit_depth(r.png, r.info);
    int color = png_get_color_type(r.png, r.info);
    if (depth == 16) throw data_error("unsupported PNG depth 16 (only 8-bit): " + path);
    if (w == 0 || h == 0) throw data_error("PNG has empty dimensions: " + path);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    png_read_update_info(r.png, r.info);

    color = png_get_color_type(r.png, r.info);
    int channels = png_get_channels(r.png, r.info);
    std::vector<std::uint8_t> row(png_get_rowbytes(r.png, r.info));

    bool color_input = channels >= 3;
    if (color_input) {
        std::fprintf(stderr,
                     "warning: %s is a color PNG; converting to grayscale by BT.601 luma\n",
                     path.c_str());
    }

    ImageBuffer img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) {
            const std::uint8_t* px = row.data() + std::size_t(x) * channels;
            std::uint8_t v;
            if (channels >= 3) {
                v = rgb_to_luma(px[0], px[1], px[2]);
            } else {
                v = px[0];  // gray or gray+alpha; alpha ignored
            }
            img(int(x), int(y)) = v;
        }
    }
    png_read_end(r.png, nullptr);
    return img;
}

void save_png(const ImageBuffer& img, const std::string& path) {
    PngWriter w;
    w.fp = std::fopen(path.c_str(), "wb");
    if (!w.fp) throw data_error("cannot write image file: " + path);
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!w.png) throw data_error("libpng init failed");
    w.info = png_create_info_struct(w.png);
    if (!w.info) throw data_error("libpng init failed");
    if (setjmp(png_jmpbuf(w.png))) throw data_error("PNG write failed: " + path);

    png_init_io(w.png, w.fp);
    png_set_IHDR(w.png, w.info, png_uint_32(img.width()), png_uint_32(img.height()), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(w.png, const_cast<png_bytep>(img.pixels().data() +
                                                   std::size_t(y) * img.width()));
    }
    png_write_end(w.png, nullptr);
}

#endif  // PROJWARP_HAVE_PNG

}  // namespace

bool png_supported() {
#ifdef PROJWARP_HAVE_PNG
    return true;
#else
    return false;
#endif
}

ImageBuffer load_image(const std::string& path) {
    if (has_png_extension(path)) {
#ifdef PROJWARP_HAVE_PNG
        return load_png(path);
#else
        throw data_error("PNG support not built in; use PGM: " + path);
#endif
    }
    return load_pgm(path);
}

void save_image(const ImageBuffer& img, const std::string& path) {
    if (img.empty()) throw usage_error("cannot save an empty image");
    if (has_png_extension(path)) {
#ifdef PROJWARP_HAVE_PNG
        save_png(img, path);
        return;
#else
        throw data_error("PNG support not built in; use PGM: " + path);
#endif
    }
    save_pgm(img, path);
}

}  // namespace projwarp
