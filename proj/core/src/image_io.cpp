#include "finrot/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace finrot {
namespace {

// file row r is i_y = r (top row is q_y = -j), file column c is i_x = c;
// storage is i_x major, so reading/writing transposes indices, not data order
// per se.
double& px_at(MonoImage& img, int file_row, int file_col) {
    return img.at(file_col, file_row);
}
double px_at(const MonoImage& img, int file_row, int file_col) {
    return img.at(file_col, file_row);
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

AnyImage read_png_file(const std::filesystem::path& path) {
    PngReadCloser h;
    h.fp = std::fopen(path.c_str(), "rb");
    if (!h.fp) throw IoError("cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, h.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw FormatError(path.string() + " is not a PNG file");
    }
    h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!h.png) throw IoError("libpng allocation failed");
    h.info = png_create_info_struct(h.png);
    if (!h.info) throw IoError("libpng allocation failed");
    if (setjmp(png_jmpbuf(h.png))) {
        throw FormatError("libpng failed to decode " + path.string());
    }
    png_init_io(h.png, h.fp);
    png_set_sig_bytes(h.png, 8);
    png_read_info(h.png, h.info);

    const png_uint_32 width = png_get_image_width(h.png, h.info);
    const png_uint_32 height = png_get_image_height(h.png, h.info);
    const int color_type = png_get_color_type(h.png, h.info);
    const int bit_depth = png_get_bit_depth(h.png, h.info);

    if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
        png_get_valid(h.png, h.info, PNG_INFO_tRNS)) {
        throw FormatError(path.string() + ": alpha channels are not supported");
    }
    if (width != height) {
        throw FormatError(path.string() + ": screen must be square N x N");
    }
    if (width == 0 || width > 4096) {
        throw FormatError(path.string() + ": unsupported image size");
    }

    if (bit_depth == 16) png_set_strip_16(h.png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(h.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(h.png);
    }
    png_read_update_info(h.png, h.info);

    const int channels = png_get_channels(h.png, h.info);
    if (channels != 1 && channels != 3) {
        throw FormatError(path.string() + ": expected 8-bit gray or RGB");
    }

    const int n = static_cast<int>(width);
    std::vector<unsigned char> row(static_cast<std::size_t>(n) * channels);
    OscillatorRep rep = OscillatorRep::from_size(n);

    if (channels == 1) {
        MonoImage img(rep, PixelDomain::screen);
        for (int r = 0; r < n; ++r) {
            png_read_row(h.png, row.data(), nullptr);
            for (int c = 0; c < n; ++c) px_at(img, r, c) = row[c] / 255.0;
        }
        return img;
    }
    MonoImage cr(rep, PixelDomain::screen), cg(rep, PixelDomain::screen),
        cb(rep, PixelDomain::screen);
    for (int r = 0; r < n; ++r) {
        png_read_row(h.png, row.data(), nullptr);
        for (int c = 0; c < n; ++c) {
            px_at(cr, r, c) = row[3 * c + 0] / 255.0;
            px_at(cg, r, c) = row[3 * c + 1] / 255.0;
            px_at(cb, r, c) = row[3 * c + 2] / 255.0;
        }
    }
    return RgbImage(std::move(cr), std::move(cg), std::move(cb));
}

void write_png_rows(const std::filesystem::path& path, int n, int channels,
                    const std::vector<unsigned char>& data, const ImageMetadata* meta) {
    PngWriteCloser h;
    h.fp = std::fopen(path.c_str(), "wb");
    if (!h.fp) throw IoError("cannot open " + path.string() + " for writing");
    h.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!h.png) throw IoError("libpng allocation failed");
    h.info = png_create_info_struct(h.png);
    if (!h.info) throw IoError("libpng allocation failed");
    if (setjmp(png_jmpbuf(h.png))) {
        throw IoError("libpng failed to encode " + path.string());
    }
    png_init_io(h.png, h.fp);
    png_set_IHDR(h.png, h.info, n, n, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

    std::vector<png_text> texts;
    std::string s_str, cap_str;
    if (meta) {
        png_text t{};
        t.compression = PNG_TEXT_COMPRESSION_NONE;
        t.key = const_cast<char*>("finrot:mode");
        t.text = const_cast<char*>(meta->mode.c_str());
        texts.push_back(t);
        if (meta->stats) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", meta->stats->s);
            s_str = buf;
            std::snprintf(buf, sizeof(buf), "%.17g", meta->stats->S);
            cap_str = buf;
            png_text ts{};
            ts.compression = PNG_TEXT_COMPRESSION_NONE;
            ts.key = const_cast<char*>("finrot:s");
            ts.text = const_cast<char*>(s_str.c_str());
            texts.push_back(ts);
            png_text tS{};
            tS.compression = PNG_TEXT_COMPRESSION_NONE;
            tS.key = const_cast<char*>("finrot:S");
            tS.text = const_cast<char*>(cap_str.c_str());
            texts.push_back(tS);
        }
        png_set_text(h.png, h.info, texts.data(), static_cast<int>(texts.size()));
    }

    png_write_info(h.png, h.info);
    for (int r = 0; r < n; ++r) {
        png_write_row(h.png,
                      const_cast<png_bytep>(data.data() + static_cast<std::size_t>(r) * n * channels));
    }
    png_write_end(h.png, nullptr);
}

void require_screen(const MonoImage& img, const char* what) {
    if (img.domain() != PixelDomain::screen) {
        throw DomainError(std::string(what) +
                          ": quantized output requires a screen-image; normalize or clip first");
    }
}

std::string meta_comment(const ImageMetadata* meta) {
    if (!meta) return {};
    std::ostringstream os;
    os << "# finrot mode=" << meta->mode;
    if (meta->stats) {
        char buf[80];
        std::snprintf(buf, sizeof(buf), " s=%.17g S=%.17g", meta->stats->s, meta->stats->S);
        os << buf;
    }
    os << "\n";
    return os.str();
}

void skip_pnm_separators(std::istream& is) {
    for (;;) {
        int c = is.peek();
        if (c == '#') {
            std::string line;
            std::getline(is, line);
        } else if (c != EOF && std::isspace(static_cast<unsigned char>(c))) {
            is.get();
        } else {
            break;
        }
    }
}

AnyImage read_pnm_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path.string());
    std::string magic;
    is >> magic;
    if (magic != "P2" && magic != "P3") {
        throw FormatError(path.string() + ": expected ASCII PGM (P2) or PPM (P3)");
    }
    skip_pnm_separators(is);
    long width = 0, height = 0, maxval = 0;
    is >> width;
    skip_pnm_separators(is);
    is >> height;
    skip_pnm_separators(is);
    is >> maxval;
    if (!is || width <= 0 || height <= 0) throw FormatError(path.string() + ": bad PNM header");
    if (width != height) throw FormatError(path.string() + ": screen must be square N x N");
    if (maxval != 255) throw FormatError(path.string() + ": only maxval 255 is supported");

    const int n = static_cast<int>(width);
    OscillatorRep rep = OscillatorRep::from_size(n);
    const int channels = magic == "P2" ? 1 : 3;
    std::vector<MonoImage> ch(static_cast<std::size_t>(channels),
                              MonoImage(rep, PixelDomain::screen));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (int k = 0; k < channels; ++k) {
                long v = 0;
                is >> v;
                if (!is || v < 0 || v > 255) {
                    throw FormatError(path.string() + ": bad or missing sample value");
                }
                px_at(ch[k], r, c) = v / 255.0;
            }
        }
    }
    if (channels == 1) return std::move(ch[0]);
    return RgbImage(std::move(ch[0]), std::move(ch[1]), std::move(ch[2]));
}

void write_pnm_impl(const std::filesystem::path& path, int n,
                    const std::vector<const MonoImage*>& channels, const ImageMetadata* meta) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << (channels.size() == 1 ? "P2\n" : "P3\n");
    os << meta_comment(meta);
    os << n << " " << n << "\n255\n";
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (std::size_t k = 0; k < channels.size(); ++k) {
                os << static_cast<int>(quantize_byte(px_at(*channels[k], r, c)));
                os << ((c + 1 == n && k + 1 == channels.size()) ? '\n' : ' ');
            }
        }
    }
    if (!os) throw IoError("write to " + path.string() + " failed");
}

std::string lower_ext(const std::filesystem::path& path) {
    std::string e = path.extension().string();
    for (char& c : e) c = static_cast<char>(std::tolower(c));
    return e;
}

}  // namespace

unsigned char quantize_byte(double v) {
    const long q = std::lround(v * 255.0);
    return static_cast<unsigned char>(std::clamp(q, 0l, 255l));
}

AnyImage read_image(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return read_png_file(path);
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm_file(path);
    if (ext == ".csv") return read_csv_image(path);
    throw FormatError("unsupported image extension: " + path.string());
}

MonoImage read_csv_image(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError(path.string() + ": bad numeric cell '" + cell + "'");
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError(path.string() + ": empty CSV image");
    const std::size_t n = rows.size();
    for (const auto& r : rows) {
        if (r.size() != n) throw FormatError(path.string() + ": screen must be square N x N");
    }
    OscillatorRep rep = OscillatorRep::from_size(static_cast<int>(n));
    std::vector<double> px;
    px.reserve(n * n);
    for (const auto& r : rows) px.insert(px.end(), r.begin(), r.end());
    return MonoImage(rep, PixelDomain::data, std::move(px));
}

void write_png(const std::filesystem::path& path, const MonoImage& image,
               const ImageMetadata* meta) {
    require_screen(image, "write_png");
    const int n = image.size();
    std::vector<unsigned char> data(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            data[static_cast<std::size_t>(r) * n + c] = quantize_byte(px_at(image, r, c));
        }
    }
    write_png_rows(path, n, 1, data, meta);
}

void write_png(const std::filesystem::path& path, const RgbImage& image,
               const ImageMetadata* meta) {
    require_screen(image.r(), "write_png");
    const int n = image.size();
    std::vector<unsigned char> data(static_cast<std::size_t>(n) * n * 3);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const std::size_t base = (static_cast<std::size_t>(r) * n + c) * 3;
            data[base + 0] = quantize_byte(px_at(image.r(), r, c));
            data[base + 1] = quantize_byte(px_at(image.g(), r, c));
            data[base + 2] = quantize_byte(px_at(image.b(), r, c));
        }
    }
    write_png_rows(path, n, 3, data, meta);
}

void write_pnm(const std::filesystem::path& path, const MonoImage& image,
               const ImageMetadata* meta) {
    require_screen(image, "write_pnm");
    write_pnm_impl(path, image.size(), {&image}, meta);
}

void write_pnm(const std::filesystem::path& path, const RgbImage& image,
               const ImageMetadata* meta) {
    require_screen(image.r(), "write_pnm");
    write_pnm_impl(path, image.size(), {&image.r(), &image.g(), &image.b()}, meta);
}

void write_csv_image(const std::filesystem::path& path, const MonoImage& image) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    const int n = image.size();
    char buf[40];
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            std::snprintf(buf, sizeof(buf), "%.17g", image.at(ix, iy));
            os << buf << (iy + 1 == n ? '\n' : ',');
        }
    }
    if (!os) throw IoError("write to " + path.string() + " failed");
}

void write_image(const std::filesystem::path& path, const AnyImage& image,
                 const ImageMetadata* meta) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") {
        std::visit([&](const auto& img) { write_png(path, img, meta); }, image);
    } else if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
        std::visit([&](const auto& img) { write_pnm(path, img, meta); }, image);
    } else if (ext == ".csv") {
        if (const auto* mono = std::get_if<MonoImage>(&image)) {
            write_csv_image(path, *mono);
        } else {
            const auto& rgb = std::get<RgbImage>(image);
            auto channel_path = [&](const char* tag) {
                std::filesystem::path p = path;
                p.replace_extension();
                p += tag;
                p += ".csv";
                return p;
            };
            write_csv_image(channel_path("-r"), rgb.r());
            write_csv_image(channel_path("-g"), rgb.g());
            write_csv_image(channel_path("-b"), rgb.b());
        }
    } else {
        throw FormatError("unsupported output extension: " + path.string());
    }
}

}  // namespace finrot
