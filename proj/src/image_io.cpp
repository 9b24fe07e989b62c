// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/image_io.hpp"

#include "gesplat/errors.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace gesplat {
namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(c));
    return ext;
}

} // namespace

void write_png(const ImageBuffer& image, const std::string& path) {
    if (image.width <= 0 || image.height <= 0)
        throw IoError("png: refusing to write empty image '" + path + "'");
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = PNG_FORMAT_RGB;

    std::vector<png_byte> bytes(image.pixel_count() * 3);
    for (std::size_t i = 0; i < image.rgb.size(); ++i) {
        const double v = clamp(image.rgb[i], 0.0, 1.0);
        bytes[i] = static_cast<png_byte>(std::lround(v * 255.0));
    }
    if (!png_image_write_to_file(&png, path.c_str(), 0, bytes.data(), 0, nullptr)) {
        throw IoError("png: write failed for '" + path + "': " + png.message);
    }
}

ImageBuffer read_png(const std::string& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str()))
        throw IoError("png: cannot read '" + path + "': " + png.message);
    png.format = PNG_FORMAT_RGB;
    std::vector<png_byte> bytes(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr)) {
        png_image_free(&png);
        throw IoError("png: decode failed for '" + path + "': " + png.message);
    }
    ImageBuffer out(static_cast<int>(png.width), static_cast<int>(png.height));
    for (std::size_t i = 0; i < out.rgb.size(); ++i) out.rgb[i] = bytes[i] / 255.0;
    return out;
}

namespace {

void write_pfm_impl(const double* data, int width, int height, int channels,
                    const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("pfm: cannot open '" + path + "' for writing");
    f << (channels == 3 ? "PF" : "Pf") << "\n"
      << width << " " << height << "\n"
      << "-1.0\n";
    // Bottom-up row order per the PFM convention.
    std::vector<float> row(std::size_t(width) * channels);
    for (int y = height - 1; y >= 0; --y) {
        for (int x = 0; x < width * channels; ++x)
            row[x] = static_cast<float>(data[std::size_t(y) * width * channels + x]);
        f.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!f) throw IoError("pfm: write failed for '" + path + "'");
}

std::vector<double> read_pfm_impl(const std::string& path, int* width, int* height,
                                  int expected_channels) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("pfm: cannot open '" + path + "'");
    std::string magic;
    f >> magic;
    int channels = 0;
    if (magic == "PF") channels = 3;
    else if (magic == "Pf") channels = 1;
    else throw IoError("pfm: bad magic in '" + path + "'");
    if (expected_channels && channels != expected_channels)
        throw IoError("pfm: '" + path + "' has wrong channel count");
    int w = 0, h = 0;
    double scale = 0.0;
    f >> w >> h >> scale;
    if (!f || w <= 0 || h <= 0) throw IoError("pfm: bad header in '" + path + "'");
    if (scale >= 0.0) throw IoError("pfm: big-endian files not supported");
    f.get(); // single whitespace after the header

    std::vector<double> out(std::size_t(w) * h * channels);
    std::vector<float> row(std::size_t(w) * channels);
    for (int y = h - 1; y >= 0; --y) {
        f.read(reinterpret_cast<char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (f.gcount() != static_cast<std::streamsize>(row.size() * sizeof(float)))
            throw IoError("pfm: truncated payload in '" + path + "'");
        for (int x = 0; x < w * channels; ++x)
            out[std::size_t(y) * w * channels + x] = row[x];
    }
    *width = w;
    *height = h;
    return out;
}

} // namespace

void write_pfm(const ImageBuffer& image, const std::string& path) {
    write_pfm_impl(image.rgb.data(), image.width, image.height, 3, path);
}

ImageBuffer read_pfm(const std::string& path) {
    int w = 0, h = 0;
    auto data = read_pfm_impl(path, &w, &h, 3);
    ImageBuffer out(w, h);
    out.rgb = std::move(data);
    return out;
}

void write_pfm_gray(const std::vector<double>& plane, int width, int height,
                    const std::string& path) {
    if (plane.size() != std::size_t(width) * height)
        throw IoError("pfm: plane size does not match dimensions");
    write_pfm_impl(plane.data(), width, height, 1, path);
}

std::vector<double> read_pfm_gray(const std::string& path, int* width, int* height) {
    return read_pfm_impl(path, width, height, 1);
}

ImageBuffer read_image(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "png") return read_png(path);
    if (ext == "pfm") return read_pfm(path);
    throw IoError("unsupported image extension on '" + path + "'");
}

} // namespace gesplat
