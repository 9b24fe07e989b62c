// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/ply_io.hpp"

#include "gesplat/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "binary PLY io assumes a little-endian host");

namespace gesplat {
namespace {

const char* const kPropertyNames[] = {
    "x", "y", "z",
    "rot_0", "rot_1", "rot_2", "rot_3",
    "scale_0", "scale_1", "scale_2",
    "opacity",
    "f_dc_0", "f_dc_1", "f_dc_2",
    "f_rest_0", "f_rest_1", "f_rest_2", "f_rest_3", "f_rest_4",
    "f_rest_5", "f_rest_6", "f_rest_7", "f_rest_8",
    "shape",
};
constexpr int kPropertyCount = 24;
constexpr int kShapeSlot = 23;

double get_field(const SplatCore& s, int slot) {
    switch (slot) {
    case 0: return s.position.x;
    case 1: return s.position.y;
    case 2: return s.position.z;
    case 3: return s.rotation.w;
    case 4: return s.rotation.x;
    case 5: return s.rotation.y;
    case 6: return s.rotation.z;
    case 7: return s.log_scale.x;
    case 8: return s.log_scale.y;
    case 9: return s.log_scale.z;
    case 10: return s.opacity_logit;
    case 11: return s.color.x;
    case 12: return s.color.y;
    case 13: return s.color.z;
    case 23: return s.epsilon;
    default: return s.sh1[slot - 14];
    }
}

void set_field(SplatCore& s, int slot, double v) {
    switch (slot) {
    case 0: s.position.x = v; break;
    case 1: s.position.y = v; break;
    case 2: s.position.z = v; break;
    case 3: s.rotation.w = v; break;
    case 4: s.rotation.x = v; break;
    case 5: s.rotation.y = v; break;
    case 6: s.rotation.z = v; break;
    case 7: s.log_scale.x = v; break;
    case 8: s.log_scale.y = v; break;
    case 9: s.log_scale.z = v; break;
    case 10: s.opacity_logit = v; break;
    case 11: s.color.x = v; break;
    case 12: s.color.y = v; break;
    case 13: s.color.z = v; break;
    case 23: s.epsilon = v; break;
    default: s.sh1[slot - 14] = v; break;
    }
}

std::size_t scalar_size(const std::string& type) {
    if (type == "float" || type == "float32") return 4;
    if (type == "double" || type == "float64") return 8;
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8")
        return 1;
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16")
        return 2;
    if (type == "int" || type == "uint" || type == "int32" || type == "uint32")
        return 4;
    throw IoError("ply: unsupported property type '" + type + "'");
}

} // namespace

void save_ply(const SplatCloud& cloud, std::ostream& out) {
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "comment generalized exponential splat cloud\n";
    out << "element vertex " << cloud.size() << "\n";
    for (const char* name : kPropertyNames)
        out << "property double " << name << "\n";
    out << "end_header\n";

    std::vector<double> row(kPropertyCount);
    for (const auto& s : cloud.splats) {
        for (int slot = 0; slot < kPropertyCount; ++slot) row[slot] = get_field(s, slot);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!out) throw IoError("ply: write failed");
}

std::vector<std::uint8_t> save_ply_bytes(const SplatCloud& cloud) {
    std::ostringstream os(std::ios::binary);
    save_ply(cloud, os);
    const std::string s = os.str();
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

void save_ply_file(const SplatCloud& cloud, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("ply: cannot open '" + path + "' for writing");
    save_ply(cloud, f);
}

PlyLoadResult load_ply(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "ply")
        throw IoError("ply: missing 'ply' magic");
    if (!std::getline(in, line) || line.rfind("format binary_little_endian", 0) != 0)
        throw IoError("ply: expected 'format binary_little_endian'");

    struct Prop {
        std::string type;
        std::string name;
        std::size_t size;
    };
    std::vector<Prop> props;
    std::size_t vertex_count = 0;
    bool saw_vertex_element = false;

    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "end_header") break;
        if (tok == "comment" || tok == "obj_info") continue;
        if (tok == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            if (name == "vertex") {
                vertex_count = count;
                saw_vertex_element = true;
            } else if (saw_vertex_element && !props.empty()) {
                throw IoError("ply: unsupported trailing element '" + name + "'");
            }
            continue;
        }
        if (tok == "property") {
            std::string type, name;
            ls >> type >> name;
            if (type == "list") throw IoError("ply: list properties not supported here");
            if (saw_vertex_element) props.push_back({type, name, scalar_size(type)});
            continue;
        }
        if (tok.empty()) continue;
        throw IoError("ply: unexpected header token '" + tok + "'");
    }
    if (!in) throw IoError("ply: truncated header");
    if (!saw_vertex_element) throw IoError("ply: missing 'element vertex'");

    // Map file properties onto splat slots; unknown properties are skipped.
    std::vector<int> slot_of_prop(props.size(), -1);
    std::vector<bool> have(kPropertyCount, false);
    for (std::size_t p = 0; p < props.size(); ++p) {
        for (int slot = 0; slot < kPropertyCount; ++slot) {
            if (props[p].name == kPropertyNames[slot]) {
                slot_of_prop[p] = slot;
                have[slot] = true;
                break;
            }
        }
    }

    PlyLoadResult result;
    for (int slot = 0; slot < kPropertyCount; ++slot) {
        if (have[slot]) continue;
        const std::string name = kPropertyNames[slot];
        if (slot == kShapeSlot) {
            result.warnings.push_back(
                "ply: no 'shape' property; importing as Gaussians (shape = 2)");
        } else if (name.rfind("f_rest_", 0) == 0) {
            // Optional view-dependent color; defaults to zero.
        } else {
            throw IoError("ply: missing required property '" + name + "'");
        }
    }

    std::size_t row_size = 0;
    for (const auto& p : props) row_size += p.size;

    result.cloud.splats.resize(vertex_count);
    std::vector<char> row(row_size);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        in.read(row.data(), static_cast<std::streamsize>(row_size));
        if (in.gcount() != static_cast<std::streamsize>(row_size))
            throw IoError("ply: truncated vertex data (vertex " + std::to_string(v) +
                          " of " + std::to_string(vertex_count) + ")");
        SplatCore& s = result.cloud.splats[v];
        s.sh1.fill(0.0);
        s.epsilon = 2.0;
        std::size_t offset = 0;
        for (std::size_t p = 0; p < props.size(); ++p) {
            const int slot = slot_of_prop[p];
            if (slot >= 0) {
                double value = 0.0;
                if (props[p].size == 8 &&
                    (props[p].type == "double" || props[p].type == "float64")) {
                    std::memcpy(&value, row.data() + offset, 8);
                } else if (props[p].size == 4 &&
                           (props[p].type == "float" || props[p].type == "float32")) {
                    float f = 0.0f;
                    std::memcpy(&f, row.data() + offset, 4);
                    value = f;
                } else {
                    throw IoError("ply: property '" + props[p].name +
                                  "' has non-float type '" + props[p].type + "'");
                }
                set_field(s, slot, value);
            }
            offset += props[p].size;
        }
        if (!s.all_finite())
            throw IoError("ply: non-finite value in vertex " + std::to_string(v));
        // Normalize only when needed so unit quaternions round-trip bit-exactly.
        if (std::abs(s.rotation.norm() - 1.0) > 1e-12)
            s.rotation = s.rotation.normalized();
    }
    result.cloud.generation = 1;
    return result;
}

PlyLoadResult load_ply_bytes(const std::vector<std::uint8_t>& bytes) {
    std::istringstream is(std::string(bytes.begin(), bytes.end()), std::ios::binary);
    return load_ply(is);
}

PlyLoadResult load_ply_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("ply: cannot open '" + path + "'");
    return load_ply(f);
}

} // namespace gesplat
