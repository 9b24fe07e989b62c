// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/mesh_io.hpp"

#include "gesplat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gesplat {
namespace {

void require_nonempty(const TriangleMesh& mesh) {
    if (mesh.vertices.empty() || mesh.triangles.empty())
        throw ValidationError("mesh io: refusing to write an empty mesh");
}

} // namespace

void save_obj(const TriangleMesh& mesh, const std::string& path) {
    require_nonempty(mesh);
    if (mesh.has_colors())
        std::fprintf(stderr, "warning: OBJ cannot carry vertex colors; dropped\n");
    std::ofstream f(path);
    if (!f) throw IoError("obj: cannot open '" + path + "' for writing");
    f.precision(9);
    for (const auto& v : mesh.vertices) f << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& n : mesh.normals)
        f << "vn " << n.x << " " << n.y << " " << n.z << "\n";
    for (const auto& t : mesh.triangles) {
        f << "f " << t[0] + 1 << "//" << t[0] + 1 << " " << t[1] + 1 << "//"
          << t[1] + 1 << " " << t[2] + 1 << "//" << t[2] + 1 << "\n";
    }
    if (!f) throw IoError("obj: write failed for '" + path + "'");
}

TriangleMesh load_obj(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("obj: cannot open '" + path + "'");
    TriangleMesh mesh;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x >> v.y >> v.z;
            mesh.vertices.push_back(v);
        } else if (tag == "vn") {
            Vec3 n;
            ls >> n.x >> n.y >> n.z;
            mesh.normals.push_back(n);
        } else if (tag == "f") {
            std::array<int, 3> tri{};
            for (int k = 0; k < 3; ++k) {
                std::string tok;
                ls >> tok;
                tri[k] = std::atoi(tok.c_str()) - 1;
            }
            mesh.triangles.push_back(tri);
        }
    }
    if (mesh.normals.size() != mesh.vertices.size())
        mesh.normals.assign(mesh.vertices.size(), Vec3{0, 0, 1});
    clean_mesh(mesh);
    return mesh;
}

void save_mesh_ply(const TriangleMesh& mesh, const std::string& path) {
    require_nonempty(mesh);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("ply: cannot open '" + path + "' for writing");
    const bool colors = mesh.has_colors();
    f << "ply\nformat binary_little_endian 1.0\n";
    f << "element vertex " << mesh.vertices.size() << "\n";
    f << "property float x\nproperty float y\nproperty float z\n";
    f << "property float nx\nproperty float ny\nproperty float nz\n";
    if (colors) f << "property float red\nproperty float green\nproperty float blue\n";
    f << "element face " << mesh.triangles.size() << "\n";
    f << "property list uchar int vertex_indices\nend_header\n";

    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        float row[9];
        int n = 0;
        row[n++] = float(mesh.vertices[i].x);
        row[n++] = float(mesh.vertices[i].y);
        row[n++] = float(mesh.vertices[i].z);
        row[n++] = float(mesh.normals[i].x);
        row[n++] = float(mesh.normals[i].y);
        row[n++] = float(mesh.normals[i].z);
        if (colors) {
            row[n++] = float(mesh.colors[i].x);
            row[n++] = float(mesh.colors[i].y);
            row[n++] = float(mesh.colors[i].z);
        }
        f.write(reinterpret_cast<const char*>(row), n * sizeof(float));
    }
    for (const auto& t : mesh.triangles) {
        const std::uint8_t count = 3;
        std::int32_t idx[3] = {t[0], t[1], t[2]};
        f.write(reinterpret_cast<const char*>(&count), 1);
        f.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
    if (!f) throw IoError("ply: write failed for '" + path + "'");
}

TriangleMesh load_mesh_ply(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("ply: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line) || line != "ply") throw IoError("ply: bad magic");
    std::getline(f, line); // format

    std::size_t vertex_count = 0, face_count = 0;
    std::vector<std::string> vertex_props;
    std::string element;
    while (std::getline(f, line) && line != "end_header") {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "element") {
            std::size_t count;
            ls >> element >> count;
            if (element == "vertex") vertex_count = count;
            else if (element == "face") face_count = count;
        } else if (tag == "property" && element == "vertex") {
            std::string type, name;
            ls >> type >> name;
            if (type != "float")
                throw IoError("ply mesh: expected float vertex properties");
            vertex_props.push_back(name);
        }
    }

    TriangleMesh mesh;
    mesh.vertices.resize(vertex_count);
    mesh.normals.assign(vertex_count, Vec3{0, 0, 1});
    const bool has_colors =
        std::find(vertex_props.begin(), vertex_props.end(), "red") !=
        vertex_props.end();
    if (has_colors) mesh.colors.resize(vertex_count);

    std::vector<float> row(vertex_props.size());
    for (std::size_t i = 0; i < vertex_count; ++i) {
        f.read(reinterpret_cast<char*>(row.data()),
               std::streamsize(row.size() * sizeof(float)));
        if (!f) throw IoError("ply mesh: truncated vertex data");
        for (std::size_t p = 0; p < vertex_props.size(); ++p) {
            const std::string& name = vertex_props[p];
            const double v = row[p];
            if (name == "x") mesh.vertices[i].x = v;
            else if (name == "y") mesh.vertices[i].y = v;
            else if (name == "z") mesh.vertices[i].z = v;
            else if (name == "nx") mesh.normals[i].x = v;
            else if (name == "ny") mesh.normals[i].y = v;
            else if (name == "nz") mesh.normals[i].z = v;
            else if (name == "red") mesh.colors[i].x = v;
            else if (name == "green") mesh.colors[i].y = v;
            else if (name == "blue") mesh.colors[i].z = v;
        }
    }
    for (std::size_t t = 0; t < face_count; ++t) {
        std::uint8_t count = 0;
        f.read(reinterpret_cast<char*>(&count), 1);
        if (!f || count != 3) throw IoError("ply mesh: non-triangular face");
        std::int32_t idx[3];
        f.read(reinterpret_cast<char*>(idx), sizeof(idx));
        if (!f) throw IoError("ply mesh: truncated face data");
        mesh.triangles.push_back({idx[0], idx[1], idx[2]});
    }
    clean_mesh(mesh);
    return mesh;
}

void save_points_ply(const std::vector<LevelSetPoint>& points,
                     const std::vector<double>& f_actual,
                     const std::vector<double>& f_ideal, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("ply: cannot open '" + path + "' for writing");
    const bool with_sdf =
        f_actual.size() == points.size() && f_ideal.size() == points.size();
    f << "ply\nformat binary_little_endian 1.0\n";
    f << "element vertex " << points.size() << "\n";
    f << "property float x\nproperty float y\nproperty float z\n";
    f << "property float nx\nproperty float ny\nproperty float nz\n";
    if (with_sdf) f << "property float sdf\nproperty float sdf_ideal\n";
    f << "end_header\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        float row[8];
        int n = 0;
        row[n++] = float(points[i].position.x);
        row[n++] = float(points[i].position.y);
        row[n++] = float(points[i].position.z);
        row[n++] = float(points[i].normal.x);
        row[n++] = float(points[i].normal.y);
        row[n++] = float(points[i].normal.z);
        if (with_sdf) {
            row[n++] = float(f_actual[i]);
            row[n++] = float(f_ideal[i]);
        }
        f.write(reinterpret_cast<const char*>(row), n * sizeof(float));
    }
    if (!f) throw IoError("ply: write failed for '" + path + "'");
}

} // namespace gesplat
