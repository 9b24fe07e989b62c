// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/renderer.hpp"

#include "gesplat/simd.hpp"
#include "oracles.hpp"
#include "render_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace gesplat;

namespace {

Camera test_camera(int w = 48, int h = 32) {
    Camera cam;
    cam.width = w;
    cam.height = h;
    cam.fx = cam.fy = 0.8 * w;
    cam.cx = w / 2.0;
    cam.cy = h / 2.0;
    cam.near = 0.05;
    cam.far = 50.0;
    return cam; // identity pose: looking along +z from the origin
}

ProjectedSplat make_projected(Vec2 mean, double var, double alpha, Vec3 color,
                              double depth, int id) {
    ProjectedSplat p;
    p.mean = mean;
    p.cov2[0] = p.cov2[2] = var;
    p.cov2[1] = 0.0;
    p.conic[0] = p.conic[2] = 1.0 / var;
    p.conic[1] = 0.0;
    p.alpha = alpha;
    p.color = color;
    p.depth = depth;
    p.radius = std::ceil(3.0 * std::sqrt(var));
    p.id = id;
    return p;
}

SplatCloud random_cloud(Rng& rng, int n, double spread = 0.8) {
    SplatCloud cloud;
    for (int i = 0; i < n; ++i) {
        SplatCore s = test::random_splat(rng, spread);
        s.position.z = rng.uniform(2.0, 6.0);
        s.set_scale({std::exp(rng.uniform(-2.5, -1.0)), std::exp(rng.uniform(-2.5, -1.0)),
                     std::exp(rng.uniform(-2.5, -1.0))});
        cloud.splats.push_back(s);
    }
    cloud.generation = 1;
    return cloud;
}

} // namespace

TEST_CASE("project_splats culls behind-camera splats") {
    SplatCloud cloud;
    SplatCore s;
    s.position = {0.0, 0.0, -3.0};
    cloud.splats.push_back(s);
    const auto projected = project_splats(cloud, test_camera(), RenderParams{});
    CHECK(projected.empty());
}

TEST_CASE("project_splats orders by depth") {
    SplatCloud cloud;
    SplatCore a, b;
    a.position = {0.1, 0.0, 3.0};
    b.position = {-0.1, 0.0, 2.0};
    cloud.splats = {a, b};
    const auto projected = project_splats(cloud, test_camera(), RenderParams{});
    REQUIRE(projected.size() == 2);
    CHECK(projected[0].depth == doctest::Approx(2.0));
    CHECK(projected[0].id == 1);
    CHECK(projected[1].depth == doctest::Approx(3.0));
}

TEST_CASE("project_splats with shape 2 is bit-identical to the Gaussian path") {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        SplatCloud cloud = random_cloud(rng, 30);
        for (auto& s : cloud.splats) s.epsilon = 2.0;
        RenderParams gef;
        RenderParams gauss;
        gauss.gaussian_only = true;
        const auto a = project_splats(cloud, test_camera(), gef);
        const auto b = project_splats(cloud, test_camera(), gauss);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].mean.x == b[i].mean.x);
            CHECK(a[i].cov2[0] == b[i].cov2[0]);
            CHECK(a[i].cov2[1] == b[i].cov2[1]);
            CHECK(a[i].conic[0] == b[i].conic[0]);
            CHECK(a[i].alpha == b[i].alpha);
        }
    }
}

TEST_CASE("rasterize: empty input gives background and far depth") {
    RenderParams params;
    params.background = {0.2, 0.4, 0.6};
    const Camera cam = test_camera(20, 16);
    ImageBuffer img;
    rasterize({}, cam, params, img);
    for (int i = 0; i < 20 * 16; ++i) {
        CHECK(img.rgb[3 * i + 0] == 0.2);
        CHECK(img.rgb[3 * i + 1] == 0.4);
        CHECK(img.depth[i] == cam.far);
        CHECK(img.alpha[i] == 0.0);
    }
}

TEST_CASE("rasterize: opaque splat centered on a pixel hits its exact color") {
    const Camera cam = test_camera(21, 17);
    // Center the splat exactly on pixel (10, 8).
    const auto p = make_projected({10.5, 8.5}, 2.0, 1.0, {0.8, 0.1, 0.3}, 4.0, 0);
    RenderParams params;
    params.background = {1.0, 1.0, 1.0};
    ImageBuffer img;
    rasterize({p}, cam, params, img);
    CHECK(img.at(10, 8, 0) == 0.8);
    CHECK(img.at(10, 8, 1) == 0.1);
    CHECK(img.at(10, 8, 2) == 0.3);
    CHECK(img.depth[8 * 21 + 10] == 4.0);
    CHECK(img.alpha[8 * 21 + 10] == 1.0);
}

TEST_CASE("rasterize: hand-computed two-splat compositing") {
    const Camera cam = test_camera(16, 16);
    const auto front = make_projected({8.5, 8.5}, 1.5, 0.5, {1, 0, 0}, 2.0, 0);
    const auto back = make_projected({8.5, 8.5}, 1.5, 1.0, {0, 0, 1}, 3.0, 1);
    ImageBuffer img;
    rasterize({front, back}, cam, RenderParams{}, img);
    // C = 0.5 red + (1 - 0.5) * 1.0 blue on black background.
    CHECK(img.at(8, 8, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(img.at(8, 8, 1) == doctest::Approx(0.0));
    CHECK(img.at(8, 8, 2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("render_depth: expected depth and validity") {
    const Camera cam = test_camera(16, 16);
    RenderParams params;

    SUBCASE("single opaque splat reports its depth") {
        const auto p = make_projected({8.5, 8.5}, 2.0, 1.0, {1, 1, 1}, 4.0, 0);
        const auto dr = render_depth({p}, cam, params);
        CHECK(dr.depth[8 * 16 + 8] == 4.0);
        CHECK(dr.valid[8 * 16 + 8] == 1);
        CHECK(dr.dominant[8 * 16 + 8] == 0);
    }
    SUBCASE("uncovered pixels are invalid") {
        const auto dr = render_depth({}, cam, params);
        CHECK(dr.valid[0] == 0);
        CHECK(dr.dominant[0] == -1);
    }
    SUBCASE("two half-opaque splats blend to the expected value") {
        const auto a = make_projected({8.5, 8.5}, 2.0, 0.5, {1, 1, 1}, 2.0, 0);
        const auto b = make_projected({8.5, 8.5}, 2.0, 0.5, {1, 1, 1}, 6.0, 1);
        const auto dr = render_depth({a, b}, cam, params);
        // weights 0.5 and 0.25 -> (2*0.5 + 6*0.25) / 0.75
        CHECK(dr.depth[8 * 16 + 8] == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
        CHECK(dr.valid[8 * 16 + 8] == 1);
        CHECK(dr.dominant[8 * 16 + 8] == 0);
    }
}

TEST_CASE("tiled rasterizer matches the naive oracle bit-for-bit (scalar isa)") {
    const simd::Isa original = simd::active_isa();
    REQUIRE(simd::force_isa(simd::Isa::scalar));

    Rng rng(73);
    for (int trial = 0; trial < 6; ++trial) {
        const SplatCloud cloud = random_cloud(rng, 150);
        const Camera cam = test_camera(70, 50); // partial border tiles
        RenderParams params;
        params.background = {0.1, 0.2, 0.3};
        const auto projected = project_splats(cloud, cam, params);
        CHECK(!projected.empty());
        ImageBuffer tiled;
        rasterize(projected, cam, params, tiled);
        const ImageBuffer naive = test::render_naive(projected, cam, params);
        CHECK(tiled.rgb == naive.rgb);
        CHECK(tiled.depth == naive.depth);
        CHECK(tiled.alpha == naive.alpha);
    }
    simd::force_isa(original);
}

TEST_CASE("simd rasterization matches scalar within tolerance") {
    if (!simd::isa_supported(simd::Isa::avx2)) {
        MESSAGE("AVX2 unavailable; skipping");
        return;
    }
    Rng rng(79);
    const SplatCloud cloud = random_cloud(rng, 200);
    const Camera cam = test_camera(64, 64);
    RenderParams params;
    const auto projected = project_splats(cloud, cam, params);

    const simd::Isa original = simd::active_isa();
    ImageBuffer scalar_img, avx2_img;
    REQUIRE(simd::force_isa(simd::Isa::scalar));
    rasterize(projected, cam, params, scalar_img);
    REQUIRE(simd::force_isa(simd::Isa::avx2));
    rasterize(projected, cam, params, avx2_img);
    simd::force_isa(original);

    for (std::size_t i = 0; i < scalar_img.rgb.size(); ++i)
        CHECK(avx2_img.rgb[i] == doctest::Approx(scalar_img.rgb[i]).epsilon(1e-10));
}

TEST_CASE("rendering is deterministic and obeys the energy bound") {
    Rng rng(83);
    const SplatCloud cloud = random_cloud(rng, 120);
    const Camera cam = test_camera(40, 30);
    RenderParams params;
    params.background = {0.5, 0.5, 0.5};
    const ImageBuffer a = render(cloud, cam, params);
    const ImageBuffer b = render(cloud, cam, params);
    CHECK(a.rgb == b.rgb);
    for (double v : a.rgb) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("equal-depth splats composite in id order") {
    const Camera cam = test_camera(16, 16);
    SplatCloud cloud;
    SplatCore a, b;
    a.position = {0.0, 0.0, 3.0};
    b.position = {0.0, 0.0, 3.0};
    a.color = {1.0, 0.0, 0.0};
    b.color = {0.0, 0.0, 1.0};
    a.set_opacity(0.6);
    b.set_opacity(0.6);
    a.set_scale({0.1, 0.1, 0.1});
    b.set_scale({0.1, 0.1, 0.1});
    cloud.splats = {a, b};
    const auto projected = project_splats(cloud, cam, RenderParams{});
    REQUIRE(projected.size() == 2);
    CHECK(projected[0].id == 0);
    CHECK(projected[1].id == 1);

    // Red in front (id 0) dominates the red channel.
    ImageBuffer img;
    rasterize(projected, cam, RenderParams{}, img);
    const Vec2 mean = projected[0].mean;
    const int px = int(mean.x), py = int(mean.y);
    CHECK(img.at(px, py, 0) > img.at(px, py, 2));
}

TEST_CASE("doubling resolution keeps per-splat footprint mass within 2%") {
    Rng rng(89);
    SplatCloud cloud;
    // Splats large enough on screen that the 0.3 px^2 floor is negligible.
    for (int i = 0; i < 12; ++i) {
        SplatCore s;
        s.position = {rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3),
                      rng.uniform(2.5, 3.5)};
        s.set_scale({rng.uniform(0.25, 0.4), rng.uniform(0.25, 0.4),
                     rng.uniform(0.25, 0.4)});
        s.rotation =
            Quat{rng.normal(), rng.normal(), rng.normal(), rng.normal()}.normalized();
        s.set_opacity(0.7);
        cloud.splats.push_back(s);
    }
    Camera base = test_camera(64, 48);
    base.fx = base.fy = 1.6 * base.width;
    const Camera fine = base.scaled_to(128, 96);
    RenderParams params;
    const auto proj_base = project_splats(cloud, base, params);
    const auto proj_fine = project_splats(cloud, fine, params);
    REQUIRE(proj_base.size() == cloud.size());
    REQUIRE(proj_fine.size() == cloud.size());

    const auto mass = [](const ProjectedSplat& p, double pixel_area) {
        double sum = 0.0;
        const int bx0 = int(std::floor(p.mean.x - p.radius));
        const int bx1 = int(std::floor(p.mean.x + p.radius));
        const int by0 = int(std::floor(p.mean.y - p.radius));
        const int by1 = int(std::floor(p.mean.y + p.radius));
        for (int y = by0; y <= by1; ++y)
            for (int x = bx0; x <= bx1; ++x) {
                const double dx = (x + 0.5) - p.mean.x;
                const double dy = (y + 0.5) - p.mean.y;
                const double power =
                    -0.5 * (p.conic[0] * dx * dx + p.conic[2] * dy * dy) -
                    p.conic[1] * dx * dy;
                sum += p.alpha * std::exp(std::min(power, 0.0));
            }
        return sum * pixel_area;
    };

    for (std::size_t i = 0; i < proj_base.size(); ++i) {
        // Projected lists are sorted the same way (same depths/ids).
        const double m1 = mass(proj_base[i], 1.0);
        const double m2 = mass(proj_fine[i], 0.25);
        CHECK(m2 == doctest::Approx(m1).epsilon(0.02));
    }
}
