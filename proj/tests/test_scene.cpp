// Copyright (c) 2026 The gesplat Authors
// SPDX-License-Identifier: Apache-2.0

#include "gesplat/scene.hpp"

#include "gesplat/densify.hpp"
#include "gesplat/errors.hpp"
#include "gesplat/gef.hpp"
#include "gesplat/kdtree.hpp"
#include "gesplat/ply_io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace gesplat;

TEST_CASE("init_from_points single point") {
    const auto cloud = init_from_points({{{0, 0, 0}, {1, 0, 0}}});
    REQUIRE(cloud.size() == 1);
    CHECK(cloud[0].position.x == 0.0);
    CHECK(cloud[0].epsilon == 2.0);
    CHECK(cloud[0].opacity() == doctest::Approx(0.1));
    CHECK(cloud[0].rotation.w == 1.0);
}

TEST_CASE("init_from_points on unit cube corners uses neighbor distances") {
    std::vector<std::pair<Vec3, Vec3>> pts;
    for (int i = 0; i < 8; ++i)
        pts.push_back({{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)},
                       {0.5, 0.5, 0.5}});
    const auto cloud = init_from_points(pts);
    REQUIRE(cloud.size() == 8);
    // Every corner's 3 nearest are the edge-adjacent corners at distance 1.
    for (const auto& s : cloud.splats) {
        CHECK(s.scale().x == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.scale().y == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("init_from_points structural invariants on random input") {
    Rng rng(5);
    std::vector<std::pair<Vec3, Vec3>> pts;
    for (int i = 0; i < 1000; ++i)
        pts.push_back({rng.normal3(), {rng.uniform(), rng.uniform(), rng.uniform()}});
    const auto cloud = init_from_points(pts);
    REQUIRE(cloud.size() == 1000);
    CHECK(cloud.all_finite());
    for (const auto& s : cloud.splats) {
        CHECK(s.scale().min_coeff() > 0.0);
        CHECK(s.opacity() > 0.0);
        CHECK(s.opacity() < 1.0);
        CHECK(std::abs(s.rotation.norm() - 1.0) < 1e-12);
    }
    CHECK(scene_extent(cloud) > 0.0);
}

TEST_CASE("init_from_points rejects empty input") {
    CHECK_THROWS_AS(init_from_points({}), ValidationError);
}

TEST_CASE("knn on collinear points") {
    KnnIndex index;
    index.build(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {5, 0, 0}});
    const auto got = index.query({0.4, 0.0, 0.0}, 2);
    REQUIRE(got.size() == 2);
    CHECK(got[0] == 0);
    CHECK(got[1] == 1);
}

TEST_CASE("knn self-exclusion flag") {
    KnnIndex index;
    index.build(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    const auto with_self = index.query({0, 0, 0}, 1);
    REQUIRE(with_self.size() == 1);
    CHECK(with_self[0] == 0);
    const auto without = index.query({0, 0, 0}, 1, /*exclude=*/0);
    REQUIRE(without.size() == 1);
    CHECK(without[0] == 1);
}

TEST_CASE("knn k larger than candidate count returns everything") {
    KnnIndex index;
    index.build(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}});
    CHECK(index.query({0, 0, 0}, 16, 0).size() == 1);
    CHECK(index.query({0, 0, 0}, 16).size() == 2);
}

TEST_CASE("knn equals exhaustive scan on randomized instances") {
    Rng rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 50 + static_cast<int>(rng.uniform(0.0, 1950.0));
        std::vector<Vec3> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) {
            // Quantized coordinates force distance ties.
            const double q = 0.25;
            pts.push_back({q * std::round(rng.uniform(-8.0, 8.0) / q),
                           q * std::round(rng.uniform(-8.0, 8.0) / q),
                           q * std::round(rng.uniform(-8.0, 8.0) / q)});
        }
        KnnIndex index;
        index.build(pts);
        for (int qi = 0; qi < 30; ++qi) {
            const Vec3 x{rng.uniform(-9.0, 9.0), rng.uniform(-9.0, 9.0),
                         rng.uniform(-9.0, 9.0)};
            const int k = 1 + static_cast<int>(rng.uniform(0.0, 20.0));
            const int exclude = rng.uniform() < 0.3 ? int(rng.next_index(n)) : -1;
            const auto got = index.query(x, k, exclude);
            const auto want = test::knn_brute_force(pts, x, k, exclude);
            CHECK(got == want);
        }
    }
}

TEST_CASE("ply round-trip is field-exact") {
    Rng rng(23);
    SplatCloud cloud;
    for (int i = 0; i < 100; ++i) {
        SplatCore s = test::random_splat(rng);
        for (auto& v : s.sh1) v = rng.uniform(-0.2, 0.2);
        cloud.splats.push_back(s);
    }

    const auto bytes = save_ply_bytes(cloud);
    const auto loaded = load_ply_bytes(bytes);
    CHECK(loaded.warnings.empty());
    REQUIRE(loaded.cloud.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& a = cloud[i];
        const auto& b = loaded.cloud[i];
        CHECK(a.position.x == b.position.x);
        CHECK(a.position.y == b.position.y);
        CHECK(a.position.z == b.position.z);
        for (int k = 0; k < 4; ++k) CHECK(a.rotation[k] == b.rotation[k]);
        for (int k = 0; k < 3; ++k) CHECK(a.log_scale[k] == b.log_scale[k]);
        CHECK(a.opacity_logit == b.opacity_logit);
        CHECK(a.epsilon == b.epsilon);
        for (int k = 0; k < 3; ++k) CHECK(a.color[k] == b.color[k]);
        for (int k = 0; k < 9; ++k) CHECK(a.sh1[k] == b.sh1[k]);
    }
}

TEST_CASE("ply without shape property imports as Gaussians with a warning") {
    SplatCloud cloud;
    cloud.splats.push_back(SplatCore{});
    auto bytes = save_ply_bytes(cloud);

    // Rewrite the header without the shape property and drop its 8 payload
    // bytes from the single vertex row.
    std::string text(bytes.begin(), bytes.end());
    const auto prop_pos = text.find("property double shape\n");
    REQUIRE(prop_pos != std::string::npos);
    text.erase(prop_pos, std::string("property double shape\n").size());
    text.resize(text.size() - sizeof(double));
    const std::vector<std::uint8_t> stripped(text.begin(), text.end());

    const auto loaded = load_ply_bytes(stripped);
    REQUIRE(loaded.cloud.size() == 1);
    CHECK(loaded.cloud[0].epsilon == 2.0);
    REQUIRE(loaded.warnings.size() == 1);
    CHECK(loaded.warnings[0].find("shape") != std::string::npos);
}

TEST_CASE("ply with truncated payload reports the offending vertex") {
    SplatCloud cloud;
    for (int i = 0; i < 10; ++i) cloud.splats.push_back(SplatCore{});
    auto bytes = save_ply_bytes(cloud);
    bytes.resize(bytes.size() - 24 * sizeof(double)); // drop exactly one vertex
    try {
        load_ply_bytes(bytes);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("truncated vertex data") != std::string::npos);
    }
}

TEST_CASE("ply malformed header is rejected") {
    const std::string junk = "not a ply\n";
    CHECK_THROWS_AS(load_ply_bytes(std::vector<std::uint8_t>(junk.begin(), junk.end())),
                    IoError);
}

TEST_CASE("densify: quiet iteration leaves the cloud untouched") {
    Rng rng(31);
    SplatCloud cloud;
    for (int i = 0; i < 20; ++i) cloud.splats.push_back(test::random_splat(rng));
    cloud.generation = 7;
    std::vector<double> grads(cloud.size(), 0.0);
    DensifyConfig cfg;
    const auto summary =
        densify_and_prune(cloud, grads, cfg, /*iteration=*/600, 10.0, rng);
    CHECK_FALSE(summary.any_edit());
    CHECK(cloud.generation == 7);
    CHECK(cloud.size() == 20);
}

TEST_CASE("densify: low-opacity splats are pruned") {
    Rng rng(37);
    SplatCloud cloud;
    for (int i = 0; i < 5; ++i) cloud.splats.push_back(test::random_splat(rng));
    cloud.splats[2].set_opacity(0.001);
    std::vector<double> grads(cloud.size(), 0.0);
    DensifyConfig cfg;
    cfg.opacity_prune_threshold = 0.005;
    std::vector<int> old_of_new;
    const auto summary =
        densify_and_prune(cloud, grads, cfg, 600, 10.0, rng, &old_of_new);
    CHECK(summary.pruned == 1);
    CHECK(cloud.size() == 4);
    CHECK(old_of_new == std::vector<int>{0, 1, 3, 4});
}

TEST_CASE("densify: split produces two shrunken children inside the footprint") {
    Rng rng(41);
    SplatCloud cloud;
    SplatCore parent;
    parent.position = {1.0, 2.0, 3.0};
    parent.set_scale({1.6, 1.6, 1.6});
    parent.set_opacity(0.8);
    cloud.splats.push_back(parent);

    std::vector<double> grads{1.0}; // far above threshold
    DensifyConfig cfg;
    cfg.clone_size_fraction = 0.01;
    const auto summary = densify_and_prune(cloud, grads, cfg, 600, /*extent=*/1.0, rng);
    CHECK(summary.split == 1);
    REQUIRE(cloud.size() == 2);
    for (const auto& child : cloud.splats) {
        CHECK(child.scale().x == doctest::Approx(1.0).epsilon(1e-12));
        // Inside the parent's 3-sigma ellipsoid.
        const Vec3 d = child.position - parent.position;
        CHECK(d.norm() <= 3.0 * 1.6 + 1e-9);
    }
}

TEST_CASE("densify: small hot splats are cloned") {
    Rng rng(43);
    SplatCloud cloud;
    SplatCore s;
    s.set_scale({0.001, 0.001, 0.001});
    s.set_opacity(0.5);
    cloud.splats.push_back(s);
    std::vector<double> grads{1.0};
    DensifyConfig cfg;
    const auto summary = densify_and_prune(cloud, grads, cfg, 600, 1.0, rng);
    CHECK(summary.cloned == 1);
    CHECK(cloud.size() == 2);
}

TEST_CASE("densify: opacity and shape resets") {
    Rng rng(47);
    SplatCloud cloud;
    for (int i = 0; i < 10; ++i) {
        SplatCore s = test::random_splat(rng);
        s.set_opacity(0.9);
        s.epsilon = 4.2;
        cloud.splats.push_back(s);
    }
    DensifyConfig cfg;
    const std::vector<double> grads(cloud.size(), 0.0);

    auto summary = densify_and_prune(cloud, grads, cfg, 3000, 1.0, rng);
    CHECK(summary.opacity_reset);
    CHECK(summary.shape_reset); // 3000 is also a shape-reset boundary
    for (const auto& s : cloud.splats) {
        CHECK(s.opacity() <= 0.05 + 1e-12);
        CHECK(s.epsilon == 2.0);
    }
}

TEST_CASE("densify: never grows without gradient pressure and never emits NaN") {
    Rng rng(53);
    SplatCloud cloud;
    for (int i = 0; i < 64; ++i) cloud.splats.push_back(test::random_splat(rng));
    const std::size_t before = cloud.size();
    std::vector<double> grads(cloud.size(), 1e-6);
    DensifyConfig cfg;
    for (int it = 100; it <= 1200; it += 100) {
        std::vector<double> g(cloud.size(), 1e-6);
        densify_and_prune(cloud, g, cfg, it, 1.0, rng);
        CHECK(cloud.size() <= before);
        CHECK(cloud.all_finite());
    }
}
