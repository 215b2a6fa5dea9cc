#include "ehvi/fronts.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace ehvi;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

double surface_residual(FrontShape shape, const ObjectiveVector& f,
                        const std::vector<double>& radii) {
    const int m = static_cast<int>(f.size());
    switch (shape) {
        case FrontShape::LINEAR: {
            double s = 0.0;
            for (double v : f) s += v;
            return std::abs(s - 0.5);
        }
        case FrontShape::CONCAVE_SPHERE: {
            double s = 0.0;
            for (double v : f) s += v * v;
            return std::abs(s - 1.0);
        }
        case FrontShape::CONCAVE_ELLIPSOID: {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += (f[i] / radii[i]) * (f[i] / radii[i]);
            return std::abs(s - 1.0);
        }
        case FrontShape::CONVEX: {
            double s = 0.0;
            for (double v : f) s += (1.0 - v) * (1.0 - v);
            return std::abs(s - 1.0);
        }
        case FrontShape::DISCONNECTED: {
            ObjectiveVector head(f.begin(), f.end() - 1);
            head.push_back(0.0);
            return std::abs(f[m - 1] - detail::disconnected_last(head, m));
        }
    }
    return 1.0;
}

}  // namespace

TEST(GenerateFront, LinearTwoObjectiveSpacing) {
    RngStream rng(1);
    const auto pts = generate_front_points({FrontShape::LINEAR, 2, 3, {}}, rng);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0], (ObjectiveVector{0.0, 0.5}));
    EXPECT_EQ(pts[1], (ObjectiveVector{0.25, 0.25}));
    EXPECT_EQ(pts[2], (ObjectiveVector{0.5, 0.0}));
}

TEST(GenerateFront, SurfaceResiduals) {
    RngStream rng(3);
    for (FrontShape shape : {FrontShape::LINEAR, FrontShape::CONCAVE_SPHERE,
                             FrontShape::CONCAVE_ELLIPSOID, FrontShape::CONVEX,
                             FrontShape::DISCONNECTED}) {
        for (int m : {2, 3}) {
            FrontSpec spec{shape, m, 40, {}};
            std::vector<double> radii;
            for (int i = 1; i <= m; ++i) radii.push_back(2.0 * i);
            const auto pts = generate_front_points(spec, rng);
            ASSERT_GE(pts.size(), 2u) << shape_name(shape) << " m=" << m;
            for (const auto& f : pts)
                ASSERT_LE(surface_residual(shape, f, radii), 1e-10)
                    << shape_name(shape) << " m=" << m;
        }
    }
}

TEST(GenerateFront, ProducesValidFrontSets) {
    RngStream rng(5);
    for (FrontShape shape : {FrontShape::LINEAR, FrontShape::CONCAVE_SPHERE,
                             FrontShape::CONCAVE_ELLIPSOID, FrontShape::CONVEX,
                             FrontShape::DISCONNECTED}) {
        for (int m : {2, 3}) {
            EXPECT_NO_THROW({
                const ParetoFrontSet f = generate_front({shape, m, 30, {}}, rng);
                EXPECT_GE(f.size(), 2u);
            }) << shape_name(shape) << " m=" << m;
        }
    }
}

TEST(GenerateFront, DisconnectedHasGaps) {
    RngStream rng(7);
    const auto pts = generate_front_points({FrontShape::DISCONNECTED, 2, 100, {}}, rng);
    std::vector<double> f1;
    for (const auto& p : pts) f1.push_back(p[0]);
    std::sort(f1.begin(), f1.end());
    int clusters = 1;
    for (std::size_t i = 1; i < f1.size(); ++i)
        if (f1[i] - f1[i - 1] > 0.1) ++clusters;
    EXPECT_GE(clusters, 2);
}

TEST(GenerateFront, InvalidSpecs) {
    RngStream rng(1);
    EXPECT_THROW(generate_front_points({FrontShape::LINEAR, 1, 10, {}}, rng), InvalidSpec);
    EXPECT_THROW(generate_front_points({FrontShape::LINEAR, 2, 0, {}}, rng), InvalidSpec);
    EXPECT_THROW(
        generate_front_points({FrontShape::CONCAVE_ELLIPSOID, 2, 10, {2.0}}, rng),
        InvalidSpec);
    EXPECT_THROW(
        generate_front_points({FrontShape::CONCAVE_ELLIPSOID, 2, 10, {2.0, -1.0}}, rng),
        InvalidSpec);
}

TEST(NondominatedFilter, Examples) {
    const std::vector<ObjectiveVector> mixed = {{1, 2}, {2, 1}, {2, 2}};
    EXPECT_EQ(nondominated_filter(mixed),
              (std::vector<ObjectiveVector>{{1, 2}, {2, 1}}));

    const std::vector<ObjectiveVector> clean = {{3, 0}, {0, 3}, {1, 1}};
    EXPECT_EQ(nondominated_filter(clean), clean);  // stable order

    const std::vector<ObjectiveVector> dupes = {{1, 1}, {1, 1}, {1, 1}};
    EXPECT_EQ(nondominated_filter(dupes), (std::vector<ObjectiveVector>{{1, 1}}));
}

TEST(ReferencePoint, Policies) {
    const std::vector<ObjectiveVector> pts = {{0, 1}, {1, 0}};
    const ObjectiveVector nadir_ref =
        reference_point(pts, ReferencePolicy::NADIR_PLUS_MARGIN, 0.1);
    EXPECT_NEAR(nadir_ref[0], 1.1, 1e-15);
    EXPECT_NEAR(nadir_ref[1], 1.1, 1e-15);

    const ObjectiveVector box_ref = reference_point(pts, ReferencePolicy::BOX_UPPER);
    EXPECT_NEAR(box_ref[0], 1.3, 1e-15);
    EXPECT_NEAR(box_ref[1], 1.3, 1e-15);

    EXPECT_THROW(reference_point(pts, ReferencePolicy::NADIR_PLUS_MARGIN, 0.0),
                 ReferenceNotDominated);
    EXPECT_THROW(reference_point({{0.5, 0.5}}, ReferencePolicy::BOX_UPPER),
                 DegenerateSpan);
}

TEST(FrontIo, CsvRoundTrip) {
    const std::string path = temp_path("ehvi_front_roundtrip.csv");
    RngStream rng(9);
    const auto pts = generate_front_points({FrontShape::CONCAVE_SPHERE, 3, 20, {}}, rng);
    save_front(pts, path);
    const auto back = load_front_points(path);
    ASSERT_EQ(back.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ASSERT_EQ(back[i], pts[i]);
    std::filesystem::remove(path);
}

TEST(FrontIo, TwoPointCsvAndHeader) {
    const std::string path = temp_path("ehvi_front_simple.csv");
    {
        std::ofstream out(path);
        out << "f1,f2\n0.0,1.0\n1.0,0.0\n";
    }
    const auto pts = load_front_points(path);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0], (ObjectiveVector{0.0, 1.0}));
    EXPECT_EQ(pts[1], (ObjectiveVector{1.0, 0.0}));
    const ParetoFrontSet front = load_front(path);
    EXPECT_NEAR(front.reference()[0], 1.3, 1e-15);
    std::filesystem::remove(path);
}

TEST(FrontIo, ParseErrors) {
    EXPECT_THROW(load_front_points(temp_path("ehvi_does_not_exist.csv")), ParseError);
    const std::string path = temp_path("ehvi_front_bad.csv");
    {
        std::ofstream out(path);
        out << "0.0,1.0\n1.0,zebra\n";
    }
    EXPECT_THROW(load_front_points(path), ParseError);
    {
        std::ofstream out(path);
        out << "0.0,1.0\n1.0\n";
    }
    EXPECT_THROW(load_front_points(path), ParseError);
    std::filesystem::remove(path);
}
