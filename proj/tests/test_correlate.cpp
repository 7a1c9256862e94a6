#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "peaksync/correlate.hpp"

using namespace peaksync;

namespace {

Matrix random_matrix(std::uint64_t seed, std::size_t r, std::size_t m) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    Matrix out(r, m);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < m; ++t) out(i, t) = d(gen);
    return out;
}

std::vector<double> row_vector(const Matrix& m, std::size_t i) { return {m.row(i).begin(), m.row(i).end()}; }

MultiChannelRecord as_record(Matrix m) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < m.rows(); ++k) labels.push_back("c" + std::to_string(k));
    return {std::move(labels), std::move(m), 256.0};
}

}  // namespace

TEST(CorrMatrix, IdenticalRows) {
    Matrix m(2, 50);
    for (std::size_t t = 0; t < 50; ++t) m(0, t) = m(1, t) = std::sin(0.3 * static_cast<double>(t));
    const auto c = corr_matrix(m);
    EXPECT_EQ(c(0, 0), 1.0);
    EXPECT_NEAR(c(0, 1), 1.0, 1e-15);
    EXPECT_EQ(c(0, 1), c(1, 0));
}

TEST(CorrMatrix, NegatedRows) {
    auto m = random_matrix(1, 2, 64);
    for (std::size_t t = 0; t < 64; ++t) m(1, t) = -m(0, t);
    EXPECT_NEAR(corr_matrix(m)(0, 1), -1.0, 1e-15);
}

TEST(CorrMatrix, MatchesTwoPassPearson) {
    const auto m = random_matrix(2, 3, 256);
    const auto c = corr_matrix(m);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double expected = i == j ? 1.0 : oracle::pearson(row_vector(m, i), row_vector(m, j));
            EXPECT_NEAR(c(i, j), expected, 1e-12);
        }
}

TEST(CorrMatrix, ConstantRowConvention) {
    auto m = random_matrix(3, 3, 40);
    for (std::size_t t = 0; t < 40; ++t) m(1, t) = 2.5;
    const auto c = corr_matrix(m);
    EXPECT_EQ(c(1, 1), 1.0);
    EXPECT_EQ(c(0, 1), 0.0);
    EXPECT_EQ(c(1, 2), 0.0);
    EXPECT_NE(c(0, 2), 0.0);
}

TEST(CorrMatrix, NeedsTwoSamples) { EXPECT_THROW(corr_matrix(Matrix(2, 1)), ValidationError); }

TEST(Eigenvalues, TwoByTwoAnalytic) {
    for (double rho : {-0.9, -0.3, 0.0, 0.45, 0.999}) {
        Matrix a(2, 2, 1.0);
        a(0, 1) = a(1, 0) = rho;
        const auto eig = symmetric_eigenvalues(a);
        EXPECT_NEAR(eig[0], 1.0 + std::abs(rho), 1e-12);
        EXPECT_NEAR(eig[1], 1.0 - std::abs(rho), 1e-12);
    }
}

TEST(Eigenvalues, ThreeByThreeMatchesCubic) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto c = corr_matrix(random_matrix(seed, 3, 30));
        std::array<std::array<double, 3>, 3> a{};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) a[i][j] = c(i, j);
        const auto expected = oracle::symmetric3_eigenvalues(a);
        const auto eig = symmetric_eigenvalues(c);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(eig[i], expected[i], 1e-8) << seed;
    }
}

TEST(Eigenvalues, DiagonalAndDescending) {
    Matrix a(4, 4);
    a(0, 0) = 0.5;
    a(1, 1) = 3.0;
    a(2, 2) = -1.0;
    a(3, 3) = 2.0;
    EXPECT_EQ(symmetric_eigenvalues(a), (std::vector<double>{3.0, 2.0, 0.5, -1.0}));
}

TEST(EigenTrack, IdenticalChannels) {
    Matrix m(4, 600);
    const auto base = random_matrix(4, 1, 600);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t t = 0; t < 600; ++t) m(k, t) = base(0, t);
    const auto rec = as_record(std::move(m));
    const auto track = eigen_track(rec, rec.labels(), 128, 32);
    ASSERT_EQ(track.eigenvalues.size(), (600 - 128) / 32 + 1);
    for (const auto& eig : track.eigenvalues) {
        EXPECT_NEAR(eig[0], 4.0, 1e-12);
        for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(eig[i], 0.0, 1e-12);
    }
}

TEST(EigenTrack, TwoChannelsExactCorrelation) {
    auto m = random_matrix(5, 2, 256);
    const auto rec = as_record(m);
    const auto track = eigen_track(rec, {"c0", "c1"}, 64, 64);
    for (std::size_t w = 0; w < track.eigenvalues.size(); ++w) {
        const std::size_t start = w * 64;
        std::vector<double> a(m.row(0).begin() + static_cast<std::ptrdiff_t>(start),
                              m.row(0).begin() + static_cast<std::ptrdiff_t>(start + 64));
        std::vector<double> b(m.row(1).begin() + static_cast<std::ptrdiff_t>(start),
                              m.row(1).begin() + static_cast<std::ptrdiff_t>(start + 64));
        const double rho = std::abs(oracle::pearson(a, b));
        EXPECT_NEAR(track.eigenvalues[w][0], 1.0 + rho, 1e-12);
        EXPECT_NEAR(track.eigenvalues[w][1], 1.0 - rho, 1e-12);
    }
}

TEST(EigenTrack, InvariantsOnRandomRecords) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t r = 2 + seed % 5;
        const auto rec = as_record(random_matrix(seed, r, 1000));
        const auto track = eigen_track(rec, rec.labels(), 100 + seed, 37);
        for (std::size_t w = 0; w < track.eigenvalues.size(); ++w) {
            const auto& eig = track.eigenvalues[w];
            ASSERT_EQ(eig.size(), r);
            EXPECT_TRUE(std::is_sorted(eig.begin(), eig.end(), std::greater<>()));
            EXPECT_GE(eig.back(), -1e-9);
            EXPECT_GE(eig.front(), 1.0 - 1e-12);
            EXPECT_LE(eig.front(), static_cast<double>(r) + 1e-12);
            EXPECT_NEAR(std::accumulate(eig.begin(), eig.end(), 0.0), static_cast<double>(r), 1e-9);
            EXPECT_EQ(track.window_centers[w], w * 37 + (100 + seed) / 2);
        }
    }
}

TEST(EigenTrack, ChannelOrderDoesNotMatter) {
    const auto rec = as_record(random_matrix(11, 4, 800));
    const auto a = eigen_track(rec, {"c0", "c1", "c2", "c3"}, 200, 100);
    const auto b = eigen_track(rec, {"c2", "c0", "c3", "c1"}, 200, 100, 3);
    ASSERT_EQ(a.eigenvalues.size(), b.eigenvalues.size());
    for (std::size_t w = 0; w < a.eigenvalues.size(); ++w)
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a.eigenvalues[w][i], b.eigenvalues[w][i], 1e-12);
}

TEST(EigenTrack, ConstantWindowTraceStillEqualsR) {
    Matrix m(3, 256);
    auto noise = random_matrix(12, 3, 256);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t t = 0; t < 256; ++t) m(k, t) = k == 1 ? 0.0 : noise(k, t);
    const auto rec = as_record(std::move(m));
    const auto track = eigen_track(rec, rec.labels(), 64, 64);
    for (const auto& eig : track.eigenvalues) EXPECT_NEAR(std::accumulate(eig.begin(), eig.end(), 0.0), 3.0, 1e-9);
}

TEST(EigenTrack, Errors) {
    const auto rec = as_record(random_matrix(13, 3, 100));
    EXPECT_THROW(eigen_track(rec, rec.labels(), 101, 10), ValidationError);
    EXPECT_THROW(eigen_track(rec, {"c0"}, 10, 10), ValidationError);
    EXPECT_THROW(eigen_track(rec, rec.labels(), 10, 0), ValidationError);
    EXPECT_THROW(eigen_track(rec, {"c0", "nope"}, 10, 10), ValidationError);
}
