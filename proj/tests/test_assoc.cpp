#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "uavtrack/assoc.hpp"
#include "uavtrack/rng.hpp"

using namespace uavtrack;

namespace {

// Oracle: exhaustive search over all permutations. Assigns min(rows, cols)
// pairs, minimizing total cost; first lexicographically-smallest optimum wins.
double brute_force_min_cost(const CostMatrix& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    const bool transpose = n > m;
    const int small = std::min(n, m), big = std::max(n, m);

    std::vector<int> perm(big);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < small; ++i) {
            total += transpose ? cost(perm[i], i) : cost(i, perm[i]);
        }
        if (total < best) best = total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

CostMatrix random_matrix(SplitMix64& rng, int rows, int cols) {
    CostMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.next_double();
    }
    return m;
}

double total_cost(const CostMatrix& cost, const Assignment& a) {
    double sum = 0.0;
    for (const auto& [r, c] : a.matches) sum += cost(r, c);
    return sum;
}

} // namespace

TEST(IouCost, Fixtures) {
    const std::vector<BoundingBox> tracks{{0, 0, 10, 10}, {0, 0, 2, 2}};
    const std::vector<BoundingBox> dets{{0, 0, 10, 10}, {50, 50, 2, 2}, {1, 0, 2, 2}};
    const CostMatrix c = iou_cost(tracks, dets);
    EXPECT_DOUBLE_EQ(c(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(c(0, 1), 1.0);
    EXPECT_NEAR(c(1, 2), 2.0 / 3.0, 1e-15);
}

TEST(EmbeddingCost, CosineScaling) {
    EmbeddingVector a(2), b(2), c(2);
    a << 1, 0;
    b << -1, 0;
    c << 0, 1;
    const CostMatrix m = embedding_cost({a}, {a, b, c});
    EXPECT_DOUBLE_EQ(m(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(m(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(m(0, 2), 0.5);
}

TEST(EmbeddingCost, DimensionMismatchNamesBoth) {
    EmbeddingVector a(3), b(5);
    a.setZero();
    a(0) = 1;
    b.setZero();
    b(0) = 1;
    try {
        embedding_cost({a}, {b});
        FAIL() << "expected exception";
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find('3'), std::string::npos);
        EXPECT_NE(msg.find('5'), std::string::npos);
    }
}

TEST(NormalizeEmbedding, Errors) {
    EmbeddingVector zero(4);
    zero.setZero();
    EXPECT_THROW(normalize_embedding(zero), std::invalid_argument);

    EmbeddingVector v(2);
    v << 3, 4;
    EXPECT_NEAR(normalize_embedding(v).norm(), 1.0, 1e-15);
}

TEST(FuseCosts, GateFixtures) {
    CostMatrix iou_c(1, 1), emb_c(1, 1);

    iou_c << 0.2;
    emb_c << 0.1;
    EXPECT_DOUBLE_EQ(fuse_costs(iou_c, emb_c, 0.5, 0.25)(0, 0), 0.1);

    iou_c << 0.9; // proximity gate fires
    emb_c << 0.05;
    EXPECT_DOUBLE_EQ(fuse_costs(iou_c, emb_c, 0.5, 0.25)(0, 0), 0.9);

    iou_c << 0.3;
    emb_c << 0.4; // appearance gate fires
    EXPECT_DOUBLE_EQ(fuse_costs(iou_c, emb_c, 0.5, 0.25)(0, 0), 0.3);
}

TEST(FuseCosts, NeverExceedsIouCost) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const CostMatrix iou_c = random_matrix(rng, 4, 5);
        const CostMatrix emb_c = random_matrix(rng, 4, 5);
        const CostMatrix fused = fuse_costs(iou_c, emb_c, 0.5, 0.25);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 5; ++j) EXPECT_LE(fused(i, j), iou_c(i, j));
        }
    }
}

TEST(FuseCosts, ShapeMismatch) {
    EXPECT_THROW(fuse_costs(CostMatrix(2, 2), CostMatrix(2, 3), 0.5, 0.25), std::invalid_argument);
}

TEST(LinearAssignment, Fixtures) {
    CostMatrix single(1, 1);
    single << 0.1;
    const Assignment a = linear_assignment(single, 0.8);
    ASSERT_EQ(a.matches.size(), 1u);
    EXPECT_EQ(a.matches[0], std::make_pair(0, 0));

    CostMatrix diag(2, 2);
    diag << 0.1, 0.9, 0.9, 0.1;
    const Assignment b = linear_assignment(diag, 0.8);
    ASSERT_EQ(b.matches.size(), 2u);
    EXPECT_EQ(b.matches[0], std::make_pair(0, 0));
    EXPECT_EQ(b.matches[1], std::make_pair(1, 1));

    CostMatrix over(1, 1);
    over << 0.95;
    const Assignment c = linear_assignment(over, 0.8);
    EXPECT_TRUE(c.matches.empty());
    EXPECT_EQ(c.unmatched_rows, std::vector<int>{0});
    EXPECT_EQ(c.unmatched_cols, std::vector<int>{0});
}

TEST(LinearAssignment, EmptyMatrix) {
    const Assignment a = linear_assignment(CostMatrix(0, 3), 0.8);
    EXPECT_TRUE(a.matches.empty());
    EXPECT_EQ(a.unmatched_cols.size(), 3u);
}

TEST(LinearAssignment, MatchesBruteForceOnRandomMatrices) {
    SplitMix64 rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = 1 + static_cast<int>(rng.next_below(7));
        const int cols = 1 + static_cast<int>(rng.next_below(7));
        const CostMatrix cost = random_matrix(rng, rows, cols);

        const Assignment a = linear_assignment(cost, 1e9);
        EXPECT_EQ(a.matches.size(), static_cast<std::size_t>(std::min(rows, cols)));
        EXPECT_EQ(total_cost(cost, a), brute_force_min_cost(cost))
            << "trial " << trial << " " << rows << "x" << cols;
    }
}

TEST(LinearAssignment, PartitionInvariant) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = static_cast<int>(rng.next_below(6));
        const int cols = static_cast<int>(rng.next_below(6));
        const CostMatrix cost = random_matrix(rng, rows, cols);
        const Assignment a = linear_assignment(cost, 0.7);

        std::vector<bool> row_seen(rows, false), col_seen(cols, false);
        for (const auto& [r, c] : a.matches) {
            EXPECT_FALSE(row_seen[r]);
            EXPECT_FALSE(col_seen[c]);
            row_seen[r] = true;
            col_seen[c] = true;
            EXPECT_LE(cost(r, c), 0.7);
        }
        for (int r : a.unmatched_rows) {
            EXPECT_FALSE(row_seen[r]);
            row_seen[r] = true;
        }
        for (int c : a.unmatched_cols) {
            EXPECT_FALSE(col_seen[c]);
            col_seen[c] = true;
        }
        EXPECT_TRUE(std::all_of(row_seen.begin(), row_seen.end(), [](bool b) { return b; }));
        EXPECT_TRUE(std::all_of(col_seen.begin(), col_seen.end(), [](bool b) { return b; }));
    }
}

TEST(LinearAssignment, ColumnPermutationEquivariance) {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(5));
        const CostMatrix cost = random_matrix(rng, n, n);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng.next_below(i + 1)]);
        }
        CostMatrix permuted(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) permuted(i, perm[j]) = cost(i, j);
        }

        const Assignment base = linear_assignment(cost, 1e9);
        const Assignment shuffled = linear_assignment(permuted, 1e9);
        ASSERT_EQ(base.matches.size(), shuffled.matches.size());
        for (std::size_t k = 0; k < base.matches.size(); ++k) {
            EXPECT_EQ(base.matches[k].first, shuffled.matches[k].first);
            EXPECT_EQ(perm[base.matches[k].second], shuffled.matches[k].second);
        }
    }
}

TEST(LinearAssignment, ForbiddenEntriesNeverMatched) {
    CostMatrix cost(2, 2);
    cost << kForbiddenCost, 0.3, 0.2, kForbiddenCost;
    const Assignment a = linear_assignment(cost, 0.9);
    ASSERT_EQ(a.matches.size(), 2u);
    EXPECT_EQ(a.matches[0], std::make_pair(0, 1));
    EXPECT_EQ(a.matches[1], std::make_pair(1, 0));

    CostMatrix all_forbidden = CostMatrix::Constant(2, 2, kForbiddenCost);
    const Assignment b = linear_assignment(all_forbidden, 0.9);
    EXPECT_TRUE(b.matches.empty());
}

TEST(LinearAssignment, LexicographicTieBreaking) {
    // both diagonals cost 1.0; the (0,0),(1,1) pairing is lexicographically first
    CostMatrix tie(2, 2);
    tie << 0.5, 0.5, 0.5, 0.5;
    const Assignment a = linear_assignment(tie, 0.9);
    ASSERT_EQ(a.matches.size(), 2u);
    EXPECT_EQ(a.matches[0], std::make_pair(0, 0));
    EXPECT_EQ(a.matches[1], std::make_pair(1, 1));
}
