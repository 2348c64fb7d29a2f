#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_support.hpp"
#include "ttopt/errors.hpp"
#include "ttopt/tt_tensor.hpp"

using namespace ttopt;
using ttopt::fixtures::max_abs_diff;
using ttopt::fixtures::random_shape;
using ttopt::fixtures::random_tt;
using ttopt::fixtures::rank_one;

namespace {

// Chain product written out with plain loops, independent of eval/to_full.
double naive_element(const TTTensor& t, const MultiIndex& idx) {
    std::vector<double> row{1.0};
    for (std::size_t i = 0; i < t.dim(); ++i) {
        const auto& g = t.core(i);
        std::vector<double> next(g.right_rank(), 0.0);
        for (std::size_t a = 0; a < g.left_rank(); ++a)
            for (std::size_t b = 0; b < g.right_rank(); ++b) next[b] += row[a] * g(a, idx[i], b);
        row = std::move(next);
    }
    return row[0];
}

}  // namespace

TEST(TTCore, LayoutAndUnfoldings) {
    TTCore g(2, 3, 4);
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = static_cast<double>(i);
    EXPECT_EQ(g(1, 2, 3), static_cast<double>((1 * 3 + 2) * 4 + 3));
    EXPECT_EQ(g.row_unfolding()(1, 2 * 4 + 3), g(1, 2, 3));
    EXPECT_EQ(g.column_unfolding()(1 * 3 + 2, 3), g(1, 2, 3));
    EXPECT_EQ(g.slice(2)(1, 3), g(1, 2, 3));
}

TEST(TTTensor, RejectsBrokenInvariants) {
    EXPECT_THROW(TTTensor(std::vector<TTCore>{}), std::domain_error);
    EXPECT_THROW(TTTensor({TTCore(2, 3, 1)}), std::domain_error);
    EXPECT_THROW(TTTensor({TTCore(1, 3, 2), TTCore(3, 3, 1)}), std::domain_error);
    TTCore bad(1, 2, 1, {1.0, std::nan("")});
    EXPECT_THROW(TTTensor({bad}), std::domain_error);
}

TEST(Eval, ConstantAndRankOne) {
    const auto c = tt_const({3, 4, 5}, 7.5);
    EXPECT_NEAR(eval(c, MultiIndex{2, 3, 4}), 7.5, 1e-14);
    const auto t = rank_one({{1, 2}, {3, 4}});
    EXPECT_EQ(eval(t, MultiIndex::one_based({2, 1})), 6.0);
    EXPECT_THROW(eval(t, MultiIndex{2, 0}), std::domain_error);
    EXPECT_THROW(eval(t, MultiIndex{0}), std::domain_error);
}

TEST(Eval, MatchesDensifiedAndNaiveChain) {
    const auto t = random_tt({5, 6, 7, 8}, 3, 11);
    const auto full = to_full(t);
    std::mt19937_64 gen(5);
    for (int k = 0; k < 100; ++k) {
        const auto idx = full.unravel(std::uniform_int_distribution<std::size_t>(0, full.size() - 1)(gen));
        EXPECT_NEAR(eval(t, idx), full[idx], 1e-12);
        EXPECT_NEAR(eval(t, idx), naive_element(t, idx), 1e-12);
    }
}

TEST(ToFull, BudgetExceeded) {
    const auto t = tt_const({100, 100, 100}, 1.0);
    EXPECT_THROW(to_full(t, 999'999), ResourceError);
    EXPECT_NO_THROW(to_full(t, 1'000'000));
}

TEST(TTConst, Cases) {
    const auto z = tt_const({2, 2}, 0.0);
    for (const auto& g : z.cores())
        for (double v : g.data()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(eval(z, MultiIndex{1, 1}), 0.0);

    const auto m8 = tt_const({4}, -8.0);
    for (double v : m8.core(0).data()) EXPECT_EQ(v, -8.0);

    const auto c = tt_const({3, 3, 3}, 2.5);
    EXPECT_EQ(c.ranks(), (std::vector<std::size_t>{1, 1, 1, 1}));
    for (double v : to_full(c).values()) EXPECT_NEAR(v, 2.5, 1e-14);
}

TEST(TTConst, LargeMagnitudeIsRelativelyAccurate) {
    for (double v : {-3.7e12, 1e-9, 123456.789}) {
        const auto c = tt_const({2, 3, 2, 3, 2, 3, 2}, v);
        for (double x : to_full(c).values()) EXPECT_NEAR(x / v, 1.0, 1e-12);
    }
}

TEST(TTAdd, ConstantsAndRanks) {
    const auto s = tt_add(tt_const({2, 3}, 1.0), tt_const({2, 3}, 2.0));
    EXPECT_EQ(s.ranks(), (std::vector<std::size_t>{1, 2, 1}));
    for (double v : to_full(s).values()) EXPECT_NEAR(v, 3.0, 1e-14);
    EXPECT_THROW(tt_add(tt_const({2, 3}, 1.0), tt_const({3, 2}, 1.0)), std::domain_error);
}

TEST(TTAdd, RandomPairsMatchDenseSum) {
    const auto a = tt_random({4, 5, 3}, std::vector<std::size_t>{2, 2}, 1);
    const auto b = tt_random({4, 5, 3}, std::vector<std::size_t>{3, 3}, 2);
    const auto s = tt_add(a, b);
    EXPECT_EQ(s.ranks(), (std::vector<std::size_t>{1, 5, 5, 1}));
    const auto fa = to_full(a), fb = to_full(b), fs = to_full(s);
    for (std::size_t i = 0; i < fs.size(); ++i)
        EXPECT_NEAR(fs.values()[i], fa.values()[i] + fb.values()[i], 1e-12);

    const auto ident = tt_add(a, tt_const({4, 5, 3}, 0.0));
    EXPECT_LE(max_abs_diff(to_full(ident), fa), 1e-12);
}

TEST(TTDif, Cases) {
    const auto a = random_tt({3, 4, 5, 2}, 3, 9);
    const auto fa = to_full(a);
    double amax = 0.0;
    for (double v : fa.values()) amax = std::max(amax, std::abs(v));
    for (double v : to_full(tt_dif(a, a)).values()) EXPECT_LE(std::abs(v), 1e-12 * amax);

    for (double v : to_full(tt_dif(tt_const({2, 2}, 5.0), tt_const({2, 2}, 3.0))).values())
        EXPECT_NEAR(v, 2.0, 1e-14);

    const auto b = random_tt({3, 4, 5, 2}, 2, 10);
    const auto fb = to_full(b), fd = to_full(tt_dif(a, b));
    for (std::size_t i = 0; i < fd.size(); ++i)
        EXPECT_NEAR(fd.values()[i], fa.values()[i] - fb.values()[i], 1e-12);
}

TEST(TTAddDif, PropertyOnRandomSmallTensors) {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 1 + trial % 4;
        const auto shape = random_shape(gen, d, 1, 5);
        const auto a = random_tt(shape, 1 + trial % 3, gen());
        const auto b = random_tt(shape, 1 + (trial + 1) % 3, gen());
        const auto fa = to_full(a), fb = to_full(b);
        const auto fs = to_full(tt_add(a, b)), fd = to_full(tt_dif(a, b));
        for (std::size_t i = 0; i < fa.size(); ++i) {
            const double scale = std::max({1.0, std::abs(fa.values()[i]), std::abs(fb.values()[i])});
            EXPECT_NEAR(fs.values()[i], fa.values()[i] + fb.values()[i], 1e-12 * scale);
            EXPECT_NEAR(fd.values()[i], fa.values()[i] - fb.values()[i], 1e-12 * scale);
        }
    }
}

TEST(TTSquare, SquaresElements) {
    const auto a = random_tt({3, 4, 2}, 2, 4);
    const auto sq = tt_square(a);
    EXPECT_EQ(sq.ranks(), (std::vector<std::size_t>{1, 4, 4, 1}));
    const auto fa = to_full(a), fs = to_full(sq);
    for (std::size_t i = 0; i < fa.size(); ++i)
        EXPECT_NEAR(fs.values()[i], fa.values()[i] * fa.values()[i], 1e-12);
}

TEST(TTOrth, RandomPreservesValuesAndIsOrthogonal) {
    const auto t = random_tt({5, 5, 5, 5}, 3, 21);
    const auto o = tt_orth(t);
    EXPECT_EQ(o.ranks(), t.ranks());
    EXPECT_LE(max_abs_diff(to_full(o), to_full(t)), 1e-10);
    for (std::size_t i = 1; i < o.dim(); ++i) EXPECT_LE(gram_residual(o.core(i)), 1e-10);
}

TEST(TTOrth, IdempotentOnOrthogonalInput) {
    const auto o = tt_orth(random_tt({4, 6, 3}, 2, 3));
    const auto oo = tt_orth(o);
    EXPECT_LE(max_abs_diff(to_full(oo), to_full(o)), 1e-12);
    EXPECT_LE(max_gram_residual(oo), 1e-12);
}

TEST(TTOrth, RankOneOfArbitrarySign) {
    const auto t = rank_one({{-1.0, 2.0, 0.5}, {3.0, -4.0}, {-2.0, -2.0, 1.0}});
    const auto o = tt_orth(t);
    for (std::size_t i = 1; i < o.dim(); ++i) {
        double sq = 0.0;
        for (double v : o.core(i).data()) sq += v * v;
        EXPECT_NEAR(sq, 1.0, 1e-14);
    }
    EXPECT_LE(max_abs_diff(to_full(o), to_full(t)), 1e-13);
}

TEST(TTOrth, HugeMagnitudesDoNotOverflow) {
    auto t = rank_one({{1e200, 2e200}, {3e100, 1e100}, {1.0, 2.0}});
    const auto o = tt_orth(t);
    const MultiIndex idx{1, 0, 1};
    EXPECT_NEAR(eval(o, idx) / eval(t, idx), 1.0, 1e-12);
}

TEST(TTOrth, RankPrecondition) {
    // Core 3 has left rank 3 > N * R = 2 * 1.
    const auto t = tt_random({4, 3, 2}, std::vector<std::size_t>{3, 3}, 8);
    try {
        (void)tt_orth(t);
        FAIL() << "expected a domain error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("core 3"), std::string::npos) << e.what();
    }
    const auto reduced = tt_orth(t, RankPolicy::reduce);
    EXPECT_EQ(reduced.ranks(), (std::vector<std::size_t>{1, 3, 2, 1}));
    EXPECT_LE(max_abs_diff(to_full(reduced), to_full(t)), 1e-12);
    EXPECT_LE(max_gram_residual(reduced), 1e-12);
}

TEST(TTRandom, DeterministicAndValid) {
    const std::vector<std::size_t> r{3, 3};
    EXPECT_EQ(tt_random({5, 6, 7}, r, 42), tt_random({5, 6, 7}, r, 42));
    EXPECT_NE(tt_random({5, 6, 7}, r, 42), tt_random({5, 6, 7}, r, 43));

    const auto one = tt_random({5}, std::vector<std::size_t>{}, 1);
    EXPECT_EQ(one.dim(), 1u);
    EXPECT_EQ(one.core(0).size(), 5u);

    std::mt19937_64 gen(3);
    const auto shape = random_shape(gen, 6, 5, 20);
    const auto t = random_tt(shape, 3, 17);
    EXPECT_EQ(t.shape(), shape);
    EXPECT_EQ(t.ranks(), (std::vector<std::size_t>{1, 3, 3, 3, 3, 3, 1}));
    EXPECT_THROW(tt_random({5, 6}, std::vector<std::size_t>{2, 2}, 1), std::domain_error);
}

TEST(Reversed, MapsElements) {
    const auto t = random_tt({2, 3, 4}, 2, 6);
    const auto r = reversed(t);
    EXPECT_EQ(r.shape(), (Shape{4, 3, 2}));
    const auto full = to_full(t);
    for (std::size_t f = 0; f < full.size(); ++f) {
        const auto idx = full.unravel(f);
        EXPECT_NEAR(eval(r, reversed(idx)), full.values()[f], 1e-13);
    }
}

TEST(AverageRank, ArithmeticMeanOfInteriorRanks) {
    const auto t = tt_random({3, 3, 3, 3}, std::vector<std::size_t>{1, 3, 2}, 1);
    EXPECT_DOUBLE_EQ(t.average_rank(), 2.0);
    EXPECT_DOUBLE_EQ(tt_const({4}, 1.0).average_rank(), 1.0);
}

TEST(MaxAbsScan, MatchesDenseScan) {
    std::mt19937_64 gen(23);
    for (std::size_t d = 1; d <= 6; ++d) {
        const auto t = random_tt(random_shape(gen, d, 1, 6), 2, gen());
        double ref = 0.0;
        for (double v : to_full(t).values()) ref = std::max(ref, std::abs(v));
        EXPECT_NEAR(max_abs_scan(t), ref, 1e-12 * ref) << "d=" << d;
    }
}
