#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pnrp2/enumerate.hpp"

#include <algorithm>
#include <random>

using namespace pnrp2;

namespace {

// cofactor expansion; fine for the tiny matrices used here
Int det(const IntMatrix& m) {
    REQUIRE(m.rows == m.cols);
    if (m.rows == 0) return 1;
    if (m.rows == 1) return m.at(0, 0);
    Int sum = 0;
    for (std::size_t c = 0; c < m.cols; ++c) {
        if (m.at(0, c) == 0) continue;
        IntMatrix minor(m.rows - 1, m.cols - 1);
        for (std::size_t r = 1; r < m.rows; ++r)
            for (std::size_t k = 0, t = 0; k < m.cols; ++k)
                if (k != c) minor.at(r - 1, t++) = m.at(r, k);
        Int term = m.at(0, c) * det(minor);
        sum += (c % 2 == 0) ? term : Int(-term);
    }
    return sum;
}

void check_snf_contract(const IntMatrix& m) {
    SnfResult s = smith_normal_form(m);
    CHECK(s.U.rows == m.rows);
    CHECK(s.U.cols == m.rows);
    CHECK(s.V.rows == m.cols);
    CHECK(s.V.cols == m.cols);
    CHECK(mat_mul(mat_mul(s.U, m), s.V) == s.D);
    CHECK(abs_int(det(s.U)) == 1);
    CHECK(abs_int(det(s.V)) == 1);
    Int prev = 0;
    for (std::size_t r = 0; r < s.D.rows; ++r)
        for (std::size_t c = 0; c < s.D.cols; ++c) {
            if (r != c) {
                CHECK(s.D.at(r, c) == 0);
                continue;
            }
            CHECK(s.D.at(r, c) >= 0);
            if (r > 0 && prev != 0) {
                // divisibility chain; a zero never precedes a nonzero
                if (s.D.at(r, c) != 0) CHECK(s.D.at(r, c) % prev == 0);
            }
            if (r > 0 && prev == 0) CHECK(s.D.at(r, c) == 0);
            prev = s.D.at(r, c);
        }
}

Word rotate_one(const Word& w) {
    if (w.letters().size() < 2) return w;
    Word out(w.context());
    for (std::size_t k = 1; k < w.letters().size(); ++k)
        out.push(w.letters()[k].sym, w.letters()[k].exp);
    out.push(w.letters()[0].sym, w.letters()[0].exp);
    return free_reduce(out);
}

} // namespace

TEST_CASE("coset enumeration of the small groups") {
    EnumerationResult one = todd_coxeter(build_pn_rp2(1), 100);
    REQUIRE(one.completed);
    CHECK(one.order == 2);
    CHECK(one.census == std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}});

    EnumerationResult two = todd_coxeter(build_pn_rp2(2), 1000);
    REQUIRE(two.completed);
    CHECK(two.order == 8);
    // the quaternion signature: identity, one involution, six of order four
    CHECK(two.census ==
          std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}, {4, 6}});
    CHECK(two.cosets_defined >= two.order);
}

TEST_CASE("coset enumeration of a one-relator collapse") {
    Presentation p;
    p.n = 1;
    p.generators = {Sym::rho(1)};
    p.relators = {Relator{RelFamily::C, Word(1, {{Sym::rho(1), 1}}), 1}};
    EnumerationResult r = todd_coxeter(p, 10);
    REQUIRE(r.completed);
    CHECK(r.order == 1);
    CHECK(r.census == std::map<std::size_t, std::size_t>{{1, 1}});
}

TEST_CASE("running out of cosets is a result, not an error") {
    EnumerationResult r = todd_coxeter(build_pn_rp2(3), 50);
    CHECK(!r.completed);
    r = todd_coxeter(build_pn_rp2(2), 0);
    CHECK(!r.completed);
}

TEST_CASE("enumeration does not depend on relator order") {
    for (int n : {1, 2}) {
        Presentation base = build_pn_rp2(n);
        EnumerationResult expect = todd_coxeter(base, 1000);
        std::mt19937_64 rng(0xd0d0 + n);
        for (int t = 0; t < 6; ++t) {
            Presentation shuffled = base;
            std::shuffle(shuffled.relators.begin(), shuffled.relators.end(), rng);
            EnumerationResult got = todd_coxeter(shuffled, 1000);
            REQUIRE(got.completed);
            CHECK(got.order == expect.order);
            CHECK(got.census == expect.census);
        }
    }
}

TEST_CASE("deterministic across repeated runs") {
    EnumerationResult a = todd_coxeter(build_pn_rp2(2), 1000);
    EnumerationResult b = todd_coxeter(build_pn_rp2(2), 1000);
    CHECK(a.order == b.order);
    CHECK(a.census == b.census);
    CHECK(a.cosets_defined == b.cosets_defined);
}

TEST_CASE("matrix plumbing") {
    IntMatrix id = IntMatrix::identity(3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(id.at(r, c) == (r == c ? 1 : 0));

    IntMatrix a(2, 3), b(3, 2);
    int val = 1;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c) a.at(r, c) = val++;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c) b.at(r, c) = val++;
    IntMatrix ab = mat_mul(a, b);
    REQUIRE(ab.rows == 2);
    REQUIRE(ab.cols == 2);
    CHECK(ab.at(0, 0) == 1 * 7 + 2 * 9 + 3 * 11);
    CHECK(ab.at(1, 1) == 4 * 8 + 5 * 10 + 6 * 12);
    CHECK(mat_mul(id, IntMatrix::identity(3)) == id);
    CHECK_THROWS_AS(mat_mul(a, a), domain_error);
}

TEST_CASE("smith normal form examples") {
    IntMatrix d22(2, 2);
    d22.at(0, 0) = 2;
    d22.at(1, 1) = 2;
    SnfResult s = smith_normal_form(d22);
    CHECK(s.D.at(0, 0) == 2);
    CHECK(s.D.at(1, 1) == 2);
    check_snf_contract(d22);

    SnfResult i3 = smith_normal_form(IntMatrix::identity(3));
    for (std::size_t k = 0; k < 3; ++k) CHECK(i3.D.at(k, k) == 1);

    // a pair needing both row and column work: [[2,4],[6,8]] ~ diag(2,4)
    IntMatrix m(2, 2);
    m.at(0, 0) = 2;
    m.at(0, 1) = 4;
    m.at(1, 0) = 6;
    m.at(1, 1) = 8;
    SnfResult sm = smith_normal_form(m);
    CHECK(sm.D.at(0, 0) == 2);
    CHECK(sm.D.at(1, 1) == 4);
    check_snf_contract(m);

    check_snf_contract(IntMatrix(3, 5)); // all zero, nothing to do
    check_snf_contract(IntMatrix(0, 0));
}

TEST_CASE("smith normal form contract on random shapes") {
    std::mt19937_64 rng(0x5eb5);
    std::uniform_int_distribution<int> dim(1, 5), entry(-6, 6);
    for (int t = 0; t < 120; ++t) {
        IntMatrix m(dim(rng), dim(rng));
        for (auto& x : m.a) x = entry(rng);
        check_snf_contract(m);
    }
}

TEST_CASE("relation matrix rows are the abelianized relators") {
    Presentation p = build_pn_rp2(3);
    IntMatrix m = relation_matrix(p);
    REQUIRE(m.rows == p.relators.size());
    REQUIRE(m.cols == p.generators.size());
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto ab = abelianize_word(p.relators[r].word);
        for (std::size_t c = 0; c < m.cols; ++c) {
            auto it = ab.find(p.generators[c]);
            CHECK(m.at(r, c) == (it == ab.end() ? Int(0) : it->second));
        }
    }
}

TEST_CASE("abelianizations collapse to elementary 2-groups") {
    for (int n = 1; n <= 6; ++n) {
        std::vector<Int> factors = abelianization(build_pn_rp2(n));
        REQUIRE(factors.size() == static_cast<std::size_t>(n));
        for (const auto& f : factors) CHECK(f == 2);
    }
}

TEST_CASE("abelianization survives rotation and inversion of relators") {
    for (int n : {2, 3, 4}) {
        Presentation base = build_pn_rp2(n);
        std::vector<Int> expect = abelianization(base);
        std::mt19937_64 rng(0xf1f + n);
        std::uniform_int_distribution<int> rot(0, 4), coin(0, 1);
        for (int t = 0; t < 4; ++t) {
            Presentation tweaked = base;
            for (auto& rel : tweaked.relators) {
                for (int k = rot(rng); k > 0; --k) rel.word = rotate_one(rel.word);
                if (coin(rng)) rel.word = free_reduce(invert(rel.word));
            }
            CHECK(abelianization(tweaked) == expect);
        }
    }
}

TEST_CASE("integer linear solving") {
    IntMatrix a1(1, 1);
    a1.at(0, 0) = 2;
    auto s = solve_integer(a1, {2});
    REQUIRE(s.has_value());
    CHECK((*s)[0] == 1);
    CHECK(!solve_integer(a1, {1}).has_value());

    IntMatrix a2(2, 2);
    a2.at(0, 0) = 1;
    a2.at(1, 1) = 2;
    auto s2 = solve_integer(a2, {3, 4});
    REQUIRE(s2.has_value());
    CHECK((*s2)[0] == 3);
    CHECK((*s2)[1] == 2);
    CHECK(!solve_integer(a2, {3, 3}).has_value());

    // inconsistent overdetermined pair x = 0, x = 1
    IntMatrix a3(2, 1);
    a3.at(0, 0) = 1;
    a3.at(1, 0) = 1;
    CHECK(!solve_integer(a3, {0, 1}).has_value());

    std::mt19937_64 rng(0x50e1);
    std::uniform_int_distribution<int> entry(-5, 5);
    for (int t = 0; t < 80; ++t) {
        IntMatrix A(3, 4);
        for (auto& x : A.a) x = entry(rng);
        std::vector<Int> x0(4);
        for (auto& x : x0) x = entry(rng);
        std::vector<Int> b(3, Int(0));
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 4; ++c) b[r] += A.at(r, c) * x0[c];
        auto sol = solve_integer(A, b);
        REQUIRE(sol.has_value());
        REQUIRE(sol->size() == 4);
        for (std::size_t r = 0; r < 3; ++r) {
            Int acc = 0;
            for (std::size_t c = 0; c < 4; ++c) acc += A.at(r, c) * (*sol)[c];
            CHECK(acc == b[r]);
        }
    }
}
