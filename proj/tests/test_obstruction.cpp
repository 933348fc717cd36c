#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pnrp2/obstruction.hpp"

#include "json.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace pnrp2;

namespace {

AffineExpr ae(const std::vector<std::pair<int, int>>& coef_id, int k) {
    AffineExpr e{Int(k)};
    for (const auto& [c, id] : coef_id) e += AffineExpr::unknown(id).scaled(c);
    return e;
}

// parity bits for every unknown, consistent with the given values
ParityAssignment parity_matching(const std::vector<Int>& values) {
    ParityAssignment pa;
    for (std::size_t id = 0; id < values.size(); ++id)
        pa.bits[static_cast<int>(id)] = values[id] % 2 != 0 ? 1 : 0;
    return pa;
}

// empty hand system over n=2 with all alpha(i,0) parity bits pinned even
ConstraintSystem blank_sys2() {
    ConstraintSystem sys;
    sys.n = 2;
    SectionCoefficients sc(2);
    sys.parity.bits[sc.alpha(1, 0)] = 0;
    sys.parity.bits[sc.alpha(2, 0)] = 0;
    return sys;
}

std::vector<Int> eval_kl(const SymbolicKL& s, const std::vector<Int>& values) {
    std::vector<Int> out;
    out.push_back(s.m0.eval(values));
    for (const auto& coord : s.v) out.push_back(coord.eval(values));
    return out;
}

std::vector<Int> flat_kl(const KLElement& x) {
    std::vector<Int> out;
    out.push_back(x.m0);
    for (const auto& coord : x.v) out.push_back(coord);
    return out;
}

} // namespace

TEST_CASE("unknown ids form a dense bijection") {
    CHECK_THROWS_AS(SectionCoefficients(1), domain_error);
    CHECK(SectionCoefficients(2).count() == 6);
    CHECK(SectionCoefficients(3).count() == 18);
    CHECK(SectionCoefficients(4).count() == 40);
    CHECK(SectionCoefficients(5).count() == 75);

    for (int n = 2; n <= 5; ++n) {
        SectionCoefficients sc(n);
        std::set<int> ids;
        for (int i = 1; i <= n; ++i)
            for (int k = 0; k <= n - 1; ++k) {
                int id = sc.alpha(i, k);
                ids.insert(id);
                CHECK(sc.is_alpha0(id) == (k == 0));
            }
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int k = 0; k <= n - 1; ++k) {
                    int id = sc.beta(i, j, k);
                    ids.insert(id);
                    CHECK(!sc.is_alpha0(id));
                }
        REQUIRE(static_cast<int>(ids.size()) == sc.count());
        CHECK(*ids.begin() == 0);
        CHECK(*ids.rbegin() == sc.count() - 1);
        // names round-trip through the id
        for (int i = 1; i <= n; ++i)
            for (int k = 0; k <= n - 1; ++k)
                CHECK(sc.name(sc.alpha(i, k)) ==
                      "a[" + std::to_string(i) + "," + std::to_string(k) + "]");
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int k = 0; k <= n - 1; ++k)
                    CHECK(sc.name(sc.beta(i, j, k)) ==
                          "b[" + std::to_string(i) + "," + std::to_string(j) + "," +
                              std::to_string(k) + "]");
    }

    SectionCoefficients sc(3);
    CHECK(sc.alpha(1, 0) == 0);
    CHECK(sc.beta(1, 2, 0) == 9);
    CHECK(sc.beta(2, 3, 2) == 17);
    CHECK_THROWS_AS(sc.alpha(0, 0), domain_error);
    CHECK_THROWS_AS(sc.alpha(4, 0), domain_error);
    CHECK_THROWS_AS(sc.alpha(1, 3), domain_error);
    CHECK_THROWS_AS(sc.beta(2, 2, 0), domain_error);
    CHECK_THROWS_AS(sc.beta(1, 4, 0), domain_error);
    CHECK_THROWS_AS(sc.beta(1, 2, 3), domain_error);
    CHECK_THROWS_AS(sc.name(-1), domain_error);
    CHECK_THROWS_AS(sc.name(18), domain_error);
    CHECK(!sc.is_alpha0(-1));
    CHECK(!sc.is_alpha0(9)); // first beta id, divisible by n but not an alpha
}

TEST_CASE("affine forms collect, cancel and print canonically") {
    SectionCoefficients sc(3);
    AffineExpr x = AffineExpr::unknown(0), y = AffineExpr::unknown(5);

    CHECK((x - x).is_zero());
    CHECK((x + y - x) == y);
    CHECK((x.scaled(3) - x.scaled(2)) == x);
    CHECK((-x).scaled(-1) == x);
    CHECK(x.scaled(0).is_zero());
    CHECK(AffineExpr(Int(7)).is_constant());
    CHECK(!x.is_constant());

    AffineExpr e = ae({{2, sc.alpha(2, 2)}, {-2, sc.alpha(3, 2)}, {1, sc.beta(2, 3, 2)}}, 1);
    CHECK(to_string(e, sc) == "2 a[2,2] - 2 a[3,2] + b[2,3,2] + 1");
    CHECK(to_string(ae({{-1, 0}}, 3), sc) == "-a[1,0] + 3");
    CHECK(to_string(ae({{1, 4}}, -2), sc) == "a[2,1] - 2");
    CHECK(to_string(AffineExpr(Int(-4)), sc) == "-4");
    CHECK(to_string(AffineExpr(), sc) == "0");

    std::vector<Int> values(18, Int(0));
    values[sc.alpha(2, 2)] = 3;
    values[sc.alpha(3, 2)] = -1;
    values[sc.beta(2, 3, 2)] = 5;
    CHECK(e.eval(values) == 2 * 3 - 2 * (-1) + 5 + 1);
    CHECK_THROWS_AS(AffineExpr::unknown(40).eval(values), domain_error);
}

TEST_CASE("parity assignment evaluates eps and delta symbolically") {
    ParityAssignment pa;
    pa.bits[0] = 1;
    pa.bits[1] = 0;

    AffineExpr x = AffineExpr::unknown(0), y = AffineExpr::unknown(1);
    CHECK(pa.parity_of(x) == 1);
    CHECK(pa.parity_of(y) == 0);
    CHECK(pa.parity_of(x + y) == 1);
    CHECK(pa.parity_of(x + x) == 0);              // even coefficient, bit unused
    CHECK(pa.parity_of(x.scaled(2) + AffineExpr(Int(1))) == 1);
    CHECK(pa.parity_of(ae({{3, 0}}, 2)) == 1);    // odd coefficient uses the bit
    CHECK(pa.eps_of(x) == -1);
    CHECK(pa.eps_of(y) == 1);
    CHECK(pa.delta_of(x) == -1);
    CHECK(pa.delta_of(y) == 0);

    AffineExpr z = AffineExpr::unknown(9); // no bit assigned
    CHECK_THROWS_AS(pa.parity_of(z), error);
    CHECK(pa.parity_of(z.scaled(2)) == 0); // even occurrence never asks
}

TEST_CASE("section image of a single generator") {
    SectionCoefficients sc(3);
    std::vector<Int> values = {1, 2, -1, 0, 3, 1, 2, 0, -2,
                               2, 1, 0, 4, -1, 1, 0, 0, 5};
    ParityAssignment pa = parity_matching(values);

    SymbolicHeadTail r1 = section_image(Sym::rho(1), 1, sc, pa);
    CHECK(r1.head.m0 == AffineExpr::unknown(sc.alpha(1, 0)));
    CHECK(r1.head.v[0] == AffineExpr::unknown(sc.alpha(1, 1)));
    CHECK(r1.head.v[1] == AffineExpr::unknown(sc.alpha(1, 2)));
    CHECK(to_string(r1.tail) == "rho[1]");

    SymbolicHeadTail b13 = section_image(Sym::b(1, 3), 1, sc, pa);
    CHECK(b13.head.m0 == AffineExpr::unknown(sc.beta(1, 3, 0)));
    CHECK(b13.head.v[1] == AffineExpr::unknown(sc.beta(1, 3, 2)));
    CHECK(to_string(b13.tail) == "B[1,3]");

    // inverse letter: evaluating the symbolic head matches the concrete law
    for (const Sym& g : {Sym::rho(1), Sym::rho(3), Sym::b(1, 2), Sym::b(2, 3)}) {
        SymbolicHeadTail plus = section_image(g, 1, sc, pa);
        SymbolicHeadTail minus = section_image(g, -1, sc, pa);
        KLElement h = kl_identity(3);
        h.m0 = plus.head.m0.eval(values);
        h.v[0] = plus.head.v[0].eval(values);
        h.v[1] = plus.head.v[1].eval(values);
        CHECK(eval_kl(minus.head, values) == flat_kl(act_on_kl(g, -1, kl_inv(h))));
        CHECK(to_string(minus.tail) == to_string(g) + "^-1");
        // the two images compose to the identity
        SymbolicKL folded = sym_mul(
            plus.head,
            [&] {
                SymbolicKL x = minus.head;
                const auto& ls = plus.tail.letters();
                for (auto it = ls.rbegin(); it != ls.rend(); ++it)
                    x = sym_act_pow(it->sym, it->exp, x, pa);
                return x;
            }(),
            pa);
        CHECK(eval_kl(folded, values) == flat_kl(kl_identity(3)));
        CHECK(free_reduce(concat(plus.tail, minus.tail)).empty());
    }

    CHECK_THROWS_AS(section_image(Sym::rho(1), 2, sc, pa), domain_error);
    CHECK_THROWS_AS(section_image(Sym::rho(4), 1, sc, pa), domain_error);
    CHECK_THROWS_AS(section_image(Sym::b(1, 4), 1, sc, pa), domain_error);
}

TEST_CASE("symbolic and concrete folds agree on random words") {
    const int n = 3;
    SectionCoefficients sc(n);
    std::mt19937_64 rng(0x5ec);
    std::uniform_int_distribution<int> val(-5, 5), exp(-3, 3), pick(0, 5);
    std::vector<Sym> gens = {Sym::b(1, 2), Sym::b(1, 3), Sym::b(2, 3),
                             Sym::rho(1), Sym::rho(2), Sym::rho(3)};

    for (int t = 0; t < 100; ++t) {
        std::vector<Int> values(static_cast<std::size_t>(sc.count()));
        for (auto& v : values) v = val(rng);
        ParityAssignment pa = parity_matching(values);

        Word w(n);
        for (int k = 0; k < 5; ++k) {
            int e = exp(rng);
            if (e) w.push(gens[static_cast<std::size_t>(pick(rng))], e);
        }
        w = free_reduce(w);

        SymbolicHeadTail sym = push_through(w, sc, pa);
        ConcreteHeadTail conc = concrete_push_through(w, sc, values);
        CHECK(eval_kl(sym.head, values) == flat_kl(conc.head));
        CHECK(sym.tail == conc.tail);
        CHECK(sym.tail == w); // tail reproduces the (reduced) input word
    }

    std::vector<Int> short_values(5, Int(0));
    CHECK_THROWS_AS(concrete_push_through(Word(n), sc, short_values), domain_error);
    CHECK_THROWS_AS(push_through(Word(2), sc, ParityAssignment{}), domain_error);
}

TEST_CASE("derived system, restricted job set, three strands, all-odd branch") {
    SectionCoefficients sc(3);
    ConstraintSystem sys = derive_constraints(3, {1, 1, 1}, ObstructMode::PaperSubset);
    CHECK(sys.n == 3);
    CHECK(sys.mode == ObstructMode::PaperSubset);
    REQUIRE(sys.eqs.size() == 18);
    REQUIRE(sys.parity_eqs.size() == 3);

    auto a = [&](int i, int k) { return sc.alpha(i, k); };
    auto b = [&](int i, int j, int k) { return sc.beta(i, j, k); };
    const std::vector<std::pair<std::string, AffineExpr>> expected = {
        {"III[1,2]/m0", ae({{1, b(1, 2, 0)}}, 0)},
        {"III[1,3]/m0", ae({{2, a(1, 0)}, {-1, b(1, 3, 0)}}, 0)},
        {"III[2,3]/m0", ae({{2, a(2, 0)}, {-1, b(2, 3, 0)}}, 0)},
        {"c[3]/m0", ae({{1, a(1, 0)}, {1, a(2, 0)}}, -1)},
        {"III[1,2]/v1", ae({{2, a(1, 1)}, {-2, a(2, 1)}, {-1, b(1, 2, 1)}}, 1)},
        {"III[1,2]/v2", ae({{2, a(1, 2)}, {-2, a(2, 2)}, {-1, b(1, 2, 2)}}, -1)},
        {"III[1,3]/v1", ae({{2, a(1, 1)}, {-2, a(3, 1)}, {-1, b(1, 3, 1)}}, 2)},
        {"III[1,3]/v2", ae({{2, a(1, 2)}, {-2, a(3, 2)}, {-1, b(1, 3, 2)}}, 1)},
        {"III[2,3]/v1", ae({{2, a(2, 1)}, {-2, a(3, 1)}, {-1, b(2, 3, 1)}}, 1)},
        {"III[2,3]/v2", ae({{2, a(2, 2)}, {-2, a(3, 2)}, {-1, b(2, 3, 2)}}, 2)},
        {"c[1]/v1", ae({{1, b(1, 2, 1)}, {1, b(1, 3, 1)}}, 0)},
        {"c[1]/v2", ae({{1, b(1, 2, 2)}, {1, b(1, 3, 2)}}, 0)},
        {"c[2]/v1", ae({{1, b(1, 2, 1)}, {1, b(2, 3, 1)}}, 0)},
        {"c[2]/v2", ae({{1, b(1, 2, 2)}, {1, b(2, 3, 2)}}, 0)},
        {"c[3]/v1", ae({{1, b(1, 3, 1)}, {1, b(2, 3, 1)}}, 0)},
        {"c[3]/v2", ae({{1, b(1, 3, 2)}, {1, b(2, 3, 2)}}, 0)},
        {"d[2,3;k=1]/v1", ae({{1, b(2, 3, 1)}}, 0)},
        {"d[2,3;k=1]/v2", ae({{1, b(2, 3, 2)}}, 0)},
    };
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(sys.eqs[k].id == static_cast<int>(k));
        CHECK(sys.eqs[k].source == expected[k].first);
        CHECK_MESSAGE(sys.eqs[k].expr == expected[k].second,
                      expected[k].first, ": got ", to_string(sys.eqs[k].expr, sc));
    }
    for (int i = 1; i <= 3; ++i) {
        const ParityConstraint& p = sys.parity_eqs[static_cast<std::size_t>(i - 1)];
        CHECK(p.source == "parity:a[" + std::to_string(i) + ",0]");
        CHECK(p.expr == ae({{1, a(i, 0)}}, -1));
        CHECK(sys.parity.bits.at(sc.alpha(i, 0)) == 1);
    }
}

TEST_CASE("derived system, full job set, two strands, all-odd branch") {
    SectionCoefficients sc(2);
    ConstraintSystem sys = derive_constraints(2, {1, 1}, ObstructMode::Full);
    REQUIRE(sys.eqs.size() == 10);
    REQUIRE(sys.parity_eqs.size() == 2);

    auto a = [&](int i, int k) { return sc.alpha(i, k); };
    const int b0 = sc.beta(1, 2, 0), b1 = sc.beta(1, 2, 1);
    const std::vector<std::pair<std::string, AffineExpr>> expected = {
        {"b[1,2]/m0", ae({{2, a(1, 0)}, {-1, b0}}, 0)},
        {"c[2]/m0", ae({{1, a(1, 0)}}, -1)},
        {"b[1,2]/v1", ae({{2, a(1, 1)}, {-2, a(2, 1)}, {1, b1}}, 2)},
        {"c[1]/v1", ae({{1, b1}}, 0)},
        {"c[2]/v1", ae({{1, b1}}, 0)},
        {"d[1,2;k=1]/v1", ae({{1, b1}}, 0)},
        {"I[1,2]/v1", ae({{2, a(1, 1)}, {-2, a(2, 1)}, {-1, b1}}, 2)},
        {"II[1,2]/v1", ae({{1, b1}}, 0)},
        {"III[1,2]/v1", ae({{2, a(1, 1)}, {-2, a(2, 1)}, {-1, b1}}, 2)},
        {"IV[1,2]/v1", ae({{2, a(1, 1)}, {-2, a(2, 1)}, {1, b1}}, 2)},
    };
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(sys.eqs[k].id == static_cast<int>(k));
        CHECK(sys.eqs[k].source == expected[k].first);
        CHECK_MESSAGE(sys.eqs[k].expr == expected[k].second,
                      expected[k].first, ": got ", to_string(sys.eqs[k].expr, sc));
    }

    CHECK_THROWS_AS(derive_constraints(3, {1, 1}, ObstructMode::Full), domain_error);
    CHECK_THROWS_AS(derive_constraints(3, {1, 1, 2}, ObstructMode::Full), domain_error);
}

TEST_CASE("rho-exponent equations do not depend on the branch") {
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> p = {mask & 1, (mask >> 1) & 1, (mask >> 2) & 1};
        ConstraintSystem sys = derive_constraints(3, p, ObstructMode::Full);
        ConstraintSystem base = derive_constraints(3, {0, 0, 0}, ObstructMode::Full);
        // the m0-sourced prefix is identical in ids, sources and content
        std::size_t k = 0;
        for (; k < sys.eqs.size() && sys.eqs[k].source.find("/m0") != std::string::npos;
             ++k) {
            REQUIRE(k < base.eqs.size());
            CHECK(sys.eqs[k].source == base.eqs[k].source);
            CHECK(sys.eqs[k].expr == base.eqs[k].expr);
            CHECK(sys.eqs[k].id == base.eqs[k].id);
        }
        CHECK(k > 0);
        // no m0-sourced rows occur after the prefix
        for (; k < sys.eqs.size(); ++k)
            CHECK(sys.eqs[k].source.find("/m0") == std::string::npos);
        // and every equation is normalized: positive leading coefficient,
        // no removable content, never trivially zero
        for (const auto& e : sys.eqs) {
            REQUIRE(!e.expr.is_zero());
            if (e.expr.terms.empty()) continue;
            CHECK(e.expr.terms.begin()->second > 0);
            Int g = 0;
            for (const auto& [id, coef] : e.expr.terms) g = gcd_int(g, coef);
            if (g > 1) CHECK(e.expr.c % g != 0);
        }
    }
}

TEST_CASE("feasibility on hand-built systems") {
    SectionCoefficients sc(2);
    const int x = sc.alpha(1, 1); // not parity-pinned

    // contradictory parities: x = 0 and x odd
    ConstraintSystem s1 = blank_sys2();
    s1.eqs.push_back(Equation{0, ae({{1, x}}, 0), "hand:x"});
    s1.parity_eqs.push_back(ParityConstraint{0, ae({{1, x}}, -1), "hand:x-odd"});
    FeasibilityResult r1 = decide_feasibility(s1);
    CHECK(!r1.sat);
    REQUIRE(r1.parity_cert.has_value());
    CHECK(r1.parity_cert->cited ==
          std::vector<std::pair<char, int>>{{'e', 0}, {'p', 0}});
    CHECK(verify_parity_certificate(s1, *r1.parity_cert));

    // 2x = 2 is solvable with x = 1
    ConstraintSystem s2 = blank_sys2();
    s2.eqs.push_back(Equation{0, ae({{2, x}}, -2), "hand:2x-2"});
    FeasibilityResult r2 = decide_feasibility(s2);
    REQUIRE(r2.sat);
    REQUIRE(r2.witness.has_value());
    CHECK((*r2.witness)[static_cast<std::size_t>(x)] == 1);
    CHECK(verify_witness(s2, *r2.witness));

    // 3x = 2 has no integral solution and no parity obstruction
    ConstraintSystem s3 = blank_sys2();
    s3.eqs.push_back(Equation{0, ae({{3, x}}, -2), "hand:3x-2"});
    FeasibilityResult r3 = decide_feasibility(s3);
    CHECK(!r3.sat);
    CHECK(!r3.parity_cert.has_value());
    REQUIRE(r3.div_cert.has_value());
    CHECK(verify_divisibility_certificate(s3, *r3.div_cert));

    // x = 0 against x = 2: both even, contradiction only over Z
    ConstraintSystem s4 = blank_sys2();
    s4.eqs.push_back(Equation{0, ae({{1, x}}, 0), "hand:x"});
    s4.eqs.push_back(Equation{1, ae({{1, x}}, -2), "hand:x-2"});
    FeasibilityResult r4 = decide_feasibility(s4);
    CHECK(!r4.sat);
    REQUIRE(r4.div_cert.has_value());
    CHECK(verify_divisibility_certificate(s4, *r4.div_cert));

    // no constraints at all: satisfiable, parity pins respected
    ConstraintSystem s5 = blank_sys2();
    s5.parity.bits[sc.alpha(1, 0)] = 1;
    FeasibilityResult r5 = decide_feasibility(s5);
    REQUIRE(r5.sat);
    CHECK((*r5.witness)[static_cast<std::size_t>(sc.alpha(1, 0))] % 2 != 0);
    CHECK((*r5.witness)[static_cast<std::size_t>(sc.alpha(2, 0))] % 2 == 0);
}

TEST_CASE("certificate and witness verifiers reject tampering") {
    SectionCoefficients sc(2);
    const int x = sc.alpha(1, 1);

    ConstraintSystem s1 = blank_sys2();
    s1.eqs.push_back(Equation{0, ae({{1, x}}, 0), "hand:x"});
    s1.parity_eqs.push_back(ParityConstraint{0, ae({{1, x}}, -1), "hand:x-odd"});

    ParityCertificate good{{{'e', 0}, {'p', 0}}};
    CHECK(verify_parity_certificate(s1, good));
    CHECK(!verify_parity_certificate(s1, ParityCertificate{}));          // empty
    CHECK(!verify_parity_certificate(s1, ParityCertificate{{{'e', 0}}})); // no contradiction
    CHECK(!verify_parity_certificate(s1, ParityCertificate{{{'e', 5}, {'p', 0}}}));
    CHECK(!verify_parity_certificate(s1, ParityCertificate{{{'q', 0}, {'p', 0}}}));

    ConstraintSystem s3 = blank_sys2();
    s3.eqs.push_back(Equation{0, ae({{3, x}}, -2), "hand:3x-2"});
    DivisibilityCertificate dgood;
    dgood.nums = {Int(1)};
    dgood.den = 3;
    CHECK(verify_divisibility_certificate(s3, dgood));
    DivisibilityCertificate dbad = dgood;
    dbad.nums = {Int(0)};
    CHECK(!verify_divisibility_certificate(s3, dbad)); // zero combination
    dbad = dgood;
    dbad.den = 0;
    CHECK(!verify_divisibility_certificate(s3, dbad));
    dbad = dgood;
    dbad.nums = {Int(1), Int(1)};
    CHECK(!verify_divisibility_certificate(s3, dbad)); // wrong length
    dbad = dgood;
    dbad.den = 1;
    CHECK(!verify_divisibility_certificate(s3, dbad)); // 3x-2 itself is integral

    ConstraintSystem s2 = blank_sys2();
    s2.eqs.push_back(Equation{0, ae({{2, x}}, -2), "hand:2x-2"});
    std::vector<Int> w(6, Int(0));
    w[static_cast<std::size_t>(x)] = 1;
    CHECK(verify_witness(s2, w));
    w[static_cast<std::size_t>(x)] = 2;
    CHECK(!verify_witness(s2, w)); // equation violated
    ConstraintSystem s2p = s2;
    s2p.parity_eqs.push_back(
        ParityConstraint{0, ae({{1, sc.alpha(1, 0)}}, -1), "hand:odd"});
    std::vector<Int> w2(6, Int(0));
    w2[static_cast<std::size_t>(x)] = 1;
    CHECK(!verify_witness(s2p, w2)); // parity pin violated
    w2[static_cast<std::size_t>(sc.alpha(1, 0))] = 3;
    CHECK(verify_witness(s2p, w2));
}

TEST_CASE("two strands split: one branch carries a section head") {
    ObstructionReport r = obstruct(2, ObstructMode::Full);
    CHECK(r.n == 2);
    CHECK(r.mode == ObstructMode::Full);
    CHECK(r.sat);
    CHECK(r.branch_count == 4);
    REQUIRE(r.branches.size() == 4);
    REQUIRE(r.sat_branch.has_value());
    CHECK(*r.sat_branch == 3);

    for (std::size_t b = 0; b < 4; ++b) {
        const BranchReport& br = r.branches[b];
        REQUIRE(br.parity.size() == 2);
        CHECK(br.parity[0] == static_cast<int>(b & 1));
        CHECK(br.parity[1] == static_cast<int>((b >> 1) & 1));
        CHECK(br.sat == (b == 3));
    }

    // the reported witness satisfies the independently rebuilt system
    const BranchReport& sat = r.branches[3];
    REQUIRE(sat.witness.has_value());
    ConstraintSystem sys = derive_constraints(2, sat.parity, ObstructMode::Full);
    CHECK(verify_witness(sys, *sat.witness));

    // refuted branches carry certificates that survive re-verification
    for (std::size_t b : {std::size_t{0}, std::size_t{1}, std::size_t{2}}) {
        const BranchReport& br = r.branches[b];
        ConstraintSystem full = derive_constraints(2, br.parity, ObstructMode::Full);
        REQUIRE(br.parity_cert.has_value());
        CHECK(verify_parity_certificate(full, *br.parity_cert));
        CHECK(br.cited_sources.size() == br.parity_cert->cited.size());
    }

    CHECK(report_to_text(r) ==
          "obstruct n=2 mode=full\n"
          "branches: 4\n"
          "branch 0 p=(0,0) stage=m0 eqs=2: UNSAT cert=parity [c[2]/m0, parity:a[1,0]]\n"
          "branch 1 p=(1,0) stage=full eqs=8: UNSAT cert=parity [b[1,2]/v1, c[1]/v1]\n"
          "branch 2 p=(0,1) stage=m0 eqs=2: UNSAT cert=parity [c[2]/m0, parity:a[1,0]]\n"
          "branch 3 p=(1,1) stage=full eqs=10: SAT\n"
          "result: SAT\n"
          "witness branch 3: a[1,0]=1 a[2,0]=1 a[2,1]=1 b[1,2,0]=2\n");
}

TEST_CASE("three strands: every branch is refuted by parity") {
    ObstructionReport r = obstruct(3, ObstructMode::Full);
    CHECK(!r.sat);
    CHECK(r.branch_count == 8);
    CHECK(!r.sat_branch.has_value());
    REQUIRE(r.branches.size() == 8);

    for (std::size_t b = 0; b < 8; ++b) {
        const BranchReport& br = r.branches[b];
        for (int i = 0; i < 3; ++i)
            CHECK(br.parity[static_cast<std::size_t>(i)] ==
                  static_cast<int>((b >> i) & 1));
        CHECK(!br.sat);
        CHECK((br.stage == "m0" || br.stage == "full"));
        CHECK(br.eq_count > 0);
        REQUIRE(br.parity_cert.has_value());
        REQUIRE(!br.cited_sources.empty());
        // certificate rows exist in the independently rebuilt full system
        ConstraintSystem sys = derive_constraints(3, br.parity, ObstructMode::Full);
        CHECK(verify_parity_certificate(sys, *br.parity_cert));
    }

    std::string text = report_to_text(r);
    CHECK(text.find("result: UNSAT\n") != std::string::npos);
    CHECK(text.find("note: adding further strands cannot restore a section") !=
          std::string::npos);
}

TEST_CASE("verdicts agree between job sets and across strand counts") {
    CHECK(!obstruct(3, ObstructMode::PaperSubset).sat);
    CHECK(!obstruct(4, ObstructMode::PaperSubset).sat);

    ObstructionReport full4 = obstruct(4, ObstructMode::Full);
    CHECK(!full4.sat);
    CHECK(full4.branch_count == 16);
    for (const BranchReport& br : full4.branches) {
        CHECK(!br.sat);
        ConstraintSystem sys = derive_constraints(4, br.parity, ObstructMode::Full);
        if (br.parity_cert) {
            CHECK(verify_parity_certificate(sys, *br.parity_cert));
        } else {
            REQUIRE(br.div_cert.has_value());
            // a certificate found at the m0 stage cites a prefix of the full
            // system; padding the multipliers with zeros keeps it valid
            DivisibilityCertificate padded = *br.div_cert;
            REQUIRE(padded.nums.size() <= sys.eqs.size());
            padded.nums.resize(sys.eqs.size(), Int(0));
            CHECK(verify_divisibility_certificate(sys, padded));
        }
    }
}

TEST_CASE("manually assembled certificate for the all-odd branch on four strands") {
    ConstraintSystem sys = derive_constraints(4, {1, 1, 1, 1}, ObstructMode::Full);
    REQUIRE(sys.eqs.size() > 65);
    REQUIRE(sys.eqs[17].source == "b[2,3]/v2");
    REQUIRE(sys.eqs[65].source == "d[2,3;k=1]/v2");
    SectionCoefficients sc(4);
    CHECK(sys.eqs[17].expr ==
          ae({{2, sc.alpha(2, 2)}, {-2, sc.alpha(3, 2)}, {1, sc.beta(2, 3, 2)}}, 1));
    CHECK(sys.eqs[65].expr == ae({{1, sc.beta(2, 3, 2)}}, 0));
    ParityCertificate cert{{{'e', 17}, {'e', 65}}};
    CHECK(verify_parity_certificate(sys, cert));
}

TEST_CASE("branch decisions are identical for any thread count") {
    for (int threads : {1, 3}) {
        ObstructOptions opt;
        opt.threads = threads;
        CHECK(report_to_text(obstruct(3, ObstructMode::Full, opt)) ==
              report_to_text(obstruct(3, ObstructMode::Full)));
        CHECK(report_to_text(obstruct(2, ObstructMode::Full, opt)) ==
              report_to_text(obstruct(2, ObstructMode::Full)));
    }
}

TEST_CASE("strand budgets") {
    CHECK_THROWS_AS(obstruct(1, ObstructMode::Full), domain_error);
    CHECK_THROWS_AS(obstruct(9, ObstructMode::Full), domain_error);
    CHECK_THROWS_AS(obstruct(13, ObstructMode::PaperSubset), domain_error);
    CHECK(std::string(mode_name(ObstructMode::Full)) == "full");
    CHECK(std::string(mode_name(ObstructMode::PaperSubset)) == "paper-subset");
}

TEST_CASE("json report carries the same facts as the text report") {
    ObstructionReport r = obstruct(2, ObstructMode::Full);
    nlohmann::json j = nlohmann::json::parse(report_to_json(r));

    CHECK(j["n"] == 2);
    CHECK(j["mode"] == "full");
    CHECK(j["sat"] == true);
    CHECK(j["sat_branch"] == 3);
    REQUIRE(j["branches"].size() == 4);

    CHECK(j["branches"][0]["index"] == 0);
    CHECK(j["branches"][0]["parity"] == nlohmann::json::array({0, 0}));
    CHECK(j["branches"][0]["stage"] == "m0");
    CHECK(j["branches"][0]["eq_count"] == 2);
    CHECK(j["branches"][0]["sat"] == false);
    CHECK(j["branches"][0]["certificate"] == "parity");
    CHECK(j["branches"][0]["cited"] ==
          nlohmann::json::array({"c[2]/m0", "parity:a[1,0]"}));
    CHECK(j["branches"][3]["sat"] == true);
    CHECK(j["branches"][3]["eq_count"] == 10);
    CHECK(j["branches"][3]["witness"] ==
          nlohmann::json({{"a[1,0]", "1"}, {"a[2,0]", "1"}, {"a[2,1]", "1"},
                          {"b[1,2,0]", "2"}}));
    CHECK(!j["branches"][0].contains("witness"));
    CHECK(!j["branches"][3].contains("certificate"));

    std::string dump = report_to_json(r);
    CHECK(dump.back() == '\n');
    CHECK(dump.substr(0, 2) == "{\n"); // two-space pretty print
}
