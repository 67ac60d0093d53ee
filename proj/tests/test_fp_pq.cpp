#include "doctest.h"

#include "towers3/fp.hpp"
#include "towers3/pquotient.hpp"
#include "towers3/subgrp.hpp"

using namespace towers3;

namespace {

FpPresentation free2() { return FpPresentation{2, {}}; }

// skeleton limit quotient: <a,t | (at)^3=a^3, [[t,a],t]=a^{-+3}, a^{3^r},
// [t,a]^{3^j} (odd c=2j+1) or t^{3^j} (even c=2j)>
FpPresentation mainline_fp(bool utree, int r, int c) {
    auto a = FpExpr::generator(0), t = FpExpr::generator(1);
    std::vector<FpExprPtr> rel;
    rel.push_back(FpExpr::prod({FpExpr::pow(FpExpr::prod({a, t}), 3), FpExpr::pow(a, -3)}));
    rel.push_back(FpExpr::prod(
        {FpExpr::comm(FpExpr::comm(t, a), t), FpExpr::pow(a, utree ? -3 : 3)}));
    long pr = 1;
    for (int k = 0; k < r; ++k) pr *= 3;
    rel.push_back(FpExpr::pow(a, pr));
    if (c % 2 == 1) {
        int j = (c - 1) / 2;
        long pj = 1;
        for (int k = 0; k < j; ++k) pj *= 3;
        rel.push_back(FpExpr::pow(FpExpr::comm(t, a), pj));
    } else {
        int j = c / 2;
        long pj = 1;
        for (int k = 0; k < j; ++k) pj *= 3;
        rel.push_back(FpExpr::pow(t, pj));
    }
    return FpPresentation{2, rel};
}

} // namespace

TEST_CASE("class-1 quotient of any 2-generator presentation is (3,3)") {
    auto r = p_quotient(free2(), 3, 1);
    CHECK(r.G.ngens == 2);
    CHECK(abelian_quotient_invariants(r.G, whole_group(r.G)) == TypeInvariants({1, 1}));

    FpPresentation f{2, {parse_fp_word("g1^3*[g1,g2]", 2)}};
    auto r2 = p_quotient(f, 3, 1);
    CHECK(r2.G.ngens == 2);
}

TEST_CASE("cyclic towers stabilize") {
    // <a | a^27>: quotients C3, C9, C27, then the lifting stalls
    FpPresentation f{1, {FpExpr::pow(FpExpr::generator(0), 27)}};
    auto r1 = p_quotient(f, 3, 1);
    CHECK(r1.G.ngens == 1);
    auto r2 = p_quotient(f, 3, 2);
    CHECK(r2.G.ngens == 2);
    auto r = p_quotient(f, 3, 10);
    CHECK(r.G.ngens == 3);
    CHECK(r.complete);
    CHECK(r.G.consistency_check().empty());
    CHECK(r.G.element_order(r.G.gen(0)) == 27);
}

TEST_CASE("p-quotient idempotence on pc input") {
    auto g = PcPresentation::make(3, 3);
    g.set_comm(1, 0, g.gen(2));  // Heisenberg
    auto r = p_quotient(encode_as_fp(g), 3, 5);
    CHECK(r.G.ngens == 3);
    CHECK(r.complete);
    auto s = series_and_sizes(r.G);
    CHECK(s.cls == 2);
}

TEST_CASE("p-cover of the elementary bicyclic group") {
    auto r = p_quotient(free2(), 3, 1);
    auto cov = p_cover(r.G);
    CHECK(cov.ranks.d1 == 2);
    CHECK(cov.ranks.d2 == 3);
    CHECK(cov.cover.ngens == 5);
    CHECK(cov.cover.consistency_check().empty());
    CHECK(cov.ranks.nu == 3);
}

TEST_CASE("monotone growth and layer quotients") {
    auto f = mainline_fp(false, 2, 5);
    int prev = 0;
    for (int b = 1; b <= 5; ++b) {
        auto r = p_quotient(f, 3, b);
        CHECK(r.G.ngens >= prev);
        prev = r.G.ngens;
    }
}

TEST_CASE("coclass-2 skeleton vertices on both trees") {
    // X_3^2 is the tree root of order 3^5 and class 3
    for (bool utree : {false, true}) {
        auto root = p_quotient(mainline_fp(utree, 2, 3), 3, 8);
        CHECK(root.complete);
        CHECK(root.G.ngens == 5);
        auto s = series_and_sizes(root.G);
        CHECK(s.cls == 3);
        CHECK(s.coclass == 2);
        CHECK(root.G.consistency_check().empty());
        CHECK(generator_rank(root.G) == 2);

        // the fork X_4^2 of order 3^6 and class 4 with nuclear rank 2
        auto fork = p_quotient(mainline_fp(utree, 2, 4), 3, 8);
        CHECK(fork.complete);
        CHECK(fork.G.ngens == 6);
        auto sf = series_and_sizes(fork.G);
        CHECK(sf.cls == 4);
        CHECK(sf.coclass == 2);

        auto cov = p_cover(fork.G);
        CHECK(cov.ranks.d1 == 2);
        CHECK(cov.ranks.nu == 2);
    }
}

TEST_CASE("mainline vertex X_4^2 via the even-class relator") {
    auto r = p_quotient(mainline_fp(false, 2, 4), 3, 10);
    auto s = series_and_sizes(r.G);
    CHECK(s.log_order == 6);
    CHECK(s.cls == 4);
    CHECK(s.derived_length == 2);
}

TEST_CASE("metabelianization") {
    auto g = PcPresentation::make(3, 2);  // abelian: unchanged
    auto m = metabelianization(g);
    CHECK(m.ngens == 2);
    auto h = PcPresentation::make(3, 3);
    h.set_comm(1, 0, h.gen(2));
    CHECK(metabelianization(h).ngens == 3);  // dl 2 already
}

TEST_CASE("fp text round-trip on normalized words") {
    FpPresentation f{2, {parse_fp_word("[g2,g1]^3", 2), parse_fp_word("g1^9", 2)}};
    std::string t = fp_format(f);
    auto f2 = fp_parse(t);
    CHECK(fp_format(f2) == t);
    // sugar expands: conjugation and commutators
    auto w = parse_fp_word("g1^g2", 2);
    CHECK(fp_word_str(w) == "g2^-1*g1*g2");
    auto cw = parse_fp_word("[g1,g2,g1]", 2);  // left-normed
    auto manual = FpExpr::comm(FpExpr::comm(FpExpr::generator(0), FpExpr::generator(1)),
                               FpExpr::generator(0));
    CHECK(fp_word_str(cw) == fp_word_str(manual));
}

TEST_CASE("standard copy of quotient-derived groups") {
    // Heisenberg as a plain pc presentation without tags
    auto h = PcPresentation::make(3, 3);
    h.set_comm(1, 0, h.gen(2));
    auto s = standard_copy(h);
    CHECK(s.ngens == 3);
    CHECK(s.consistency_check().empty());
    CHECK((int)s.weights.size() == 3);
    CHECK(s.weights[2] == 2);
    CHECK(s.defs[2].kind == PcPresentation::Def::Comm);

    // a cover can be taken right away
    auto cov = p_cover(s);
    CHECK(cov.ranks.d1 == 2);

    // C9 similarly
    auto c = PcPresentation::make(3, 2);
    c.set_power(0, c.gen(1));
    auto sc = standard_copy(c);
    CHECK(sc.ngens == 2);
    CHECK(sc.defs[1].kind == PcPresentation::Def::Power);
}
