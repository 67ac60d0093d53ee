#include "doctest.h"

#include <random>

#include "towers3/pc.hpp"
#include "towers3/subgrp.hpp"

using namespace towers3;

namespace {

PcPresentation heisenberg27() {
    // extraspecial of order 27, exponent 3
    auto g = PcPresentation::make(3, 3);
    g.set_comm(1, 0, g.gen(2));
    return g;
}

PcPresentation c9() {
    auto g = PcPresentation::make(3, 2);
    g.set_power(0, g.gen(1));
    return g;
}

PcPresentation elem33() { return PcPresentation::make(3, 2); }

Vec random_elt(const PcPresentation& g, std::mt19937& rng) {
    Vec v(g.ngens, 0);
    for (auto& e : v) e = (uint8_t)(rng() % g.prime);
    return v;
}

} // namespace

TEST_CASE("identity times generator") {
    auto g = heisenberg27();
    CHECK(g.mul(g.id(), g.gen(0)) == g.gen(0));
}

TEST_CASE("collection in the Heisenberg group") {
    auto g = heisenberg27();
    // [g2,g1] = g3, so g2*g1 = g1*g2*g3
    Vec ba = g.mul(g.gen(1), g.gen(0));
    Vec expect(3, 0);
    expect[0] = 1;
    expect[1] = 1;
    expect[2] = 1;
    CHECK(ba == expect);
    CHECK(g.commutator(g.gen(1), g.gen(0)) == g.gen(2));
    CHECK(g.consistency_check().empty());
}

TEST_CASE("orders and inverses") {
    auto g = c9();
    CHECK(g.element_order(g.gen(0)) == 9);
    CHECK(g.element_order(g.gen(1)) == 3);
    CHECK(g.consistency_check().empty());
    std::mt19937 rng(7);
    for (int t = 0; t < 50; ++t) {
        Vec a = random_elt(g, rng);
        CHECK(g.is_id(g.mul(a, g.inverse(a))));
        CHECK(g.is_id(g.mul(g.inverse(a), a)));
    }
}

TEST_CASE("deliberately broken presentation is flagged") {
    auto g = PcPresentation::make(3, 2);
    g.set_comm(1, 0, g.gen(1));  // [g2,g1] = g2
    CHECK(!g.consistency_check().empty());
}

TEST_CASE("random associativity") {
    std::mt19937 rng(42);
    for (auto g : {heisenberg27(), c9(), elem33()}) {
        for (int t = 0; t < 1000; ++t) {
            Vec a = random_elt(g, rng), b = random_elt(g, rng), c = random_elt(g, rng);
            CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
        }
    }
}

TEST_CASE("free word collection with inverses") {
    auto g = heisenberg27();
    // y^-1 x^-1 y x = [y,x] = g3
    FreeWord w = {{1, -1}, {0, -1}, {1, 1}, {0, 1}};
    CHECK(g.collect(w) == g.gen(2));
    FreeWord cube = {{0, 3}};
    CHECK(g.is_id(g.collect(cube)));
}

TEST_CASE("presentation text round-trip") {
    auto g = c9();
    g.set_comm(1, 0, Vec(2, 0));
    std::string t1 = pc_format(g);
    auto h = pc_parse(t1);
    CHECK(pc_format(h) == t1);
    CHECK(h.ngens == 2);
    CHECK(h.power_rhs[0] == g.power_rhs[0]);

    std::string text = "pc p=3 n=3\ng1^3 = g3\n[g2,g1] = g3^2\n";
    auto k = pc_parse(text);
    CHECK(pc_format(k) == text);
}

TEST_CASE("subgroup basics in Heisenberg") {
    auto g = heisenberg27();
    auto z = subgroup(g, {g.gen(2)});
    CHECK(z.rank() == 1);
    CHECK(log_index(g, z) == 2);
    auto all = subgroup(g, {g.gen(0), g.gen(1)});
    CHECK(all.rank() == 3);  // commutator closure pulls in g3
    auto triv = subgroup(g, {g.id()});
    CHECK(triv.rank() == 0);
    CHECK(log_index(g, triv) == 3);

    auto der = derived_subgroup(g);
    CHECK(der.rank() == 1);
    CHECK(contains(g, der, g.gen(2)));

    // sifting a CGS again returns the same CGS
    auto re = subgroup(g, der.gens);
    CHECK(subgroup_equal(re, der));
}

TEST_CASE("maximal subgroups counts") {
    auto g33 = elem33();
    CHECK(maximal_subgroups(g33).size() == 4);
    auto g333 = PcPresentation::make(3, 3);
    CHECK(maximal_subgroups(g333).size() == 13);
    auto c9g = c9();
    CHECK(maximal_subgroups(c9g).size() == 1);
    auto h = heisenberg27();
    auto ms = maximal_subgroups(h);
    CHECK(ms.size() == 4);
    for (auto& m : ms) {
        CHECK(log_index(h, m) == 1);
        CHECK(contains(h, m, h.gen(2)));  // Frattini inside every maximal
    }
}

TEST_CASE("quotients") {
    auto h = heisenberg27();
    auto z = subgroup(h, {h.gen(2)});
    auto q = quotient(h, z);
    CHECK(q.ngens == 2);
    CHECK(q.consistency_check().empty());
    CHECK(q.is_id(q.commutator(q.gen(1), q.gen(0))));

    auto whole = whole_group(h);
    CHECK(quotient(h, whole).ngens == 0);
    auto none = trivial_subgroup(h);
    CHECK(quotient(h, none).ngens == 3);

    // non-normal subgroup must be rejected
    auto line = subgroup(h, {h.gen(0)});
    CHECK_THROWS_AS(quotient(h, line), NotNormalError);
}

TEST_CASE("series and sizes") {
    auto g33 = elem33();
    auto s = series_and_sizes(g33);
    CHECK(s.cls == 1);
    CHECK(s.coclass == 1);
    CHECK(s.derived_length == 1);

    auto h = heisenberg27();
    auto sh = series_and_sizes(h);
    CHECK(sh.cls == 2);
    CHECK(sh.log_order == 3);
    CHECK(sh.coclass == 1);
    CHECK(sh.derived_length == 2);
    CHECK(generator_rank(h) == 2);
}

TEST_CASE("abelian quotient invariants with element-order oracle") {
    auto h = heisenberg27();
    CHECK(abelian_quotient_invariants(h, whole_group(h)) == TypeInvariants({1, 1}));
    auto c = c9();
    CHECK(abelian_quotient_invariants(c, whole_group(c)) == TypeInvariants({2}));
    CHECK(abelian_quotient_invariants(h, trivial_subgroup(h)) == TypeInvariants{});

    // oracle: multiset of element orders of C9 reconstructs (2,1)
    auto counts_pow = [&](const PcPresentation& g, long bound) {
        long n = 0;
        Vec v(g.ngens, 0);
        for (;;) {
            Vec x = v;
            if (g.element_order(x) <= bound) ++n;
            int i = g.ngens - 1;
            while (i >= 0 && v[i] == g.prime - 1) v[i--] = 0;
            if (i < 0) break;
            ++v[i];
        }
        return n;
    };
    CHECK(counts_pow(c, 1) == 1);
    CHECK(counts_pow(c, 3) == 3);
    CHECK(counts_pow(c, 9) == 9);
}
