#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entacc/ordinal.hpp"

using namespace entacc;

namespace {
Ordinal O(const char* s) { return ord_parse(s); }
} // namespace

TEST_CASE("comparison") {
    CHECK(Ordinal::cmp(O("w"), O("3")) == std::strong_ordering::greater);
    CHECK(O("w^2*1 + 1") == O("w^2 + 1"));
    CHECK(O("w*2") < O("w^2"));
    CHECK(O("w + 1") < O("w*2"));
    CHECK(O("w^{w}") > O("w^5*9 + w*3"));
}

TEST_CASE("addition") {
    CHECK(ord_add(O("w"), O("1")) == O("w + 1"));
    CHECK(ord_add(O("1"), O("w")) == O("w"));
    CHECK(ord_add(O("w + 1"), O("w")) == O("w*2"));
    CHECK(ord_add(O("w^2 + w*3"), O("w*2 + 5")) == O("w^2 + w*5 + 5"));
    CHECK(ord_add(Ordinal(), O("w")) == O("w"));
    CHECK(ord_add(O("w"), Ordinal()) == O("w"));
}

TEST_CASE("addition is associative on a grid") {
    const char* grid[] = {"0", "1", "3", "w", "w + 2", "w*2", "w^2", "w^2 + w*3 + 2", "w^{w}"};
    for (const char* a : grid)
        for (const char* b : grid)
            for (const char* c : grid) {
                CHECK(ord_add(ord_add(O(a), O(b)), O(c)) == ord_add(O(a), ord_add(O(b), O(c))));
            }
    // right-monotonicity
    for (const char* a : grid) {
        CHECK(ord_add(O(a), O("1")) > O(a));
        CHECK(!(ord_add(O(a), O("w")) < ord_add(O(a), O("1"))));
    }
}

TEST_CASE("natural multiples") {
    CHECK(ord_nat_mul(O("w"), 3) == O("w*3"));
    CHECK(ord_nat_mul(O("w^2 + w"), 2) == O("w^2*2 + w"));
    CHECK(ord_nat_mul(O("5"), 4) == O("20"));
    CHECK_THROWS_AS(ord_nat_mul(O("w"), 0), Error);
    const char* grid[] = {"1", "w", "w + 2", "w^2 + w*3"};
    for (const char* a : grid) {
        for (int p = 1; p <= 5; ++p) {
            Ordinal sum;
            for (int i = 0; i < p; ++i) sum = ord_add(sum, O(a));
            CHECK(ord_nat_mul(O(a), p) == sum);
        }
    }
}

TEST_CASE("irreducible") {
    CHECK(is_irreducible(O("w^2")));
    CHECK(!is_irreducible(O("w^2 + w")));
    CHECK(is_irreducible(O("1"))); // 1 = w^0; callers enforce alpha > 1 where needed
    CHECK(!is_irreducible(O("w*2")));
    CHECK(!is_irreducible(Ordinal()));
}

TEST_CASE("fundamental sequences") {
    CHECK(fundamental_sequence(O("w"), 5) == O("5"));
    CHECK(fundamental_sequence(O("w^2"), 3) == O("w*3"));
    CHECK(fundamental_sequence(O("w^{w}"), 2) == O("w^2"));
    CHECK(fundamental_sequence(O("w*2"), 4) == O("w + 4"));
    CHECK(fundamental_sequence(O("w^2 + w"), 7) == O("w^2 + 7"));
    CHECK_THROWS_AS(fundamental_sequence(O("w + 1"), 1), Error);
    CHECK_THROWS_AS(fundamental_sequence(Ordinal(), 1), Error);

    const char* limits[] = {"w", "w*2", "w^2", "w^2 + w*3", "w^{w}", "w^{w + 1}"};
    for (const char* s : limits) {
        Ordinal a = O(s);
        Ordinal prev;
        for (int m = 1; m <= 6; ++m) {
            Ordinal fm = fundamental_sequence(a, m);
            CHECK(fm < a);
            if (m > 1) CHECK(prev < fm);
            prev = fm;
        }
    }
    // cofinality on a grid: every b < a is eventually passed
    const char* below_w2[] = {"0", "1", "17", "w", "w + 5", "w*3 + 1"};
    for (const char* s : below_w2) {
        bool passed = false;
        for (int m = 1; m <= 40 && !passed; ++m)
            passed = O(s) < fundamental_sequence(O("w^2"), m);
        CHECK(passed);
    }
}

TEST_CASE("left subtraction and splits") {
    CHECK(ord_left_sub(O("w"), O("w + 3")) == O("3"));
    CHECK(ord_left_sub(O("5"), O("w*2 + 3")) == O("w*2 + 3"));
    CHECK(ord_left_sub(O("w"), O("w*2")) == O("w"));
    for (const auto& sp : ord_splits(O("w^2 + w*2 + 1"))) {
        CHECK(ord_add(sp.prefix, sp.suffix) == O("w^2 + w*2 + 1"));
    }
    CHECK(ord_splits(O("w^2 + w*2 + 1")).size() == 5); // suffixes: 0, 1, w+1, w*2+1, w^2+w*2+1
}

TEST_CASE("limit ceil") {
    CHECK(limit_ceil(O("w + 3")) == O("w*2"));
    CHECK(limit_ceil(O("w")) == O("w"));
    CHECK(limit_ceil(O("3")) == O("w"));
    CHECK(limit_ceil(O("w^2 + 1")) == O("w^2 + w"));
}

TEST_CASE("print/parse round trip") {
    const char* grid[] = {"0",       "1",          "w*1",           "w*1 + 4", "w^2*3 + w*1 + 4",
                          "w^{w}*1", "w^{w + 1}*2", "w^{w*2 + 1}*1 + w^3*7 + 2"};
    for (const char* s : grid) {
        Ordinal a = O(s);
        CHECK(ord_parse(ord_str(a)) == a);
    }
    CHECK(ord_str(O("w^2*3 + w*1 + 4")) == "w^2*3 + w*1 + 4");
    CHECK_THROWS_AS(O("w + w"), Error);    // not normal form
    CHECK_THROWS_AS(O("1 + w"), Error);    // not normal form
    CHECK_THROWS_AS(O("w^"), Error);
    CHECK_THROWS_AS(O(""), Error);
    CHECK_THROWS_AS(O("w*0"), Error);
}

TEST_CASE("tower height limit") {
    CHECK(Ordinal().height() == 0);
    CHECK(O("7").height() == 1);
    CHECK(O("w").height() == 2);
    CHECK(O("w^{w}").height() == 3);
    CHECK(O("w^{w^{w}}").height() == 4);
    CHECK_THROWS_AS(O("w^{w^{w^{w}}}"), Error); // height 5 > default limit 4
    set_tower_height_limit(5);
    CHECK(O("w^{w^{w^{w}}}").height() == 5);
    set_tower_height_limit(4);
}
