#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entacc/seqalg.hpp"

using namespace entacc;

namespace {
Rat Q(const char* s) { return rat_parse(s); }
SeqPtr inv_succ() {
    // 1/(m+1)
    return ScalarSeq::product(ScalarSeq::harmonic(1), ScalarSeq::approach_up(1));
}
} // namespace

TEST_CASE("rational parse") {
    CHECK(Q("3/4") == Rat(3, 4));
    CHECK(Q("-2") == Rat(-2));
    CHECK(rat_str(Q("6/4")) == "3/2");
    CHECK_THROWS_AS(Q("1/0"), Error);
    CHECK_THROWS_AS(Q("abc"), Error);
}

TEST_CASE("evaluation") {
    CHECK(seq_eval(ScalarSeq::approach_up(1), 3) == Rat(3, 4));
    CHECK(seq_eval(ScalarSeq::linear_up(2), 5) == Rat(10));
    CHECK(seq_eval(ScalarSeq::product(ScalarSeq::harmonic(1), ScalarSeq::linear_up(1)), 7) == Rat(1));
    CHECK(seq_eval(ScalarSeq::log_ratio(1), 1) == Rat(1));     // floor(log2 2)/1
    CHECK(seq_eval(ScalarSeq::log_ratio(1), 7) == Rat(3, 7));  // floor(log2 8)/7
    CHECK(seq_eval(inv_succ(), 4) == Rat(1, 5));
    CHECK(seq_eval(ScalarSeq::scale(Q("1/2"), ScalarSeq::constant(Q("7/3"))), 9) == Rat(7, 6));
}

TEST_CASE("limits") {
    CHECK(seq_limit(ScalarSeq::approach_up(Q("5/2"))).value == Rat(5, 2));
    CHECK(seq_limit(ScalarSeq::log_ratio(1)).is_zero());
    CHECK(seq_limit(ScalarSeq::product(ScalarSeq::linear_up(1), ScalarSeq::harmonic(1))).value == Rat(1));
    CHECK(seq_limit(ScalarSeq::linear_up(1)).infinite);
    CHECK(seq_limit(inv_succ()).is_zero());
    CHECK(seq_limit(ScalarSeq::product(ScalarSeq::linear_up(1), ScalarSeq::log_ratio(1))).infinite);
    CHECK_THROWS_AS(seq_limit(ScalarSeq::scale(Q("-1"), ScalarSeq::linear_up(1))), Error);
}

TEST_CASE("suprema") {
    CHECK(seq_sup(ScalarSeq::approach_up(1)).value == Rat(1));
    CHECK(seq_sup(ScalarSeq::harmonic(3)).value == Rat(3));
    CHECK(seq_sup(ScalarSeq::constant(Q("7/3"))).value == Rat(7, 3));
    CHECK(seq_sup(ScalarSeq::log_ratio(1)).value == Rat(1)); // attained at m = 1
    CHECK(seq_sup(inv_succ()).value == Rat(1, 2));
    CHECK(seq_sup_from(inv_succ(), 10).value == Rat(1, 11));
    CHECK(seq_sup(ScalarSeq::linear_up(1)).infinite);
    // product with interior maximum: m/(m+1) * 9/m peaks at m = 1
    auto s = ScalarSeq::product(ScalarSeq::approach_up(1), ScalarSeq::harmonic(9));
    CHECK(seq_sup(s).value == Rat(9, 2));
    CHECK(seq_sup_from(s, 3).value == Rat(9, 4));
}

TEST_CASE("sup dominates all sampled values") {
    SeqPtr seqs[] = {
        ScalarSeq::approach_up(Q("4/3")),
        ScalarSeq::harmonic(Q("5")),
        ScalarSeq::log_ratio(Q("2")),
        inv_succ(),
        ScalarSeq::product(ScalarSeq::log_ratio(1), ScalarSeq::constant(Q("3/2"))),
        ScalarSeq::product(ScalarSeq::approach_up(1), ScalarSeq::harmonic(9)),
        ScalarSeq::scale(Q("2/7"), ScalarSeq::approach_up(3)),
    };
    for (const auto& s : seqs) {
        SeqLimit sup = seq_sup(s);
        REQUIRE(!sup.infinite);
        for (std::int64_t m = 1; m <= 1000; ++m) CHECK(seq_eval(s, m) <= sup.value);
    }
}

TEST_CASE("derived monotone direction matches signs") {
    struct Case {
        SeqPtr s;
        SeqDirection dir;
    };
    Case cases[] = {
        {ScalarSeq::constant(Q("2")), SeqDirection::Constant},
        {ScalarSeq::linear_up(Q("1/2")), SeqDirection::Increasing},
        {ScalarSeq::harmonic(Q("3")), SeqDirection::Decreasing},
        {ScalarSeq::approach_up(Q("2")), SeqDirection::Increasing},
        {ScalarSeq::log_ratio(Q("1")), SeqDirection::DecreasingLogBlocks},
        {inv_succ(), SeqDirection::Decreasing},
        {ScalarSeq::product(ScalarSeq::linear_up(1), ScalarSeq::harmonic(2)), SeqDirection::Constant},
    };
    for (const auto& c : cases) {
        SeqMonotone mono = seq_monotone(c.s);
        CHECK(mono.direction == c.dir);
        for (std::int64_t m = std::max<std::int64_t>(mono.threshold, 1); m < 1000; ++m) {
            Rat d = seq_eval(c.s, m + 1) - seq_eval(c.s, m);
            switch (mono.direction) {
            case SeqDirection::Constant: CHECK(d == 0); break;
            case SeqDirection::Increasing: CHECK(d >= 0); break;
            case SeqDirection::Decreasing: CHECK(d <= 0); break;
            case SeqDirection::DecreasingLogBlocks:
                if (!seq_log_jump(m)) CHECK(d <= 0);
                break;
            }
        }
    }
}

TEST_CASE("distance to limit eventually shrinks") {
    SeqPtr seqs[] = {ScalarSeq::approach_up(Q("5/2")), ScalarSeq::harmonic(1), inv_succ(),
                     ScalarSeq::log_ratio(1)};
    for (const auto& s : seqs) {
        SeqLimit lim = seq_limit(s);
        REQUIRE(!lim.infinite);
        auto dist = [&](std::int64_t m) {
            Rat d = seq_eval(s, m) - lim.value;
            return d < 0 ? Rat(-d) : d;
        };
        // compare across dyadic scales to absorb the log-block jitter
        for (std::int64_t m = 16; m <= 256; m *= 2) CHECK(dist(4 * m) <= dist(m));
    }
}

TEST_CASE("json round trip") {
    SeqPtr seqs[] = {
        ScalarSeq::approach_up(Q("3/2")),
        ScalarSeq::scale(Q("1/2"), ScalarSeq::product(ScalarSeq::log_ratio(1), ScalarSeq::linear_up(2))),
        inv_succ(),
    };
    for (const auto& s : seqs) {
        SeqPtr back = seq_from_json(seq_to_json(s));
        CHECK(seq_to_json(back) == seq_to_json(s));
        for (std::int64_t m = 1; m <= 20; ++m) CHECK(seq_eval(back, m) == seq_eval(s, m));
    }
    CHECK(seq_to_json(ScalarSeq::approach_up(Q("3/2")))["rule"] == "approach_up");
}

TEST_CASE("positivity") {
    CHECK(seq_positive(inv_succ()));
    CHECK(seq_positive(ScalarSeq::log_ratio(Q("1/3"))));
    CHECK(!seq_positive(ScalarSeq::constant(Q("0"))));
    CHECK(!seq_positive(ScalarSeq::scale(Q("-1"), ScalarSeq::harmonic(1))));
}
