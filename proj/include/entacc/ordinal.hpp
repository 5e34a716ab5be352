#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "entacc/errors.hpp"

namespace entacc {

// Countable ordinal in Cantor normal form: w^{e1}*c1 + ... + w^{en}*cn with
// exponents strictly decreasing and coefficients >= 1. The empty term list is 0.
class Ordinal {
public:
    struct Term;

    Ordinal() = default;
    explicit Ordinal(std::int64_t n);

    static Ordinal omega();
    // w^{exp} * coeff
    static Ordinal omega_power(const Ordinal& exp, std::int64_t coeff = 1);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;
    // Finite value; fails on infinite ordinals.
    std::int64_t finite_value() const;

    bool is_successor() const;
    bool is_limit() const;
    // Predecessor of a successor ordinal.
    Ordinal pred() const;
    Ordinal succ() const;

    // Nesting depth of exponent towers: height(0)=0, height(n)=1, height(w)=2,
    // height(w^w)=3, ... Construction beyond the configured limit is an error.
    int height() const;

    std::string str() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) { return cmp(a, b); }
    friend bool operator==(const Ordinal& a, const Ordinal& b) { return cmp(a, b) == std::strong_ordering::equal; }

    static std::strong_ordering cmp(const Ordinal& a, const Ordinal& b);

private:
    std::vector<Term> terms_; // strictly decreasing exponents
    friend Ordinal ord_add(const Ordinal&, const Ordinal&);
    friend Ordinal ord_nat_mul(const Ordinal&, std::int64_t);
    friend Ordinal ord_left_sub(const Ordinal&, const Ordinal&);
    friend bool is_irreducible(const Ordinal&);
    friend Ordinal fundamental_sequence(const Ordinal&, std::int64_t);
    friend struct OrdinalBuilder;
    void check_height() const;
};

struct Ordinal::Term {
    Ordinal exp;
    std::int64_t coeff = 1;
};

// Global tower-height limit (default 4, overridable via ENTACC_TOWER_LIMIT and
// the C API). Exceeding it raises Errc::tower_limit instead of silently truncating.
int tower_height_limit();
void set_tower_height_limit(int limit);

Ordinal ord_add(const Ordinal& a, const Ordinal& b);
Ordinal ord_nat_mul(const Ordinal& a, std::int64_t p);
bool is_irreducible(const Ordinal& a);

// m-th element (m >= 1) of the canonical fundamental sequence of a limit
// ordinal: (prefix + w^{b+1})[m] = prefix + w^b*m, (prefix + w^L)[m] = prefix + w^{L[m]}.
Ordinal fundamental_sequence(const Ordinal& a, std::int64_t m);

// Unique minimal x with b + x = a (requires b <= a).
Ordinal ord_left_sub(const Ordinal& b, const Ordinal& a);

// All decompositions a = prefix + suffix at unit-term granularity, reported as
// (min_prefix, suffix) with the full a listed as suffix when its head absorbs.
struct OrdSplit {
    Ordinal prefix; // minimal b with b + suffix = a
    Ordinal suffix;
};
std::vector<OrdSplit> ord_splits(const Ordinal& a);

// Least limit ordinal >= a (a > 0).
Ordinal limit_ceil(const Ordinal& a);

// Text form: "w^{E}*c + ..." with plain integer exponents unbraced, e.g.
// "w^2*3 + w*1 + 4". parse rejects non-normal-form input with position info.
std::string ord_str(const Ordinal& a);
Ordinal ord_parse(std::string_view text);

} // namespace entacc
