#include "entacc/ordinal.hpp"

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace entacc {

namespace {

std::atomic<int> g_tower_limit{[] {
    if (const char* env = std::getenv("ENTACC_TOWER_LIMIT")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 4;
}()};

} // namespace

int tower_height_limit() { return g_tower_limit.load(); }

void set_tower_height_limit(int limit) {
    if (limit < 1) fail(Errc::invalid_argument, "tower height limit must be >= 1");
    g_tower_limit.store(limit);
}

struct OrdinalBuilder {
    static Ordinal make(std::vector<Ordinal::Term> terms) {
        Ordinal o;
        o.terms_ = std::move(terms);
        o.check_height();
        return o;
    }
};

Ordinal::Ordinal(std::int64_t n) {
    if (n < 0) fail(Errc::invalid_argument, "ordinal from negative integer");
    if (n > 0) terms_.push_back(Term{Ordinal(), n});
}

Ordinal Ordinal::omega() { return omega_power(Ordinal(1), 1); }

Ordinal Ordinal::omega_power(const Ordinal& exp, std::int64_t coeff) {
    if (coeff < 1) fail(Errc::invalid_argument, "ordinal coefficient must be >= 1");
    if (exp.is_zero()) return Ordinal(coeff);
    return OrdinalBuilder::make({Term{exp, coeff}});
}

bool Ordinal::is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero());
}

std::int64_t Ordinal::finite_value() const {
    if (terms_.empty()) return 0;
    if (!is_finite()) fail(Errc::domain_error, "ordinal " + str() + " is not finite");
    return terms_[0].coeff;
}

bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exp.is_zero(); }
bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exp.is_zero(); }

Ordinal Ordinal::pred() const {
    if (!is_successor()) fail(Errc::domain_error, "predecessor of non-successor ordinal " + str());
    std::vector<Term> t = terms_;
    if (t.back().coeff > 1)
        t.back().coeff -= 1;
    else
        t.pop_back();
    return OrdinalBuilder::make(std::move(t));
}

Ordinal Ordinal::succ() const { return ord_add(*this, Ordinal(1)); }

int Ordinal::height() const {
    int h = 0;
    for (const Term& t : terms_) h = std::max(h, 1 + t.exp.height());
    return h;
}

void Ordinal::check_height() const {
    if (height() > tower_height_limit())
        fail(Errc::tower_limit,
             "ordinal exceeds tower-height limit " + std::to_string(tower_height_limit()));
}

std::strong_ordering Ordinal::cmp(const Ordinal& a, const Ordinal& b) {
    size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (size_t i = 0; i < n; ++i) {
        auto c = cmp(a.terms_[i].exp, b.terms_[i].exp);
        if (c != std::strong_ordering::equal) return c;
        if (a.terms_[i].coeff != b.terms_[i].coeff)
            return a.terms_[i].coeff <=> b.terms_[i].coeff;
    }
    return a.terms_.size() <=> b.terms_.size();
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const Ordinal& lead = b.terms_[0].exp;
    std::vector<Ordinal::Term> out;
    size_t i = 0;
    while (i < a.terms_.size() && Ordinal::cmp(a.terms_[i].exp, lead) == std::strong_ordering::greater)
        out.push_back(a.terms_[i++]);
    Ordinal::Term first = b.terms_[0];
    if (i < a.terms_.size() && a.terms_[i].exp == lead) first.coeff += a.terms_[i].coeff;
    out.push_back(first);
    out.insert(out.end(), b.terms_.begin() + 1, b.terms_.end());
    return OrdinalBuilder::make(std::move(out));
}

Ordinal ord_nat_mul(const Ordinal& a, std::int64_t p) {
    if (p < 1) fail(Errc::invalid_argument, "ordinal natural multiple requires p >= 1");
    if (a.is_zero() || p == 1) return a;
    std::vector<Ordinal::Term> t = a.terms_;
    t[0].coeff *= p;
    return OrdinalBuilder::make(std::move(t));
}

bool is_irreducible(const Ordinal& a) {
    return a.terms_.size() == 1 && a.terms_[0].coeff == 1;
}

Ordinal fundamental_sequence(const Ordinal& a, std::int64_t m) {
    if (m < 1) fail(Errc::invalid_argument, "fundamental sequence index must be >= 1");
    if (!a.is_limit()) fail(Errc::domain_error, "fundamental sequence of non-limit ordinal " + a.str());
    std::vector<Ordinal::Term> prefix = a.terms_;
    Ordinal::Term last = prefix.back();
    prefix.pop_back();
    if (last.coeff > 1) {
        last.coeff -= 1;
        prefix.push_back(last);
    }
    Ordinal head = OrdinalBuilder::make(std::move(prefix));
    // remaining block is w^{last.exp} with last.exp >= 1
    Ordinal tail;
    if (last.exp.is_successor()) {
        tail = Ordinal::omega_power(last.exp.pred(), m);
    } else {
        tail = Ordinal::omega_power(fundamental_sequence(last.exp, m), 1);
    }
    return ord_add(head, tail);
}

Ordinal ord_left_sub(const Ordinal& b, const Ordinal& a) {
    if (Ordinal::cmp(b, a) == std::strong_ordering::greater)
        fail(Errc::domain_error, "left subtraction requires b <= a");
    size_t i = 0;
    while (i < b.terms_.size() && i < a.terms_.size() && b.terms_[i].exp == a.terms_[i].exp &&
           b.terms_[i].coeff == a.terms_[i].coeff)
        ++i;
    if (i == b.terms_.size()) {
        std::vector<Ordinal::Term> rest(a.terms_.begin() + i, a.terms_.end());
        return OrdinalBuilder::make(std::move(rest));
    }
    // first difference: either equal exponent with smaller coefficient, or smaller exponent
    std::vector<Ordinal::Term> rest;
    if (b.terms_[i].exp == a.terms_[i].exp && b.terms_[i].coeff < a.terms_[i].coeff) {
        rest.push_back(Ordinal::Term{a.terms_[i].exp, a.terms_[i].coeff - b.terms_[i].coeff});
        rest.insert(rest.end(), a.terms_.begin() + i + 1, a.terms_.end());
    } else {
        // b's tail is absorbed by a's term at position i
        rest.insert(rest.end(), a.terms_.begin() + i, a.terms_.end());
    }
    return OrdinalBuilder::make(std::move(rest));
}

std::vector<OrdSplit> ord_splits(const Ordinal& a) {
    std::vector<OrdSplit> out;
    // suffix = 0, prefix = a
    out.push_back(OrdSplit{a, Ordinal()});
    const auto& terms = a.terms();
    for (size_t i = terms.size(); i-- > 0;) {
        // suffix begins inside term i with coefficient cut in [1, c_i]
        for (std::int64_t cut = 1; cut <= terms[i].coeff; ++cut) {
            std::vector<Ordinal::Term> suf;
            suf.push_back(Ordinal::Term{terms[i].exp, cut});
            suf.insert(suf.end(), terms.begin() + i + 1, terms.end());
            std::vector<Ordinal::Term> pre(terms.begin(), terms.begin() + i);
            if (cut < terms[i].coeff) pre.push_back(Ordinal::Term{terms[i].exp, terms[i].coeff - cut});
            out.push_back(OrdSplit{OrdinalBuilder::make(std::move(pre)), OrdinalBuilder::make(std::move(suf))});
        }
    }
    return out;
}

Ordinal limit_ceil(const Ordinal& a) {
    if (a.is_zero()) fail(Errc::domain_error, "limit_ceil of 0");
    if (a.is_limit()) return a;
    std::vector<Ordinal::Term> t = a.terms();
    t.pop_back(); // drop the finite part
    Ordinal head = OrdinalBuilder::make(std::move(t));
    return ord_add(head, Ordinal::omega());
}

std::string ord_str(const Ordinal& a) { return a.str(); }

std::string Ordinal::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        if (!first) os << " + ";
        first = false;
        if (t.exp.is_zero()) {
            os << t.coeff;
        } else if (t.exp == Ordinal(1)) {
            os << "w*" << t.coeff;
        } else if (t.exp.is_finite()) {
            os << "w^" << t.exp.finite_value() << "*" << t.coeff;
        } else {
            os << "w^{" << t.exp.str() << "}*" << t.coeff;
        }
    }
    return os.str();
}

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;

    [[noreturn]] void err(const std::string& what) {
        fail(Errc::parse_error, "ordinal parse error at position " + std::to_string(pos) + ": " + what);
    }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::int64_t integer() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) err("expected integer");
        std::int64_t v = 0;
        for (size_t i = start; i < pos; ++i) {
            v = v * 10 + (text[i] - '0');
            if (v < 0 || v > (std::int64_t{1} << 56)) err("integer too large");
        }
        return v;
    }

    Ordinal::Term term() {
        skip_ws();
        if (pos >= text.size()) err("expected term");
        if (text[pos] == 'w') {
            ++pos;
            Ordinal exp(1);
            if (eat('^')) {
                skip_ws();
                if (eat('{')) {
                    exp = ordinal();
                    skip_ws();
                    if (!eat('}')) err("expected '}'");
                } else {
                    exp = Ordinal(integer());
                }
            }
            std::int64_t coeff = 1;
            skip_ws();
            if (eat('*')) coeff = integer();
            if (coeff < 1) err("coefficient must be >= 1");
            if (exp.is_zero()) return Ordinal::Term{Ordinal(), coeff}; // w^0*c is the finite term c
            return Ordinal::Term{exp, coeff};
        }
        std::int64_t v = integer();
        if (v == 0) return Ordinal::Term{Ordinal(), 0}; // marker for explicit zero
        return Ordinal::Term{Ordinal(), v};
    }

    Ordinal ordinal() {
        std::vector<Ordinal::Term> terms;
        while (true) {
            size_t at = pos;
            Ordinal::Term t = term();
            if (t.coeff == 0) {
                // literal "0" allowed only as the entire ordinal
                if (!terms.empty()) {
                    pos = at;
                    err("zero term in sum");
                }
            } else {
                if (!terms.empty() &&
                    Ordinal::cmp(terms.back().exp, t.exp) != std::strong_ordering::greater) {
                    pos = at;
                    err("terms not in strictly decreasing exponent order (not normal form)");
                }
                terms.push_back(t);
            }
            skip_ws();
            if (!eat('+')) break;
            if (terms.empty()) err("'+' after zero");
        }
        return OrdinalBuilder::make(std::move(terms));
    }
};

} // namespace

Ordinal ord_parse(std::string_view text) {
    Parser p{text};
    Ordinal o = p.ordinal();
    p.skip_ws();
    if (p.pos != text.size()) p.err("trailing input");
    return o;
}

} // namespace entacc
