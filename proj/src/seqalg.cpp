#include "entacc/seqalg.hpp"

#include <algorithm>
#include <vector>

namespace entacc {

Rat rat_parse(std::string_view text) {
    size_t a = text.find_first_not_of(" \t");
    size_t b = text.find_last_not_of(" \t");
    if (a == std::string_view::npos) fail(Errc::parse_error, "empty rational");
    std::string t(text.substr(a, b - a + 1));
    try {
        size_t slash = t.find('/');
        if (slash == std::string::npos) return Rat(BigInt(t));
        BigInt num(t.substr(0, slash));
        BigInt den(t.substr(slash + 1));
        if (den == 0) fail(Errc::parse_error, "zero denominator in rational '" + t + "'");
        return Rat(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(Errc::parse_error, "bad rational '" + t + "'");
    }
}

SeqPtr ScalarSeq::constant(const Rat& c) { return SeqPtr(new ScalarSeq(SeqKind::Const, c, nullptr, nullptr)); }
SeqPtr ScalarSeq::linear_up(const Rat& c) { return SeqPtr(new ScalarSeq(SeqKind::LinearUp, c, nullptr, nullptr)); }
SeqPtr ScalarSeq::harmonic(const Rat& c) { return SeqPtr(new ScalarSeq(SeqKind::Harmonic, c, nullptr, nullptr)); }
SeqPtr ScalarSeq::approach_up(const Rat& c) { return SeqPtr(new ScalarSeq(SeqKind::ApproachUp, c, nullptr, nullptr)); }
SeqPtr ScalarSeq::log_ratio(const Rat& c) { return SeqPtr(new ScalarSeq(SeqKind::LogRatio, c, nullptr, nullptr)); }

SeqPtr ScalarSeq::product(SeqPtr a, SeqPtr b) {
    if (!a || !b) fail(Errc::invalid_argument, "product of null sequence");
    return SeqPtr(new ScalarSeq(SeqKind::Product, Rat(), a, b));
}

SeqPtr ScalarSeq::scale(const Rat& q, SeqPtr s) {
    if (!s) fail(Errc::invalid_argument, "scale of null sequence");
    return SeqPtr(new ScalarSeq(SeqKind::Scale, q, s, nullptr));
}

namespace {

std::int64_t floor_log2(std::int64_t v) {
    std::int64_t r = 0;
    while (v > 1) {
        v >>= 1;
        ++r;
    }
    return r;
}

struct Leaf {
    SeqKind kind;
    Rat c;
};

void flatten(const SeqPtr& s, std::vector<Leaf>& out) {
    switch (s->kind()) {
    case SeqKind::Product:
        flatten(s->lhs(), out);
        flatten(s->rhs(), out);
        return;
    case SeqKind::Scale:
        out.push_back(Leaf{SeqKind::Const, s->c()});
        flatten(s->lhs(), out);
        return;
    default:
        out.push_back(Leaf{s->kind(), s->c()});
        return;
    }
}

// Asymptotic shape of a product of grammar leaves: coeff * m^deg * log^logs,
// where coeff collects the constants and the limits of ApproachUp factors.
struct Shape {
    std::vector<Leaf> leaves;
    int deg = 0;
    int logs = 0;
    Rat coeff = 1;
    bool zero = false;
    int approaches = 0;

    explicit Shape(const SeqPtr& s) {
        flatten(s, leaves);
        for (const Leaf& l : leaves) {
            if (l.c == 0) zero = true;
            coeff *= l.c;
            switch (l.kind) {
            case SeqKind::LinearUp: deg += 1; break;
            case SeqKind::Harmonic: deg -= 1; break;
            case SeqKind::LogRatio:
                deg -= 1;
                logs += 1;
                break;
            case SeqKind::ApproachUp: approaches += 1; break;
            default: break;
            }
        }
    }
    bool all_positive() const {
        return std::all_of(leaves.begin(), leaves.end(), [](const Leaf& l) { return l.c > 0; });
    }
    bool diverges() const { return !zero && (deg > 0 || (deg == 0 && logs > 0)); }
};

Rat leaf_eval(const Leaf& l, std::int64_t m) {
    switch (l.kind) {
    case SeqKind::Const: return l.c;
    case SeqKind::LinearUp: return l.c * m;
    case SeqKind::Harmonic: return l.c / m;
    case SeqKind::ApproachUp: return l.c * Rat(m, m + 1);
    case SeqKind::LogRatio: return l.c * Rat(floor_log2(m + 1), m);
    default: fail(Errc::internal, "leaf_eval on non-leaf");
    }
}

Rat shape_eval(const Shape& sh, std::int64_t m) {
    Rat v = 1;
    for (const Leaf& l : sh.leaves) v *= leaf_eval(l, m);
    return v;
}

// Decreasing dominator for positive shapes with deg < 0:
//   |value(m)| <= |coeff over approaches->1| * (floor(log2(m+1))+1)^logs / m^{-deg}.
Rat shape_bound(const Shape& sh, std::int64_t m) {
    Rat c = 1;
    for (const Leaf& l : sh.leaves) {
        Rat a = l.c < 0 ? Rat(-l.c) : l.c;
        c *= a;
    }
    Rat b = c;
    for (int i = 0; i < sh.logs; ++i) b *= (floor_log2(m + 1) + 1);
    for (int i = 0; i < -sh.deg; ++i) b /= m;
    return b;
}

} // namespace

Rat seq_eval(const SeqPtr& s, std::int64_t m) {
    if (m < 1) fail(Errc::invalid_argument, "sequence index must be >= 1");
    switch (s->kind()) {
    case SeqKind::Product: return seq_eval(s->lhs(), m) * seq_eval(s->rhs(), m);
    case SeqKind::Scale: return s->c() * seq_eval(s->lhs(), m);
    default: return leaf_eval(Leaf{s->kind(), s->c()}, m);
    }
}

SeqLimit seq_limit(const SeqPtr& s) {
    Shape sh(s);
    if (sh.zero) return SeqLimit{false, 0};
    if (sh.deg < 0) return SeqLimit{false, 0};
    if (sh.diverges()) {
        if (sh.coeff > 0) return SeqLimit{true, 0};
        fail(Errc::indeterminate_limit, "sequence diverges with negative sign; no certified limit");
    }
    // deg == 0, logs == 0: the m-dependence cancels exactly or comes from
    // ApproachUp factors; the limit is the product of the factor limits.
    return SeqLimit{false, sh.coeff};
}

namespace {

SeqLimit sup_impl(const SeqPtr& s, std::int64_t m0) {
    if (m0 < 1) m0 = 1;
    Shape sh(s);
    if (sh.zero) return SeqLimit{false, 0};
    if (sh.diverges()) {
        if (sh.coeff > 0) return SeqLimit{true, 0};
        fail(Errc::indeterminate_limit, "negative divergent sequence has no certified supremum");
    }
    SeqLimit lim = seq_limit(s);
    if (sh.deg == 0 && sh.logs == 0) {
        if (sh.approaches == 0) return SeqLimit{false, shape_eval(sh, m0)}; // constant
        // monotone: increasing toward coeff when positive, decreasing when negative
        if (sh.coeff > 0) return SeqLimit{false, rat_max(lim.value, shape_eval(sh, m0))};
        return SeqLimit{false, shape_eval(sh, m0)};
    }
    // deg < 0: scan a head, then certify the tail by dyadic blocks. Within
    // block j (floor(log2(m+1)) == j) the values are dominated by
    // C * j^logs / (2^j - 1)^d, and that block bound is strictly decreasing
    // once j >= max(2*logs, 6).
    if (!sh.all_positive())
        fail(Errc::indeterminate_limit, "supremum of sign-mixed decaying sequence is not certified");
    int d = -sh.deg;
    std::int64_t j0 = std::max<std::int64_t>(2 * sh.logs, 6);
    std::int64_t head_end = std::max<std::int64_t>(m0 + 8, (std::int64_t{1} << (j0 + 1)) - 2);
    Rat best = shape_eval(sh, m0);
    for (std::int64_t m = m0 + 1; m <= head_end; ++m) best = rat_max(best, shape_eval(sh, m));
    Rat cprod = 1;
    for (const Leaf& l : sh.leaves) cprod *= (l.c < 0 ? Rat(-l.c) : l.c);
    for (std::int64_t j = j0 + 1;; ++j) {
        Rat block = cprod;
        for (int i = 0; i < sh.logs; ++i) block *= j;
        Rat md = 1;
        for (int i = 0; i < d; ++i) md *= ((BigInt(1) << j) - 1);
        block /= Rat(md);
        if (block <= best) break;
        if (j > 60) fail(Errc::indeterminate_limit, "supremum scan did not converge");
        best = rat_max(best, shape_eval(sh, (std::int64_t{1} << j) - 1));
    }
    return SeqLimit{false, best};
}

} // namespace

SeqLimit seq_sup(const SeqPtr& s) { return sup_impl(s, 1); }
SeqLimit seq_sup_from(const SeqPtr& s, std::int64_t m0) { return sup_impl(s, m0); }

SeqMonotone seq_monotone(const SeqPtr& s) {
    Shape sh(s);
    if (sh.zero || sh.leaves.empty()) return SeqMonotone{SeqDirection::Constant, 1};
    bool positive = sh.coeff > 0;
    if (sh.deg > 0 || (sh.deg == 0 && sh.logs > 0))
        return SeqMonotone{positive ? SeqDirection::Increasing : SeqDirection::Decreasing, 1};
    if (sh.deg == 0) {
        if (sh.approaches == 0) return SeqMonotone{SeqDirection::Constant, 1};
        return SeqMonotone{positive ? SeqDirection::Increasing : SeqDirection::Decreasing, 1};
    }
    // deg < 0: decays to 0; LogRatio factors jump up at dyadic indices.
    std::int64_t threshold = 4 * (sh.approaches + 1);
    if (sh.logs > 0) {
        return SeqMonotone{positive ? SeqDirection::DecreasingLogBlocks : SeqDirection::Increasing,
                           threshold};
    }
    return SeqMonotone{positive ? SeqDirection::Decreasing : SeqDirection::Increasing, threshold};
}

bool seq_log_jump(std::int64_t m) {
    std::int64_t v = m + 2;
    return v >= 2 && (v & (v - 1)) == 0;
}

bool seq_positive(const SeqPtr& s) {
    Shape sh(s);
    return sh.all_positive();
}

nlohmann::ordered_json seq_to_json(const SeqPtr& s) {
    nlohmann::ordered_json j;
    switch (s->kind()) {
    case SeqKind::Const: j["rule"] = "const"; j["c"] = rat_str(s->c()); break;
    case SeqKind::LinearUp: j["rule"] = "linear_up"; j["c"] = rat_str(s->c()); break;
    case SeqKind::Harmonic: j["rule"] = "harmonic"; j["c"] = rat_str(s->c()); break;
    case SeqKind::ApproachUp: j["rule"] = "approach_up"; j["c"] = rat_str(s->c()); break;
    case SeqKind::LogRatio: j["rule"] = "log_ratio"; j["c"] = rat_str(s->c()); break;
    case SeqKind::Product:
        j["rule"] = "product";
        j["s1"] = seq_to_json(s->lhs());
        j["s2"] = seq_to_json(s->rhs());
        break;
    case SeqKind::Scale:
        j["rule"] = "scale";
        j["q"] = rat_str(s->c());
        j["s"] = seq_to_json(s->lhs());
        break;
    }
    return j;
}

SeqPtr seq_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rule"))
        fail(Errc::parse_error, "sequence JSON must be an object with a 'rule' field");
    std::string rule = j.at("rule").get<std::string>();
    auto c_of = [&](const char* key) { return rat_parse(j.at(key).get<std::string>()); };
    if (rule == "const") return ScalarSeq::constant(c_of("c"));
    if (rule == "linear_up") return ScalarSeq::linear_up(c_of("c"));
    if (rule == "harmonic") return ScalarSeq::harmonic(c_of("c"));
    if (rule == "approach_up") return ScalarSeq::approach_up(c_of("c"));
    if (rule == "log_ratio") return ScalarSeq::log_ratio(c_of("c"));
    if (rule == "product") return ScalarSeq::product(seq_from_json(j.at("s1")), seq_from_json(j.at("s2")));
    if (rule == "scale") return ScalarSeq::scale(c_of("q"), seq_from_json(j.at("s")));
    fail(Errc::parse_error, "unknown sequence rule '" + rule + "'");
}

} // namespace entacc
