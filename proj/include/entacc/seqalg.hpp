#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "entacc/rational.hpp"

namespace entacc {

// Closed-form monotone rational sequences m >= 1 with exactly computable
// limits. The grammar is the minimal one the parameter schedules need:
//   Const(c), LinearUp(c) = c*m, Harmonic(c) = c/m,
//   ApproachUp(c) = c*(1 - 1/(m+1)), LogRatio(c) = c*floor(log2(m+1))/m,
//   Product(s1, s2), Scale(q, s).
class ScalarSeq;
using SeqPtr = std::shared_ptr<const ScalarSeq>;

enum class SeqKind { Const, LinearUp, Harmonic, ApproachUp, LogRatio, Product, Scale };

class ScalarSeq : public std::enable_shared_from_this<ScalarSeq> {
public:
    static SeqPtr constant(const Rat& c);
    static SeqPtr linear_up(const Rat& c);
    static SeqPtr harmonic(const Rat& c);
    static SeqPtr approach_up(const Rat& c);
    static SeqPtr log_ratio(const Rat& c);
    static SeqPtr product(SeqPtr a, SeqPtr b);
    static SeqPtr scale(const Rat& q, SeqPtr s);

    SeqKind kind() const { return kind_; }
    const Rat& c() const { return c_; }
    SeqPtr lhs() const { return lhs_; }
    SeqPtr rhs() const { return rhs_; }

private:
    ScalarSeq(SeqKind k, Rat c, SeqPtr a, SeqPtr b) : kind_(k), c_(std::move(c)), lhs_(a), rhs_(b) {}
    SeqKind kind_;
    Rat c_;
    SeqPtr lhs_, rhs_;
};

struct SeqLimit {
    bool infinite = false;
    Rat value; // meaningful iff !infinite
    bool is_zero() const { return !infinite && value == 0; }
};

// Eventual monotonicity direction derived from the rule. LogRatio decays to 0
// but jumps up whenever floor(log2(m+1)) increments; those indices are exposed
// through log_jump below.
enum class SeqDirection { Constant, Increasing, Decreasing, DecreasingLogBlocks };

Rat seq_eval(const SeqPtr& s, std::int64_t m);
SeqLimit seq_limit(const SeqPtr& s);
SeqLimit seq_sup(const SeqPtr& s);               // sup over m >= 1
SeqLimit seq_sup_from(const SeqPtr& s, std::int64_t m0); // sup over m >= m0

struct SeqMonotone {
    SeqDirection direction = SeqDirection::Constant;
    std::int64_t threshold = 1; // direction holds for m >= threshold
};
SeqMonotone seq_monotone(const SeqPtr& s);

// True when eval(m+1) is a LogRatio block jump: m+2 a power of two.
bool seq_log_jump(std::int64_t m);

// Structurally positive for every m >= 1.
bool seq_positive(const SeqPtr& s);

nlohmann::ordered_json seq_to_json(const SeqPtr& s);
SeqPtr seq_from_json(const nlohmann::json& j);

} // namespace entacc
