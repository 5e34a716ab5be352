#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entacc/ordinal.hpp"
#include "entacc/rational.hpp"
#include "entacc/seqalg.hpp"

namespace entacc {

class EntropyModel;
using ModelPtr = std::shared_ptr<const EntropyModel>;

// Synchronization of candidate indices across sewn copies: I(k) = factor*k,
// l_m(k) = k for m < I(k) and 0 otherwise. Any valid choice yields a uniformly
// equivalent structure; the factor only affects candidate evaluation, never
// the transfinite outputs.
struct SyncRule {
    std::int64_t factor = 1;
};

// One region term of a function on a composite model's base: c + u_e^{base}.
struct UTerm {
    Rat c;
    Ordinal e;
};

// Ordinal-indexed nondecreasing scalar profile. Backed either by an explicit
// finite step list or by lazy closures (value, sup over smaller ordinals)
// together with a stabilization ordinal.
class StepProfile {
public:
    StepProfile();
    static StepProfile constant(const Rat& v);
    // (threshold, value) pairs, thresholds increasing from 0, values nondecreasing.
    static StepProfile steps(std::vector<std::pair<Ordinal, Rat>> s);
    static StepProfile closure(std::function<Rat(const Ordinal&)> value,
                               std::function<Rat(const Ordinal&)> sup_below, Ordinal stab);

    Rat value(const Ordinal& g) const;
    Rat sup_below(const Ordinal& limit) const; // sup over beta < limit, limit > 0
    const Ordinal& stab() const { return stab_; }
    Rat final_value() const { return value(stab_); }
    StepProfile scaled(const Rat& q) const;

private:
    std::vector<std::pair<Ordinal, Rat>> steps_;
    std::function<Rat(const Ordinal&)> value_, sup_below_;
    Ordinal stab_;
};

// Parametric family m -> child model (m >= 1), with the blow-and-sew scale
// sequence folded in. Implementations must provide exact scalar summaries:
// suprema over m at fixed gamma and the limsup profiles over gamma that feed
// the pressure terms of the transfinite recursion.
class ChildFamily {
public:
    virtual ~ChildFamily() = default;

    virtual ModelPtr child(std::int64_t m) const = 0;
    virtual Rat scale(std::int64_t m) const = 0;
    virtual SeqPtr scale_seq() const = 0;

    // limsup_m scale(m) * sup_{child_m}(u_gamma + h), as a profile over gamma
    virtual StepProfile pressure_profile() const = 0;
    // limsup_m scale(m) * ||u_gamma^{child_m}||
    virtual StepProfile qlimit_profile() const = 0;

    virtual Rat norm_sup(const Ordinal& g, std::int64_t from) const = 0;
    virtual Rat uplus_sup(const Ordinal& g, std::int64_t from) const = 0;
    virtual Rat norm_sup_below(const Ordinal& limit, std::int64_t from) const = 0;
    virtual Rat uplus_sup_below(const Ordinal& limit, std::int64_t from) const = 0;
    virtual Rat htop_sup(std::int64_t from) const = 0;

    // least upper bound of the children's orders of accumulation
    virtual Ordinal alpha0_sup() const = 0;
    // u_g == u_d on every child
    virtual bool u_equal(const Ordinal& g, const Ordinal& d) const = 0;
    // u_g identically 0 on every child
    virtual bool u_zero(const Ordinal& g) const = 0;

    virtual std::shared_ptr<const ChildFamily> scaled(const Rat& q) const = 0;
    virtual std::string kind() const = 0;
    virtual nlohmann::ordered_json to_json() const = 0;
};

using FamilyPtr = std::shared_ptr<const ChildFamily>;

FamilyPtr atoms_family(SeqPtr h, SeqPtr scale);
FamilyPtr fixed_family(ModelPtr child, SeqPtr scale);

// Codec hook so constructor-defined families round-trip through model JSON.
void register_family_codec(const std::string& kind,
                           std::function<FamilyPtr(const nlohmann::json&)> decode);
FamilyPtr family_from_json(const nlohmann::json& j);

// Point of the recursive model space: a path of Base / Copy(m) steps ending at
// an atom. Text form: "." for the atom point, otherwise "b" and "c<m>" segments
// joined with '/', e.g. "b/c3".
struct ModelPoint {
    struct Step {
        bool is_copy = false;
        std::int64_t m = 0;
    };
    std::vector<Step> path;

    static ModelPoint atom_point() { return ModelPoint{}; }
    ModelPoint descend_base() const;
    ModelPoint descend_copy(std::int64_t m) const;

    std::string str() const;
    static ModelPoint parse(std::string_view text);
};

// Finitely-presented model of the closure of the relevant ergodic set together
// with its candidate structure: either a single point carrying h_top, or a
// blow-and-sew composite whose copies accumulate on every base point.
class EntropyModel : public std::enable_shared_from_this<EntropyModel> {
public:
    static ModelPtr make_atom(const Rat& h_top, bool mme_in_c = true);
    static ModelPtr make_blow_and_sew(ModelPtr base, FamilyPtr children, SeqPtr scale,
                                      SyncRule sync = {}, std::int64_t shift = 0);

    bool is_atom() const { return !base_; }
    const Rat& atom_h() const;
    bool atom_mme() const;

    ModelPtr base() const { return base_; }
    const ChildFamily& family() const { return *family_; }
    FamilyPtr family_ptr() const { return family_; }
    SyncRule sync() const { return sync_; }
    std::int64_t shift() const { return shift_; }
    std::int64_t first_index() const { return shift_ + 1; }

    // shifted accessors: copy m of this model is raw family index m + shift
    Rat scale_at(std::int64_t m) const;
    ModelPtr child_at(std::int64_t m) const; // memoized

    void validate_point(const ModelPoint& p) const;

    nlohmann::ordered_json to_json() const;
    static ModelPtr from_json(const nlohmann::json& j);

    struct Memo; // engine-owned caches
    Memo& memo() const { return *memo_; }

private:
    EntropyModel() = default;
    Rat atom_h_;
    bool atom_mme_ = true;
    ModelPtr base_;
    FamilyPtr family_;
    SyncRule sync_;
    std::int64_t shift_ = 0;
    std::unique_ptr<Memo> memo_;
};

struct EntropyModel::Memo {
    std::mutex mu;
    std::map<Ordinal, Rat> norm, uplus, uplus_below;
    std::map<Ordinal, std::vector<UTerm>> terms;
    std::map<Ordinal, std::optional<Rat>> constval;
    std::optional<Ordinal> alpha0;
    std::optional<Rat> htop;
    std::map<std::int64_t, ModelPtr> children;
    std::optional<StepProfile> pressure, qlimit;
};

// h and candidate-sequence evaluation (exact rationals)
Rat eval_h(const ModelPtr& model, const ModelPoint& p);
Rat eval_h_k(const ModelPtr& model, const ModelPoint& p, std::int64_t k);
Rat eval_tail(const ModelPtr& model, const ModelPoint& p, std::int64_t k);

// k-th candidate function bundled with its model (value rule per region).
struct CandidateEval {
    ModelPtr model;
    std::int64_t k = 0;
    Rat at(const ModelPoint& p) const { return eval_h_k(model, p, k); }
    Rat tail_at(const ModelPoint& p) const { return eval_tail(model, p, k); }
};

// Structural probe points: atom points, a few copies per level.
std::vector<ModelPoint> probe_points(const ModelPtr& model, int copies_per_level = 3);

// Multiply every entropy value (and hence every u_gamma) by q > 0; the
// suspension/power transport of the calculus.
ModelPtr scale_model(const ModelPtr& m, const Rat& q);

} // namespace entacc
