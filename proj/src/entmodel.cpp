#include "entacc/entmodel.hpp"

#include <algorithm>
#include <cctype>

#include "entacc/transfinite.hpp"

namespace entacc {

// ---------------------------------------------------------------------------
// StepProfile

StepProfile::StepProfile() : steps_{{Ordinal(), Rat(0)}} {}

StepProfile StepProfile::constant(const Rat& v) {
    StepProfile p;
    p.steps_ = {{Ordinal(), v}};
    p.stab_ = Ordinal();
    return p;
}

StepProfile StepProfile::steps(std::vector<std::pair<Ordinal, Rat>> s) {
    if (s.empty() || !s.front().first.is_zero())
        fail(Errc::invalid_argument, "step profile must start at 0");
    for (size_t i = 1; i < s.size(); ++i) {
        if (!(s[i - 1].first < s[i].first) || s[i - 1].second > s[i].second)
            fail(Errc::invalid_argument, "step profile must be nondecreasing");
    }
    StepProfile p;
    p.stab_ = s.back().first;
    p.steps_ = std::move(s);
    return p;
}

StepProfile StepProfile::closure(std::function<Rat(const Ordinal&)> value,
                                 std::function<Rat(const Ordinal&)> sup_below, Ordinal stab) {
    StepProfile p;
    p.steps_.clear();
    p.value_ = std::move(value);
    p.sup_below_ = std::move(sup_below);
    p.stab_ = std::move(stab);
    return p;
}

Rat StepProfile::value(const Ordinal& g) const {
    if (value_) return value_(g);
    Rat v = steps_.front().second;
    for (const auto& [t, w] : steps_) {
        if (t <= g) v = w;
    }
    return v;
}

Rat StepProfile::sup_below(const Ordinal& limit) const {
    if (limit.is_zero()) fail(Errc::internal, "sup_below(0)");
    if (sup_below_) return sup_below_(limit);
    Rat v = steps_.front().second;
    for (const auto& [t, w] : steps_) {
        if (t < limit) v = w;
    }
    return v;
}

StepProfile StepProfile::scaled(const Rat& q) const {
    if (q < 0) fail(Errc::invalid_argument, "profile scale must be >= 0");
    StepProfile p;
    if (value_) {
        auto v = value_;
        auto s = sup_below_;
        return closure([v, q](const Ordinal& g) { return q * v(g); },
                       [s, q](const Ordinal& g) { return q * s(g); }, stab_);
    }
    p.steps_.clear();
    for (const auto& [t, w] : steps_) p.steps_.push_back({t, q * w});
    p.stab_ = stab_;
    return p;
}

// ---------------------------------------------------------------------------
// ModelPoint

ModelPoint ModelPoint::descend_base() const {
    ModelPoint p = *this;
    p.path.push_back(Step{false, 0});
    return p;
}

ModelPoint ModelPoint::descend_copy(std::int64_t m) const {
    ModelPoint p = *this;
    p.path.push_back(Step{true, m});
    return p;
}

std::string ModelPoint::str() const {
    if (path.empty()) return ".";
    std::string out;
    for (size_t i = 0; i < path.size(); ++i) {
        if (i) out += "/";
        out += path[i].is_copy ? "c" + std::to_string(path[i].m) : "b";
    }
    return out;
}

ModelPoint ModelPoint::parse(std::string_view text) {
    ModelPoint p;
    if (text == "." || text.empty()) return p;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find('/', pos);
        std::string_view seg = text.substr(pos, next == std::string_view::npos ? next : next - pos);
        if (seg == "b") {
            p.path.push_back(Step{false, 0});
        } else if (!seg.empty() && seg[0] == 'c') {
            std::int64_t m = 0;
            for (char ch : seg.substr(1)) {
                if (!std::isdigit(static_cast<unsigned char>(ch)))
                    fail(Errc::parse_error, "bad point segment '" + std::string(seg) + "'");
                m = m * 10 + (ch - '0');
            }
            if (m < 1) fail(Errc::parse_error, "copy index must be >= 1");
            p.path.push_back(Step{true, m});
        } else {
            fail(Errc::parse_error, "bad point segment '" + std::string(seg) + "'");
        }
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return p;
}

// ---------------------------------------------------------------------------
// EntropyModel

ModelPtr EntropyModel::make_atom(const Rat& h_top, bool mme_in_c) {
    if (h_top < 0) fail(Errc::invalid_argument, "atom h_top must be >= 0");
    auto m = std::shared_ptr<EntropyModel>(new EntropyModel());
    m->atom_h_ = h_top;
    m->atom_mme_ = mme_in_c;
    m->memo_ = std::make_unique<Memo>();
    return m;
}

ModelPtr EntropyModel::make_blow_and_sew(ModelPtr base, FamilyPtr children, SeqPtr scale,
                                         SyncRule sync, std::int64_t shift) {
    if (!base || !children || !scale) fail(Errc::invalid_argument, "null argument to blow-and-sew");
    if (sync.factor < 1) fail(Errc::invalid_argument, "sync factor must be >= 1");
    if (shift < 0) fail(Errc::invalid_argument, "shift must be >= 0");
    if (!seq_positive(scale)) fail(Errc::invalid_argument, "scale sequence must be positive");
    SeqLimit ssup = seq_sup(scale);
    if (ssup.infinite || ssup.value > 1)
        fail(Errc::invalid_argument, "scale sequence must take values in (0,1]");
    // requires a certified limit for the scaled child entropies; failures
    // surface as IndeterminateLimit here rather than later
    children->pressure_profile();
    children->htop_sup(shift + 1);
    auto m = std::shared_ptr<EntropyModel>(new EntropyModel());
    m->base_ = std::move(base);
    m->family_ = std::move(children);
    m->sync_ = sync;
    m->shift_ = shift;
    m->memo_ = std::make_unique<Memo>();
    return m;
}

const Rat& EntropyModel::atom_h() const {
    if (!is_atom()) fail(Errc::domain_error, "atom_h on composite model");
    return atom_h_;
}

bool EntropyModel::atom_mme() const {
    if (!is_atom()) fail(Errc::domain_error, "atom_mme on composite model");
    return atom_mme_;
}

Rat EntropyModel::scale_at(std::int64_t m) const {
    if (is_atom()) fail(Errc::domain_error, "scale_at on atom");
    return family_->scale(m + shift_);
}

ModelPtr EntropyModel::child_at(std::int64_t m) const {
    if (is_atom()) fail(Errc::domain_error, "child_at on atom");
    if (m < 1) fail(Errc::invalid_argument, "copy index must be >= 1");
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->children.find(m);
    if (it != memo_->children.end()) return it->second;
    ModelPtr c = family_->child(m + shift_);
    memo_->children[m] = c;
    return c;
}

void EntropyModel::validate_point(const ModelPoint& p) const {
    const EntropyModel* cur = this;
    ModelPtr hold;
    for (size_t i = 0; i < p.path.size(); ++i) {
        if (cur->is_atom()) fail(Errc::invalid_argument, "point path descends below an atom");
        if (p.path[i].is_copy) {
            hold = cur->child_at(p.path[i].m);
            cur = hold.get();
        } else {
            hold = cur->base();
            cur = hold.get();
        }
    }
    if (!cur->is_atom()) fail(Errc::invalid_argument, "point path must end at an atom");
}

// ---------------------------------------------------------------------------
// candidate evaluation

Rat eval_h(const ModelPtr& model, const ModelPoint& p) {
    const EntropyModel* cur = model.get();
    ModelPtr hold = model;
    Rat scale = 1;
    for (const auto& step : p.path) {
        if (cur->is_atom()) fail(Errc::invalid_argument, "point path descends below an atom");
        if (step.is_copy) {
            scale *= cur->scale_at(step.m);
            hold = cur->child_at(step.m);
        } else {
            hold = cur->base();
        }
        cur = hold.get();
    }
    if (!cur->is_atom()) fail(Errc::invalid_argument, "point path must end at an atom");
    return scale * cur->atom_h();
}

Rat eval_h_k(const ModelPtr& model, const ModelPoint& p, std::int64_t k) {
    if (k < 0) fail(Errc::invalid_argument, "candidate index must be >= 0");
    if (k == 0) return 0; // h_0 == 0 by convention
    const EntropyModel* cur = model.get();
    ModelPtr hold = model;
    Rat scale = 1;
    for (const auto& step : p.path) {
        if (cur->is_atom()) fail(Errc::invalid_argument, "point path descends below an atom");
        if (step.is_copy) {
            // synchronized index: l_m(k) = k for m < I(k), 0 beyond
            if (step.m >= cur->sync().factor * k) return 0;
            scale *= cur->scale_at(step.m);
            hold = cur->child_at(step.m);
        } else {
            hold = cur->base();
        }
        cur = hold.get();
    }
    if (!cur->is_atom()) fail(Errc::invalid_argument, "point path must end at an atom");
    return scale * cur->atom_h(); // atoms converge uniformly: h_k = h for k >= 1
}

Rat eval_tail(const ModelPtr& model, const ModelPoint& p, std::int64_t k) {
    return eval_h(model, p) - eval_h_k(model, p, k);
}

std::vector<ModelPoint> probe_points(const ModelPtr& model, int copies_per_level) {
    std::vector<ModelPoint> out;
    if (model->is_atom()) {
        out.push_back(ModelPoint::atom_point());
        return out;
    }
    for (const ModelPoint& q : probe_points(model->base(), copies_per_level)) {
        ModelPoint p;
        p.path.push_back(ModelPoint::Step{false, 0});
        p.path.insert(p.path.end(), q.path.begin(), q.path.end());
        out.push_back(p);
    }
    const std::int64_t picks[] = {1, 2, 5};
    for (int i = 0; i < copies_per_level && i < 3; ++i) {
        std::int64_t m = picks[i];
        for (const ModelPoint& q : probe_points(model->child_at(m), copies_per_level)) {
            ModelPoint p;
            p.path.push_back(ModelPoint::Step{true, m});
            p.path.insert(p.path.end(), q.path.begin(), q.path.end());
            out.push_back(p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// built-in families

namespace {

class AtomsFamily final : public ChildFamily {
public:
    AtomsFamily(SeqPtr h, SeqPtr scale) : h_(std::move(h)), scale_(std::move(scale)) {
        if (!seq_positive(scale_)) fail(Errc::invalid_argument, "scale sequence must be positive");
        prod_ = ScalarSeq::product(scale_, h_);
    }

    ModelPtr child(std::int64_t m) const override {
        return EntropyModel::make_atom(seq_eval(h_, m));
    }
    Rat scale(std::int64_t m) const override { return seq_eval(scale_, m); }
    SeqPtr scale_seq() const override { return scale_; }

    StepProfile pressure_profile() const override {
        SeqLimit lim = seq_limit(prod_);
        if (lim.infinite) fail(Errc::indeterminate_limit, "scaled child entropies diverge");
        return StepProfile::constant(lim.value);
    }
    StepProfile qlimit_profile() const override { return StepProfile::constant(Rat(0)); }

    Rat norm_sup(const Ordinal&, std::int64_t) const override { return 0; }
    Rat uplus_sup(const Ordinal&, std::int64_t from) const override {
        SeqLimit s = seq_sup_from(prod_, from);
        if (s.infinite) fail(Errc::indeterminate_limit, "scaled child entropies unbounded");
        return s.value;
    }
    Rat norm_sup_below(const Ordinal&, std::int64_t) const override { return 0; }
    Rat uplus_sup_below(const Ordinal& g, std::int64_t from) const override {
        return uplus_sup(g, from);
    }
    Rat htop_sup(std::int64_t from) const override {
        SeqLimit s = seq_sup_from(prod_, from);
        if (s.infinite) fail(Errc::indeterminate_limit, "scaled child entropies unbounded");
        return s.value;
    }

    Ordinal alpha0_sup() const override { return Ordinal(); }
    bool u_equal(const Ordinal&, const Ordinal&) const override { return true; }
    bool u_zero(const Ordinal&) const override { return true; }

    FamilyPtr scaled(const Rat& q) const override {
        return atoms_family(ScalarSeq::scale(q, h_), scale_);
    }
    std::string kind() const override { return "atoms"; }
    nlohmann::ordered_json to_json() const override {
        nlohmann::ordered_json j;
        j["family"] = "atoms";
        j["h"] = seq_to_json(h_);
        j["scale"] = seq_to_json(scale_);
        return j;
    }

private:
    SeqPtr h_, scale_, prod_;
};

class FixedFamily final : public ChildFamily {
public:
    FixedFamily(ModelPtr child, SeqPtr scale) : child_(std::move(child)), scale_(std::move(scale)) {
        if (!seq_positive(scale_)) fail(Errc::invalid_argument, "scale sequence must be positive");
        scale_limit_ = seq_limit(scale_);
        if (scale_limit_.infinite) fail(Errc::indeterminate_limit, "scale sequence diverges");
    }

    ModelPtr child(std::int64_t) const override { return child_; }
    Rat scale(std::int64_t m) const override { return seq_eval(scale_, m); }
    SeqPtr scale_seq() const override { return scale_; }

    StepProfile pressure_profile() const override {
        ModelPtr c = child_;
        Rat ls = scale_limit_.value;
        return StepProfile::closure(
            [c, ls](const Ordinal& g) { return ls * uplus_u(c, g); },
            [c, ls](const Ordinal& g) {
                if (g.is_limit()) return ls * uplus_sup_below_u(c, g);
                return ls * uplus_u(c, g.pred());
            },
            order_of_accumulation(c));
    }
    StepProfile qlimit_profile() const override {
        ModelPtr c = child_;
        Rat ls = scale_limit_.value;
        return StepProfile::closure(
            [c, ls](const Ordinal& g) { return ls * norm_u(c, g); },
            [c, ls](const Ordinal& g) {
                // ||u|| at a limit equals the sup of the norms below it
                if (g.is_limit()) return ls * norm_u(c, g);
                return ls * norm_u(c, g.pred());
            },
            order_of_accumulation(c));
    }

    Rat sup_scale(std::int64_t from) const {
        SeqLimit s = seq_sup_from(scale_, from);
        if (s.infinite) fail(Errc::indeterminate_limit, "scale sequence unbounded");
        return s.value;
    }
    Rat norm_sup(const Ordinal& g, std::int64_t from) const override {
        return sup_scale(from) * norm_u(child_, g);
    }
    Rat uplus_sup(const Ordinal& g, std::int64_t from) const override {
        return sup_scale(from) * uplus_u(child_, g);
    }
    Rat norm_sup_below(const Ordinal& limit, std::int64_t from) const override {
        return sup_scale(from) * norm_u(child_, limit); // limit ordinal: norm = sup below
    }
    Rat uplus_sup_below(const Ordinal& limit, std::int64_t from) const override {
        return sup_scale(from) * uplus_sup_below_u(child_, limit);
    }
    Rat htop_sup(std::int64_t from) const override { return sup_scale(from) * h_top(child_); }

    Ordinal alpha0_sup() const override { return order_of_accumulation(child_); }
    bool u_equal(const Ordinal& g, const Ordinal& d) const override {
        return entacc::u_equal(child_, g, d);
    }
    bool u_zero(const Ordinal& g) const override { return norm_u(child_, g) == 0; }

    FamilyPtr scaled(const Rat& q) const override;
    std::string kind() const override { return "fixed"; }
    nlohmann::ordered_json to_json() const override {
        nlohmann::ordered_json j;
        j["family"] = "fixed";
        j["model"] = child_->to_json();
        j["scale"] = seq_to_json(scale_);
        return j;
    }

private:
    ModelPtr child_;
    SeqPtr scale_;
    SeqLimit scale_limit_;
};

ModelPtr scale_model_impl(const ModelPtr& m, const Rat& q);

FamilyPtr FixedFamily::scaled(const Rat& q) const {
    return fixed_family(scale_model_impl(child_, q), scale_);
}

ModelPtr scale_model_impl(const ModelPtr& m, const Rat& q) {
    if (m->is_atom()) return EntropyModel::make_atom(q * m->atom_h(), m->atom_mme());
    return EntropyModel::make_blow_and_sew(scale_model_impl(m->base(), q), m->family().scaled(q),
                                           m->family().scale_seq(), m->sync(), m->shift());
}

std::map<std::string, std::function<FamilyPtr(const nlohmann::json&)>>& family_codecs() {
    static std::map<std::string, std::function<FamilyPtr(const nlohmann::json&)>> reg;
    return reg;
}

} // namespace

FamilyPtr atoms_family(SeqPtr h, SeqPtr scale) {
    return std::make_shared<AtomsFamily>(std::move(h), std::move(scale));
}

FamilyPtr fixed_family(ModelPtr child, SeqPtr scale) {
    return std::make_shared<FixedFamily>(std::move(child), std::move(scale));
}

void register_family_codec(const std::string& kind,
                           std::function<FamilyPtr(const nlohmann::json&)> decode) {
    family_codecs()[kind] = std::move(decode);
}

FamilyPtr family_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family"))
        fail(Errc::parse_error, "family JSON must carry a 'family' field");
    std::string kind = j.at("family").get<std::string>();
    if (kind == "atoms") return atoms_family(seq_from_json(j.at("h")), seq_from_json(j.at("scale")));
    if (kind == "fixed")
        return fixed_family(EntropyModel::from_json(j.at("model")), seq_from_json(j.at("scale")));
    auto it = family_codecs().find(kind);
    if (it == family_codecs().end()) fail(Errc::parse_error, "unknown family kind '" + kind + "'");
    return it->second(j);
}

// ---------------------------------------------------------------------------
// model JSON

nlohmann::ordered_json EntropyModel::to_json() const {
    nlohmann::ordered_json j;
    if (is_atom()) {
        j["atom"] = {{"h_top", rat_str(atom_h_)}, {"mme_in_c", atom_mme_}};
        return j;
    }
    nlohmann::ordered_json blow;
    blow["base"] = base_->to_json();
    blow["children"] = family_->to_json();
    blow["scale"] = seq_to_json(family_->scale_seq());
    blow["sync"] = sync_.factor == 1 ? nlohmann::ordered_json("default")
                                     : nlohmann::ordered_json{{"scaled", sync_.factor}};
    if (shift_ != 0) blow["shift"] = shift_;
    j["blow"] = blow;
    return j;
}

ModelPtr EntropyModel::from_json(const nlohmann::json& j) {
    if (j.contains("atom")) {
        const auto& a = j.at("atom");
        bool mme = a.value("mme_in_c", true);
        return make_atom(rat_parse(a.at("h_top").get<std::string>()), mme);
    }
    if (!j.contains("blow")) fail(Errc::parse_error, "model JSON must contain 'atom' or 'blow'");
    const auto& b = j.at("blow");
    ModelPtr base = from_json(b.at("base"));
    FamilyPtr fam = family_from_json(b.at("children"));
    SyncRule sync;
    if (b.contains("sync") && b.at("sync").is_object())
        sync.factor = b.at("sync").at("scaled").get<std::int64_t>();
    std::int64_t shift = b.value("shift", std::int64_t{0});
    return make_blow_and_sew(base, fam, fam->scale_seq(), sync, shift);
}

// Exposed through constructors as tower/power scaling; kept here next to the
// family plumbing it needs.
ModelPtr scale_model(const ModelPtr& m, const Rat& q) {
    if (q <= 0) fail(Errc::invalid_argument, "model scale factor must be > 0");
    return scale_model_impl(m, q);
}

} // namespace entacc
