#include "entacc/transfinite.hpp"

#include <algorithm>

namespace entacc {

namespace {

const StepProfile& pressure_of(const ModelPtr& m) {
    auto& memo = m->memo();
    std::lock_guard<std::mutex> lock(memo.mu);
    if (!memo.pressure) memo.pressure = m->family().pressure_profile();
    return *memo.pressure;
}

const StepProfile& qlimit_of(const ModelPtr& m) {
    auto& memo = m->memo();
    std::lock_guard<std::mutex> lock(memo.mu);
    if (!memo.qlimit) memo.qlimit = m->family().qlimit_profile();
    return *memo.qlimit;
}

void prune_terms(std::vector<UTerm>& ts) {
    std::sort(ts.begin(), ts.end(), [](const UTerm& a, const UTerm& b) {
        if (a.c != b.c) return a.c > b.c;
        return a.e > b.e;
    });
    std::vector<UTerm> kept;
    for (const UTerm& t : ts) {
        bool dominated = false;
        for (const UTerm& k : kept) {
            if (k.c >= t.c && k.e >= t.e) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(t);
    }
    std::sort(kept.begin(), kept.end(), [](const UTerm& a, const UTerm& b) {
        if (!(a.e == b.e)) return b.e < a.e;
        return b.c < a.c;
    });
    ts = std::move(kept);
}

bool terms_equal(const std::vector<UTerm>& a, const std::vector<UTerm>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].c != b[i].c || !(a[i].e == b[i].e)) return false;
    return true;
}

std::vector<UTerm> compute_terms(const ModelPtr& m, const Ordinal& g) {
    std::vector<UTerm> ts;
    ts.push_back(UTerm{Rat(0), g});
    if (g.is_zero()) return ts;
    const StepProfile& pr = pressure_of(m);
    const StepProfile& ql = qlimit_of(m);
    auto add = [&](const Rat& c, const Ordinal& e) {
        if (c > 0) ts.push_back(UTerm{c, e});
    };
    for (const OrdSplit& sp : ord_splits(g)) {
        const Ordinal& e = sp.suffix;
        const Ordinal& pe = sp.prefix;
        if (e.is_zero()) {
            // birth exactly at g
            if (g.is_successor()) add(pr.value(g.pred()), e);
            if (g.is_limit()) add(ql.value(g), e);
            continue;
        }
        const Ordinal& head = e.terms().front().exp;
        if (head.is_zero()) {
            // finite-headed suffix: the only decomposition is b = pe
            if (pe.is_zero()) continue;
            if (pe.is_successor()) add(pr.value(pe.pred()), e);
            if (pe.is_limit()) add(ql.value(pe), e);
        } else {
            // births b in [pe, pe + w^{head}) are absorbed to the same exponent
            Ordinal end = ord_add(pe, Ordinal::omega_power(head));
            add(pr.sup_below(end), e);
            add(ql.sup_below(end), e);
        }
    }
    prune_terms(ts);
    return ts;
}

} // namespace

std::vector<UTerm> base_terms(const ModelPtr& m, const Ordinal& g) {
    if (m->is_atom()) return {};
    auto& memo = m->memo();
    {
        std::lock_guard<std::mutex> lock(memo.mu);
        auto it = memo.terms.find(g);
        if (it != memo.terms.end()) return it->second;
    }
    auto ts = compute_terms(m, g);
    std::lock_guard<std::mutex> lock(memo.mu);
    memo.terms.emplace(g, ts);
    return ts;
}

Rat h_top(const ModelPtr& m) {
    if (m->is_atom()) return m->atom_h();
    auto& memo = m->memo();
    {
        std::lock_guard<std::mutex> lock(memo.mu);
        if (memo.htop) return *memo.htop;
    }
    Rat v = rat_max(h_top(m->base()), m->family().htop_sup(m->first_index()));
    std::lock_guard<std::mutex> lock(memo.mu);
    memo.htop = v;
    return v;
}

Rat norm_u(const ModelPtr& m, const Ordinal& g) {
    if (m->is_atom()) return 0;
    auto& memo = m->memo();
    {
        std::lock_guard<std::mutex> lock(memo.mu);
        auto it = memo.norm.find(g);
        if (it != memo.norm.end()) return it->second;
    }
    Rat v = 0;
    for (const UTerm& t : base_terms(m, g)) v = rat_max(v, t.c + norm_u(m->base(), t.e));
    v = rat_max(v, m->family().norm_sup(g, m->first_index()));
    std::lock_guard<std::mutex> lock(memo.mu);
    memo.norm.emplace(g, v);
    return v;
}

Rat uplus_u(const ModelPtr& m, const Ordinal& g) {
    if (m->is_atom()) return m->atom_h();
    auto& memo = m->memo();
    {
        std::lock_guard<std::mutex> lock(memo.mu);
        auto it = memo.uplus.find(g);
        if (it != memo.uplus.end()) return it->second;
    }
    Rat v = 0;
    for (const UTerm& t : base_terms(m, g)) v = rat_max(v, t.c + uplus_u(m->base(), t.e));
    v = rat_max(v, m->family().uplus_sup(g, m->first_index()));
    std::lock_guard<std::mutex> lock(memo.mu);
    memo.uplus.emplace(g, v);
    return v;
}

Rat uplus_sup_below_u(const ModelPtr& m, const Ordinal& limit) {
    if (!limit.is_limit()) fail(Errc::internal, "uplus_sup_below_u needs a limit ordinal");
    if (m->is_atom()) return m->atom_h();
    auto& memo = m->memo();
    {
        std::lock_guard<std::mutex> lock(memo.mu);
        auto it = memo.uplus_below.find(limit);
        if (it != memo.uplus_below.end()) return it->second;
    }
    Rat v = 0;
    for (const UTerm& t : base_terms(m, limit)) {
        if (t.e.is_zero()) continue; // the birth at `limit` itself is not seen below it
        if (!t.e.is_limit()) fail(Errc::internal, "nonzero base term exponent at a limit must be a limit");
        v = rat_max(v, t.c + uplus_sup_below_u(m->base(), t.e));
    }
    v = rat_max(v, m->family().uplus_sup_below(limit, m->first_index()));
    std::lock_guard<std::mutex> lock(memo.mu);
    memo.uplus_below.emplace(limit, v);
    return v;
}

Rat eval_u(const ModelPtr& m, const ModelPoint& p, const Ordinal& g) {
    if (m->is_atom()) {
        if (!p.path.empty()) fail(Errc::invalid_argument, "point path descends below an atom");
        return 0;
    }
    if (p.path.empty()) fail(Errc::invalid_argument, "point path ends at a composite model");
    ModelPoint rest;
    rest.path.assign(p.path.begin() + 1, p.path.end());
    if (p.path.front().is_copy) {
        std::int64_t idx = p.path.front().m;
        return m->scale_at(idx) * eval_u(m->child_at(idx), rest, g);
    }
    Rat v = 0;
    for (const UTerm& t : base_terms(m, g)) v = rat_max(v, t.c + eval_u(m->base(), rest, t.e));
    return v;
}

namespace {

std::vector<UTerm> canonical_terms(const ModelPtr& m, const Ordinal& g) {
    std::vector<UTerm> ts = base_terms(m, g);
    Ordinal a0b = order_of_accumulation(m->base());
    for (UTerm& t : ts) {
        if (a0b < t.e) t.e = a0b; // u_e stabilizes at the base's order
        if (norm_u(m->base(), t.e) == 0) t.e = Ordinal(); // identically zero part
    }
    prune_terms(ts);
    return ts;
}

} // namespace

bool u_equal(const ModelPtr& m, const Ordinal& g, const Ordinal& d) {
    if (g == d) return true;
    if (m->is_atom()) return true;
    if (!m->family().u_equal(g, d)) return false;
    return terms_equal(canonical_terms(m, g), canonical_terms(m, d));
}

Ordinal order_of_accumulation(const ModelPtr& m) {
    if (m->is_atom()) return Ordinal();
    auto& memo = m->memo();
    {
        std::lock_guard<std::mutex> lock(memo.mu);
        if (memo.alpha0) return *memo.alpha0;
    }
    Ordinal a0b = order_of_accumulation(m->base());
    Ordinal cand = m->family().alpha0_sup();
    if (cand < a0b) cand = a0b;
    const StepProfile& pr = pressure_of(m);
    const StepProfile& ql = qlimit_of(m);
    Rat pfin = pr.final_value();
    Rat qfin = ql.final_value();
    if (pfin > 0) {
        Ordinal birth = pr.stab().succ();
        // dominated if some limit birth at or before it already carries >= pfin
        bool dominated = ql.sup_below(birth) >= pfin;
        if (!dominated) {
            Ordinal c = ord_add(birth, a0b);
            if (cand < c) cand = c;
        }
    }
    if (qfin > 0) {
        Ordinal mu = ql.stab();
        if (!mu.is_limit()) mu = mu.is_zero() ? Ordinal::omega() : limit_ceil(mu);
        bool dominated = pr.sup_below(mu) >= qfin;
        if (!dominated) {
            Ordinal c = ord_add(mu, a0b);
            if (cand < c) cand = c;
        }
    }
    while (!cand.is_zero() && cand.is_successor() && u_equal(m, cand.pred(), cand)) cand = cand.pred();
    int guard = 0;
    while (!u_equal(m, cand, cand.succ())) {
        cand = cand.succ();
        if (++guard > 256) fail(Errc::internal, "order-of-accumulation search did not stabilize");
    }
    if (cand.is_limit()) {
        for (std::int64_t j = 1; j <= 2; ++j) {
            if (u_equal(m, fundamental_sequence(cand, j), cand))
                fail(Errc::internal, "order-of-accumulation candidate is not least");
        }
    }
    std::lock_guard<std::mutex> lock(memo.mu);
    memo.alpha0 = cand;
    return cand;
}

Rat h_sex(const ModelPtr& m, const ModelPoint& p) {
    return eval_h(m, p) + eval_u(m, p, order_of_accumulation(m));
}

namespace {

std::optional<Rat> const_value_of(const ModelPtr& m, const Ordinal& g) {
    if (norm_u(m, g) == 0) return Rat(0);
    return std::nullopt;
}

} // namespace

UFunction u_gamma(const ModelPtr& m, const Ordinal& g) {
    UFunction u;
    u.model = m;
    u.gamma = g;
    if (!m->is_atom()) u.terms = base_terms(m, g);
    u.norm = norm_u(m, g);
    u.uplus = uplus_u(m, g);
    u.const_value = const_value_of(m, g);
    return u;
}

UFunction u_successor(const ModelPtr& m, const UFunction& u) {
    if (u.model != m) fail(Errc::invalid_argument, "u_successor: function belongs to another model");
    Ordinal next = u.gamma.succ();
    if (!m->is_atom()) {
        // age every region term and inject the pressure constant born at this step
        std::vector<UTerm> aged;
        for (const UTerm& t : u.terms) aged.push_back(UTerm{t.c, t.e.succ()});
        Rat born = pressure_of(m).value(u.gamma);
        if (born > 0) aged.push_back(UTerm{born, Ordinal()});
        prune_terms(aged);
        if (!terms_equal(aged, base_terms(m, next)))
            fail(Errc::internal, "successor step disagrees with the closed-form recursion");
    }
    return u_gamma(m, next);
}

UFunction u_limit(const ModelPtr& m, const std::vector<UFunction>& cofinal, const Ordinal& lambda) {
    if (!lambda.is_limit()) fail(Errc::invalid_argument, "u_limit requires a limit ordinal");
    if (cofinal.empty()) fail(Errc::invalid_argument, "u_limit: missing cofinal data");
    Ordinal prev;
    for (size_t i = 0; i < cofinal.size(); ++i) {
        if (cofinal[i].model != m) fail(Errc::invalid_argument, "u_limit: foreign function in family");
        if (!(cofinal[i].gamma < lambda))
            fail(Errc::invalid_argument, "u_limit: family member at or above the limit");
        if (i > 0 && !(prev < cofinal[i].gamma))
            fail(Errc::invalid_argument, "u_limit: family must be strictly increasing");
        prev = cofinal[i].gamma;
    }
    if (prev < fundamental_sequence(lambda, static_cast<std::int64_t>(cofinal.size())))
        fail(Errc::invalid_argument, "u_limit: family is not cofinal enough for the limit");
    return u_gamma(m, lambda);
}

// ---------------------------------------------------------------------------
// envelope on region-valued data

RegionFunction RegionFunction::on_atom(const ModelPtr& m, const Rat& v) {
    if (!m->is_atom()) fail(Errc::invalid_argument, "on_atom with composite model");
    RegionFunction f;
    f.model = m;
    f.atom_value = v;
    return f;
}

RegionFunction RegionFunction::on_composite(const ModelPtr& m, RegionFunction base_part,
                                            SeqPtr copy_sup) {
    if (m->is_atom()) fail(Errc::invalid_argument, "on_composite with atom model");
    if (base_part.model != m->base()) fail(Errc::invalid_argument, "base part model mismatch");
    RegionFunction f;
    f.model = m;
    f.base = std::make_shared<RegionFunction>(std::move(base_part));
    f.copy_sup = std::move(copy_sup);
    return f;
}

Rat RegionFunction::value_at(const ModelPoint& p) const {
    if (!base) {
        if (!p.path.empty()) fail(Errc::invalid_argument, "point descends below an atom");
        return rat_max(atom_value, floor);
    }
    if (p.path.empty()) fail(Errc::invalid_argument, "point ends at a composite model");
    // copies are open in the model space: envelope floors do not reach them
    if (p.path.front().is_copy) return seq_eval(copy_sup, p.path.front().m);
    ModelPoint rest;
    rest.path.assign(p.path.begin() + 1, p.path.end());
    return rat_max(base->value_at(rest), floor);
}

namespace {

RegionFunction lift_floor(RegionFunction f, const Rat& v) {
    f.floor = rat_max(f.floor, v);
    if (f.base) f.base = std::make_shared<RegionFunction>(lift_floor(*f.base, v));
    return f;
}

} // namespace

RegionFunction usc_envelope(const RegionFunction& g) {
    if (!g.base) return g; // functions on an isolated point are u.s.c.
    RegionFunction inner = usc_envelope(*g.base);
    SeqLimit acc = seq_limit(g.copy_sup); // limsup of the copy suprema
    if (acc.infinite) fail(Errc::indeterminate_limit, "copy suprema diverge");
    RegionFunction out = g;
    out.base = std::make_shared<RegionFunction>(lift_floor(inner, rat_max(acc.value, g.floor)));
    return out;
}

nlohmann::ordered_json u_report(const ModelPtr& m, const Ordinal& g) {
    nlohmann::ordered_json j;
    j["gamma"] = ord_str(g);
    j["norm"] = rat_str(norm_u(m, g));
    j["uplus"] = rat_str(uplus_u(m, g));
    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (const ModelPoint& p : probe_points(m)) {
        vals.push_back({p.str(), rat_str(eval_u(m, p, g))});
    }
    j["values"] = vals;
    nlohmann::ordered_json pcs = nlohmann::ordered_json::array();
    ModelPtr cur = m;
    while (!cur->is_atom()) {
        pcs.push_back(rat_str(pressure_of(cur).value(g)));
        cur = cur->base();
    }
    j["pressure_constants"] = pcs;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const UTerm& t : base_terms(m, g)) terms.push_back({rat_str(t.c), ord_str(t.e)});
    j["base_terms"] = terms;
    return j;
}

} // namespace entacc
