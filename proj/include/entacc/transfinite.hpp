#pragma once

#include <optional>
#include <vector>

#include "entacc/entmodel.hpp"

namespace entacc {

// Exact transfinite calculus on entropy models. u_gamma restricted to the base
// of a composite is always a finite max of terms c + u_e^{base}; the copies
// carry scale(m) * u_gamma^{child_m} by locality. All scalars are exact.

Rat h_top(const ModelPtr& model);

// ||u_gamma|| = sup over the model of u_gamma (attained; exact)
Rat norm_u(const ModelPtr& model, const Ordinal& gamma);

// sup over the model of (u_gamma + h)
Rat uplus_u(const ModelPtr& model, const Ordinal& gamma);

// sup over beta < limit of uplus_u(model, beta); limit must be a limit ordinal
Rat uplus_sup_below_u(const ModelPtr& model, const Ordinal& limit);

// region terms of u_gamma on the base of a composite model
std::vector<UTerm> base_terms(const ModelPtr& model, const Ordinal& gamma);

Rat eval_u(const ModelPtr& model, const ModelPoint& p, const Ordinal& gamma);

// exact region-value equality of u_g and u_d
bool u_equal(const ModelPtr& model, const Ordinal& g, const Ordinal& d);

// least gamma with u_gamma = u_{gamma+1}
Ordinal order_of_accumulation(const ModelPtr& model);

// h(p) + u_{alpha0}(p)
Rat h_sex(const ModelPtr& model, const ModelPoint& p);

struct UFunction {
    ModelPtr model;
    Ordinal gamma;
    std::vector<UTerm> terms; // empty on atoms
    Rat norm;                 // ||u_gamma||
    Rat uplus;                // sup(u_gamma + h)
    std::optional<Rat> const_value;
    Rat at(const ModelPoint& p) const { return eval_u(model, p, gamma); }
};

UFunction u_gamma(const ModelPtr& model, const Ordinal& gamma);
UFunction u_successor(const ModelPtr& model, const UFunction& u);
// cofinal family along (a superset of) the canonical fundamental sequence
UFunction u_limit(const ModelPtr& model, const std::vector<UFunction>& cofinal,
                  const Ordinal& lambda);

// Region-valued data for the envelope operation: per-copy suprema plus a base
// part; `floor` is the pressure constant max'ed into every base region by an
// envelope pass.
struct RegionFunction {
    ModelPtr model;
    Rat atom_value;                               // value when model is an atom
    std::shared_ptr<const RegionFunction> base;   // set when model is composite
    SeqPtr copy_sup;                              // m -> sup over copy m (scaled values)
    Rat floor = 0;

    static RegionFunction on_atom(const ModelPtr& m, const Rat& v);
    static RegionFunction on_composite(const ModelPtr& m, RegionFunction base_part, SeqPtr copy_sup);
    Rat value_at(const ModelPoint& p) const; // copy regions report their recorded sup
};

// Smallest u.s.c. majorant: at each base point, max of the inner envelope and
// limsup_m of the copy suprema.
RegionFunction usc_envelope(const RegionFunction& g);

nlohmann::ordered_json u_report(const ModelPtr& model, const Ordinal& gamma);

} // namespace entacc
