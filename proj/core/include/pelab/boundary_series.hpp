#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pelab {

enum class SeriesVariable { Rho, X };

enum class TermProvenance { Recursion, Matched, Fitted };

struct SeriesTerm {
    double offset = 0.0;   // exponent is mu + offset
    double coeff = 0.0;
    TermProvenance provenance = TermProvenance::Recursion;
    // For recursion terms: the residual order this coefficient annihilates.
    // For fitted terms: the fit residual.
    double residual_level = 0.0;
};

// Finite boundary expansion sum_j c_j t^{mu+j}, t the defining function named
// by `variable`.  Offsets are strictly increasing; at most one non-integer
// offset is allowed and it is the fractional obstruction 2s-n.
struct BoundarySeries {
    double mu = 0.0;
    std::vector<SeriesTerm> terms;
    double truncation_order = 0.0;    // residual is O(t^{mu+truncation_order})
    SeriesVariable variable = SeriesVariable::X;
    // Coordinate map t = coord_scale * exp(-r) (exact for variable == X).
    double coord_scale = 1.0;
    bool stopped_at_collision = false;
    double collision_source = 0.0;    // residual left when stopping

    double fractional_offset() const; // NaN if none
    bool has_fractional_term() const;

    void add_term(SeriesTerm t);

    double eval(double t) const;
    double eval_deriv(double t, int k) const;
    // Evaluate as a function of r using the coordinate map (variable X only).
    double eval_at_r(double r) const;
    double eval_deriv_at_r(double r, int k) const;

    std::string table() const; // "c_j @ t^{mu+j}" rows
};

} // namespace pelab
