#pragma once

// Closed-form connections for the worked models, built from the structure
// functions of a polynomial frame without going through the normalization
// solver, plus the condition checks used on solver output.
//
//   heis23       alpha_1 = f_2, alpha_2 = -f_1 with [X_j, [X_1, X_2]] = f_j [X_1, X_2] mod E
//   rolling235   eta_1 = f_{2,2}, eta_2 = -f_{1,1}
//   free_step2   mu_{ij;k} from nu^(2) (three-index formula, n1 = 3 and n1 > 3 cases)
//   contact_std  the J-linear part of the Levi-Civita partial connection with the
//                Reeb field as the complement of E

#include <string>
#include <string_view>
#include <vector>

#include "canonconn/frames.hpp"

namespace canonconn {

struct NamedValue {
  std::string name;
  Rat value;
};

struct OracleReport {
  std::string model;
  std::vector<NamedValue> structure;  // structure functions and closed-form coefficients at p
  Certificate checks;                 // model-specific side conditions
  ConnectionReport connection;        // extension of the closed-form mu
};

/// model: heis23 | rolling235 | free_step2 | contact_std; anything else throws UnsupportedModel.
OracleReport closed_form_oracle(const Complex& cx, std::string_view model, const FrameModel& frame,
                                unsigned degree = 6);

/// Exact agreement of grading frame, connection form, torsion and curvature at p.
Certificate compare_connections(const PointData& a, const PointData& b);

/// Contact symbols: kappa(chi~) = 0 and, for v horizontal and v1, v2 in one eigenspace,
/// <v1, kappa(v, i v2)> = -<i v1, kappa(v, v2)> and <v1, kappa(v, v2)> = <v2, kappa(v, v1)>.
Certificate contact_conditions(const Complex& cx, const PointData& pt);

/// (2,3) symbols: with beta annihilating E and dbeta(X1, X2) = -1, the solved grading
/// field Z satisfies beta(Z) = 1 and dbeta(Z, .) = 0 at p.
Certificate reeb_check(const Complex& cx, const FrameModel& model, const MuField& mu);

/// Contact symbols: the Reeb direction at p, i.e. Z with [Z, X_i] in E, normalized by
/// dbeta(X_a, X_b) = <X_a, Lambda J X_b>. Throws UnsupportedModel for other symbols.
Vec reeb_field_at_point(const CarnotAlgebra& alg, const FrameModel& model, unsigned degree = 6);

}  // namespace canonconn
