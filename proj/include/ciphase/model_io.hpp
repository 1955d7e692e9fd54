#pragma once

#include <string>
#include <variant>

#include "ciphase/models.hpp"
#include "ciphase/types.hpp"

namespace ciphase {

using AnyModel = std::variant<CartesianCoupling, ComplexCoupling, BerryModel>;

// Parse a model document. Schema, dispatched on "kind":
//   cartesian: {"kind":"cartesian", "coeffs_A":[[deg_x,deg_y,c],...],
//               "coeffs_B":[[deg_x,deg_y,c],...]}
//   complex:   {"kind":"complex", "K":.., "mu":.., "lambda":..}
//           or {"kind":"complex", "K":.., "q_plus":[[c0,c1,...],...],
//               "q_minus":[[c0,c1,...],...]}   (exactly one of the two forms)
//   berry:     {"kind":"berry", "b":.., "alpha":.., "beta":..,
//               "active_axis":"z_carries_b"|"y_carries_b"}
// Parsing is strict: every field above is required and unknown keys are
// rejected by name. Syntax or schema problems throw ParseError; documents
// that parse but describe an invalid model (b <= 0, degree > 8, ...) throw
// InputError from the model constructors.
AnyModel model_from_json(const std::string& text);
AnyModel model_from_file(const std::string& path);

// Canonical single-line serialization; parse-write round trips are
// byte-identical. All floats go through format_real.
std::string model_to_json(const AnyModel& m);

// Fixed-width scientific form with 12 significant digits. The only float
// formatter used for machine-readable output, so identical inputs render
// byte-identically everywhere.
std::string format_real(Real v);

// "n·π" label when v is within 1e-9 of a half-integer multiple of pi
// ("-1·π", "0.5·π", "0·π"); empty string otherwise.
std::string pi_multiple_label(Real v);

}  // namespace ciphase
