#pragma once

#include <string>

namespace spinsc {

// MIN3 is the inverting majority (minority) gate. ASL majority gates invert
// naturally with the supply polarity, and the ripple-carry full adder below
// is built from them.
enum class GateKind { MAJ3, MIN3, INV, BUF, CONST0, CONST1 };

int gate_arity(GateKind k);
// Energy multiplier c in E = c * I^2 * R_spin * T_g (1 for single-input, 3 for 3-input gates).
double energy_coefficient(GateKind k);
const char* to_string(GateKind k);
GateKind gate_kind_from_string(const std::string& s);
bool is_constant(GateKind k);

}  // namespace spinsc
