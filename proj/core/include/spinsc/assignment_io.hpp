#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinsc/delay_shaping.hpp"
#include "spinsc/netlist.hpp"

namespace spinsc {

// Delay-assignment CSV: gate_id, tag, delay_factor, delay_s, current_A,
// energy_J, epsilon; one row per timed gate, tags joined with '|'.
void save_assignment(const std::string& path, const LogicNetwork& net, const DelayAssignment& a,
                     const OperatingModel& m);
std::string assignment_csv(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m);

// Reads delay factors by gate id. The current factor comes from current_A when
// a model is given and the column is filled, otherwise 1/sqrt(delay_factor)
// (the constant-energy rule used by I-PDB).
DelayAssignment load_assignment(const std::string& path, const LogicNetwork& net, const OperatingModel* m = nullptr);

// Per-bit delay factors of a ripple-carry adder in the ED Table 2 layout:
// rows MSB first, columns m3, m2, m1, i1.
using BitTable = std::vector<std::array<double, 4>>;
BitTable table_from_assignment(const LogicNetwork& rca, const DelayAssignment& a);
DelayAssignment assignment_from_table(const LogicNetwork& rca, const BitTable& t);

// Published 15-bit RCA delay tables (delay factors, rows MSB first, columns
// m3, m2, m1, i1): inter-path balanced, and balanced plus redistributed.
BitTable ed_table_2a();
BitTable ed_table_2b();

}  // namespace spinsc
