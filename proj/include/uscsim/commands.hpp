#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "uscsim/config.hpp"

namespace uscsim {

inline constexpr const char* kVersion = "0.1.0";

struct EmittedTable {
  std::vector<std::string> metadata;  ///< written as '# ' lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// '#' metadata, a header line, then comma-separated rows at 12 significant digits.
void write_table(const EmittedTable& table, std::ostream& out);

/// Columns t_us, P_g, P_e, n_mean, x_quad, p_quad. For model=exact the states are read out
/// in the interaction picture and an extra P_g_lab column holds the lab-frame population.
EmittedTable cmd_simulate(const RunConfig& cfg);

/// Long-form x, y, W of the field at wigner.time_us, postselected or traced per wigner.postselect.
EmittedTable cmd_wigner(const RunConfig& cfg);

/// Columns t_us, P_g_ramsey, P_g_direct.
EmittedTable cmd_ramsey(const RunConfig& cfg);

/// Dirac-model and exact (phi = pi/2) series: t_us, x_quad, p_quad, P_plus and the same with
/// an _exact suffix. Both start from |+_{pi/2}> (x) |0>.
EmittedTable cmd_dirac(const RunConfig& cfg);

}  // namespace uscsim
