#pragma once

#include <filesystem>
#include <string>

#include "galms/estimation.hpp"

namespace galms {

// CSV with the fixed header `i,sq_err,sq_err_db,cost,cost_db,emse,emse_db`.
// Numbers are printed in shortest round-trip form with '.' decimal points,
// dB columns are clamped at -300 (see to_db_clamped), columns whose series
// was not computed stay empty, and lines end with a bare LF.
std::string curve_to_csv(const LearningCurve& curve);
void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path);

}  // namespace galms
