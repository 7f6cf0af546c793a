#pragma once

#include <string>

#include "geotrack/karcher.hpp"

namespace geotrack {

/// Pinned per-arm CSV schema written by the run command.
inline constexpr const char* kRunCsvHeader =
    "k,e_mean,e_stderr,ebar_mean,reg_track,reg_est,alpha_k,eta_k,VT_cum";

/// Locale-independent numeric cell: decimal, 12 significant digits.
std::string csv_number(double v);

/// One row per k = 0..T. ebar and reg_est need x_{k+1}, so the final row
/// carries their last defined (k = T-1) values.
void write_arm_csv(const std::string& path, const StudyResult& study, const ArmTrace& arm);

} // namespace geotrack
