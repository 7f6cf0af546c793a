#include "geotrack/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace geotrack {

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_arm_csv(const std::string& path, const StudyResult& study, const ArmTrace& arm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << kRunCsvHeader << "\n";
    const std::int64_t T = study.T;
    for (std::int64_t k = 0; k <= T; ++k) {
        const std::int64_t kb = std::min(k, T - 1);
        out << k << ',' << csv_number(arm.e_mean[k]) << ',' << csv_number(arm.e_stderr[k]) << ','
            << csv_number(arm.ebar_mean[kb]) << ',' << csv_number(arm.reg_track_mean[k]) << ','
            << csv_number(arm.reg_est_mean[kb]) << ',' << csv_number(study.alpha_k[k]) << ','
            << csv_number(study.eta_k[k]) << ',' << csv_number(arm.vt_cum_mean[k]) << "\n";
    }
    if (!out) throw IoError("write failure on " + path);
}

} // namespace geotrack
