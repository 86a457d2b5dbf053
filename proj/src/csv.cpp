#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dephasing/io.hpp"

namespace dephasing::io {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_csv(const TrajectoryTable& table) {
    std::string out = "t,D_T,S_L_corr,S_L_prod,r,s,phi,absA_corr,absA_prod\n";
    for (const auto& row : table.rows) {
        for (double v : {row.t, row.distance, row.entropy_correlated, row.entropy_product, row.r, row.s, row.phi,
                         row.abs_a_correlated}) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(row.abs_a_product);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepTable& table, const Extremum& extremum) {
    const std::string name(to_string(table.parameter));
    std::string out = "sweep_param,value,D_T_inf\n";
    for (const auto& row : table.rows) {
        out += name + ',' + format_double(row.value) + ',' + format_double(row.distance) + '\n';
    }
    const double where = extremum.kind == ExtremumKind::none ? std::nan("") : extremum.location;
    out += "# extremum: " + std::string(to_string(extremum.kind)) + " at " + format_double(where) + '\n';
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!file) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace dephasing::io
