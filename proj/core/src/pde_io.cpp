#include <algorithm>
#include <cmath>

#include "drivebrake/io.hpp"
#include "drivebrake/pde.hpp"

namespace drivebrake {

std::string snapshot_filename(double t) { return "snap_t" + format_double(t) + ".csv"; }

std::string snapshot_csv(const Snapshot& s)
{
    std::string out = s.n ? "x,u,v,n\n" : "x,u,v\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        out += format_double(s.x[i]);
        out += ',';
        out += format_double(s.u[i]);
        out += ',';
        out += format_double(s.v[i]);
        if (s.n) {
            out += ',';
            out += format_double((*s.n)[i]);
        }
        out += '\n';
    }
    return out;
}

std::string raster_csv(const Raster& r, Field f)
{
    std::string out = "t";
    for (double x : r.x) {
        out += ',';
        out += format_double(x);
    }
    out += '\n';
    for (std::size_t k = 0; k < r.rows(); ++k) {
        out += format_double(r.times[k]);
        for (double val : (f == Field::U ? r.u_row(k) : r.v_row(k))) {
            out += ',';
            out += format_double(val);
        }
        out += '\n';
    }
    return out;
}

std::string raster_pgm(const Raster& r, Field f)
{
    std::string out = "P5\n" + std::to_string(r.cols()) + " " + std::to_string(r.rows()) + "\n255\n";
    out.reserve(out.size() + r.rows() * r.cols());
    for (std::size_t k = 0; k < r.rows(); ++k) {
        for (double val : (f == Field::U ? r.u_row(k) : r.v_row(k))) {
            const double level = std::clamp(std::round(255.0 * val), 0.0, 255.0);
            out += static_cast<char>(static_cast<unsigned char>(level));
        }
    }
    return out;
}

std::string fronts_csv(const FrontTrack& f)
{
    std::string out = "t,x_front_u,x_front_v\n";
    for (std::size_t k = 0; k < f.times.size(); ++k) {
        out += format_double(f.times[k]);
        out += ',';
        out += format_optional(f.x_u[k]);
        out += ',';
        out += format_optional(f.x_v[k]);
        out += '\n';
    }
    return out;
}

}  // namespace drivebrake
