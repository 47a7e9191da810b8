#include "sltm/pattern_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "sltm/io_util.hpp"

namespace sltm::array_model {

namespace {

constexpr char kHeader[] = "angle_deg,mode_index,amplitude,phase_deg";

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_number(std::string_view field, std::size_t row, const char* name) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ValidationError("row " + std::to_string(row) + ": bad " + name + " '" +
                              std::string(field) + "'");
    return v;
}

struct Row {
    double angle_deg;
    long mode;
    double amplitude;
    double phase_deg;
};

} // namespace

PatternTable load_pattern_table(std::istream& src) {
    std::string line;
    if (!std::getline(src, line) || strip_cr(line) != kHeader)
        throw ValidationError("pattern table must start with header '" + std::string(kHeader) + "'");

    std::vector<Row> rows;
    std::size_t row_no = 1;
    while (std::getline(src, line)) {
        ++row_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const auto pos = rest.find(',');
            fields.push_back(rest.substr(0, pos));
            if (pos == std::string_view::npos) break;
            rest.remove_prefix(pos + 1);
        }
        if (fields.size() != 4)
            throw ValidationError("row " + std::to_string(row_no) + ": expected 4 fields, got " +
                                  std::to_string(fields.size()));
        Row r;
        r.angle_deg = parse_number(fields[0], row_no, "angle_deg");
        const double mode = parse_number(fields[1], row_no, "mode_index");
        r.mode = std::lround(mode);
        if (r.mode < 0 || static_cast<double>(r.mode) != mode)
            throw ValidationError("row " + std::to_string(row_no) +
                                  ": mode_index must be a non-negative integer");
        r.amplitude = parse_number(fields[2], row_no, "amplitude");
        if (r.amplitude < 0.0)
            throw ValidationError("row " + std::to_string(row_no) + ": amplitude must be >= 0");
        r.phase_deg = parse_number(fields[3], row_no, "phase_deg");
        rows.push_back(r);
    }
    if (rows.empty()) throw ValidationError("pattern table has no data rows");

    std::map<long, std::vector<Row>> by_mode;
    long max_mode = 0;
    for (const Row& r : rows) {
        by_mode[r.mode].push_back(r);
        max_mode = std::max(max_mode, r.mode);
    }
    for (long m = 0; m <= max_mode; ++m)
        if (!by_mode.count(m))
            throw ValidationError("pattern table is missing mode " + std::to_string(m));

    PatternTable table;
    for (long m = 0; m <= max_mode; ++m) {
        const auto& mode_rows = by_mode[m];
        std::vector<double> angles, amps, phases;
        for (std::size_t i = 0; i < mode_rows.size(); ++i) {
            if (i > 0 && !(mode_rows[i].angle_deg > mode_rows[i - 1].angle_deg))
                throw ValidationError("mode " + std::to_string(m) +
                                      ": angles must be strictly increasing");
            angles.push_back(mode_rows[i].angle_deg);
            amps.push_back(mode_rows[i].amplitude);
            double ph = mode_rows[i].phase_deg * M_PI / 180.0;
            if (!phases.empty()) {
                // unwrap: keep each step within pi of the previous sample
                const double prev = phases.back();
                ph += 2.0 * M_PI * std::round((prev - ph) / (2.0 * M_PI));
            }
            phases.push_back(ph);
        }
        if (angles.size() < 2)
            throw ValidationError("mode " + std::to_string(m) + ": need at least 2 angle samples");
        if (m == 0) {
            table.angles_deg_ = angles;
        } else if (angles != table.angles_deg_) {
            throw ValidationError("mode " + std::to_string(m) +
                                  ": angle grid differs from mode 0");
        }
        table.amplitude_.push_back(std::move(amps));
        table.phase_rad_.push_back(std::move(phases));
    }
    return table;
}

PatternTable load_pattern_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pattern table " + path);
    return load_pattern_table(in);
}

AngularResponse PatternTable::response(double theta) const {
    const double deg = theta * 180.0 / M_PI;
    if (deg < angles_deg_.front() - 1e-9 || deg > angles_deg_.back() + 1e-9)
        throw ValidationError("angle " + format_double(deg) +
                              " deg outside pattern table range [" +
                              format_double(angles_deg_.front()) + ", " +
                              format_double(angles_deg_.back()) + "]");

    auto hi = std::upper_bound(angles_deg_.begin(), angles_deg_.end(), deg);
    std::size_t i1 = static_cast<std::size_t>(hi - angles_deg_.begin());
    if (i1 == 0) i1 = 1;
    if (i1 == angles_deg_.size()) i1 = angles_deg_.size() - 1;
    const std::size_t i0 = i1 - 1;
    const double span = angles_deg_[i1] - angles_deg_[i0];
    double t = (deg - angles_deg_[i0]) / span;
    t = std::clamp(t, 0.0, 1.0);

    AngularResponse r;
    r.angle = theta;
    r.values.reserve(amplitude_.size());
    for (std::size_t m = 0; m < amplitude_.size(); ++m) {
        const double amp = amplitude_[m][i0] + t * (amplitude_[m][i1] - amplitude_[m][i0]);
        const double ph = phase_rad_[m][i0] + t * (phase_rad_[m][i1] - phase_rad_[m][i0]);
        r.values.push_back(std::polar(amp, ph));
    }
    return r;
}

void write_pattern_table(std::ostream& out, const ArrayGeometry& geom,
                         const ModeSet& modes, const std::vector<double>& angles_deg) {
    if (angles_deg.size() < 2)
        throw ValidationError("pattern export needs at least 2 angles");
    for (std::size_t i = 1; i < angles_deg.size(); ++i)
        if (!(angles_deg[i] > angles_deg[i - 1]))
            throw ValidationError("pattern export angles must be strictly increasing");

    out << kHeader << '\n';
    for (int m = 0; m < modes.n_modes(); ++m) {
        for (double deg : angles_deg) {
            const cplx v = array_factor(geom, modes.modes[static_cast<std::size_t>(m)],
                                        deg * M_PI / 180.0);
            out << format_double(deg) << ',' << m << ',' << format_double(std::abs(v)) << ','
                << format_double(std::arg(v) * 180.0 / M_PI) << '\n';
        }
    }
}

} // namespace sltm::array_model
