#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sltm/array_model.hpp"

namespace sltm::array_model {

// Tabulated per-mode angular response, e.g. measured radiation patterns.
// Stands in for angular_response() wherever mode patterns are needed.
class PatternTable {
public:
    int n_modes() const { return static_cast<int>(amplitude_.size()); }
    double min_angle_deg() const { return angles_deg_.front(); }
    double max_angle_deg() const { return angles_deg_.back(); }

    // Linear interpolation in amplitude and unwrapped phase; theta in radians.
    AngularResponse response(double theta) const;

    friend PatternTable load_pattern_table(std::istream& src);

private:
    std::vector<double> angles_deg_;                // strictly increasing
    std::vector<std::vector<double>> amplitude_;    // [mode][angle]
    std::vector<std::vector<double>> phase_rad_;    // [mode][angle], unwrapped
};

// CSV rows of (angle_deg, mode_index, amplitude, phase_deg), header required.
PatternTable load_pattern_table(std::istream& src);
PatternTable load_pattern_table(const std::string& path);

// Writes the same CSV schema from computed responses over a degree grid.
void write_pattern_table(std::ostream& out, const ArrayGeometry& geom,
                         const ModeSet& modes, const std::vector<double>& angles_deg);

} // namespace sltm::array_model
