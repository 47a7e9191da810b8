#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "sltm/errors.hpp"

namespace sltm::array_model {

using cplx = std::complex<double>;

// Uniform linear array. Spacing is given in carrier wavelengths, so the
// wavenumber only appears through the product 2*pi*spacing_wl.
struct ArrayGeometry {
    int n_elements = 8;
    double spacing_wl = 0.5;
    std::vector<double> amplitudes;              // I_k, all 1 by default
    std::vector<double> phases;                  // alpha_k in radians, 0 by default
    std::function<cplx(double)> element_pattern; // e0(theta); empty = isotropic

    static ArrayGeometry uniform(int n, double spacing_wl);
    void validate() const;
};

// One phase state of the array: +1 or -1 per element.
struct Mode {
    std::vector<int> signs;
};

struct ModeSet {
    std::vector<Mode> modes;
    int n_modes() const { return static_cast<int>(modes.size()); }
};

// Array-factor values of every mode at a single observation angle.
struct AngularResponse {
    double angle = 0.0; // radians from broadside
    std::vector<cplx> values;
};

// n modes; mode i inverts the phase of element i and leaves the rest at +1.
ModeSet canonical_mode_set(int n);

Mode all_plus_mode(int n);

cplx array_factor(const ArrayGeometry& geom, const Mode& mode, double theta);

// Phases that steer the all-+1 beam toward theta_steer.
std::vector<double> steering_phases(const ArrayGeometry& geom, double theta_steer);

AngularResponse angular_response(const ArrayGeometry& geom, const ModeSet& modes,
                                 double theta);

} // namespace sltm::array_model
