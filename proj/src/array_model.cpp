#include "sltm/array_model.hpp"

#include <cmath>
#include <string>

namespace sltm::array_model {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

void check_visible(double theta, const char* what) {
    if (!(std::abs(theta) <= kHalfPi + 1e-12))
        throw ValidationError(std::string(what) + " outside the visible region [-pi/2, pi/2]");
}

} // namespace

ArrayGeometry ArrayGeometry::uniform(int n, double spacing_wl) {
    ArrayGeometry g;
    g.n_elements = n;
    g.spacing_wl = spacing_wl;
    g.amplitudes.assign(static_cast<std::size_t>(n > 0 ? n : 0), 1.0);
    g.phases.assign(static_cast<std::size_t>(n > 0 ? n : 0), 0.0);
    g.validate();
    return g;
}

void ArrayGeometry::validate() const {
    if (n_elements < 2)
        throw ValidationError("array needs at least 2 elements, got " + std::to_string(n_elements));
    if (!(spacing_wl > 0.0))
        throw ValidationError("element spacing must be positive");
    const auto n = static_cast<std::size_t>(n_elements);
    if (amplitudes.size() != n || phases.size() != n)
        throw ValidationError("amplitudes and phases must both have length n_elements");
    for (double a : amplitudes)
        if (!(a > 0.0)) throw ValidationError("excitation amplitudes must be positive");
}

ModeSet canonical_mode_set(int n) {
    if (n < 2)
        throw ValidationError("canonical mode set needs at least 2 elements, got " + std::to_string(n));
    ModeSet set;
    set.modes.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Mode m;
        m.signs.assign(static_cast<std::size_t>(n), 1);
        m.signs[static_cast<std::size_t>(i)] = -1;
        set.modes.push_back(std::move(m));
    }
    return set;
}

Mode all_plus_mode(int n) {
    if (n < 2)
        throw ValidationError("mode needs at least 2 elements");
    Mode m;
    m.signs.assign(static_cast<std::size_t>(n), 1);
    return m;
}

cplx array_factor(const ArrayGeometry& geom, const Mode& mode, double theta) {
    geom.validate();
    check_visible(theta, "observation angle");
    const auto n = static_cast<std::size_t>(geom.n_elements);
    if (mode.signs.size() != n)
        throw ValidationError("mode has " + std::to_string(mode.signs.size()) +
                              " entries for a " + std::to_string(geom.n_elements) +
                              "-element array");
    for (int s : mode.signs)
        if (s != 1 && s != -1) throw ValidationError("mode entries must be +1 or -1");

    const double psi = 2.0 * M_PI * geom.spacing_wl * std::sin(theta);
    cplx sum{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double ph = geom.phases[k] + psi * static_cast<double>(k);
        sum += static_cast<double>(mode.signs[k]) * geom.amplitudes[k] * std::polar(1.0, ph);
    }
    if (geom.element_pattern) sum *= geom.element_pattern(theta);
    return sum;
}

std::vector<double> steering_phases(const ArrayGeometry& geom, double theta_steer) {
    geom.validate();
    check_visible(theta_steer, "steering angle");
    const double psi = 2.0 * M_PI * geom.spacing_wl * std::sin(theta_steer);
    std::vector<double> phases(static_cast<std::size_t>(geom.n_elements));
    for (std::size_t k = 0; k < phases.size(); ++k)
        phases[k] = -psi * static_cast<double>(k);
    return phases;
}

AngularResponse angular_response(const ArrayGeometry& geom, const ModeSet& modes,
                                 double theta) {
    AngularResponse r;
    r.angle = theta;
    r.values.reserve(modes.modes.size());
    for (const Mode& m : modes.modes)
        r.values.push_back(array_factor(geom, m, theta));
    return r;
}

} // namespace sltm::array_model
