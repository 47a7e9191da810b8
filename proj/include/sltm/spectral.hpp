#pragma once

#include <complex>
#include <vector>

#include "sltm/sequence.hpp"

namespace sltm::spectral {

using cplx = std::complex<double>;

// Two-sided PSD. The DC impulse (a Dirac line carried by a nonzero process
// mean) is kept separately: a density grid cannot represent delta(f).
struct Spectrum {
    std::vector<double> freqs_hz; // strictly increasing
    std::vector<double> psd;      // power per Hz, >= 0
    double dc_impulse_power = 0.0;
};

struct DbSpectrum {
    std::vector<double> freqs_hz;
    std::vector<double> psd_db;
    double dc_impulse_db = 0.0;
};

// Closed-form chip PSD: (var_real+var_imag)/f_chip * sinc^2(pi f / f_chip)
// continuum plus a |mean|^2 impulse at DC.
Spectrum analytic_chip_psd(const sequence::ChipMoments& moments, double chip_rate_hz,
                           const std::vector<double>& freqs_hz);

// Default analytic grid: n points spanning [-2 f_chip, 2 f_chip), includes 0
// and +-f_chip exactly.
std::vector<double> default_grid(double chip_rate_hz, std::size_t n = 4096);

// Averaged rectangular-window periodogram over non-overlapping segments.
// Two-sided grid of segment_len bins spanning (-fs/2, fs/2]; integrated
// density conserves mean signal power (Parseval).
Spectrum periodogram_psd(const std::vector<cplx>& samples, double sample_rate_hz,
                         std::size_t segment_len, std::size_t n_segments);

// 10*log10(psd/reference); values at or below zero clamp to floor_db.
DbSpectrum to_db(const Spectrum& spectrum, double reference_power,
                 double floor_db = -120.0);

} // namespace sltm::spectral
