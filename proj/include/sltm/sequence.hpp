#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sltm/array_model.hpp"
#include "sltm/errors.hpp"

namespace sltm::sequence {

using cplx = std::complex<double>;

// Generalized Bernoulli law over the complex chip values.
struct ChipDistribution {
    std::vector<cplx> values;
    std::vector<double> probabilities;

    ChipDistribution(std::vector<cplx> vals, std::vector<double> probs);
};

struct ChipMoments {
    cplx mean;
    double mean_real = 0.0;
    double mean_imag = 0.0;
    double var_real = 0.0; // variance of the real part
    double var_imag = 0.0; // variance of the imaginary part
};

// Ordered mode indices played at the chip rate f_SLTM.
struct SltmSequence {
    std::vector<std::uint32_t> mode_indices;
    double chip_rate_hz = 0.0;
};

ChipMoments chip_moments(const ChipDistribution& dist);

struct OptimizeResult {
    SltmSequence skeleton;
    cplx achieved_mean;
};

// Greedy construction: seeded random start, then repeatedly append the mode
// minimizing the magnitude of the running sum (ties broken at random), until
// the running average drops below threshold at some length >= min_len. Throws
// ConvergenceError with the best prefix if max_len is reached first.
OptimizeResult optimize_sequence(const array_model::AngularResponse& response,
                                 std::size_t min_len, double threshold,
                                 std::size_t max_len, std::uint64_t seed,
                                 double chip_rate_hz);

// Replicates the skeleton's mode proportions out to target_len (counts within
// +-1 of exact proportionality) and applies a seeded uniform shuffle.
std::vector<std::uint32_t> extend_and_shuffle(const std::vector<std::uint32_t>& skeleton,
                                              std::size_t target_len, std::uint64_t seed);

std::vector<double> empirical_proportions(const SltmSequence& seq, std::size_t n_modes);

// Zero-order hold rendering: each chip's response value held samples_per_chip times.
std::vector<cplx> chips_to_waveform(const SltmSequence& seq,
                                    const array_model::AngularResponse& response,
                                    std::size_t samples_per_chip);

// One byte per chip plus a JSON sidecar, ready to preload a sequencer.
void export_sequence(const SltmSequence& seq, std::size_t n_modes, std::uint64_t seed,
                     cplx achieved_mean, const std::filesystem::path& bin_path,
                     const std::filesystem::path& sidecar_path);

} // namespace sltm::sequence
