#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "sltm/array_model.hpp"
#include "sltm/sequence.hpp"
#include "sltm/spectral.hpp"

namespace sltm::link_sim {

using cplx = std::complex<double>;

struct QpskConfig {
    double symbol_rate_hz = 2e6;
    std::size_t samples_per_symbol = 1;
    bool gray_mapping = true;
};

// One Monte Carlo cell: key is the observation angle (tx sweeps) or the
// requested SINR (jamming sweeps).
struct BerCell {
    double key = 0.0;
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct BerResult {
    std::vector<BerCell> cells;
};

// Rectangular-pulse QPSK, unit average symbol energy. With Gray mapping the
// first bit of each pair sets the Q rail sign, the second the I rail sign:
// 00 -> (+1+j)/sqrt2, 01 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2, 10 -> (+1-j)/sqrt2.
std::vector<cplx> qpsk_modulate(const std::vector<std::uint8_t>& bits, const QpskConfig& cfg);

// Coherent integrate-and-dump demodulation with hard quadrant decisions.
std::vector<std::uint8_t> qpsk_demodulate(const std::vector<cplx>& samples,
                                          const QpskConfig& cfg);

// 1/2 erfc(sqrt(snr)).
double theoretical_qpsk_ber(double snr_linear);

// Elementwise product with the zero-order-hold chip waveform at one angle.
// The sequence replays cyclically; start_sample places the block on the global
// chip timeline so long runs can stream block by block.
std::vector<cplx> apply_sltm_channel(const std::vector<cplx>& tx,
                                     const sequence::SltmSequence& seq,
                                     const array_model::AngularResponse& response,
                                     const QpskConfig& cfg, std::uint64_t start_sample = 0);

// Complex AWGN calibrated so that Eb/N0 equals ebn0_db for a signal received
// with amplitude gain reference_gain (the conventional main lobe by convention).
std::vector<cplx> add_awgn(std::vector<cplx> samples, double ebn0_db, const QpskConfig& cfg,
                           double reference_gain, std::uint64_t seed);

// Per-sample complex noise variance used by add_awgn.
double awgn_variance(double ebn0_db, const QpskConfig& cfg, double reference_gain);

// 95% Wilson score interval for errors/bits.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t bits);

// Transmit-side sweep over observation angles and SNRs. The per-angle channel
// is given by pre-evaluated responses (computed or measured patterns) plus the
// mode sequence; a conventional array is a single-value response with the
// trivial one-chip sequence. sequences holds one entry per angle, or a single
// entry shared by all angles.
struct TxScenario {
    std::vector<double> angles_deg;
    std::vector<array_model::AngularResponse> responses;
    std::vector<sequence::SltmSequence> sequences;
    QpskConfig qpsk;
    std::vector<double> snr_db;
    std::uint64_t n_bits = 0;
    std::uint64_t seed = 0;
    double reference_gain = 8.0; // conventional main-lobe amplitude
};

BerResult simulate_tx_ber(const TxScenario& scenario, int n_threads = 1);

struct PsdScenario {
    std::vector<double> angles_deg;
    std::vector<array_model::AngularResponse> responses;
    std::vector<sequence::SltmSequence> sequences;
    QpskConfig qpsk;
    std::size_t segment_len = 1024; // samples per periodogram segment
    std::size_t n_segments = 64;
    std::uint64_t seed = 0;
    double reference_gain = 8.0;
};

struct PsdResult {
    std::vector<double> angles_deg;
    std::vector<spectral::Spectrum> spectra;
    double reference_peak = 0.0; // conventional 0 deg peak density, same bit seed
};

// Noiseless transmitted-signal PSD per angle, plus the conventional-array
// main-lobe peak used as the 0 dB reference.
PsdResult simulate_tx_psd(const PsdScenario& scenario, int n_threads = 1);

// Receive-mode jamming: desired QPSK signal through the main lobe, Gaussian
// jammer through the (scrambled or conventional) sidelobe, thermal noise at
// thermal_snr_db. With sinr_db empty, one cell per jammer angle with jammer
// power jammer_excess_db above the desired incident power; otherwise a sweep
// over sinr_db for a single jammer angle, where the jammer power is set so the
// conventional array would see the requested SINR.
struct JamScenario {
    double desired_angle_deg = 0.0;
    array_model::AngularResponse desired_response;
    std::vector<double> jammer_angles_deg;
    std::vector<array_model::AngularResponse> jammer_responses;
    std::vector<sequence::SltmSequence> sequences; // 1 or per jammer angle
    std::vector<double> conv_jam_gain;             // |AF_conv| at each jammer angle
    std::vector<double> sinr_db;                   // empty -> excess-power mode
    double jammer_excess_db = 20.0;
    double thermal_snr_db = 35.0;
    double jammer_bandwidth_hz = 0.0; // 0 = white at the simulation sample rate
    QpskConfig qpsk;
    std::uint64_t n_bits = 0;
    std::uint64_t seed = 0;
    double reference_gain = 8.0;
};

BerResult simulate_rx_jamming_ber(const JamScenario& scenario, int n_threads = 1);

} // namespace sltm::link_sim
