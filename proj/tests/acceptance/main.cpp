// Acceptance gate: one check per numbered criterion, each printing a single
// PASS/FAIL line with the measured values. Exit code is the failure count.
//
//   sltm_acceptance        runs all criteria
//   sltm_acceptance <n>    runs criterion n only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sltm/array_model.hpp"
#include "sltm/errors.hpp"
#include "sltm/io_util.hpp"
#include "sltm/link_sim.hpp"
#include "sltm/rng.hpp"
#include "sltm/scenario.hpp"
#include "sltm/sequence.hpp"
#include "sltm/spectral.hpp"

using namespace sltm;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::uint64_t kSeed = 20260823ULL;

// Shared scenario scale: 8-element half-wavelength array, 32 MHz chips,
// 2 Msym/s QPSK (16 chips per symbol), replay buffer 2^13 chips.
constexpr double kChipRate = 32e6;
constexpr double kSymbolRate = 2e6;
constexpr std::size_t kChipsPerSymbol = 16;
constexpr std::size_t kReplay = 8192;
constexpr double kRefGain = 8.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double deg(double d) { return d * kPi / 180.0; }

array_model::ArrayGeometry geometry() { return array_model::ArrayGeometry::uniform(8, 0.5); }

array_model::AngularResponse modes_at(double angle_deg) {
    return array_model::angular_response(geometry(), array_model::canonical_mode_set(8),
                                         deg(angle_deg));
}

cplx conv_at(double angle_deg) {
    return array_model::array_factor(geometry(), array_model::all_plus_mode(8),
                                     deg(angle_deg));
}

struct BuiltSeq {
    sequence::SltmSequence seq;
    bool converged = true;
    cplx skeleton_mean{0.0, 0.0};
};

// Optimize at one angle and extend to the replay length; a non-converged
// result falls back to the best greedy prefix so downstream criteria can
// still measure what the array actually radiates.
BuiltSeq build_seq(double angle_deg, std::uint64_t salt) {
    const auto resp = modes_at(angle_deg);
    BuiltSeq out;
    std::vector<std::uint32_t> skeleton;
    try {
        auto r = sequence::optimize_sequence(resp, 64, 1e-2, kReplay,
                                             derive_seed(kSeed, 7000 + salt), kChipRate);
        skeleton = std::move(r.skeleton.mode_indices);
        out.skeleton_mean = r.achieved_mean;
    } catch (const ConvergenceError& e) {
        skeleton = e.best_indices;
        out.skeleton_mean = e.achieved_mean;
        out.converged = false;
    }
    out.seq.mode_indices =
        sequence::extend_and_shuffle(skeleton, kReplay, derive_seed(kSeed, 7100 + salt));
    out.seq.chip_rate_hz = kChipRate;
    return out;
}

double peak_of(const spectral::Spectrum& s) {
    return *std::max_element(s.psd.begin(), s.psd.end());
}

link_sim::PsdScenario psd_scenario(const std::vector<double>& angles,
                                   std::vector<array_model::AngularResponse> responses,
                                   std::vector<sequence::SltmSequence> sequences) {
    link_sim::PsdScenario sc;
    sc.angles_deg = angles;
    sc.responses = std::move(responses);
    sc.sequences = std::move(sequences);
    sc.qpsk.symbol_rate_hz = kSymbolRate;
    sc.qpsk.samples_per_symbol = 8 * kChipsPerSymbol; // 8 samples per chip
    sc.segment_len = 1024;                            // 128 chips per segment
    sc.n_segments = 64;                               // exactly one replay
    sc.seed = kSeed;
    sc.reference_gain = kRefGain;
    return sc;
}

sequence::SltmSequence trivial_seq() { return {{0u}, kSymbolRate}; }

array_model::AngularResponse single_value(double angle_deg, cplx v) {
    array_model::AngularResponse r;
    r.angle = deg(angle_deg);
    r.values = {v};
    return r;
}

double erfc_inv(double y) {
    // erfc is monotone decreasing on [0, inf); bisect.
    double lo = 0.0, hi = 8.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// --- criteria ---------------------------------------------------------------

Outcome c1_main_lobe_level() {
    auto s20 = build_seq(20.0, 1);
    auto sc = psd_scenario({0.0}, {modes_at(0.0)}, {s20.seq});
    const auto r = link_sim::simulate_tx_psd(sc, 2);
    const double delta_db = 10.0 * std::log10(peak_of(r.spectra[0]) / r.reference_peak);
    const double want = 20.0 * std::log10(6.0 / 8.0);
    Outcome o;
    o.pass = std::abs(delta_db - want) <= 0.3;
    o.detail = "peak delta " + fmt(delta_db, 3) + " dB, target " + fmt(want, 3) + " +- 0.3 dB";
    return o;
}

Outcome c2_sidelobe_suppression() {
    const std::vector<double> angles = {10.0, 20.0, 30.0};
    std::vector<array_model::AngularResponse> mode_resp, conv_resp;
    std::vector<sequence::SltmSequence> seqs;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        mode_resp.push_back(modes_at(angles[i]));
        conv_resp.push_back(single_value(angles[i], conv_at(angles[i])));
        seqs.push_back(build_seq(angles[i], 10 + i).seq);
    }
    const auto sltm = link_sim::simulate_tx_psd(psd_scenario(angles, mode_resp, seqs), 3);
    const auto conv = link_sim::simulate_tx_psd(
        psd_scenario(angles, conv_resp, {trivial_seq()}), 3);

    Outcome o;
    o.pass = true;
    std::string parts;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double sup =
            10.0 * std::log10(peak_of(conv.spectra[i]) / peak_of(sltm.spectra[i]));
        if (!(sup >= 10.0)) o.pass = false;
        parts += (parts.empty() ? "" : ", ") + fmt(angles[i], 0) + " deg: " + fmt(sup, 1) +
                 " dB";
    }
    o.detail = "suppression vs conventional (need >= 10 dB): " + parts;
    return o;
}

Outcome c3_null_positions() {
    auto s20 = build_seq(20.0, 1);
    auto sc = psd_scenario({20.0}, {modes_at(20.0)}, {s20.seq});
    const auto r = link_sim::simulate_tx_psd(sc, 2);
    const auto& spec = r.spectra[0];
    const double df = kChipRate * 8.0 / 1024.0; // sample rate / segment length

    Outcome o;
    o.pass = true;
    std::string parts;
    for (double sign : {1.0, -1.0}) {
        double best_f = 0.0, best_v = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < spec.freqs_hz.size(); ++i) {
            const double f = spec.freqs_hz[i];
            if (sign * f < 0.5 * kChipRate || sign * f > 1.5 * kChipRate) continue;
            if (spec.psd[i] < best_v) {
                best_v = spec.psd[i];
                best_f = f;
            }
        }
        const double off_bins = std::abs(best_f - sign * kChipRate) / df;
        if (off_bins > 1.0 + 1e-9) o.pass = false;
        parts += (parts.empty() ? "" : ", ") + std::string(sign > 0 ? "+" : "-") +
                 "f_SLTM null offset " + fmt(off_bins, 2) + " bins";
    }
    o.detail = parts + " (bin width " + fmt(df / 1e3, 0) + " kHz)";
    return o;
}

Outcome c4_analytic_agreement() {
    const auto resp = modes_at(30.0);
    Rng rng(derive_seed(kSeed, 1001));
    sequence::SltmSequence seq;
    seq.chip_rate_hz = kChipRate;
    for (std::size_t i = 0; i < kReplay; ++i)
        seq.mode_indices.push_back(static_cast<std::uint32_t>(rng.bounded(8)));
    const auto wave = sequence::chips_to_waveform(seq, resp, 8);
    const double fs = 8.0 * kChipRate;
    const auto meas = spectral::periodogram_psd(wave, fs, 1024, 64);

    const sequence::ChipDistribution dist(resp.values, std::vector<double>(8, 0.125));
    const auto analytic =
        spectral::analytic_chip_psd(sequence::chip_moments(dist), kChipRate, meas.freqs_hz);

    double sum_abs = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < meas.freqs_hz.size(); ++i) {
        if (std::abs(meas.freqs_hz[i]) >= 0.8 * kChipRate) continue;
        sum_abs += std::abs(10.0 * std::log10(meas.psd[i] / analytic.psd[i]));
        ++n;
    }
    const double mean_err = sum_abs / static_cast<double>(n);
    Outcome o;
    o.pass = mean_err < 1.0;
    o.detail = "mean |dB error| " + fmt(mean_err, 3) + " over " + std::to_string(n) +
               " bins inside 0.8 f_SLTM (need < 1)";
    return o;
}

Outcome c5_dc_suppression() {
    const std::vector<double> angles = {10.0, 20.0, 30.0};
    Outcome o;
    o.pass = true;
    std::string parts;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const auto resp = modes_at(angles[i]);
        auto built = build_seq(angles[i], 10 + i);
        const double mean_mag = std::abs(built.skeleton_mean);
        const bool mean_ok = built.converged && mean_mag < 1e-2;

        const auto wave = sequence::chips_to_waveform(built.seq, resp, 8);
        const double fs = 8.0 * kChipRate;
        const auto meas = spectral::periodogram_psd(wave, fs, 1024, 64);
        double dc = 0.0;
        for (std::size_t k = 0; k < meas.freqs_hz.size(); ++k)
            if (meas.freqs_hz[k] == 0.0) dc = meas.psd[k];

        const sequence::ChipDistribution dist(
            resp.values, sequence::empirical_proportions(built.seq, 8));
        const auto m = sequence::chip_moments(dist);
        const double envelope = (m.var_real + m.var_imag) / kChipRate;
        const double excess_db = 10.0 * std::log10(dc / envelope);
        const bool dc_ok = excess_db < 3.0;

        if (!mean_ok || !dc_ok) o.pass = false;
        parts += (parts.empty() ? "" : "; ") + fmt(angles[i], 0) +
                 " deg: |mean| " + fmt(mean_mag, 4) + (built.converged ? "" : " (no conv)") +
                 ", DC excess " + fmt(excess_db, 2) + " dB";
    }
    o.detail = parts + " (need |mean| < 1e-2 and DC excess < 3 dB)";
    return o;
}

link_sim::TxScenario tx_scenario(const std::vector<double>& angles,
                                 std::vector<array_model::AngularResponse> responses,
                                 std::vector<sequence::SltmSequence> sequences,
                                 std::vector<double> snr_db, std::uint64_t n_bits,
                                 std::size_t sps) {
    link_sim::TxScenario sc;
    sc.angles_deg = angles;
    sc.responses = std::move(responses);
    sc.sequences = std::move(sequences);
    sc.qpsk.symbol_rate_hz = kSymbolRate;
    sc.qpsk.samples_per_symbol = sps;
    sc.snr_db = std::move(snr_db);
    sc.n_bits = n_bits;
    sc.seed = kSeed;
    sc.reference_gain = kRefGain;
    return sc;
}

Outcome c6_ber_theory() {
    auto sc = tx_scenario({0.0}, {single_value(0.0, conv_at(0.0))}, {trivial_seq()},
                          {0.0, 2.0, 4.0, 6.0, 8.0}, 200000, 4);
    const auto r = link_sim::simulate_tx_ber(sc, 4);
    Outcome o;
    o.pass = true;
    std::string parts;
    for (const auto& cell : r.cells) {
        const double gamma = std::pow(10.0, cell.snr_db / 10.0);
        const double p = link_sim::theoretical_qpsk_ber(gamma);
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(cell.bits));
        const double z = (cell.ber - p) / sigma;
        if (std::abs(z) > 3.0) o.pass = false;
        parts += (parts.empty() ? "" : ", ") + fmt(cell.snr_db, 0) + " dB: z=" + fmt(z, 2);
    }
    o.detail = "deviation from 1/2 erfc(sqrt(snr)) in binomial sigmas (need |z| <= 3): " +
               parts;
    return o;
}

Outcome c7_main_lobe_shift() {
    auto s20 = build_seq(20.0, 1);
    auto sc = tx_scenario({0.0}, {modes_at(0.0)}, {s20.seq}, {4.0, 6.0, 8.0}, 200000,
                          kChipsPerSymbol);
    const auto r = link_sim::simulate_tx_ber(sc, 3);
    double shift_sum = 0.0;
    for (const auto& cell : r.cells) {
        const double gamma_eff = std::pow(erfc_inv(2.0 * cell.ber), 2.0);
        shift_sum += cell.snr_db - 10.0 * std::log10(gamma_eff);
    }
    const double shift = shift_sum / static_cast<double>(r.cells.size());
    Outcome o;
    o.pass = std::abs(shift - 2.5) <= 0.4;
    o.detail = "measured SNR shift " + fmt(shift, 3) + " dB, target 2.5 +- 0.4 dB";
    return o;
}

Outcome c8_sidelobe_scrambling() {
    const std::vector<double> angles = {10.0, 20.0, 30.0};
    std::vector<array_model::AngularResponse> resp;
    std::vector<sequence::SltmSequence> seqs;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        resp.push_back(modes_at(angles[i]));
        seqs.push_back(build_seq(angles[i], 10 + i).seq);
    }
    auto sc = tx_scenario(angles, std::move(resp), std::move(seqs), {35.0}, 20000,
                          kChipsPerSymbol);
    const auto r = link_sim::simulate_tx_ber(sc, 3);
    Outcome o;
    o.pass = true;
    std::string parts;
    for (const auto& cell : r.cells) {
        if (cell.ber < 0.45 || cell.ber > 0.55) o.pass = false;
        parts += (parts.empty() ? "" : ", ") + fmt(cell.key, 0) + " deg: " + fmt(cell.ber, 3);
    }
    o.detail = "eavesdropper BER at 35 dB SNR (need within [0.45, 0.55]): " + parts;
    return o;
}

Outcome c9_jamming_resilience() {
    const std::vector<double> angles = {10.0, 20.0, 30.0};
    link_sim::JamScenario base;
    base.desired_angle_deg = 0.0;
    base.jammer_angles_deg = angles;
    for (double a : angles) base.conv_jam_gain.push_back(std::abs(conv_at(a)));
    base.jammer_excess_db = 20.0;
    base.thermal_snr_db = 35.0;
    base.jammer_bandwidth_hz = kSymbolRate; // narrowband jammer, one draw per symbol
    base.qpsk.symbol_rate_hz = kSymbolRate;
    base.qpsk.samples_per_symbol = kChipsPerSymbol;
    base.n_bits = 200000;
    base.seed = kSeed;
    base.reference_gain = kRefGain;

    link_sim::JamScenario sltm_sc = base;
    sltm_sc.desired_response = modes_at(0.0);
    for (std::size_t i = 0; i < angles.size(); ++i) {
        sltm_sc.jammer_responses.push_back(modes_at(angles[i]));
        sltm_sc.sequences.push_back(build_seq(angles[i], 10 + i).seq);
    }

    link_sim::JamScenario conv_sc = base;
    conv_sc.desired_response = single_value(0.0, conv_at(0.0));
    for (double a : angles)
        conv_sc.jammer_responses.push_back(single_value(a, conv_at(a)));
    conv_sc.sequences = {trivial_seq()};

    const auto sltm = link_sim::simulate_rx_jamming_ber(sltm_sc, 3);
    const auto conv = link_sim::simulate_rx_jamming_ber(conv_sc, 3);

    Outcome o;
    o.pass = true;
    bool any_gated = false;
    std::string parts;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double bc = conv.cells[i].ber;
        const double bs = sltm.cells[i].ber;
        const bool gated = bc >= 0.05 && bc <= 0.4;
        if (gated) {
            any_gated = true;
            if (!(bs <= bc / 2.0)) o.pass = false;
        }
        parts += (parts.empty() ? "" : "; ") + fmt(angles[i], 0) + " deg: conv " +
                 fmt(bc, 3) + ", sltm " + fmt(bs, 3) + (gated ? "" : " (outside gate)");
    }
    if (!any_gated) o.pass = false;
    o.detail = "need sltm <= conv/2 where conv in [0.05, 0.4]: " + parts;
    return o;
}

Outcome c10_chip_statistics() {
    // centered autocorrelation of the replayed chip series
    auto built = build_seq(30.0, 12);
    const auto resp = modes_at(30.0);
    std::vector<cplx> chips;
    for (auto idx : built.seq.mode_indices) chips.push_back(resp.values[idx]);
    cplx mean{0.0, 0.0};
    for (auto c : chips) mean += c;
    mean /= static_cast<double>(chips.size());
    double r0 = 0.0;
    for (auto c : chips) r0 += std::norm(c - mean);
    r0 /= static_cast<double>(chips.size());
    double worst = 0.0;
    for (std::size_t lag = 1; lag <= 32; ++lag) {
        cplx acc{0.0, 0.0};
        const std::size_t n = chips.size() - lag;
        for (std::size_t i = 0; i < n; ++i)
            acc += (chips[i + lag] - mean) * std::conj(chips[i] - mean);
        worst = std::max(worst, std::abs(acc) / (static_cast<double>(n)) / r0);
    }

    // moment oracle: direct-definition moments on every 3-value law with
    // probabilities from {0.1, ..., 0.9}
    const std::vector<cplx> vals = {{1.7, -0.3}, {-0.4, 1.1}, {-1.2, -2.0}};
    double worst_moment = 0.0;
    for (int a = 1; a <= 8; ++a) {
        for (int b = 1; b <= 9 - a; ++b) {
            const int c = 10 - a - b;
            const std::vector<double> p = {a / 10.0, b / 10.0, c / 10.0};
            const auto m = sequence::chip_moments(sequence::ChipDistribution(vals, p));
            double mr = 0.0, mi = 0.0;
            for (int k = 0; k < 3; ++k) {
                mr += p[static_cast<std::size_t>(k)] * vals[static_cast<std::size_t>(k)].real();
                mi += p[static_cast<std::size_t>(k)] * vals[static_cast<std::size_t>(k)].imag();
            }
            double vr = 0.0, vi = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double dr = vals[static_cast<std::size_t>(k)].real() - mr;
                const double di = vals[static_cast<std::size_t>(k)].imag() - mi;
                vr += p[static_cast<std::size_t>(k)] * dr * dr;
                vi += p[static_cast<std::size_t>(k)] * di * di;
            }
            worst_moment = std::max({worst_moment, std::abs(m.mean_real - mr),
                                     std::abs(m.mean_imag - mi), std::abs(m.var_real - vr),
                                     std::abs(m.var_imag - vi)});
        }
    }

    char dev[32];
    std::snprintf(dev, sizeof(dev), "%.2e", worst_moment);
    Outcome o;
    o.pass = worst < 0.05 && worst_moment < 1e-12;
    o.detail = "max |R(k)|/R(0) over lags 1..32 = " + fmt(worst, 4) +
               " (need < 0.05); moment oracle max dev " + std::string(dev) +
               " (need < 1e-12)";
    return o;
}

Outcome c11_reproducibility() {
    const fs::path root = fs::temp_directory_path() / "sltm_acceptance_repro";
    fs::remove_all(root);
    fs::create_directories(root);

    const std::string common_seq = R"("sequence": {"chip_rate_hz": 32e6, "min_len": 64,
        "max_len": 8192, "target_len": 1024})";
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"optimize", R"({"seed": 31, "sequence": {"chip_rate_hz": 32e6, "min_len": 64,
            "max_len": 8192, "target_len": 1024, "target_angle_deg": 30}})"},
        {"psd", R"({"seed": 32, )" + common_seq + R"(, "link": {"symbol_rate_hz": 2e6},
            "psd": {"samples_per_chip": 2, "segment_chips": 64, "n_segments": 16},
            "angles_deg": [0, 20]})"},
        {"ber-tx", R"({"seed": 33, )" + common_seq + R"(, "link": {"symbol_rate_hz": 2e6,
            "samples_per_chip": 1, "snr_db": [4], "n_bits": 20000},
            "angles_deg": [0, 20]})"},
        {"ber-rx", R"({"seed": 34, )" + common_seq + R"(, "link": {"symbol_rate_hz": 2e6,
            "samples_per_chip": 1, "n_bits": 20000}, "angles_deg": [20]})"},
        {"pattern-export", R"({"seed": 35, "pattern_angles_deg": [-30, -15, 0, 15, 30]})"}};

    Outcome o;
    o.pass = true;
    std::string parts;
    std::size_t compared = 0;
    for (const auto& [command, cfg] : runs) {
        const fs::path cfg_path = root / (command + ".json");
        write_file(cfg_path, cfg);
        const fs::path out1 = root / (command + "_1");
        const fs::path out2 = root / (command + "_2");
        const int rc1 = cli::cli_main({command, "--config", cfg_path.string(), "--out",
                                       out1.string(), "--threads", "3"});
        const int rc2 = cli::cli_main({command, "--config", cfg_path.string(), "--out",
                                       out2.string(), "--threads", "1"});
        if (rc1 != 0 || rc2 != 0) {
            o.pass = false;
            parts += (parts.empty() ? "" : ", ") + command + ": exit " +
                     std::to_string(rc1) + "/" + std::to_string(rc2);
            continue;
        }
        for (const auto& entry : fs::directory_iterator(out1)) {
            const auto ext = entry.path().extension().string();
            if (ext != ".csv" && ext != ".bin" && ext != ".json") continue;
            const auto name = entry.path().filename();
            if (read_file(entry.path()) != read_file(out2 / name)) {
                o.pass = false;
                parts += (parts.empty() ? "" : ", ") + command + ": " + name.string() +
                         " differs";
            }
            ++compared;
        }
    }
    fs::remove_all(root);
    if (parts.empty())
        parts = "all " + std::to_string(compared) +
                " artifacts byte-identical across reruns and thread counts";
    o.detail = parts;
    return o;
}

struct Criterion {
    int id;
    const char* label;
    double budget_s; // 0 = no stated budget
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "main-lobe PSD level SLTM vs conventional", 30.0, c1_main_lobe_level},
        {2, "sidelobe PSD suppression at 10/20/30 deg", 120.0, c2_sidelobe_suppression},
        {3, "spectral nulls at +-f_SLTM", 0.0, c3_null_positions},
        {4, "analytic vs empirical chip PSD", 0.0, c4_analytic_agreement},
        {5, "DC-impulse suppression", 0.0, c5_dc_suppression},
        {6, "conventional BER matches QPSK theory", 120.0, c6_ber_theory},
        {7, "SLTM main-lobe SNR shift", 0.0, c7_main_lobe_shift},
        {8, "sidelobe eavesdropper BER near 0.5", 0.0, c8_sidelobe_scrambling},
        {9, "jamming resilience vs conventional", 180.0, c9_jamming_resilience},
        {10, "chip autocorrelation and moment oracle", 0.0, c10_chip_statistics},
        {11, "byte-identical scenario reruns", 0.0, c11_reproducibility},
    };

    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 11) {
            std::fprintf(stderr, "usage: %s [1..11]\n", argv[0]);
            return 64;
        }
    }

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_budget = c.budget_s == 0.0 || elapsed <= c.budget_s;
        if (!in_budget) o.pass = false;
        std::printf("%s criterion %d: %s -- %s (%.1f s%s)\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.label, o.detail.c_str(), elapsed,
                    c.budget_s > 0.0 ? (", budget " + fmt(c.budget_s, 0) + " s").c_str() : "");
        if (!o.pass) ++failures;
    }
    return failures;
}
