#include "sltm/link_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "sltm/io_util.hpp"
#include "sltm/rng.hpp"

namespace sltm::link_sim {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr std::size_t kBlockSymbols = 4096;

void check_bits(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0)
        throw ValidationError("QPSK needs an even bit count, got " + std::to_string(bits.size()));
    for (std::uint8_t b : bits)
        if (b > 1) throw ValidationError("bit stream entries must be 0 or 1");
}

void check_cfg(const QpskConfig& cfg) {
    if (!(cfg.symbol_rate_hz > 0.0)) throw ValidationError("symbol rate must be positive");
    if (cfg.samples_per_symbol < 1) throw ValidationError("samples_per_symbol must be >= 1");
}

// Chips per symbol; must be a positive integer that divides samples_per_symbol.
std::size_t chips_per_symbol(const sequence::SltmSequence& seq, const QpskConfig& cfg) {
    const double ratio = seq.chip_rate_hz / cfg.symbol_rate_hz;
    const double rounded = std::round(ratio);
    if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw ValidationError("chip rate must be an integer multiple of the symbol rate, ratio " +
                              format_double(ratio));
    const auto cps = static_cast<std::size_t>(rounded);
    if (cfg.samples_per_symbol % cps != 0)
        throw ValidationError("samples_per_symbol (" + std::to_string(cfg.samples_per_symbol) +
                              ") must be divisible by chips per symbol (" + std::to_string(cps) +
                              ")");
    return cps;
}

std::vector<std::uint8_t> random_bits(std::size_t n, Rng& rng) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return bits;
}

std::uint64_t count_mismatches(const std::vector<std::uint8_t>& a,
                               const std::vector<std::uint8_t>& b) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return n;
}

void run_cells(std::size_t n_cells, int n_threads, const std::function<void(std::size_t)>& work) {
    if (n_threads <= 1 || n_cells <= 1) {
        for (std::size_t i = 0; i < n_cells; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(n_threads), n_cells);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t)
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1))
                    work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n_cells); // drain remaining work
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

std::vector<cplx> qpsk_modulate(const std::vector<std::uint8_t>& bits, const QpskConfig& cfg) {
    check_bits(bits);
    check_cfg(cfg);
    std::vector<cplx> out;
    out.reserve(bits.size() / 2 * cfg.samples_per_symbol);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        const int b1 = bits[i];
        const int b2 = bits[i + 1];
        cplx sym;
        if (cfg.gray_mapping) {
            sym = {kInvSqrt2 * (1 - 2 * b2), kInvSqrt2 * (1 - 2 * b1)};
        } else {
            const int s = 2 * b1 + b2;
            sym = std::polar(1.0, M_PI * (0.25 + 0.5 * static_cast<double>(s)));
        }
        out.insert(out.end(), cfg.samples_per_symbol, sym);
    }
    return out;
}

std::vector<std::uint8_t> qpsk_demodulate(const std::vector<cplx>& samples,
                                          const QpskConfig& cfg) {
    check_cfg(cfg);
    if (samples.size() % cfg.samples_per_symbol != 0)
        throw ValidationError("sample count " + std::to_string(samples.size()) +
                              " is not a multiple of samples_per_symbol");
    const std::size_t n_syms = samples.size() / cfg.samples_per_symbol;
    std::vector<std::uint8_t> bits;
    bits.reserve(2 * n_syms);
    for (std::size_t s = 0; s < n_syms; ++s) {
        cplx acc{0.0, 0.0};
        const cplx* p = samples.data() + s * cfg.samples_per_symbol;
        for (std::size_t i = 0; i < cfg.samples_per_symbol; ++i) acc += p[i];
        if (cfg.gray_mapping) {
            bits.push_back(acc.imag() < 0.0 ? 1 : 0);
            bits.push_back(acc.real() < 0.0 ? 1 : 0);
        } else {
            int s_hat;
            if (acc.real() >= 0.0)
                s_hat = acc.imag() >= 0.0 ? 0 : 3;
            else
                s_hat = acc.imag() >= 0.0 ? 1 : 2;
            bits.push_back(static_cast<std::uint8_t>(s_hat >> 1));
            bits.push_back(static_cast<std::uint8_t>(s_hat & 1));
        }
    }
    return bits;
}

double theoretical_qpsk_ber(double snr_linear) {
    if (snr_linear < 0.0) throw ValidationError("SNR must be non-negative");
    return 0.5 * std::erfc(std::sqrt(snr_linear));
}

std::vector<cplx> apply_sltm_channel(const std::vector<cplx>& tx,
                                     const sequence::SltmSequence& seq,
                                     const array_model::AngularResponse& response,
                                     const QpskConfig& cfg, std::uint64_t start_sample) {
    check_cfg(cfg);
    if (seq.mode_indices.empty()) throw ValidationError("empty mode sequence");
    const std::size_t cps = chips_per_symbol(seq, cfg);
    const std::size_t spc = cfg.samples_per_symbol / cps;
    const std::size_t m = seq.mode_indices.size();
    std::vector<cplx> out(tx.size());
    for (std::size_t n = 0; n < tx.size(); ++n) {
        const std::uint64_t chip = (start_sample + n) / spc;
        const std::uint32_t idx = seq.mode_indices[chip % m];
        if (idx >= response.values.size())
            throw ValidationError("mode index " + std::to_string(idx) +
                                  " out of range for the angular response");
        out[n] = tx[n] * response.values[idx];
    }
    return out;
}

double awgn_variance(double ebn0_db, const QpskConfig& cfg, double reference_gain) {
    check_cfg(cfg);
    if (!(reference_gain > 0.0)) throw ValidationError("reference gain must be positive");
    const double gamma = std::pow(10.0, ebn0_db / 10.0);
    // Eb at the reference receiver = gain^2 * sps / 2 per bit (unit-energy
    // symbols, 2 bits each); N0 spread over the per-sample bandwidth.
    return reference_gain * reference_gain * static_cast<double>(cfg.samples_per_symbol) /
           (2.0 * gamma);
}

std::vector<cplx> add_awgn(std::vector<cplx> samples, double ebn0_db, const QpskConfig& cfg,
                           double reference_gain, std::uint64_t seed) {
    const double var = awgn_variance(ebn0_db, cfg, reference_gain);
    Rng rng(seed);
    for (auto& s : samples) s += rng.complex_gaussian(var);
    return samples;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t bits) {
    if (bits == 0) throw ValidationError("Wilson interval needs at least one trial");
    const double z = 1.959963984540054; // 95%
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // At p = 0 (or 1) the bound is exactly 0 (or 1); avoid rounding residue.
    const double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = errors == bits ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

namespace {

void validate_sequences(std::size_t n_angles, std::size_t n_sequences) {
    if (n_sequences != 1 && n_sequences != n_angles)
        throw ValidationError("need one sequence in total or one per angle, got " +
                              std::to_string(n_sequences) + " for " + std::to_string(n_angles) +
                              " angles");
}

void validate_angles(const std::vector<double>& angles_deg) {
    if (angles_deg.empty()) throw ValidationError("angle list must not be empty");
    for (double a : angles_deg)
        if (!(std::abs(a) <= 90.0 + 1e-9))
            throw ValidationError("angle " + format_double(a) + " deg outside +-90 deg");
}

BerCell run_ber_cell(const sequence::SltmSequence& seq,
                     const array_model::AngularResponse& response, const QpskConfig& cfg,
                     double noise_var, std::uint64_t n_bits, std::uint64_t cell_seed) {
    Rng rng(cell_seed);
    const std::uint64_t total_syms = n_bits / 2;
    std::uint64_t done = 0;
    std::uint64_t errors = 0;
    while (done < total_syms) {
        const auto bs = static_cast<std::size_t>(
            std::min<std::uint64_t>(kBlockSymbols, total_syms - done));
        const auto bits = random_bits(2 * bs, rng);
        auto y = apply_sltm_channel(qpsk_modulate(bits, cfg), seq, response, cfg,
                                    done * cfg.samples_per_symbol);
        for (auto& s : y) s += rng.complex_gaussian(noise_var);
        errors += count_mismatches(bits, qpsk_demodulate(y, cfg));
        done += bs;
    }
    BerCell cell;
    cell.bits = n_bits;
    cell.errors = errors;
    cell.ber = static_cast<double>(errors) / static_cast<double>(n_bits);
    std::tie(cell.ci_low, cell.ci_high) = wilson_interval(errors, n_bits);
    return cell;
}

} // namespace

BerResult simulate_tx_ber(const TxScenario& scenario, int n_threads) {
    validate_angles(scenario.angles_deg);
    if (scenario.responses.size() != scenario.angles_deg.size())
        throw ValidationError("need one angular response per observation angle");
    validate_sequences(scenario.angles_deg.size(), scenario.sequences.size());
    if (scenario.snr_db.empty()) throw ValidationError("SNR list must not be empty");
    if (scenario.n_bits < 2 || scenario.n_bits % 2 != 0)
        throw ValidationError("n_bits must be a positive even count");
    check_cfg(scenario.qpsk);

    const std::size_t n_snr = scenario.snr_db.size();
    const std::size_t n_cells = scenario.angles_deg.size() * n_snr;
    BerResult result;
    result.cells.resize(n_cells);
    run_cells(n_cells, n_threads, [&](std::size_t c) {
        const std::size_t ai = c / n_snr;
        const std::size_t si = c % n_snr;
        const auto& seq =
            scenario.sequences.size() == 1 ? scenario.sequences[0] : scenario.sequences[ai];
        const double nvar =
            awgn_variance(scenario.snr_db[si], scenario.qpsk, scenario.reference_gain);
        BerCell cell = run_ber_cell(seq, scenario.responses[ai], scenario.qpsk, nvar,
                                    scenario.n_bits, derive_seed(scenario.seed, c));
        cell.key = scenario.angles_deg[ai];
        cell.snr_db = scenario.snr_db[si];
        result.cells[c] = cell;
    });
    return result;
}

PsdResult simulate_tx_psd(const PsdScenario& scenario, int n_threads) {
    validate_angles(scenario.angles_deg);
    if (scenario.responses.size() != scenario.angles_deg.size())
        throw ValidationError("need one angular response per observation angle");
    validate_sequences(scenario.angles_deg.size(), scenario.sequences.size());
    check_cfg(scenario.qpsk);
    if (!(scenario.reference_gain > 0.0))
        throw ValidationError("reference gain must be positive");

    const double fs =
        scenario.qpsk.symbol_rate_hz * static_cast<double>(scenario.qpsk.samples_per_symbol);
    const std::size_t needed = scenario.segment_len * scenario.n_segments;
    const std::size_t sps = scenario.qpsk.samples_per_symbol;
    const std::size_t n_syms = (needed + sps - 1) / sps;

    // One transmitter: every observation angle sees the same symbol stream,
    // only the channel differs. The conventional reference therefore relates
    // to each angle by a deterministic spectral ratio, not a noisy one.
    Rng rng(derive_seed(scenario.seed, 0));
    const auto tx = qpsk_modulate(random_bits(2 * n_syms, rng), scenario.qpsk);

    const std::size_t n_angles = scenario.angles_deg.size();
    PsdResult result;
    result.angles_deg = scenario.angles_deg;
    result.spectra.resize(n_angles);
    // Cell n_angles is the conventional main-lobe reference.
    run_cells(n_angles + 1, n_threads, [&](std::size_t c) {
        if (c == n_angles) {
            auto x = tx;
            for (auto& s : x) s *= scenario.reference_gain;
            const auto spec = spectral::periodogram_psd(x, fs, scenario.segment_len,
                                                        scenario.n_segments);
            result.reference_peak = *std::max_element(spec.psd.begin(), spec.psd.end());
            return;
        }
        const auto& seq = scenario.sequences.size() == 1 ? scenario.sequences[0]
                                                         : scenario.sequences[c];
        const auto y =
            apply_sltm_channel(tx, seq, scenario.responses[c], scenario.qpsk, 0);
        result.spectra[c] =
            spectral::periodogram_psd(y, fs, scenario.segment_len, scenario.n_segments);
    });
    return result;
}

BerResult simulate_rx_jamming_ber(const JamScenario& scenario, int n_threads) {
    validate_angles(scenario.jammer_angles_deg);
    if (scenario.jammer_responses.size() != scenario.jammer_angles_deg.size())
        throw ValidationError("need one angular response per jammer angle");
    if (scenario.conv_jam_gain.size() != scenario.jammer_angles_deg.size())
        throw ValidationError("need one conventional gain per jammer angle");
    validate_sequences(scenario.jammer_angles_deg.size(), scenario.sequences.size());
    if (scenario.desired_response.values.empty())
        throw ValidationError("desired-angle response must not be empty");
    if (scenario.n_bits < 2 || scenario.n_bits % 2 != 0)
        throw ValidationError("n_bits must be a positive even count");
    check_cfg(scenario.qpsk);
    const bool sweep = !scenario.sinr_db.empty();
    if (sweep && scenario.jammer_angles_deg.size() != 1)
        throw ValidationError("SINR sweeps take a single jammer angle");
    if (sweep && scenario.conv_jam_gain[0] * scenario.conv_jam_gain[0] < 1e-30)
        throw ValidationError("jammer sits in a null of the conventional pattern; the "
                              "requested SINR cannot be realized");

    const double fs =
        scenario.qpsk.symbol_rate_hz * static_cast<double>(scenario.qpsk.samples_per_symbol);
    const std::size_t hold_len =
        scenario.jammer_bandwidth_hz > 0.0
            ? std::max<std::size_t>(
                  1, static_cast<std::size_t>(std::llround(fs / scenario.jammer_bandwidth_hz)))
            : 1;
    const double thermal_var =
        awgn_variance(scenario.thermal_snr_db, scenario.qpsk, scenario.reference_gain);

    const std::size_t n_cells = sweep ? scenario.sinr_db.size()
                                      : scenario.jammer_angles_deg.size();
    BerResult result;
    result.cells.resize(n_cells);
    run_cells(n_cells, n_threads, [&](std::size_t c) {
        const std::size_t ai = sweep ? 0 : c;
        const auto& seq =
            scenario.sequences.size() == 1 ? scenario.sequences[0] : scenario.sequences[ai];
        double jam_var;
        if (sweep) {
            const double sinr = std::pow(10.0, scenario.sinr_db[c] / 10.0);
            const double s_conv = scenario.reference_gain * scenario.reference_gain;
            const double g2 = scenario.conv_jam_gain[ai] * scenario.conv_jam_gain[ai];
            jam_var = std::max(0.0, s_conv / sinr - thermal_var) / g2;
        } else {
            jam_var = std::pow(10.0, scenario.jammer_excess_db / 10.0);
        }

        Rng rng(derive_seed(scenario.seed, c));
        const std::uint64_t total_syms = scenario.n_bits / 2;
        const std::size_t sps = scenario.qpsk.samples_per_symbol;
        std::uint64_t done = 0;
        std::uint64_t errors = 0;
        cplx hold_val{0.0, 0.0};
        std::size_t hold_remaining = 0;
        std::vector<cplx> jam;
        while (done < total_syms) {
            const auto bs = static_cast<std::size_t>(
                std::min<std::uint64_t>(kBlockSymbols, total_syms - done));
            const std::uint64_t off = done * sps;
            const auto bits = random_bits(2 * bs, rng);
            auto y = apply_sltm_channel(qpsk_modulate(bits, scenario.qpsk), seq,
                                        scenario.desired_response, scenario.qpsk, off);
            jam.resize(bs * sps);
            for (auto& j : jam) {
                if (hold_remaining == 0) {
                    hold_val = rng.complex_gaussian(jam_var);
                    hold_remaining = hold_len;
                }
                j = hold_val;
                --hold_remaining;
            }
            const auto yj = apply_sltm_channel(jam, seq, scenario.jammer_responses[ai],
                                               scenario.qpsk, off);
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] += yj[i] + rng.complex_gaussian(thermal_var);
            errors += count_mismatches(bits, qpsk_demodulate(y, scenario.qpsk));
            done += bs;
        }

        BerCell cell;
        cell.key = sweep ? scenario.sinr_db[c] : scenario.jammer_angles_deg[c];
        cell.snr_db = scenario.thermal_snr_db;
        cell.bits = scenario.n_bits;
        cell.errors = errors;
        cell.ber = static_cast<double>(errors) / static_cast<double>(scenario.n_bits);
        std::tie(cell.ci_low, cell.ci_high) = wilson_interval(errors, scenario.n_bits);
        result.cells[c] = cell;
    });
    return result;
}

} // namespace sltm::link_sim
