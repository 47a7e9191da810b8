#include "sltm/spectral.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "sltm/errors.hpp"

namespace sltm::spectral {

namespace {

// FFTW planning is not thread-safe; execution of private plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(x) / x;
}

} // namespace

Spectrum analytic_chip_psd(const sequence::ChipMoments& moments, double chip_rate_hz,
                           const std::vector<double>& freqs_hz) {
    if (!(chip_rate_hz > 0.0)) throw ValidationError("chip rate must be positive");
    if (freqs_hz.empty()) throw ValidationError("frequency grid is empty");
    for (std::size_t i = 1; i < freqs_hz.size(); ++i)
        if (!(freqs_hz[i] > freqs_hz[i - 1]))
            throw ValidationError("frequency grid must be strictly increasing");

    const double level = (moments.var_real + moments.var_imag) / chip_rate_hz;
    Spectrum s;
    s.freqs_hz = freqs_hz;
    s.psd.reserve(freqs_hz.size());
    for (double f : freqs_hz) {
        const double arg = M_PI * f / chip_rate_hz;
        const double v = sinc(arg);
        s.psd.push_back(level * v * v);
    }
    s.dc_impulse_power = std::norm(moments.mean);
    return s;
}

std::vector<double> default_grid(double chip_rate_hz, std::size_t n) {
    if (!(chip_rate_hz > 0.0)) throw ValidationError("chip rate must be positive");
    if (n < 4) throw ValidationError("analytic grid needs at least 4 points");
    std::vector<double> f(n);
    const double step = 4.0 * chip_rate_hz / static_cast<double>(n);
    const auto half = static_cast<double>(n / 2);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = (static_cast<double>(i) - half) * step;
    return f;
}

Spectrum periodogram_psd(const std::vector<cplx>& samples, double sample_rate_hz,
                         std::size_t segment_len, std::size_t n_segments) {
    if (!(sample_rate_hz > 0.0)) throw ValidationError("sample rate must be positive");
    if (segment_len < 2) throw ValidationError("segment length must be >= 2");
    if (n_segments < 1) throw ValidationError("need at least one segment");
    if (samples.size() < segment_len * n_segments)
        throw ValidationError("need " + std::to_string(segment_len * n_segments) +
                              " samples, got " + std::to_string(samples.size()));

    const auto n = static_cast<int>(segment_len);
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        in = fftw_alloc_complex(segment_len);
        out = fftw_alloc_complex(segment_len);
        plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan || !in || !out) throw IoError("fftw plan allocation failed");

    std::vector<double> accum(segment_len, 0.0);
    for (std::size_t s = 0; s < n_segments; ++s) {
        const cplx* src = samples.data() + s * segment_len;
        for (std::size_t i = 0; i < segment_len; ++i) {
            in[i][0] = src[i].real();
            in[i][1] = src[i].imag();
        }
        fftw_execute(plan);
        for (std::size_t i = 0; i < segment_len; ++i)
            accum[i] += out[i][0] * out[i][0] + out[i][1] * out[i][1];
    }
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }

    // |X_k|^2 / (N * fs), averaged over segments; bins reordered so the grid
    // spans (-fs/2, fs/2] in increasing order.
    const double scale =
        1.0 / (static_cast<double>(n_segments) * static_cast<double>(segment_len) * sample_rate_hz);
    const double df = sample_rate_hz / static_cast<double>(segment_len);
    Spectrum spec;
    spec.freqs_hz.resize(segment_len);
    spec.psd.resize(segment_len);
    const std::size_t half = segment_len / 2;
    for (std::size_t k = 0; k < segment_len; ++k) {
        const auto signed_idx = (k <= half) ? static_cast<long>(k)
                                            : static_cast<long>(k) - static_cast<long>(segment_len);
        const std::size_t pos = static_cast<std::size_t>(
            signed_idx + static_cast<long>(segment_len) - static_cast<long>(half) - 1) %
            segment_len;
        spec.freqs_hz[pos] = static_cast<double>(signed_idx) * df;
        spec.psd[pos] = accum[k] * scale;
    }
    return spec;
}

DbSpectrum to_db(const Spectrum& spectrum, double reference_power, double floor_db) {
    if (!(reference_power > 0.0)) throw ValidationError("dB reference power must be positive");
    DbSpectrum out;
    out.freqs_hz = spectrum.freqs_hz;
    out.psd_db.reserve(spectrum.psd.size());
    const auto db = [&](double v) {
        if (!(v > 0.0)) return floor_db;
        return std::max(floor_db, 10.0 * std::log10(v / reference_power));
    };
    for (double v : spectrum.psd) out.psd_db.push_back(db(v));
    out.dc_impulse_db = db(spectrum.dc_impulse_power);
    return out;
}

} // namespace sltm::spectral
