#include "sltm/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "sltm/io_util.hpp"
#include "sltm/rng.hpp"

namespace sltm::sequence {

ChipDistribution::ChipDistribution(std::vector<cplx> vals, std::vector<double> probs)
    : values(std::move(vals)), probabilities(std::move(probs)) {
    if (values.empty() || values.size() != probabilities.size())
        throw ValidationError("chip distribution needs equally sized, non-empty value and "
                              "probability lists");
    double sum = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw ValidationError("chip probabilities must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("chip probabilities must sum to 1, got " + format_double(sum));
}

ChipMoments chip_moments(const ChipDistribution& dist) {
    ChipMoments m;
    double er = 0.0, ei = 0.0, er2 = 0.0, ei2 = 0.0;
    for (std::size_t i = 0; i < dist.values.size(); ++i) {
        const double p = dist.probabilities[i];
        const double re = dist.values[i].real();
        const double im = dist.values[i].imag();
        er += p * re;
        ei += p * im;
        er2 += p * re * re;
        ei2 += p * im * im;
    }
    m.mean = {er, ei};
    m.mean_real = er;
    m.mean_imag = ei;
    m.var_real = std::max(0.0, er2 - er * er);
    m.var_imag = std::max(0.0, ei2 - ei * ei);
    return m;
}

OptimizeResult optimize_sequence(const array_model::AngularResponse& response,
                                 std::size_t min_len, double threshold,
                                 std::size_t max_len, std::uint64_t seed,
                                 double chip_rate_hz) {
    const auto& vals = response.values;
    if (vals.empty()) throw ValidationError("optimizer needs a non-empty angular response");
    if (!(threshold > 0.0)) throw ValidationError("optimizer threshold must be positive");
    if (min_len < vals.size())
        throw ValidationError("min_len must be at least the number of modes");
    if (max_len < min_len) throw ValidationError("max_len must be >= min_len");
    if (!(chip_rate_hz > 0.0)) throw ValidationError("chip rate must be positive");

    Rng rng(seed);
    std::vector<std::uint32_t> seq;
    seq.reserve(max_len);
    std::vector<std::uint32_t> ties;

    const auto first = static_cast<std::uint32_t>(rng.bounded(vals.size()));
    seq.push_back(first);
    cplx sum = vals[first];

    double best_avg = std::numeric_limits<double>::infinity();
    std::size_t best_len = 0;
    cplx best_mean{0.0, 0.0};

    while (true) {
        const std::size_t k = seq.size();
        if (k >= min_len) {
            const double avg = std::abs(sum) / static_cast<double>(k);
            if (avg < best_avg) {
                best_avg = avg;
                best_len = k;
                best_mean = sum / static_cast<double>(k);
            }
            if (avg < threshold)
                return {SltmSequence{std::move(seq), chip_rate_hz}, best_mean};
        }
        if (k == max_len) break;

        ties.clear();
        double best_norm = std::numeric_limits<double>::infinity();
        for (std::uint32_t i = 0; i < vals.size(); ++i) {
            const double n = std::norm(sum + vals[i]);
            if (n < best_norm) {
                best_norm = n;
                ties.clear();
                ties.push_back(i);
            } else if (n == best_norm) {
                ties.push_back(i);
            }
        }
        const std::uint32_t pick =
            ties.size() == 1 ? ties[0]
                             : ties[static_cast<std::size_t>(rng.bounded(ties.size()))];
        seq.push_back(pick);
        sum += vals[pick];
    }

    seq.resize(best_len);
    throw ConvergenceError("optimizer did not reach threshold " + format_double(threshold) +
                               " within " + std::to_string(max_len) +
                               " chips; best running average " + format_double(best_avg),
                           best_mean, std::move(seq));
}

std::vector<std::uint32_t> extend_and_shuffle(const std::vector<std::uint32_t>& skeleton,
                                              std::size_t target_len, std::uint64_t seed) {
    if (skeleton.empty()) throw ValidationError("cannot extend an empty skeleton");
    if (target_len < skeleton.size())
        throw ValidationError("target length must be at least the skeleton length");

    const std::uint32_t n_modes = *std::max_element(skeleton.begin(), skeleton.end()) + 1;
    std::vector<std::size_t> counts(n_modes, 0);
    for (std::uint32_t idx : skeleton) ++counts[idx];

    // Largest-remainder apportionment of target_len across the modes.
    const double scale = static_cast<double>(target_len) / static_cast<double>(skeleton.size());
    std::vector<std::size_t> alloc(n_modes, 0);
    std::vector<std::pair<double, std::uint32_t>> remainders;
    std::size_t assigned = 0;
    for (std::uint32_t m = 0; m < n_modes; ++m) {
        const double exact = static_cast<double>(counts[m]) * scale;
        alloc[m] = static_cast<std::size_t>(std::floor(exact));
        assigned += alloc[m];
        remainders.emplace_back(exact - std::floor(exact), m);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < target_len; ++i, ++assigned)
        ++alloc[remainders[i % remainders.size()].second];

    std::vector<std::uint32_t> out;
    out.reserve(target_len);
    for (std::uint32_t m = 0; m < n_modes; ++m)
        out.insert(out.end(), alloc[m], m);

    Rng rng(seed);
    for (std::size_t i = out.size() - 1; i > 0; --i)
        std::swap(out[i], out[rng.bounded(i + 1)]);
    return out;
}

std::vector<double> empirical_proportions(const SltmSequence& seq, std::size_t n_modes) {
    if (seq.mode_indices.empty()) throw ValidationError("empty sequence");
    std::vector<double> p(n_modes, 0.0);
    for (std::uint32_t idx : seq.mode_indices) {
        if (idx >= n_modes)
            throw ValidationError("mode index " + std::to_string(idx) + " out of range for " +
                                  std::to_string(n_modes) + " modes");
        p[idx] += 1.0;
    }
    const double inv = 1.0 / static_cast<double>(seq.mode_indices.size());
    for (double& v : p) v *= inv;
    return p;
}

std::vector<cplx> chips_to_waveform(const SltmSequence& seq,
                                    const array_model::AngularResponse& response,
                                    std::size_t samples_per_chip) {
    if (samples_per_chip < 1) throw ValidationError("samples_per_chip must be >= 1");
    std::vector<cplx> out;
    out.reserve(seq.mode_indices.size() * samples_per_chip);
    for (std::uint32_t idx : seq.mode_indices) {
        if (idx >= response.values.size())
            throw ValidationError("mode index " + std::to_string(idx) +
                                  " out of range for the angular response");
        out.insert(out.end(), samples_per_chip, response.values[idx]);
    }
    return out;
}

void export_sequence(const SltmSequence& seq, std::size_t n_modes, std::uint64_t seed,
                     cplx achieved_mean, const std::filesystem::path& bin_path,
                     const std::filesystem::path& sidecar_path) {
    if (n_modes > 256)
        throw ValidationError("binary export supports at most 256 modes (one byte per chip)");
    std::string bytes;
    bytes.reserve(seq.mode_indices.size());
    for (std::uint32_t idx : seq.mode_indices) {
        if (idx >= n_modes)
            throw ValidationError("mode index " + std::to_string(idx) + " out of range");
        bytes.push_back(static_cast<char>(static_cast<unsigned char>(idx)));
    }
    write_file(bin_path, bytes);

    nlohmann::json sidecar{{"chip_rate_hz", seq.chip_rate_hz},
                           {"n_modes", n_modes},
                           {"seed", seed},
                           {"achieved_mean_re", achieved_mean.real()},
                           {"achieved_mean_im", achieved_mean.imag()}};
    write_file(sidecar_path, sidecar.dump(2) + "\n");
}

} // namespace sltm::sequence
