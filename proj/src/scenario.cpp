#include "sltm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sltm/array_model.hpp"
#include "sltm/io_util.hpp"
#include "sltm/link_sim.hpp"
#include "sltm/pattern_table.hpp"
#include "sltm/rng.hpp"
#include "sltm/sequence.hpp"
#include "sltm/spectral.hpp"

namespace sltm::cli {

namespace {

using array_model::AngularResponse;
using array_model::ArrayGeometry;
using array_model::ModeSet;
using array_model::cplx;
using nlohmann::json;

constexpr char kBerHeader[] = "angle_deg_or_sinr_db,snr_db,bits,errors,ber,ci_low,ci_high";
constexpr char kPsdHeader[] = "freq_hz,psd_per_hz,psd_db";

// Seed-index spaces: Monte Carlo cells count from 0, sequence construction
// uses a disjoint high range so streams never collide.
constexpr std::uint64_t kSeqSeedBase = 1ULL << 48;

double deg2rad(double d) { return d * M_PI / 180.0; }

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(ctx + " must be a JSON object");
    std::string unknown;
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            unknown += unknown.empty() ? key : ", " + key;
    }
    if (!unknown.empty())
        throw ValidationError("unknown field(s) in " + ctx + ": " + unknown);
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::vector<double> step_grid(double start, double stop, double step) {
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    return out;
}

// Computed or tabulated per-mode responses plus the conventional pattern.
struct Responses {
    ArrayGeometry geom;
    ModeSet modes;
    std::optional<array_model::PatternTable> table;

    AngularResponse modes_at(double theta) const {
        if (table) return table->response(theta);
        return array_model::angular_response(geom, modes, theta);
    }

    // For the canonical family each mode is conv - 2*e_i, so the modes sum to
    // (N-2)*conv; that recovers the conventional pattern from a measured table.
    cplx conv_at(double theta) const {
        if (table) {
            const auto r = table->response(theta);
            cplx sum{0.0, 0.0};
            for (const cplx& v : r.values) sum += v;
            return sum / static_cast<double>(r.values.size() - 2);
        }
        return array_model::array_factor(geom, array_model::all_plus_mode(geom.n_elements),
                                         theta);
    }
};

Responses build_responses(const ArrayBlock& block) {
    ArrayGeometry geom = ArrayGeometry::uniform(block.n_elements, block.spacing_wl);
    if (block.amplitudes) geom.amplitudes = *block.amplitudes;
    if (block.phases_deg && block.steer_deg)
        throw ValidationError("phases_deg and steer_deg are mutually exclusive");
    if (block.phases_deg) {
        geom.phases.clear();
        for (double d : *block.phases_deg) geom.phases.push_back(deg2rad(d));
    }
    geom.validate();
    if (block.steer_deg) geom.phases = array_model::steering_phases(geom, deg2rad(*block.steer_deg));

    Responses r;
    r.geom = geom;
    r.modes = array_model::canonical_mode_set(geom.n_elements);
    if (block.pattern_table) {
        r.table = array_model::load_pattern_table(*block.pattern_table);
        if (r.table->n_modes() != geom.n_elements)
            throw ValidationError("pattern table has " + std::to_string(r.table->n_modes()) +
                                  " modes but the array has " +
                                  std::to_string(geom.n_elements) + " elements");
    }
    return r;
}

struct BuiltSequence {
    sequence::SltmSequence seq;
    bool converged = true;
    std::size_t skeleton_len = 0;
    cplx skeleton_mean{0.0, 0.0};
    cplx full_mean{0.0, 0.0};
};

cplx sequence_mean(const sequence::SltmSequence& seq, const AngularResponse& resp) {
    cplx sum{0.0, 0.0};
    for (std::uint32_t idx : seq.mode_indices) sum += resp.values[idx];
    return sum / static_cast<double>(seq.mode_indices.size());
}

// Optimizes at one angle and extends to the replay length. With fallback the
// best non-converged prefix is used instead of failing the scenario.
BuiltSequence build_sequence(const AngularResponse& resp, const SequenceBlock& blk,
                             std::uint64_t master_seed, std::size_t angle_index,
                             bool allow_fallback) {
    const std::uint64_t opt_seed = derive_seed(master_seed, kSeqSeedBase + 2 * angle_index);
    const std::uint64_t shuffle_seed =
        derive_seed(master_seed, kSeqSeedBase + 2 * angle_index + 1);

    BuiltSequence out;
    std::vector<std::uint32_t> skeleton;
    try {
        auto opt = sequence::optimize_sequence(resp, blk.min_len, blk.threshold, blk.max_len,
                                               opt_seed, blk.chip_rate_hz);
        skeleton = std::move(opt.skeleton.mode_indices);
        out.skeleton_mean = opt.achieved_mean;
        out.converged = true;
    } catch (const ConvergenceError& e) {
        if (!allow_fallback) throw;
        skeleton = e.best_indices;
        out.skeleton_mean = e.achieved_mean;
        out.converged = false;
    }
    out.skeleton_len = skeleton.size();
    const std::size_t target = std::max(blk.target_len, skeleton.size());
    out.seq.mode_indices = sequence::extend_and_shuffle(skeleton, target, shuffle_seed);
    out.seq.chip_rate_hz = blk.chip_rate_hz;
    out.full_mean = sequence_mean(out.seq, resp);
    return out;
}

sequence::SltmSequence trivial_sequence(double symbol_rate_hz) {
    return {{0u}, symbol_rate_hz};
}

json sequence_manifest(double angle_deg, const BuiltSequence& b) {
    return json{{"angle_deg", angle_deg},
                {"converged", b.converged},
                {"skeleton_len", b.skeleton_len},
                {"length", b.seq.mode_indices.size()},
                {"skeleton_mean_re", b.skeleton_mean.real()},
                {"skeleton_mean_im", b.skeleton_mean.imag()},
                {"mean_re", b.full_mean.real()},
                {"mean_im", b.full_mean.imag()}};
}

std::string ber_csv(const link_sim::BerResult& result) {
    std::string out = std::string(kBerHeader) + "\n";
    for (const auto& c : result.cells) {
        out += format_double(c.key) + ',' + format_double(c.snr_db) + ',' +
               std::to_string(c.bits) + ',' + std::to_string(c.errors) + ',' +
               format_double(c.ber) + ',' + format_double(c.ci_low) + ',' +
               format_double(c.ci_high) + '\n';
    }
    return out;
}

std::string psd_csv(const spectral::Spectrum& lin, const spectral::DbSpectrum& db) {
    std::string out = std::string(kPsdHeader) + "\n";
    for (std::size_t i = 0; i < lin.freqs_hz.size(); ++i)
        out += format_double(lin.freqs_hz[i]) + ',' + format_double(lin.psd[i]) + ',' +
               format_double(db.psd_db[i]) + '\n';
    out += "# dc_impulse_power=" + format_double(lin.dc_impulse_power) + '\n';
    return out;
}

std::string angle_tag(double deg) {
    std::string s = format_double(deg);
    for (char& c : s)
        if (c == '-') c = 'm';
    return s;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows; // numeric fields only
};

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string_view rest = line;
        while (true) {
            const auto pos = rest.find(',');
            fields.emplace_back(rest.substr(0, pos));
            if (pos == std::string_view::npos) break;
            rest.remove_prefix(pos + 1);
        }
        if (first) {
            t.header = fields;
            first = false;
            continue;
        }
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(std::stod(f));
        t.rows.push_back(std::move(row));
    }
    return t;
}

const std::vector<std::string> kPalette = {"#1f6fb2", "#d1495b", "#3d8f5f",
                                           "#8a5fb0", "#c47a2e", "#4aa6c9",
                                           "#7d7d3a", "#a14d90"};

} // namespace

ScenarioConfig parse_config(const std::string& json_text, const std::string& command) {
    static const std::vector<std::string> kCommands = {"optimize", "psd", "ber-tx", "ber-rx",
                                                       "pattern-export"};
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        throw ValidationError("unknown command '" + command + "'");

    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    cfg.command = command;
    cfg.config_text = json_text;
    try {
        check_keys(doc, "config",
                   {"command", "array", "sequence", "link", "psd", "jam", "angles_deg",
                    "pattern_angles_deg", "seed"});
        if (doc.contains("command")) {
            const auto declared = doc.at("command").get<std::string>();
            if (declared != command)
                throw ValidationError("config declares command '" + declared +
                                      "' but '" + command + "' was requested");
        }
        if (doc.contains("seed")) {
            cfg.seed = doc.at("seed").get<std::uint64_t>();
            cfg.seed_set = true;
        }
        if (doc.contains("array")) {
            const auto& a = doc.at("array");
            check_keys(a, "array",
                       {"n_elements", "spacing_wl", "amplitudes", "phases_deg", "steer_deg",
                        "pattern_table", "variant"});
            read_field(a, "n_elements", cfg.array.n_elements);
            read_field(a, "spacing_wl", cfg.array.spacing_wl);
            read_optional(a, "amplitudes", cfg.array.amplitudes);
            read_optional(a, "phases_deg", cfg.array.phases_deg);
            read_optional(a, "steer_deg", cfg.array.steer_deg);
            read_optional(a, "pattern_table", cfg.array.pattern_table);
            read_field(a, "variant", cfg.array.variant);
        }
        if (doc.contains("sequence")) {
            const auto& s = doc.at("sequence");
            check_keys(s, "sequence",
                       {"chip_rate_hz", "threshold", "min_len", "max_len", "target_len",
                        "target_angle_deg"});
            read_field(s, "chip_rate_hz", cfg.sequence.chip_rate_hz);
            read_field(s, "threshold", cfg.sequence.threshold);
            read_field(s, "min_len", cfg.sequence.min_len);
            read_field(s, "max_len", cfg.sequence.max_len);
            read_field(s, "target_len", cfg.sequence.target_len);
            read_optional(s, "target_angle_deg", cfg.sequence.target_angle_deg);
        }
        if (doc.contains("link")) {
            const auto& l = doc.at("link");
            check_keys(l, "link",
                       {"symbol_rate_hz", "samples_per_chip", "snr_db", "n_bits",
                        "thermal_snr_db"});
            read_field(l, "symbol_rate_hz", cfg.link.symbol_rate_hz);
            read_field(l, "samples_per_chip", cfg.link.samples_per_chip);
            read_field(l, "snr_db", cfg.link.snr_db);
            read_field(l, "n_bits", cfg.link.n_bits);
            read_field(l, "thermal_snr_db", cfg.link.thermal_snr_db);
        }
        if (doc.contains("psd")) {
            const auto& p = doc.at("psd");
            check_keys(p, "psd", {"samples_per_chip", "segment_chips", "n_segments", "db_floor"});
            read_field(p, "samples_per_chip", cfg.psd.samples_per_chip);
            read_field(p, "segment_chips", cfg.psd.segment_chips);
            read_field(p, "n_segments", cfg.psd.n_segments);
            read_field(p, "db_floor", cfg.psd.db_floor);
        }
        if (doc.contains("jam")) {
            const auto& jm = doc.at("jam");
            check_keys(jm, "jam", {"jammer_excess_db", "sinr_db", "jammer_bandwidth_hz"});
            read_field(jm, "jammer_excess_db", cfg.jam.jammer_excess_db);
            read_field(jm, "sinr_db", cfg.jam.sinr_db);
            read_field(jm, "jammer_bandwidth_hz", cfg.jam.jammer_bandwidth_hz);
        }
        read_optional(doc, "angles_deg", cfg.angles_deg);
        read_optional(doc, "pattern_angles_deg", cfg.pattern_angles_deg);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid config value: ") + e.what());
    }

    if (cfg.array.variant != "sltm" && cfg.array.variant != "conventional")
        throw ValidationError("array.variant must be 'sltm' or 'conventional'");
    if (!(cfg.sequence.chip_rate_hz > 0.0))
        throw ValidationError("sequence.chip_rate_hz must be positive");
    if (!(cfg.sequence.threshold > 0.0))
        throw ValidationError("sequence.threshold must be positive");
    if (!(cfg.link.symbol_rate_hz > 0.0))
        throw ValidationError("link.symbol_rate_hz must be positive");
    if (cfg.link.samples_per_chip < 1 || cfg.psd.samples_per_chip < 1)
        throw ValidationError("samples_per_chip must be >= 1");
    if (cfg.psd.segment_chips < 1 || cfg.psd.n_segments < 1)
        throw ValidationError("psd.segment_chips and psd.n_segments must be >= 1");
    return cfg;
}

namespace {

std::vector<double> command_angles(const ScenarioConfig& cfg) {
    if (cfg.angles_deg) {
        if (cfg.angles_deg->empty()) throw ValidationError("angles_deg must not be empty");
        return *cfg.angles_deg;
    }
    if (cfg.command == "psd") return {0.0, 10.0, 20.0, 30.0};
    if (cfg.command == "ber-rx") return {10.0, 20.0, 30.0};
    return step_grid(-45.0, 45.0, 5.0);
}

std::size_t chips_per_symbol_cfg(const ScenarioConfig& cfg) {
    const double ratio = cfg.sequence.chip_rate_hz / cfg.link.symbol_rate_hz;
    const double rounded = std::round(ratio);
    if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw ValidationError("sequence.chip_rate_hz must be an integer multiple of "
                              "link.symbol_rate_hz");
    return static_cast<std::size_t>(rounded);
}

struct RunContext {
    const ScenarioConfig& cfg;
    Responses resp;
    double reference_gain = 0.0;
    int threads = 1;
    json manifest_sequences = json::array();
    std::vector<std::string> artifacts;
};

// Per-angle SLTM channel inputs: mode responses plus optimized sequences, or
// the conventional single-gain channel with the trivial sequence.
struct Channels {
    std::vector<AngularResponse> responses;
    std::vector<sequence::SltmSequence> sequences;
};

Channels build_channels(RunContext& ctx, const std::vector<double>& angles_deg, bool sltm) {
    Channels ch;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double theta = deg2rad(angles_deg[i]);
        if (sltm) {
            ch.responses.push_back(ctx.resp.modes_at(theta));
            auto built = build_sequence(ch.responses.back(), ctx.cfg.sequence, ctx.cfg.seed, i,
                                        /*allow_fallback=*/true);
            ctx.manifest_sequences.push_back(sequence_manifest(angles_deg[i], built));
            ch.sequences.push_back(std::move(built.seq));
        } else {
            AngularResponse r;
            r.angle = theta;
            r.values = {ctx.resp.conv_at(theta)};
            ch.responses.push_back(std::move(r));
        }
    }
    if (!sltm) ch.sequences.push_back(trivial_sequence(ctx.cfg.link.symbol_rate_hz));
    return ch;
}

void write_manifest(RunContext& ctx, const std::filesystem::path& stage) {
    std::sort(ctx.artifacts.begin(), ctx.artifacts.end());
    json manifest{{"command", ctx.cfg.command},
                  {"config_fnv1a64", [&] {
                       std::ostringstream hex;
                       hex << std::hex << fnv1a64(ctx.cfg.config_text);
                       return hex.str();
                   }()},
                  {"seed", ctx.cfg.seed},
                  {"artifacts", ctx.artifacts},
                  {"sequences", ctx.manifest_sequences}};
    write_file(stage / "manifest.json", manifest.dump(2) + "\n");
}

void run_optimize(RunContext& ctx, const std::filesystem::path& stage) {
    if (ctx.cfg.array.variant != "sltm")
        throw ValidationError("optimize requires array.variant 'sltm'");
    if (!ctx.cfg.sequence.target_angle_deg)
        throw ValidationError("optimize needs sequence.target_angle_deg");
    const double angle = *ctx.cfg.sequence.target_angle_deg;
    const auto response = ctx.resp.modes_at(deg2rad(angle));
    auto built = build_sequence(response, ctx.cfg.sequence, ctx.cfg.seed, 0,
                                /*allow_fallback=*/false);
    sequence::export_sequence(built.seq, response.values.size(), ctx.cfg.seed, built.full_mean,
                              stage / "sequence.bin", stage / "sequence.json");
    ctx.manifest_sequences.push_back(sequence_manifest(angle, built));
    ctx.artifacts = {"sequence.bin", "sequence.json"};
}

void run_psd(RunContext& ctx, const std::filesystem::path& stage) {
    const auto angles = command_angles(ctx.cfg);
    const bool sltm = ctx.cfg.array.variant == "sltm";
    const std::size_t cps = chips_per_symbol_cfg(ctx.cfg);

    link_sim::PsdScenario sc;
    sc.angles_deg = angles;
    auto ch = build_channels(ctx, angles, sltm);
    sc.responses = std::move(ch.responses);
    sc.sequences = std::move(ch.sequences);
    sc.qpsk.symbol_rate_hz = ctx.cfg.link.symbol_rate_hz;
    sc.qpsk.samples_per_symbol = ctx.cfg.psd.samples_per_chip * cps;
    sc.segment_len = ctx.cfg.psd.segment_chips * ctx.cfg.psd.samples_per_chip;
    sc.n_segments = ctx.cfg.psd.n_segments;
    sc.seed = ctx.cfg.seed;
    sc.reference_gain = ctx.reference_gain;

    const auto result = link_sim::simulate_tx_psd(sc, 1);

    for (std::size_t i = 0; i < angles.size(); ++i) {
        const auto& lin = result.spectra[i];
        const auto db = spectral::to_db(lin, result.reference_peak, ctx.cfg.psd.db_floor);
        const std::string csv = psd_csv(lin, db);
        const std::string base = "psd_" + angle_tag(angles[i]) + "deg";
        write_file(stage / (base + ".csv"), csv);

        std::vector<Series> extra;
        if (sltm) {
            // Closed-form chip PSD of the sequence actually played at this angle.
            const auto& seq = sc.sequences.size() == 1 ? sc.sequences[0] : sc.sequences[i];
            const sequence::ChipDistribution dist(
                sc.responses[i].values,
                sequence::empirical_proportions(seq, sc.responses[i].values.size()));
            const auto analytic = spectral::analytic_chip_psd(
                sequence::chip_moments(dist), ctx.cfg.sequence.chip_rate_hz,
                spectral::default_grid(ctx.cfg.sequence.chip_rate_hz));
            const auto adb =
                spectral::to_db(analytic, result.reference_peak, ctx.cfg.psd.db_floor);
            Series s;
            s.label = "analytic chip PSD";
            s.color = "#d1495b";
            s.dashed = true;
            for (std::size_t k = 0; k < adb.freqs_hz.size(); ++k)
                s.points.emplace_back(adb.freqs_hz[k] / 1e6, adb.psd_db[k]);
            extra.push_back(std::move(s));
        }
        PlotSpec spec;
        spec.title = (sltm ? std::string("SLTM") : std::string("conventional")) +
                     " transmit PSD at " + format_double(angles[i]) + " deg";
        spec.x_label = "frequency [MHz]";
        spec.y_label = "PSD [dB rel. conventional main-lobe peak]";
        write_file(stage / (base + ".svg"), emit_plot(csv, "psd", spec, extra));
        ctx.artifacts.push_back(base + ".csv");
        ctx.artifacts.push_back(base + ".svg");
    }
}

void run_ber_tx(RunContext& ctx, const std::filesystem::path& stage) {
    const auto angles = command_angles(ctx.cfg);
    const bool sltm = ctx.cfg.array.variant == "sltm";
    const std::size_t cps = chips_per_symbol_cfg(ctx.cfg);

    link_sim::TxScenario sc;
    sc.angles_deg = angles;
    auto ch = build_channels(ctx, angles, sltm);
    sc.responses = std::move(ch.responses);
    sc.sequences = std::move(ch.sequences);
    sc.qpsk.symbol_rate_hz = ctx.cfg.link.symbol_rate_hz;
    sc.qpsk.samples_per_symbol = ctx.cfg.link.samples_per_chip * cps;
    sc.snr_db = ctx.cfg.link.snr_db;
    sc.n_bits = ctx.cfg.link.n_bits;
    sc.seed = ctx.cfg.seed;
    sc.reference_gain = ctx.reference_gain;

    const auto result = link_sim::simulate_tx_ber(sc, ctx.threads);

    const std::string csv = ber_csv(result);
    write_file(stage / "ber_tx.csv", csv);

    std::vector<Series> extra;
    if (sc.snr_db.size() > 1) {
        Series theory;
        theory.label = "theory 1/2 erfc(sqrt(snr))";
        theory.color = "#333333";
        theory.dashed = true;
        for (double snr : sc.snr_db) {
            const double ber = link_sim::theoretical_qpsk_ber(std::pow(10.0, snr / 10.0));
            if (ber > 0.0) theory.points.emplace_back(snr, std::log10(ber));
        }
        extra.push_back(std::move(theory));
    }

    PlotSpec spec;
    spec.title = (sltm ? std::string("SLTM") : std::string("conventional")) +
                 " eavesdropper BER vs SNR";
    spec.x_label = "Eb/N0 [dB, conventional main lobe]";
    spec.y_label = "log10(BER)";
    write_file(stage / "ber_tx.svg", emit_plot(csv, "ber", spec, extra));
    ctx.artifacts = {"ber_tx.csv", "ber_tx.svg"};
}

void run_ber_rx(RunContext& ctx, const std::filesystem::path& stage) {
    const auto angles = command_angles(ctx.cfg);
    const std::size_t cps = chips_per_symbol_cfg(ctx.cfg);

    link_sim::JamScenario base;
    base.desired_angle_deg = 0.0;
    base.jammer_angles_deg = angles;
    for (double a : angles) base.conv_jam_gain.push_back(std::abs(ctx.resp.conv_at(deg2rad(a))));
    base.sinr_db = ctx.cfg.jam.sinr_db;
    base.jammer_excess_db = ctx.cfg.jam.jammer_excess_db;
    base.thermal_snr_db = ctx.cfg.link.thermal_snr_db;
    base.jammer_bandwidth_hz = ctx.cfg.jam.jammer_bandwidth_hz;
    base.qpsk.symbol_rate_hz = ctx.cfg.link.symbol_rate_hz;
    base.qpsk.samples_per_symbol = ctx.cfg.link.samples_per_chip * cps;
    base.n_bits = ctx.cfg.link.n_bits;
    base.seed = ctx.cfg.seed;
    base.reference_gain = ctx.reference_gain;

    // SLTM receiver: scrambled sidelobes, constant main lobe.
    link_sim::JamScenario sltm_sc = base;
    sltm_sc.desired_response = ctx.resp.modes_at(deg2rad(0.0));
    auto ch = build_channels(ctx, angles, true);
    sltm_sc.jammer_responses = std::move(ch.responses);
    sltm_sc.sequences = std::move(ch.sequences);

    // Conventional receiver: fixed pattern on both paths. Same seed, so both
    // arrays face identical bits, jammer and noise draws.
    link_sim::JamScenario conv_sc = base;
    AngularResponse conv_desired;
    conv_desired.angle = 0.0;
    conv_desired.values = {ctx.resp.conv_at(0.0)};
    conv_sc.desired_response = conv_desired;
    auto conv_ch = build_channels(ctx, angles, false);
    conv_sc.jammer_responses = std::move(conv_ch.responses);
    conv_sc.sequences = std::move(conv_ch.sequences);

    const auto sltm_res = link_sim::simulate_rx_jamming_ber(sltm_sc, ctx.threads);
    const auto conv_res = link_sim::simulate_rx_jamming_ber(conv_sc, ctx.threads);

    const std::string sltm_csv = ber_csv(sltm_res);
    const std::string conv_csv = ber_csv(conv_res);
    write_file(stage / "ber_rx_sltm.csv", sltm_csv);
    write_file(stage / "ber_rx_conv.csv", conv_csv);

    const bool sweep = !base.sinr_db.empty();
    PlotSpec spec;
    spec.title = "jamming BER, SLTM vs conventional";
    spec.x_label = sweep ? "SINR at the conventional array [dB]" : "jammer angle [deg]";
    spec.y_label = "log10(BER)";
    std::vector<Series> extra;
    {
        Series conv;
        conv.label = "conventional";
        conv.color = "#d1495b";
        for (const auto& c : conv_res.cells)
            if (c.ber > 0.0) conv.points.emplace_back(c.key, std::log10(c.ber));
        extra.push_back(std::move(conv));
    }
    write_file(stage / "ber_rx.svg", emit_plot(sltm_csv, "ber", spec, extra));
    ctx.artifacts = {"ber_rx_conv.csv", "ber_rx_sltm.csv", "ber_rx.svg"};
}

void run_pattern_export(RunContext& ctx, const std::filesystem::path& stage) {
    if (ctx.resp.table)
        throw ValidationError("pattern-export writes the computed table; remove "
                              "array.pattern_table from the config");
    std::vector<double> grid;
    if (ctx.cfg.pattern_angles_deg)
        grid = *ctx.cfg.pattern_angles_deg;
    else
        grid = step_grid(-90.0, 90.0, 1.0);
    std::ostringstream out;
    array_model::write_pattern_table(out, ctx.resp.geom, ctx.resp.modes, grid);
    write_file(stage / "pattern_table.csv", out.str());
    ctx.artifacts = {"pattern_table.csv"};
}

} // namespace

std::string emit_plot(const std::string& csv_text, const std::string& kind,
                      const PlotSpec& spec, const std::vector<Series>& extra) {
    if (kind != "psd" && kind != "ber")
        throw ValidationError("unknown plot schema '" + kind + "'");
    const CsvTable table = parse_csv(csv_text);
    const std::vector<std::string> want =
        kind == "psd"
            ? std::vector<std::string>{"freq_hz", "psd_per_hz", "psd_db"}
            : std::vector<std::string>{"angle_deg_or_sinr_db", "snr_db", "bits",
                                       "errors",  "ber",       "ci_low", "ci_high"};
    if (table.header != want)
        throw ValidationError("CSV header does not match the '" + kind + "' schema");
    if (table.rows.empty()) throw ValidationError("CSV has no data rows to plot");

    std::vector<Series> series;
    if (kind == "psd") {
        Series s;
        s.label = "measured";
        s.color = kPalette[0];
        for (const auto& row : table.rows) s.points.emplace_back(row[0] / 1e6, row[2]);
        series.push_back(std::move(s));
    } else {
        // One curve per sweep key; x is the SNR column unless it is constant,
        // in which case the key column is the x axis.
        bool snr_constant = true;
        for (const auto& row : table.rows)
            if (row[1] != table.rows[0][1]) snr_constant = false;
        std::vector<double> keys;
        for (const auto& row : table.rows)
            if (std::find(keys.begin(), keys.end(), row[0]) == keys.end())
                keys.push_back(row[0]);
        if (snr_constant) {
            Series s;
            s.label = "sltm";
            s.color = kPalette[0];
            for (const auto& row : table.rows)
                s.points.emplace_back(row[0], row[4] > 0.0 ? std::log10(row[4])
                                                           : std::numeric_limits<double>::quiet_NaN());
            series.push_back(std::move(s));
        } else {
            for (std::size_t k = 0; k < keys.size(); ++k) {
                Series s;
                s.label = format_double(keys[k]) + " deg";
                s.color = kPalette[k % kPalette.size()];
                for (const auto& row : table.rows)
                    if (row[0] == keys[k])
                        s.points.emplace_back(row[1],
                                              row[4] > 0.0
                                                  ? std::log10(row[4])
                                                  : std::numeric_limits<double>::quiet_NaN());
                series.push_back(std::move(s));
            }
        }
    }
    for (const auto& s : extra) series.push_back(s);
    return render_line_plot(spec, series);
}

void run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                  int n_threads) {
    if (!cfg.seed_set)
        throw ValidationError("a seed is required (config 'seed' or --seed)");
    if (n_threads < 1) throw ValidationError("--threads must be >= 1");

    RunContext ctx{cfg, build_responses(cfg.array)};
    ctx.reference_gain = std::abs(ctx.resp.conv_at(0.0));
    ctx.threads = n_threads;

    StageDir stage(out_dir);
    if (cfg.command == "optimize")
        run_optimize(ctx, stage.path());
    else if (cfg.command == "psd")
        run_psd(ctx, stage.path());
    else if (cfg.command == "ber-tx")
        run_ber_tx(ctx, stage.path());
    else if (cfg.command == "ber-rx")
        run_ber_rx(ctx, stage.path());
    else if (cfg.command == "pattern-export")
        run_pattern_export(ctx, stage.path());
    else
        throw ValidationError("unknown command '" + cfg.command + "'");

    write_manifest(ctx, stage.path());
    stage.commit();
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Sidelobe time-modulated array simulation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int threads = 1;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"optimize", "optimize a mode sequence for one target angle and export it"},
        {"psd", "transmit-signal PSD per observation angle"},
        {"ber-tx", "eavesdropper BER across angles and SNRs"},
        {"ber-rx", "receive-mode jamming BER, SLTM vs conventional"},
        {"pattern-export", "write the computed per-mode pattern table"}};
    for (const auto& [name, desc] : commands) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "scenario JSON document")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed_flag, "override the config seed")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--threads", threads, "worker threads for Monte Carlo cells");
    }

    try {
        std::vector<const char*> argv;
        argv.push_back("sltm");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        auto cfg = parse_config(read_file(config_path), command);
        if (seed_given) {
            cfg.seed = seed_flag;
            cfg.seed_set = true;
        }
        run_scenario(cfg, out_dir, threads);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace sltm::cli
