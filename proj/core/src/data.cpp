#include "sxai/data.hpp"

#include "sxai/error.hpp"

#include <algorithm>
#include <numeric>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace sxai {

namespace {

using namespace std::chrono;

bool parse_uint(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct ArKey {
    bool operator()(const Sample& a, const Sample& b) const {
        if (a.ar_id != b.ar_id) return a.ar_id < b.ar_id;
        return a.timestamp < b.timestamp;
    }
};

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    text = trim(text);
    // YYYY-MM-DDTHH:MM:SS with optional trailing Z; a space may replace the T.
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) text.remove_suffix(1);
    int y, mo, d, h, mi, s;
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':' ||
        !parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), mo) ||
        !parse_uint(text.substr(8, 2), d) || !parse_uint(text.substr(11, 2), h) ||
        !parse_uint(text.substr(14, 2), mi) || !parse_uint(text.substr(17, 2), s)) {
        throw InputError(fmt::format("invalid ISO-8601 UTC timestamp '{}'", text));
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        throw InputError(fmt::format("invalid ISO-8601 UTC timestamp '{}'", text));
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
    const auto days = floor<std::chrono::days>(ts);
    const year_month_day ymd{days};
    const hh_mm_ss hms{ts - days};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::vector<Sample> parse_csv(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw SchemaError(fmt::format("{}: empty file, expected a header row", source), 1);
    ++line_no;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_fields(line);
    std::map<std::string, std::size_t, std::less<>> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name(trim(header[i]));
        if (!col.emplace(name, i).second) {
            throw SchemaError(fmt::format("{}: duplicate column '{}' in header", source, name), 1);
        }
    }
    auto require = [&](std::string_view name) {
        auto it = col.find(name);
        if (it == col.end()) throw SchemaError(fmt::format("{}: missing column '{}'", source, name), 1);
        return it->second;
    };
    const std::size_t c_ar = require("ar_id");
    const std::size_t c_ts = require("timestamp");
    std::array<std::size_t, kNumFeatures> c_feat{};
    for (std::size_t j = 0; j < kNumFeatures; ++j) c_feat[j] = require(kFeatureCatalog[j].name);
    const std::size_t c_label = require("label");

    std::vector<Sample> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw SchemaError(fmt::format("{}:{}: expected {} fields, found {}", source, line_no,
                                          header.size(), fields.size()),
                              line_no);
        }
        Sample s;
        s.ar_id = std::string(trim(fields[c_ar]));
        if (s.ar_id.empty()) throw SchemaError(fmt::format("{}:{}: empty ar_id", source, line_no), line_no);
        try {
            s.timestamp = parse_timestamp(fields[c_ts]);
        } catch (const InputError& e) {
            throw SchemaError(fmt::format("{}:{}: {}", source, line_no, e.what()), line_no);
        }
        for (std::size_t j = 0; j < kNumFeatures; ++j) {
            const auto cell = trim(fields[c_feat[j]]);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw SchemaError(fmt::format("{}:{}: non-numeric value '{}' in column {}", source, line_no,
                                              cell, kFeatureCatalog[j].name),
                                  line_no);
            }
            s.features[j] = v;
        }
        const auto lab = trim(fields[c_label]);
        if (lab == "P") {
            s.label = Label::P;
        } else if (lab == "N") {
            s.label = Label::N;
        } else {
            throw SchemaError(fmt::format("{}:{}: invalid label '{}', allowed values are {{P, N}}", source,
                                          line_no, lab),
                              line_no);
        }
        out.push_back(std::move(s));
    }

    std::stable_sort(out.begin(), out.end(), ArKey{});
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].ar_id == out[i - 1].ar_id && out[i].timestamp == out[i - 1].timestamp) {
            throw SchemaError(fmt::format("{}: duplicate sample for ar_id '{}' at {}", source, out[i].ar_id,
                                          format_timestamp(out[i].timestamp)));
        }
    }
    return out;
}

std::vector<Sample> load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(fmt::format("cannot open data file '{}'", path.string()));
    return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, const std::vector<Sample>& samples) {
    out << "ar_id,timestamp";
    for (const auto& f : kFeatureCatalog) out << ',' << f.name;
    out << ",label\n";
    for (const auto& s : samples) {
        out << s.ar_id << ',' << format_timestamp(s.timestamp);
        for (double v : s.features) out << ',' << format_double(v);
        out << ',' << label_char(s.label) << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<Sample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
    write_csv(out, samples);
    if (!out) throw InputError(fmt::format("write failed for '{}'", path.string()));
}

Mat feature_matrix(const std::vector<Sample>& samples) {
    Mat m(samples.size(), kNumFeatures);
    for (std::size_t i = 0; i < samples.size(); ++i)
        std::copy(samples[i].features.begin(), samples[i].features.end(), m.row(i).begin());
    return m;
}

NormStats fit_norm(const std::vector<Sample>& train) {
    if (train.empty()) throw InputError("cannot fit normalization on an empty training split");
    return zscore_fit(feature_matrix(train));
}

std::vector<Sample> normalize(std::vector<Sample> samples, const NormStats& stats) {
    for (auto& s : samples) {
        Vec z = zscore_apply(s.features, stats);
        std::copy(z.begin(), z.end(), s.features.begin());
    }
    return samples;
}

SequenceSet windowize(std::vector<Sample> samples, std::size_t window_length) {
    if (window_length == 0) throw std::invalid_argument("windowize: window length must be >= 1");
    std::stable_sort(samples.begin(), samples.end(), ArKey{});
    SequenceSet set;
    set.window_length = window_length;
    std::size_t begin = 0;
    while (begin < samples.size()) {
        std::size_t end = begin;
        while (end < samples.size() && samples[end].ar_id == samples[begin].ar_id) ++end;
        const std::size_t n = end - begin;
        set.dropped_samples += std::min(n, window_length - 1);
        for (std::size_t last = begin + window_length - 1; last < end; ++last) {
            Sequence seq;
            seq.window = Mat(window_length, kNumFeatures);
            const std::size_t first = last + 1 - window_length;
            for (std::size_t t = 0; t < window_length; ++t) {
                const auto& f = samples[first + t].features;
                std::copy(f.begin(), f.end(), seq.window.row(t).begin());
            }
            seq.label = samples[last].label;
            seq.ar_id = samples[last].ar_id;
            seq.end = samples[last].timestamp;
            set.sequences.push_back(std::move(seq));
        }
        begin = end;
    }
    return set;
}

Split split(const std::vector<Sample>& samples, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InputError("train fraction must lie strictly between 0 and 1");
    }
    std::set<std::string> ids;
    for (const auto& s : samples) ids.insert(s.ar_id);
    if (ids.size() < 2) throw InputError("split needs at least 2 active regions");
    std::vector<std::string> order(ids.begin(), ids.end());
    Rng rng(seed);
    rng.shuffle(order);
    const auto n = static_cast<double>(order.size());
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * n));
    n_train = std::clamp<std::size_t>(n_train, 1, order.size() - 1);

    Split out;
    out.train_ars.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_ars.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(out.train_ars.begin(), out.train_ars.end());
    std::sort(out.test_ars.begin(), out.test_ars.end());
    const std::set<std::string> train_set(out.train_ars.begin(), out.train_ars.end());
    for (const auto& s : samples) (train_set.count(s.ar_id) ? out.train : out.test).push_back(s);
    return out;
}

PlantSpec make_plant(std::string_view dominant, std::string_view correlate, double rho, double label_noise) {
    const auto d = feature_index(dominant);
    if (!d) throw InputError(fmt::format("unknown dominant feature '{}'", dominant));
    const auto c = feature_index(correlate);
    if (!c) throw InputError(fmt::format("unknown correlate feature '{}'", correlate));
    if (*d == *c) throw InputError("dominant and correlate features must differ");
    if (!(std::abs(rho) <= 1.0)) throw InputError(fmt::format("rho must lie in [-1, 1], got {}", rho));
    if (!(label_noise >= 0.0 && label_noise <= 0.02)) {
        throw InputError(fmt::format("label noise must lie in [0, 0.02], got {}", label_noise));
    }
    return PlantSpec{*d, *c, rho, label_noise};
}

namespace {

// Rough physical magnitudes so that raw CSV values look like SHARP exports.
constexpr std::array<double, kNumFeatures> kSynthScale{
    2e12, 5e21, 5e22, 1e12, 50.0, 2000.0, 10.0, 10.0, 2e-3, 5.0, 0.02, 20.0};
constexpr std::array<double, kNumFeatures> kSynthOffset{
    1e13, 2.5e22, 2.5e23, 5e12, 250.0, 10000.0, 40.0, 30.0, 1e-2, 30.0, 0.1, 90.0};

// The dominant latent is a two-state activity regime plus AR(1) noise, kept at
// unit variance: mu^2 + sigma^2 = 1. Regimes keep most windows away from the
// label boundary. The correlate's own noise is AR(1) like every other latent,
// so averaging over steps does not make it a cleaner copy of the dominant.
// That noise is made exactly uncorrelated with the dominant over the whole
// dataset, which plants corr(dominant, correlate) = rho at any sample size.
constexpr double kRegimeLevel = 0.95;
constexpr double kRegimeSwitch = 0.03;
constexpr double kPersistence = 0.8;
constexpr std::size_t kLabelSpan = 3;

}  // namespace

std::vector<Sample> synth_generate(const SynthConfig& config) {
    const auto& plant = config.plant;
    if (plant.dominant >= kNumFeatures || plant.correlate >= kNumFeatures || plant.dominant == plant.correlate) {
        throw InputError("invalid plant spec: feature index out of range or dominant == correlate");
    }
    if (!(std::abs(plant.rho) <= 1.0)) throw InputError("invalid plant spec: |rho| > 1");
    if (!(plant.label_noise >= 0.0 && plant.label_noise <= 0.02)) {
        throw InputError("invalid plant spec: label noise outside [0, 0.02]");
    }
    if (config.n_ars == 0 || config.samples_per_ar == 0) throw InputError("synthetic dataset must be non-empty");

    const sys_days epoch = sys_days{year{2012} / January / 1};
    const double cross = std::sqrt(1.0 - plant.rho * plant.rho);
    std::vector<Sample> out;
    std::vector<double> dominant_values, partner_values;
    out.reserve(config.n_ars * config.samples_per_ar);

    for (std::size_t a = 0; a < config.n_ars; ++a) {
        Rng rng(derive_seed(config.seed, a));
        const std::string ar_id = fmt::format("AR{:05d}", 11000 + a);
        const Timestamp start = epoch + days{static_cast<int>(a) * 30};

        std::array<double, kNumFeatures> latent{};
        for (auto& v : latent) v = rng.normal();
        double regime = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double regime_noise = std::sqrt(1.0 - kRegimeLevel * kRegimeLevel);
        double partner_noise = rng.normal();
        std::vector<double> dominant_history;

        for (std::size_t t = 0; t < config.samples_per_ar; ++t) {
            if (t > 0) {
                for (auto& v : latent) v = kPersistence * v + std::sqrt(1.0 - kPersistence * kPersistence) * rng.normal();
                if (rng.uniform() < kRegimeSwitch) regime = -regime;
                partner_noise = kPersistence * partner_noise + std::sqrt(1.0 - kPersistence * kPersistence) * rng.normal();
            }
            const double flip = rng.uniform();

            std::array<double, kNumFeatures> z = latent;
            z[plant.dominant] = kRegimeLevel * regime + regime_noise * latent[plant.dominant];
            dominant_values.push_back(z[plant.dominant]);
            partner_values.push_back(partner_noise);

            dominant_history.push_back(z[plant.dominant]);
            const std::size_t span = std::min(kLabelSpan, dominant_history.size());
            double level = 0.0;
            for (std::size_t k = dominant_history.size() - span; k < dominant_history.size(); ++k)
                level += dominant_history[k];
            level /= static_cast<double>(span);
            const double prob = 1.0 / (1.0 + std::exp(-4.0 * level));
            bool positive = prob > 0.5;
            if (flip < plant.label_noise) positive = !positive;

            Sample s;
            s.ar_id = ar_id;
            s.timestamp = start + hours{static_cast<int>(t)};
            for (std::size_t j = 0; j < kNumFeatures; ++j) s.features[j] = kSynthOffset[j] + kSynthScale[j] * z[j];
            s.label = positive ? Label::P : Label::N;
            out.push_back(std::move(s));
        }
    }

    // Residualize the partner noise on the dominant and match its spread.
    const auto n = static_cast<double>(out.size());
    const double mean_d = std::accumulate(dominant_values.begin(), dominant_values.end(), 0.0) / n;
    const double mean_e = std::accumulate(partner_values.begin(), partner_values.end(), 0.0) / n;
    double var_d = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        var_d += (dominant_values[i] - mean_d) * (dominant_values[i] - mean_d);
        cov += (dominant_values[i] - mean_d) * (partner_values[i] - mean_e);
    }
    const double beta = var_d > 0.0 ? cov / var_d : 0.0;
    double var_r = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        partner_values[i] = partner_values[i] - mean_e - beta * (dominant_values[i] - mean_d);
        var_r += partner_values[i] * partner_values[i];
    }
    const double gain = var_d > 0.0 && var_r > 0.0 ? std::sqrt(var_d / var_r) : 1.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double zc = plant.rho * dominant_values[i] + cross * gain * partner_values[i];
        out[i].features[plant.correlate] = kSynthOffset[plant.correlate] + kSynthScale[plant.correlate] * zc;
    }
    std::stable_sort(out.begin(), out.end(), ArKey{});
    return out;
}

nlohmann::json synth_manifest(const SynthConfig& config, const std::vector<Sample>& samples) {
    std::size_t positives = 0;
    for (const auto& s : samples) positives += s.label == Label::P;
    return {
        {"schema", "sxai-synth/1"},
        {"seed", config.seed},
        {"n_ars", config.n_ars},
        {"samples_per_ar", config.samples_per_ar},
        {"plant",
         {{"dominant", std::string(feature_name(config.plant.dominant))},
          {"correlate", std::string(feature_name(config.plant.correlate))},
          {"rho", config.plant.rho},
          {"label_noise", config.plant.label_noise}}},
        {"counts", {{"samples", samples.size()}, {"positive", positives}, {"negative", samples.size() - positives}}},
    };
}

}  // namespace sxai
