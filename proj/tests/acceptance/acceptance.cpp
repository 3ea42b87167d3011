// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "../unit/helpers.hpp"

#include "sxai/analysis.hpp"
#include "sxai/catalog.hpp"
#include "sxai/data.hpp"
#include "sxai/lime.hpp"
#include "sxai/model.hpp"
#include "sxai/shap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <fmt/format.h>

using namespace sxai;
using namespace sxai::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double phi_sum(const ShapExplanation& e) { return std::accumulate(e.phi.begin(), e.phi.end(), 0.0); }

// Same split, normalization and windowing as the command-line pipeline.
struct Planted {
    std::vector<Sample> train_raw;
    NormStats norm;
    SequenceSet train;
    SequenceSet test;
};

Planted planted(std::uint64_t seed, std::size_t n_ars = 100, std::size_t per_ar = 34) {
    SynthConfig sc;
    sc.n_ars = n_ars;
    sc.samples_per_ar = per_ar;
    sc.seed = seed;
    const auto samples = synth_generate(sc);
    Split s = split(samples, 0.8, seed);
    Planted p;
    p.norm = fit_norm(s.train);
    p.train = windowize(normalize(s.train, p.norm), 10);
    p.test = windowize(normalize(s.test, p.norm), 10);
    p.train_raw = std::move(s.train);
    return p;
}

TrainConfig train_config(std::uint64_t seed) {
    TrainConfig tc;
    tc.seed = seed;
    return tc;
}

// 1. Efficiency of exact Shapley values at d = 12.
Outcome efficiency() {
    const auto t0 = Clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t T = 5;
        const auto bg = random_background(rng, 4, T, 12);
        const Mat x = random_window(rng, T, 12);
        ShapExplanation e;
        if (i % 2 == 0) {
            const LstmModel m(random_params(rng, 12, 8, 0.4));
            e = exact_shapley(m, x, bg);
        } else {
            const auto m = random_quadratic(rng, 12);
            e = exact_shapley(m, x, bg);
        }
        worst = std::max(worst, std::abs(e.base + phi_sum(e) - e.fx));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-6 && secs < 120.0, fmt::format("max |base + sum phi - fx| = {:.3e}, {:.1f} s", worst, secs)};
}

// 2. Kernel SHAP with full enumeration reproduces exact values.
Outcome kernel_equivalence() {
    const auto t0 = Clock::now();
    Rng rng(202);
    const auto m = random_quadratic(rng, 6);
    const auto bg = random_background(rng, 8, 1, 6);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Mat x = random_window(rng, 1, 6);
        const auto ex = exact_shapley(m, x, bg);
        KernelOptions ko;
        ko.n_coalitions = 62;
        ko.seed = static_cast<std::uint64_t>(i);
        const auto ke = kernel_shap(m, x, bg, ko);
        for (std::size_t j = 0; j < 6; ++j) worst = std::max(worst, std::abs(ex.phi[j] - ke.phi[j]));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-8 && secs < 60.0, fmt::format("max |dphi| = {:.3e} over 20 samples, {:.2f} s", worst, secs)};
}

// 3. Dummy and symmetry axioms on constructed LSTMs.
Outcome axioms() {
    Rng rng(303);
    const std::size_t d = 6, T = 4, dummy = 2, a = 1, b = 4;
    double worst_dummy = 0.0, worst_sym = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        LstmParams p = random_params(rng, d, 5, 0.6);
        for (Mat* W : {&p.W_i, &p.W_f, &p.W_o, &p.W_g})
            for (std::size_t h = 0; h < p.hidden; ++h) {
                (*W)(h, dummy) = 0.0;
                (*W)(h, b) = (*W)(h, a);
            }
        const LstmModel m(p);
        auto tie = [&](Mat w) {
            for (std::size_t t = 0; t < T; ++t) w(t, b) = w(t, a);
            return w;
        };
        Background bg;
        for (int k = 0; k < 5; ++k) bg.push_back(tie(random_window(rng, T, d)));
        const Mat x = tie(random_window(rng, T, d));
        const auto e = exact_shapley(m, x, bg);
        worst_dummy = std::max(worst_dummy, std::abs(e.phi[dummy]));
        worst_sym = std::max(worst_sym, std::abs(e.phi[a] - e.phi[b]));
    }
    return {worst_dummy <= 1e-10 && worst_sym <= 1e-10,
            fmt::format("max |phi_dummy| = {:.3e}, max |phi_a - phi_b| = {:.3e}", worst_dummy, worst_sym)};
}

// 4. Expected gradients on linear models equal w_i (x_i - mean b_i) summed over steps.
Outcome gradient_closed_form() {
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t d = 12, T = 3;
        Vec w(d);
        for (double& v : w) v = rng.normal();
        const LinearModel m(w, rng.normal());
        const auto bg = random_background(rng, 7, T, d);
        const Mat x = random_window(rng, T, d);
        GradientOptions go;
        go.seed = static_cast<std::uint64_t>(i);
        const auto e = gradient_shap(m, x, bg, go);
        for (std::size_t j = 0; j < d; ++j) {
            double expected = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                double mean_b = 0.0;
                for (const auto& bw : bg) mean_b += bw(t, j) / static_cast<double>(bg.size());
                expected += w[j] * (x(t, j) - mean_b);
            }
            worst = std::max(worst, std::abs(e.phi[j] - expected));
        }
    }
    return {worst < 1e-10, fmt::format("max deviation = {:.3e} over 50 models", worst)};
}

// 5. input_gradient against central finite differences.
Outcome gradient_check() {
    const auto t0 = Clock::now();
    Rng rng(505);
    const double h = 1e-5;
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const LstmModel m(random_params(rng, 12, 8, 0.5));
        Mat x = random_window(rng, 5, 12);
        const Mat g = m.input_gradient(x);
        for (std::size_t i = 0; i < x.flat().size(); ++i) {
            const double keep = x.flat()[i];
            x.flat()[i] = keep + h;
            const double up = m.predict(x);
            x.flat()[i] = keep - h;
            const double down = m.predict(x);
            x.flat()[i] = keep;
            const double fd = (up - down) / (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(g.flat()[i]), 1e-6});
            worst = std::max(worst, std::abs(fd - g.flat()[i]) / denom);
        }
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-4 && secs < 120.0, fmt::format("max relative error = {:.3e}, {:.1f} s", worst, secs)};
}

struct Trained {
    Planted data;
    LstmParams params;
};

// 6. Desk-scale training on the planted set.
Outcome desk_training(Trained& out) {
    const auto t0 = Clock::now();
    out.data = planted(42);
    const auto result = train(out.data.train, train_config(42));
    out.params = result.params;
    const LstmModel m(out.params);
    const auto ev = evaluate(m, out.data.test);
    const double secs = seconds_since(t0);
    const bool sizes = out.data.train.size() == 2000 && out.data.test.size() == 500;
    return {sizes && ev.skill.tss >= 0.9 && secs < 300.0,
            fmt::format("{} train / {} test windows, TSS = {:.3f}, {:.1f} s", out.data.train.size(),
                        out.data.test.size(), ev.skill.tss, secs)};
}

// 7. The planted feature ranks first in mean |phi| across 20 seeds.
Outcome planted_recovery() {
    const auto t0 = Clock::now();
    const std::size_t dominant = *feature_index("TOTPOT");
    int hits = 0;
    std::vector<std::string> misses;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Planted p = planted(seed);
        const LstmModel m(train(p.train, train_config(seed)).params);
        const auto bg = sample_background(p.train, 50, derive_seed(seed, 1));
        std::vector<Mat> windows;
        for (std::size_t i = 0; i < std::min<std::size_t>(60, p.test.size()); ++i)
            windows.push_back(p.test.sequences[i].window);
        ExplainOptions o;
        o.method = ShapMethod::gradient;
        o.seed = derive_seed(seed, 2);
        const auto imp = global_importance(explain_all(m, windows, bg, o));
        if (imp.ranking.front() == dominant)
            ++hits;
        else
            misses.push_back(fmt::format("seed {} top {}", seed, feature_name(imp.ranking.front())));
    }
    std::string detail = fmt::format("{}/20 runs rank TOTPOT first (gradient), {:.0f} s", hits, seconds_since(t0));
    for (const auto& m : misses) detail += "; " + m;
    return {hits >= 19, detail};
}

// 8. LIME fidelity on linear models and the sign balance on the planted pipeline.
Outcome lime_fidelity(const Trained& trained) {
    Rng rng(808);
    double worst_r2 = 1.0;
    int sign_errors = 0, checked = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t d = 12;
        Mat rows(400, d);
        Vec scale(d);
        for (double& s : scale) s = std::exp(rng.uniform(-1.0, 1.0));
        for (std::size_t r = 0; r < rows.rows(); ++r)
            for (std::size_t j = 0; j < d; ++j) rows(r, j) = 3.0 + scale[j] * rng.normal();
        Vec w(d);
        for (double& v : w) v = rng.normal() * 0.3;
        const LinearModel m(w, 0.1);
        const Discretizer disc = discretizer_fit(rows);
        LimeOptions o;
        o.mode = SamplingMode::raw;
        o.seed = static_cast<std::uint64_t>(rep);
        o.k = d;
        const auto r0 = rows.row(static_cast<std::size_t>(rep));
        const auto e = explain_local(m, Mat(1, d, Vec(r0.begin(), r0.end())), disc, o);
        worst_r2 = std::min(worst_r2, e.fidelity);
        for (std::size_t j = 0; j < d; ++j) {
            const double standardized = w[j] * disc.train_std[j];
            if (std::abs(standardized) < 0.1) continue;
            ++checked;
            if ((standardized > 0) != (e.coefficients[j] > 0)) ++sign_errors;
        }
    }

    const LstmModel m(trained.params);
    const auto& test = trained.data.test;
    std::size_t id = test.size();
    for (std::size_t i = 0; i < test.size() && id == test.size(); ++i)
        if (m.predict(test.sequences[i].window) >= 0.5) id = i;
    bool planted_ok = false;
    std::string planted_detail = "no positive-predicted test window";
    if (id < test.size()) {
        const Discretizer disc = discretizer_fit(feature_matrix(normalize(trained.data.train_raw, trained.data.norm)));
        LimeOptions o;
        o.seed = derive_seed(42, 3 + id);
        const auto e = explain_local(m, test.sequences[id].window, disc, o);
        double pos = 0.0, neg = 0.0;
        for (const auto& entry : e.entries) (entry.weight > 0 ? pos : neg) += std::abs(entry.weight);
        planted_ok = pos > neg;
        planted_detail = fmt::format("planted sample {} (p = {:.3f}): positive {:.3f} vs negative {:.3f}", id,
                                     e.model_pred, pos, neg);
    }
    return {worst_r2 > 0.99 && sign_errors == 0 && planted_ok,
            fmt::format("min R^2 = {:.5f}, sign errors {}/{}; {}", worst_r2, sign_errors, checked, planted_detail)};
}

// 9. Correlation recovery at n = 5000.
Outcome correlation_recovery() {
    SynthConfig sc;
    sc.n_ars = 100;
    sc.samples_per_ar = 50;
    sc.seed = 909;
    const auto samples = synth_generate(sc);
    const auto m = correlation_matrix(samples);
    const std::size_t a = *feature_index("TOTPOT"), b = *feature_index("SAVNCPP");
    const double rho = m.values(a, b);
    double asym = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        diag = std::max(diag, std::abs(m.values(i, i) - 1.0));
        for (std::size_t j = 0; j < m.size(); ++j) asym = std::max(asym, std::abs(m.values(i, j) - m.values(j, i)));
    }
    const auto partner = strongest_correlate(a, m);
    return {samples.size() == 5000 && rho >= 0.90 && rho <= 1.0 && asym <= 1e-12 && diag <= 1e-12 &&
                partner.feature == b,
            fmt::format("n = {}, r(TOTPOT, SAVNCPP) = {:.4f}, asymmetry {:.1e}, diagonal {:.1e}, partner {}",
                        samples.size(), rho, asym, diag, feature_name(partner.feature))};
}

// --- command-line criteria ----------------------------------------------------

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = fmt::format("{} {} >>{} 2>&1", SXAI_CLI, args, log.string());
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".json" || ext == ".svg" || ext == ".csv"))
            out[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
    }
    return out;
}

constexpr const char* kSmallRun = " --seed 5 --epochs 8 --max-samples 24 --background 30 --lime-n 800";

struct ChainResult {
    std::vector<std::string> failures;
};

// Runs train -> evaluate -> explain-global -> explain-local -> correlate on a data file.
ChainResult run_chain(const fs::path& data, const fs::path& out, const fs::path& log, const std::string& extra) {
    ChainResult r;
    const std::string io = fmt::format(" --data {} --out {}", data.string(), out.string());
    const std::string model = fmt::format(" --model {}", (out / "model.json").string());
    const std::vector<std::pair<std::string, std::string>> steps{
        {"train", "train" + io + extra},
        {"evaluate", "evaluate" + io + model + extra},
        {"explain-global", "explain-global" + io + model + extra},
        {"explain-local", "explain-local --sample-id 0" + io + model + extra},
        {"correlate", "correlate" + io + model + extra + " --shap " + (out / "shap.json").string()},
    };
    for (const auto& [name, args] : steps)
        if (const int code = run_cli(args, log); code != 0) r.failures.push_back(fmt::format("{} exit {}", name, code));
    return r;
}

const std::vector<std::string> kDeclaredArtifacts{
    "model.json",          "metrics.json",        "shap.json",         "importance.json",
    "beeswarm.svg",        "beeswarm.json",       "bar.svg",           "bar.json",
    "decision.svg",        "decision.json",       "lime_0.json",       "lime_0_plot.svg",
    "lime_0_plot.json",    "corr.csv",            "corr.json",         "dependence.json",
    "dependence_top.svg",  "dependence_top.json", "dependence_bottom.svg", "dependence_bottom.json",
    "run_train.json",      "run_evaluate.json",   "run_explain-global.json", "run_explain-local.json",
    "run_correlate.json",
};

std::vector<std::string> missing_artifacts(const fs::path& dir) {
    std::vector<std::string> missing;
    for (const auto& name : kDeclaredArtifacts)
        if (!fs::exists(dir / name)) missing.push_back(name);
    return missing;
}

// 10. Re-running every command with the same config reproduces every artifact byte for byte.
Outcome determinism(const fs::path& root) {
    const fs::path dir = root / "determinism";
    const fs::path log = root / "determinism.log";
    std::map<std::string, std::string> golden;
    for (int pass = 0; pass < 2; ++pass) {
        fs::remove_all(dir);
        fs::create_directories(dir);
        if (run_cli(fmt::format("synth --seed 5 --n-ars 30 --out {}", dir.string()), log) != 0)
            return {false, "synth failed"};
        const auto r = run_chain(dir / "synth.csv", dir, log, kSmallRun);
        if (!r.failures.empty()) return {false, r.failures.front()};
        if (pass == 0) {
            golden = snapshot(dir);
            continue;
        }
        const auto again = snapshot(dir);
        std::vector<std::string> diffs;
        for (const auto& [name, bytes] : golden) {
            auto it = again.find(name);
            if (it == again.end() || it->second != bytes) diffs.push_back(name);
        }
        if (again.size() != golden.size()) diffs.push_back("artifact set changed");
        if (!diffs.empty()) return {false, fmt::format("{} artifacts differ, first {}", diffs.size(), diffs.front())};
        return {true, fmt::format("{} JSON/SVG/CSV artifacts byte-identical across runs", golden.size())};
    }
    return {false, "unreachable"};
}

// Rewrites a CSV with columns shuffled, extra columns and a different row order.
void write_external_style(const fs::path& from, const fs::path& to) {
    std::ifstream in(from);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    const std::size_t cols = rows.front().size();
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(1111);
    rng.shuffle(order);
    std::vector<std::size_t> body(rows.size() - 1);
    std::iota(body.begin(), body.end(), 1);
    rng.shuffle(body);
    std::ofstream out(to);
    auto emit = [&](const std::vector<std::string>& cells, const std::string& harp, const std::string& quality) {
        out << harp;
        for (std::size_t c : order) out << ',' << cells[c];
        out << ',' << quality << '\n';
    };
    emit(rows.front(), "HARPNUM", "QUALITY");
    for (std::size_t r : body) emit(rows[r], std::to_string(1000 + r % 37), "0");
}

// 11. Full chain on synthetic output and on an externally formatted CSV.
Outcome end_to_end(const fs::path& root) {
    const fs::path log = root / "end_to_end.log";
    const fs::path synth_dir = root / "e2e_synth";
    const fs::path ext_dir = root / "e2e_external";
    fs::create_directories(synth_dir);
    fs::create_directories(ext_dir);
    if (const int code = run_cli(fmt::format("synth --seed 7 --n-ars 30 --out {}", synth_dir.string()), log); code != 0)
        return {false, fmt::format("synth exit {}", code)};
    std::vector<std::string> problems;
    auto check = [&](const fs::path& data, const fs::path& out, const char* label) {
        const auto r = run_chain(data, out, log, kSmallRun);
        for (const auto& f : r.failures) problems.push_back(fmt::format("{}: {}", label, f));
        for (const auto& m : missing_artifacts(out)) problems.push_back(fmt::format("{}: missing {}", label, m));
    };
    check(synth_dir / "synth.csv", synth_dir, "synthetic");
    write_external_style(synth_dir / "synth.csv", ext_dir / "external.csv");
    check(ext_dir / "external.csv", ext_dir, "external");
    if (!problems.empty()) return {false, problems.front()};
    return {true, fmt::format("exit 0 on every step, {} declared artifacts present for both inputs",
                              kDeclaredArtifacts.size())};
}

}  // namespace

int main() {
    const fs::path root = fs::temp_directory_path() / "sxai_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    int failures = 0;
    auto report = [&](int id, const char* name, const Outcome& o) {
        std::cout << fmt::format("[{}] criterion {:>2} {}: {}", o.pass ? "PASS" : "FAIL", id, name, o.detail)
                  << std::endl;
        if (!o.pass) ++failures;
    };
    auto guarded = [&](int id, const char* name, auto&& fn) {
        try {
            report(id, name, fn());
        } catch (const std::exception& e) {
            report(id, name, {false, fmt::format("threw: {}", e.what())});
        }
    };

    Trained trained;
    guarded(1, "shapley efficiency", efficiency);
    guarded(2, "kernel matches exact", kernel_equivalence);
    guarded(3, "dummy and symmetry", axioms);
    guarded(4, "gradient closed form", gradient_closed_form);
    guarded(5, "lstm gradient check", gradient_check);
    guarded(6, "desk-scale training", [&] { return desk_training(trained); });
    guarded(7, "planted importance", planted_recovery);
    guarded(8, "lime fidelity", [&] { return lime_fidelity(trained); });
    guarded(9, "correlation recovery", correlation_recovery);
    guarded(10, "cli determinism", [&] { return determinism(root); });
    guarded(11, "end to end", [&] { return end_to_end(root); });

    std::cout << fmt::format("{} of 11 criteria passed", 11 - failures) << std::endl;
    if (failures == 0) fs::remove_all(root);
    return failures == 0 ? 0 : 1;
}
