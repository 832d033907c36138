// Copyright 2026 The photinject Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "photinject/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <variant>

#include "json_io.hpp"
#include "photinject/analysis.hpp"
#include "photinject/csv.hpp"
#include "photinject/permanent.hpp"
#include "photinject/probestim.hpp"
#include "photinject/rng.hpp"

namespace photinject {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kDofCurve: return "dof-curve";
        case ExperimentKind::kDofMax: return "dof-max";
        case ExperimentKind::kPurityBounds: return "purity-bounds";
        case ExperimentKind::kBirthday: return "birthday";
        case ExperimentKind::kProbestim: return "probestim";
        case ExperimentKind::kPermBench: return "perm-bench";
    }
    return "?";
}

namespace {

/// Typed access to one JSON object that remembers which keys were read, so
/// that leftovers can be rejected as typos.
class Fields {
  public:
    Fields(const json &j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            fail("expected an object");
        }
    }

    [[noreturn]] void fail(const std::string &msg) const {
        throw ConfigError(where_ + ": " + msg);
    }

    bool has(const std::string &key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json &raw(const std::string &key) {
        if (!has(key)) {
            fail("missing required field \"" + key + "\"");
        }
        return j_.at(key);
    }

    long long integer(const std::string &key, long long lo, long long hi) {
        const json &v = raw(key);
        if (!v.is_number_integer()) {
            fail("\"" + key + "\" must be an integer");
        }
        const auto x = v.get<long long>();
        if (x < lo || x > hi) {
            fail("\"" + key + "\" must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return x;
    }

    long long integer_or(const std::string &key, long long fallback, long long lo, long long hi) {
        return has(key) ? integer(key, lo, hi) : fallback;
    }

    std::uint64_t seed(const std::string &key) {
        const json &v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail("\"" + key + "\" must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    double number_or(const std::string &key, double fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = j_.at(key);
        if (!v.is_number()) {
            fail("\"" + key + "\" must be a number");
        }
        return v.get<double>();
    }

    bool boolean_or(const std::string &key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = j_.at(key);
        if (!v.is_boolean()) {
            fail("\"" + key + "\" must be true or false");
        }
        return v.get<bool>();
    }

    std::string string(const std::string &key) {
        const json &v = raw(key);
        if (!v.is_string()) {
            fail("\"" + key + "\" must be a string");
        }
        return v.get<std::string>();
    }

    std::vector<int> int_list(const std::string &key, int lo, int hi, bool allow_scalar) {
        const json &v = raw(key);
        std::vector<int> out;
        auto take = [&](const json &e) {
            if (!e.is_number_integer() || e.get<long long>() < lo || e.get<long long>() > hi) {
                fail("\"" + key + "\" entries must be integers in [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
            }
            out.push_back(e.get<int>());
        };
        if (allow_scalar && v.is_number()) {
            take(v);
        } else if (v.is_array() && !v.empty()) {
            for (const auto &e : v) {
                take(e);
            }
        } else {
            fail("\"" + key + "\" must be a non-empty integer array");
        }
        return out;
    }

    Fields object(const std::string &key) { return Fields(raw(key), where_ + "." + key); }

    void finish() const {
        for (const auto &[key, value] : j_.items()) {
            if (!seen_.contains(key)) {
                fail("unknown field \"" + key + "\"");
            }
        }
    }

    const std::string &where() const { return where_; }

  private:
    const json &j_;
    std::string where_;
    std::set<std::string> seen_;
};

struct PipelineSettings {
    std::optional<BlockPipelineOptions> blocks;
    std::optional<PipelineCircuit> pipeline;
};

struct DofSettings {
    PipelineSettings pipeline;
    double tolerance = kDefaultRankTolerance;
    int trials = 3;
    // Regression goldens: final (or maximal) rank with and without injections.
    std::optional<int> expect_with_si;
    std::optional<int> expect_without_si;
};

struct PuritySettings {
    int modes = 0;
    int photons = 0;
    std::vector<int> layers;
    int trials = 0;
    int measured_mode = 0;
};

struct BirthdaySettings {
    std::vector<int> modes;
    int photons = 0;
    int samples = 0;
};

struct ProbestimSettings {
    FockState input;
    int injections = 0;
    int measured_mode = 0;
    std::optional<std::uint64_t> gurvits_samples;
    std::optional<std::vector<FockState>> outputs;
    bool compare_channel = true;
};

struct PermBenchSettings {
    std::vector<int> sizes;
    int trials = 0;
    std::optional<std::uint64_t> gurvits_samples;
};

using Settings =
    std::variant<DofSettings, PuritySettings, BirthdaySettings, ProbestimSettings, PermBenchSettings>;

}  // namespace

struct ExperimentConfig::Impl {
    ExperimentKind kind = ExperimentKind::kDofCurve;
    std::uint64_t seed = 0;
    std::filesystem::path csv;
    std::optional<std::filesystem::path> json_out;
    Settings settings;
};

namespace {

// Named substreams of the config seed.
enum Stream : std::uint64_t { kPipelineStream = 1, kThetaStream = 2, kSampleStream = 3 };

FockState parse_occupations(Fields &f, const std::string &key) {
    return FockState(f.int_list(key, 0, 1000, false));
}

InjectionSpec parse_injection(Fields f) {
    auto modes = f.int_list("measured_modes", 0, 1 << 20, false);
    InjectionSpec spec = InjectionSpec::identity(modes);
    if (f.has("function")) {
        const json &fn = f.raw("function");
        if (fn.is_string()) {
            if (fn.get<std::string>() != "identity") {
                f.fail("unknown injection function \"" + fn.get<std::string>() + "\"");
            }
        } else {
            Fields ff(fn, f.where() + ".function");
            auto perm = ff.int_list("permutation", 0, 1 << 20, false);
            ff.finish();
            try {
                spec = InjectionSpec::permuted(modes, perm);
            } catch (const std::invalid_argument &e) {
                f.fail(e.what());
            }
        }
    }
    f.finish();
    return spec;
}

PipelineSettings parse_pipeline(Fields f, std::uint64_t seed, const std::filesystem::path &base) {
    PipelineSettings out;
    const std::string type = f.string("type");
    try {
        if (type == "blocks") {
            BlockPipelineOptions o;
            o.modes = static_cast<int>(f.integer("modes", 1, 64));
            o.photons = static_cast<int>(f.integer("photons", 0, 64));
            o.blocks = static_cast<int>(f.integer("blocks", 1, 1000));
            o.extra_beam_splitters = static_cast<int>(f.integer_or("extra_beam_splitters", 5, 0, 100000));
            o.with_injections = f.boolean_or("injections", true);
            o.measured_mode = static_cast<int>(f.integer_or("measured_mode", 0, 0, o.modes - 1));
            o.seed = derive_seed(seed, kPipelineStream);
            f.finish();
            out.blocks = o;
            out.pipeline = make_block_pipeline(o);
        } else if (type == "custom") {
            FockState input = parse_occupations(f, "input");
            const json &stages = f.raw("stages");
            if (!stages.is_array()) {
                f.fail("\"stages\" must be an array");
            }
            std::vector<PipelineStage> built;
            for (std::size_t i = 0; i < stages.size(); ++i) {
                Fields sf(stages[i], f.where() + ".stages[" + std::to_string(i) + "]");
                if (sf.has("circuit")) {
                    built.emplace_back(detail::circuit_from_json(sf.raw("circuit")));
                } else if (sf.has("circuit_file")) {
                    const auto path = base / sf.string("circuit_file");
                    if (!std::filesystem::exists(path)) {
                        sf.fail("circuit file " + path.string() + " does not exist");
                    }
                    json cj;
                    try {
                        cj = json::parse(read_file(path));
                    } catch (const json::exception &e) {
                        sf.fail(path.string() + ": " + e.what());
                    }
                    built.emplace_back(detail::circuit_from_json(cj));
                } else if (sf.has("injection")) {
                    built.emplace_back(parse_injection(sf.object("injection")));
                } else {
                    sf.fail("stage needs \"circuit\", \"circuit_file\" or \"injection\"");
                }
                sf.finish();
            }
            f.finish();
            if (sector_dimension(static_cast<int>(input.modes()), input.photons()) > 4000) {
                f.fail("sector too large for Jacobian analysis");
            }
            out.pipeline = PipelineCircuit(std::move(input), std::move(built));
        } else {
            f.fail("\"type\" must be \"blocks\" or \"custom\"");
        }
    } catch (const std::invalid_argument &e) {
        f.fail(e.what());
    } catch (const std::length_error &e) {
        f.fail(e.what());
    } catch (const std::overflow_error &e) {
        f.fail(e.what());
    }
    return out;
}

std::optional<std::uint64_t> parse_method(Fields &f) {
    if (!f.has("method")) {
        return std::nullopt;
    }
    const json &m = f.raw("method");
    if (m.is_string()) {
        if (m.get<std::string>() != "exact") {
            f.fail("\"method\" must be \"exact\" or {\"gurvits\": {\"samples\": N}}");
        }
        return std::nullopt;
    }
    Fields mf(m, f.where() + ".method");
    Fields g = mf.object("gurvits");
    const auto samples = static_cast<std::uint64_t>(g.integer("samples", 2, 1LL << 40));
    g.finish();
    mf.finish();
    return samples;
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::shared_ptr<ExperimentConfig::Impl> parse_impl(const json &root, const std::filesystem::path &base) {
    Fields f(root, "config");
    auto impl = std::make_shared<ExperimentConfig::Impl>();
    const auto version = f.integer("schema_version", 0, 1 << 20);
    if (version != kConfigSchemaVersion) {
        f.fail("unsupported schema_version " + std::to_string(version) + " (expected " +
               std::to_string(kConfigSchemaVersion) + ")");
    }
    const std::string kind = f.string("kind");
    impl->seed = f.seed("seed");
    {
        Fields out = f.object("output");
        impl->csv = resolve(base, out.string("csv"));
        if (out.has("json")) {
            impl->json_out = resolve(base, out.string("json"));
        }
        out.finish();
    }
    if (impl->csv.filename().empty()) {
        f.fail("output.csv must name a file");
    }

    if (kind == "dof-curve" || kind == "dof-max") {
        impl->kind = kind == "dof-curve" ? ExperimentKind::kDofCurve : ExperimentKind::kDofMax;
        DofSettings s;
        s.pipeline = parse_pipeline(f.object("pipeline"), impl->seed, base);
        s.tolerance = f.number_or("tolerance", kDefaultRankTolerance);
        if (!(s.tolerance > 0.0 && s.tolerance < 1.0)) {
            f.fail("\"tolerance\" must lie in (0, 1)");
        }
        if (impl->kind == ExperimentKind::kDofMax) {
            s.trials = static_cast<int>(f.integer_or("trials", 3, 1, 10000));
        }
        if (f.has("expect")) {
            Fields e = f.object("expect");
            if (e.has("with_si")) {
                s.expect_with_si = static_cast<int>(e.integer("with_si", 0, 1 << 30));
            }
            if (e.has("without_si")) {
                s.expect_without_si = static_cast<int>(e.integer("without_si", 0, 1 << 30));
            }
            e.finish();
            if (s.expect_with_si && !s.pipeline.pipeline->has_injections()) {
                f.fail("expect.with_si given but the pipeline has no injections");
            }
        }
        impl->settings = std::move(s);
    } else if (kind == "purity-bounds") {
        impl->kind = ExperimentKind::kPurityBounds;
        PuritySettings s;
        s.modes = static_cast<int>(f.integer("modes", 1, 64));
        s.photons = static_cast<int>(f.integer("photons", 0, 64));
        s.layers = f.int_list("layers", 1, 1000, true);
        s.trials = static_cast<int>(f.integer("trials", 1, 1000000));
        s.measured_mode = static_cast<int>(f.integer_or("measured_mode", 0, 0, s.modes - 1));
        if (sector_dimension(s.modes, s.photons) > 4000) {
            f.fail("sector too large");
        }
        impl->settings = std::move(s);
    } else if (kind == "birthday") {
        impl->kind = ExperimentKind::kBirthday;
        BirthdaySettings s;
        s.modes = f.int_list("modes", 1, 64, true);
        s.photons = static_cast<int>(f.integer("photons", 0, 64));
        s.samples = static_cast<int>(f.integer("samples", 1, 1000000));
        for (int m : s.modes) {
            if (s.photons > m) {
                f.fail("\"photons\" must not exceed any entry of \"modes\"");
            }
            if (sector_dimension(m, s.photons) > 200000) {
                f.fail("sector too large");
            }
        }
        impl->settings = std::move(s);
    } else if (kind == "probestim") {
        impl->kind = ExperimentKind::kProbestim;
        ProbestimSettings s;
        s.input = parse_occupations(f, "input");
        const int m = static_cast<int>(s.input.modes());
        s.injections = static_cast<int>(f.integer("injections", 0, 16));
        s.measured_mode = static_cast<int>(f.integer_or("measured_mode", 0, 0, m - 1));
        s.gurvits_samples = parse_method(f);
        s.compare_channel = f.boolean_or("compare_channel", true);
        if (f.has("outputs")) {
            const json &o = f.raw("outputs");
            if (o.is_string() && o.get<std::string>() == "all") {
                // default
            } else if (o.is_array()) {
                std::vector<FockState> outs;
                for (const auto &e : o) {
                    std::vector<int> occ;
                    if (!e.is_array()) {
                        f.fail("\"outputs\" entries must be occupation arrays");
                    }
                    for (const auto &v : e) {
                        if (!v.is_number_integer() || v.get<int>() < 0) {
                            f.fail("\"outputs\" entries must be non-negative integers");
                        }
                        occ.push_back(v.get<int>());
                    }
                    FockState st(std::move(occ));
                    if (static_cast<int>(st.modes()) != m || st.photons() != s.input.photons()) {
                        f.fail("every output must have the input's modes and photon count");
                    }
                    outs.push_back(std::move(st));
                }
                s.outputs = std::move(outs);
            } else {
                f.fail("\"outputs\" must be \"all\" or an array of occupations");
            }
        }
        if (s.input.photons() * (s.injections + 1) > kPermanentExactCap) {
            f.fail("photons x (injections + 1) exceeds the permanent cap of " +
                   std::to_string(kPermanentExactCap));
        }
        if (sector_dimension(m, s.input.photons()) > 4000) {
            f.fail("sector too large");
        }
        impl->settings = std::move(s);
    } else if (kind == "perm-bench") {
        impl->kind = ExperimentKind::kPermBench;
        PermBenchSettings s;
        s.sizes = f.int_list("sizes", 1, kPermanentExactCap, true);
        s.trials = static_cast<int>(f.integer("trials", 1, 100000));
        s.gurvits_samples = parse_method(f);
        impl->settings = std::move(s);
    } else {
        f.fail("unknown kind \"" + kind +
               "\" (expected dof-curve, dof-max, purity-bounds, birthday, probestim or perm-bench)");
    }
    f.finish();
    return impl;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view json_text, const std::filesystem::path &base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.impl_ = parse_impl(root, base_dir);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    } catch (const std::overflow_error &e) {
        throw ConfigError(e.what());
    } catch (const std::length_error &e) {
        throw ConfigError(e.what());
    } catch (const json::exception &e) {
        throw ConfigError(e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path &path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::runtime_error &e) {
        throw ConfigError(e.what());
    }
    return parse(text, path.parent_path());
}

ExperimentKind ExperimentConfig::kind() const { return impl_->kind; }
std::filesystem::path ExperimentConfig::csv_path() const { return impl_->csv; }

bool ExperimentOutcome::passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const auto &a) { return a.passed; });
}

namespace {

std::string str(double x) { return format_double(x); }
std::string str(int x) { return std::to_string(x); }
std::string str(std::size_t x) { return std::to_string(x); }

std::string occupation_label(const FockState &s) {
    std::string out;
    for (std::size_t i = 0; i < s.modes(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += std::to_string(s[i]);
    }
    return out;
}

struct Artifacts {
    std::vector<std::pair<std::filesystem::path, std::string>> files;
};

void check(ExperimentOutcome &out, std::string name, bool ok, std::string detail) {
    out.assertions.push_back({std::move(name), ok, std::move(detail)});
}

const char *event_name(CurveEvent e) {
    switch (e) {
        case CurveEvent::kStart: return "start";
        case CurveEvent::kGate: return "gate";
        case CurveEvent::kInjection: return "injection";
    }
    return "?";
}

void check_goldens(ExperimentOutcome &out, const DofSettings &s, std::optional<int> with_si,
                   int without_si) {
    if (s.expect_without_si) {
        check(out, "without-si: rank matches expected value", without_si == *s.expect_without_si,
              str(without_si) + " vs expected " + str(*s.expect_without_si));
    }
    if (s.expect_with_si && with_si) {
        check(out, "with-si: rank matches expected value", *with_si == *s.expect_with_si,
              str(*with_si) + " vs expected " + str(*s.expect_with_si));
    }
}

int rank_ceiling(const PipelineCircuit &pc) {
    const double d = static_cast<double>(pc.basis().size());
    return static_cast<int>(std::min<double>(pc.parameter_count(), 2.0 * d * d));
}

void run_dof_curve(const ExperimentConfig::Impl &cfg, const DofSettings &s, ExperimentOutcome &out,
                   Artifacts &art) {
    const PipelineCircuit &with = *s.pipeline.pipeline;
    const PipelineCircuit without = with.without_injections();
    const std::uint64_t theta_seed = derive_seed(cfg.seed, kThetaStream);
    const int m = with.modes();

    CsvTable table({"variant", "step", "gate_count", "event", "rank"});
    std::vector<std::pair<std::string, std::vector<CurvePoint>>> curves;
    if (with.has_injections()) {
        curves.emplace_back("with-si", dof_curve(with, theta_seed, s.tolerance));
    }
    curves.emplace_back("without-si", dof_curve(without, theta_seed, s.tolerance));

    for (const auto &[name, curve] : curves) {
        for (const auto &p : curve) {
            table.add_row({name, str(p.step), str(p.gate_count), event_name(p.event), str(p.rank)});
        }
        check(out, name + ": first point is zero", curve.front().rank == 0,
              "rank " + str(curve.front().rank));
        const int ceiling = rank_ceiling(with);
        int worst = 0;
        bool monotone = true;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            worst = std::max(worst, curve[i].rank);
            if (curve[i].event == CurveEvent::kGate && curve[i - 1].event != CurveEvent::kInjection &&
                curve[i].rank < curve[i - 1].rank) {
                monotone = false;
            }
        }
        check(out, name + ": rank <= min(p, 2 d^2)", worst <= ceiling,
              "max rank " + str(worst) + ", ceiling " + str(ceiling));
        check(out, name + ": rank non-decreasing between injections", monotone, "");
    }

    const auto &plain = curves.back().second;
    check(out, "without-si: rank <= m^2 - 1", plain.back().rank <= m * m - 1,
          "final rank " + str(plain.back().rank) + ", limit " + str(m * m - 1));

    if (s.pipeline.blocks) {
        const auto &o = *s.pipeline.blocks;
        const int mesh = static_cast<int>(universal_mesh(o.modes, MeshStyle::kTriangularRotations).gates().size());
        const int per_block = mesh + o.extra_beam_splitters;
        bool flat = true;
        std::string detail;
        for (int b = 0; b < o.blocks && o.extra_beam_splitters > 0; ++b) {
            // Points are indexed by gate count when no injections are present.
            const int plateau = plain[static_cast<std::size_t>(b * per_block + mesh)].rank;
            for (int g = 1; g <= o.extra_beam_splitters; ++g) {
                flat = flat && plain[static_cast<std::size_t>(b * per_block + mesh + g)].rank == plateau;
            }
            detail += (b ? ", " : "") + std::string("block ") + str(b) + " plateau " + str(plateau);
        }
        check(out, "without-si: extra beam splitters leave the rank unchanged", flat, detail);
        if (with.has_injections()) {
            const int si_rank = curves.front().second.back().rank;
            check(out, "with-si: final rank exceeds the no-SI plateau", si_rank > plain.back().rank,
                  str(si_rank) + " vs " + str(plain.back().rank));
        }
    }
    check_goldens(out, s,
                  with.has_injections() ? std::optional<int>(curves.front().second.back().rank) : std::nullopt,
                  plain.back().rank);
    art.files.emplace_back(cfg.csv, table.to_string());
}

void run_dof_max(const ExperimentConfig::Impl &cfg, const DofSettings &s, ExperimentOutcome &out,
                 Artifacts &art) {
    const PipelineCircuit &with = *s.pipeline.pipeline;
    const PipelineCircuit without = with.without_injections();
    const std::uint64_t theta_seed = derive_seed(cfg.seed, kThetaStream);
    const int m = with.modes();

    CsvTable table({"variant", "trial", "rank", "sigma_max"});
    std::vector<std::pair<std::string, DoFMaxReport>> reports;
    if (with.has_injections()) {
        reports.emplace_back("with-si", dof_max(with, s.trials, theta_seed, s.tolerance));
    }
    reports.emplace_back("without-si", dof_max(without, s.trials, theta_seed, s.tolerance));
    for (const auto &[name, rep] : reports) {
        for (std::size_t t = 0; t < rep.trials.size(); ++t) {
            const auto &sv = rep.trials[t].singular_values;
            table.add_row({name, str(t), str(rep.trials[t].rank), str(sv.empty() ? 0.0 : sv.front())});
        }
        if (!rep.consistent) {
            out.warnings.push_back(name + ": rank differs across theta draws");
        }
        check(out, name + ": dof_max <= min(p, 2 d^2)", rep.dof_max <= rank_ceiling(with),
              "dof_max " + str(rep.dof_max));
    }
    const int plain = reports.back().second.dof_max;
    check(out, "without-si: dof_max <= m^2 - 1", plain <= m * m - 1,
          str(plain) + " vs " + str(m * m - 1));
    if (s.pipeline.blocks && with.has_injections()) {
        const int si = reports.front().second.dof_max;
        check(out, "with-si: dof_max exceeds the no-SI plateau", si > plain,
              str(si) + " vs " + str(plain));
    }
    check_goldens(out, s,
                  with.has_injections() ? std::optional<int>(reports.front().second.dof_max) : std::nullopt,
                  plain);
    art.files.emplace_back(cfg.csv, table.to_string());
}

void run_purity(const ExperimentConfig::Impl &cfg, const PuritySettings &s, ExperimentOutcome &out,
                Artifacts &art) {
    CsvTable table({"layers", "trial", "purity", "collision_sum", "worst_case_bound", "haar_bound"});
    for (int layers : s.layers) {
        const auto rep = purity_bound_experiment(s.modes, s.photons, layers, s.trials,
                                                 derive_seed(cfg.seed, static_cast<std::uint64_t>(layers)),
                                                 s.measured_mode);
        for (std::size_t t = 0; t < rep.purities.size(); ++t) {
            table.add_row({str(layers), str(t), str(rep.purities[t]),
                           str(rep.first_layer_collision_sums[t]), str(rep.worst_case_bound),
                           rep.haar_bound ? str(*rep.haar_bound) : std::string()});
        }
        const std::string tag = "L=" + str(layers) + ": ";
        double lowest = 1.0;
        for (double p : rep.purities) {
            lowest = std::min(lowest, p);
        }
        check(out, tag + "every purity >= 1/(n+1)^L", lowest >= rep.worst_case_bound - 1e-12,
              "min " + str(lowest) + ", bound " + str(rep.worst_case_bound));
        if (rep.haar_bound) {
            check(out, tag + "mean purity >= Haar bound - 3 se", *rep.haar_bound_holds,
                  "mean " + str(rep.mean) + ", se " + str(rep.std_error) + ", bound " + str(*rep.haar_bound));
        }
        if (layers == 1) {
            double worst = 0.0;
            for (std::size_t t = 0; t < rep.purities.size(); ++t) {
                worst = std::max(worst, std::abs(rep.purities[t] - rep.first_layer_collision_sums[t]));
            }
            check(out, tag + "purity equals sum of squared outcome probabilities", worst <= 1e-10,
                  "max deviation " + str(worst));
        }
    }
    art.files.emplace_back(cfg.csv, table.to_string());
}

void run_birthday(const ExperimentConfig::Impl &cfg, const BirthdaySettings &s, ExperimentOutcome &out,
                  Artifacts &art) {
    CsvTable table({"modes", "photons", "sample", "collision_probability", "bound"});
    std::vector<std::pair<int, double>> means;
    for (int m : s.modes) {
        const auto rep = birthday_check(m, s.photons, s.samples, derive_seed(cfg.seed, static_cast<std::uint64_t>(m)));
        for (std::size_t i = 0; i < rep.collision_probabilities.size(); ++i) {
            table.add_row({str(m), str(s.photons), str(i), str(rep.collision_probabilities[i]), str(rep.bound)});
        }
        check(out, "m=" + str(m) + ": mean collision probability < 2n^2/m", rep.below_bound,
              "mean " + str(rep.mean) + ", bound " + str(rep.bound));
        means.emplace_back(m, rep.mean);
    }
    for (const auto &[m1, mean1] : means) {
        for (const auto &[m2, mean2] : means) {
            if (m2 == 2 * m1 && mean2 > 0.0) {
                const double ratio = mean1 / mean2;
                check(out, "doubling m from " + str(m1) + " roughly halves the mean",
                      ratio >= 1.0 && ratio <= 4.0, "ratio " + str(ratio));
            }
        }
    }
    art.files.emplace_back(cfg.csv, table.to_string());
}

void run_probestim(const ExperimentConfig::Impl &cfg, const ProbestimSettings &s, ExperimentOutcome &out,
                   Artifacts &art) {
    const int m = static_cast<int>(s.input.modes());
    std::vector<CMatrix> layers;
    const std::uint64_t layer_seed = derive_seed(cfg.seed, kPipelineStream);
    for (int l = 0; l <= s.injections; ++l) {
        layers.push_back(haar_unitary(m, derive_seed(layer_seed, static_cast<std::uint64_t>(l))));
    }
    const EquivalentModel em = build_equivalent(layers, s.measured_mode);
    const FockBasis basis(m, s.input.photons());
    const std::vector<FockState> outputs = s.outputs ? *s.outputs : basis.states();
    std::vector<double> channel;
    if (s.compare_channel) {
        channel = channel_output_distribution(layers, s.input, s.measured_mode);
    }
    const std::string method = s.gurvits_samples ? "gurvits" : "exact";
    const std::uint64_t sample_seed = derive_seed(cfg.seed, kSampleStream);

    CsvTable table({"s", "method", "value", "bias_corrected", "std_error", "channel_value"});
    json records = json::array();
    double total = 0.0;
    double worst = 0.0;
    std::size_t within = 0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto &st = outputs[i];
        const auto est = s.gurvits_samples
                             ? output_probability(em, s.input, st,
                                                  ProbabilityMethod::gurvits(*s.gurvits_samples,
                                                                             derive_seed(sample_seed, i)))
                             : output_probability(em, s.input, st);
        const double ref = s.compare_channel ? channel[basis.index(st)] : 0.0;
        total += est.value;
        if (s.compare_channel) {
            worst = std::max(worst, std::abs(est.value - ref));
            if (est.std_error && std::abs(*est.bias_corrected - ref) <= 5.0 * *est.std_error) {
                ++within;
            }
        }
        table.add_row({occupation_label(st), method, str(est.value),
                       est.bias_corrected ? str(*est.bias_corrected) : std::string(),
                       est.std_error ? str(*est.std_error) : std::string(),
                       s.compare_channel ? str(ref) : std::string()});
        json rec = {{"t", std::vector<int>(s.input.occupations().begin(), s.input.occupations().end())},
                    {"s", std::vector<int>(st.occupations().begin(), st.occupations().end())},
                    {"method", method},
                    {"value", est.value},
                    {"std_error", est.std_error ? json(*est.std_error) : json(nullptr)}};
        if (est.bias_corrected) {
            rec["bias_corrected"] = *est.bias_corrected;
        }
        records.push_back(std::move(rec));
    }
    if (!s.gurvits_samples) {
        if (s.compare_channel) {
            check(out, "pattern sum matches channel simulation", worst <= 1e-9,
                  "max deviation " + str(worst));
        }
        if (!s.outputs) {
            check(out, "probabilities sum to 1", std::abs(total - 1.0) <= 1e-8,
                  "sum " + str(total));
        }
    } else if (s.compare_channel) {
        auto &sink = within == outputs.size() ? out.notes : out.warnings;
        sink.push_back("gurvits: " + str(within) + " of " + str(outputs.size()) +
                       " outputs within 5 standard errors of the channel value");
    }
    art.files.emplace_back(cfg.csv, table.to_string());
    if (cfg.json_out) {
        art.files.emplace_back(*cfg.json_out, records.dump(2) + "\n");
    }
}

void run_perm_bench(const ExperimentConfig::Impl &cfg, const PermBenchSettings &s, ExperimentOutcome &out,
                    Artifacts &art) {
    CsvTable table({"n", "trial", "method", "re", "im", "std_error", "reference_rel_error"});
    CsvTable timing({"n", "trial", "seconds"});
    double worst_naive = 0.0;
    bool compared = false;
    for (int n : s.sizes) {
        const std::uint64_t size_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
        for (int t = 0; t < s.trials; ++t) {
            const CMatrix a = haar_unitary(n, derive_seed(size_seed, static_cast<std::uint64_t>(t)));
            const auto start = std::chrono::steady_clock::now();
            Complex value;
            double se = 0.0;
            if (s.gurvits_samples) {
                const auto est = gurvits_estimate(a, *s.gurvits_samples,
                                                  derive_seed(size_seed, 1000000 + static_cast<std::uint64_t>(t)));
                value = est.value;
                se = est.empirical_std_error;
            } else {
                value = permanent_exact(a);
            }
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::string rel;
            if (s.gurvits_samples || n <= kPermanentNaiveCap) {
                const Complex ref = s.gurvits_samples ? permanent_exact(a) : permanent_naive(a);
                const double err = std::abs(value - ref) / std::max(std::abs(ref), 1e-300);
                rel = str(err);
                if (!s.gurvits_samples) {
                    worst_naive = std::max(worst_naive, err);
                    compared = true;
                }
            }
            table.add_row({str(n), str(t), s.gurvits_samples ? "gurvits" : "exact", str(value.real()),
                           str(value.imag()), str(se), rel});
            timing.add_row({str(n), str(t), str(secs)});
        }
    }
    if (compared) {
        check(out, "exact permanent agrees with the naive expansion", worst_naive <= 1e-10,
              "max relative error " + str(worst_naive));
    }
    art.files.emplace_back(cfg.csv, table.to_string());
    auto timing_path = cfg.csv;
    timing_path += ".timing.csv";
    art.files.emplace_back(timing_path, timing.to_string());
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig &config) {
    const auto &cfg = config.impl();
    ExperimentOutcome out;
    out.kind = cfg.kind;
    Artifacts art;
    std::visit(
        [&](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DofSettings>) {
                if (cfg.kind == ExperimentKind::kDofCurve) {
                    run_dof_curve(cfg, s, out, art);
                } else {
                    run_dof_max(cfg, s, out, art);
                }
            } else if constexpr (std::is_same_v<T, PuritySettings>) {
                run_purity(cfg, s, out, art);
            } else if constexpr (std::is_same_v<T, BirthdaySettings>) {
                run_birthday(cfg, s, out, art);
            } else if constexpr (std::is_same_v<T, ProbestimSettings>) {
                run_probestim(cfg, s, out, art);
            } else {
                run_perm_bench(cfg, s, out, art);
            }
        },
        cfg.settings);
    for (const auto &[path, content] : art.files) {
        write_file_atomic(path, content);
        out.artifacts.push_back(path);
    }
    return out;
}

int run_config_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err) {
    std::optional<ExperimentConfig> config;
    try {
        config = ExperimentConfig::load(path);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    ExperimentOutcome outcome;
    try {
        outcome = run_experiment(*config);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    for (const auto &a : outcome.assertions) {
        out << (a.passed ? "PASS " : "FAIL ") << a.name;
        if (!a.detail.empty()) {
            out << " (" << a.detail << ")";
        }
        out << "\n";
    }
    for (const auto &w : outcome.warnings) {
        out << "WARN " << w << "\n";
    }
    for (const auto &n : outcome.notes) {
        out << "NOTE " << n << "\n";
    }
    for (const auto &p : outcome.artifacts) {
        out << "wrote " << p.string() << "\n";
    }
    return outcome.passed() ? 0 : 1;
}

int validate_config_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err) {
    try {
        const auto config = ExperimentConfig::load(path);
        out << "ok: " << to_string(config.kind()) << " experiment, csv -> " << config.csv_path().string()
            << "\n";
        return 0;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace photinject
