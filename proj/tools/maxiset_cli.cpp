// maxiset-cli: batch front end over the C API.  One subcommand per experiment
// type; every run is deterministic given (command line, seed), and all files
// written under --out are byte-identical across reruns.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxiset.h"

namespace {

using njson = nlohmann::ordered_json;

const char* status_name(mxs_status st) {
    switch (st) {
        case MXS_OK: return "ok";
        case MXS_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case MXS_ERR_SHAPE_MISMATCH: return "shape-mismatch";
        case MXS_ERR_LEVEL_OUT_OF_RANGE: return "level-out-of-range";
        case MXS_ERR_PENALTY_TOO_SMALL: return "penalty-too-small";
        case MXS_ERR_DEGENERATE_PENALTY: return "degenerate-penalty";
        case MXS_ERR_DEGENERATE_RATE: return "degenerate-rate";
        case MXS_ERR_NOISE_TOO_LARGE: return "noise-too-large";
        case MXS_ERR_COLLECTION_TOO_LARGE: return "collection-too-large";
        case MXS_ERR_INSUFFICIENT_DEPTH: return "insufficient-depth";
        case MXS_ERR_IO: return "io-error";
        case MXS_ERR_PARSE: return "parse-error";
        case MXS_ERR_UNKNOWN: return "unknown";
    }
    return "unknown";
}

[[noreturn]] void fail(mxs_status st, const std::string& context) {
    std::cerr << "maxiset-cli: error " << static_cast<int>(st) << " (" << status_name(st)
              << ") in " << context << ": " << mxs_last_error() << "\n";
    std::exit(static_cast<int>(st));
}

[[noreturn]] void fail_usage(const std::string& message) {
    std::cerr << "maxiset-cli: error " << MXS_ERR_INVALID_ARGUMENT << " (invalid-argument): "
              << message << "\n";
    std::exit(MXS_ERR_INVALID_ARGUMENT);
}

void check(mxs_status st, const std::string& context) {
    if (st != MXS_OK) fail(st, context);
}

// unique_ptr wrappers over the C handles
struct coeffs_deleter {
    void operator()(mxs_coeffs* c) const { mxs_coeffs_free(c); }
};
using coeffs_ptr = std::unique_ptr<mxs_coeffs, coeffs_deleter>;

std::string take_string(char* s) {
    std::string out(s ? s : "");
    mxs_string_free(s);
    return out;
}

// ---------------------------------------------------------------------------
// JSON config files: {"flag-name": value, ...}, optionally nested one level
// per subcommand.  Command-line flags override config values.
// ---------------------------------------------------------------------------

class json_config : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(input);
        } catch (const std::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw CLI::FileError("config root must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        collect(doc, {}, items);
        return items;
    }

  private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }

    static void collect(const nlohmann::json& obj, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : obj.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                collect(value, std::move(deeper), items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
                for (const auto& x : value) item.inputs.push_back(scalar(x));
            else
                item.inputs.push_back(scalar(value));
            items.push_back(std::move(item));
        }
    }
};

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

std::uint64_t parse_seed_text(const std::string& text) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(text, &pos, 0); // base 0: decimal or 0x hex
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_usage("seed '" + text + "' is not a decimal or 0x-prefixed integer");
    }
}

struct seed_opt {
    std::string text;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", text,
                        "RNG seed, decimal or 0x hex (default: $MAXISET_SEED, else 0)");
    }

    std::uint64_t value() const {
        if (!text.empty()) return parse_seed_text(text);
        if (const char* env = std::getenv("MAXISET_SEED")) return parse_seed_text(env);
        return 0;
    }
};

struct signal_opt {
    std::string name = "s0";
    std::string in_path;
    double alpha = 0.5;
    int j_max = 18;

    void attach(CLI::App* cmd, int default_depth) {
        j_max = default_depth;
        cmd->add_option("--signal", name,
                        "witness signal: zero | s0 | s1[:alpha] | besov_extremal[:alpha]");
        cmd->add_option("--in", in_path, "coefficient JSON file instead of --signal");
        cmd->add_option("--alpha", alpha, "signal smoothness parameter");
        cmd->add_option("--jmax", j_max, "generated signal depth (levels)");
    }

    coeffs_ptr build() const {
        if (!in_path.empty()) {
            std::ifstream in(in_path, std::ios::binary);
            if (!in) fail_usage("cannot open coefficient file '" + in_path + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            mxs_coeffs* c = nullptr;
            check(mxs_coeffs_from_json(buf.str().c_str(), &c), "reading " + in_path);
            return coeffs_ptr(c);
        }
        std::string id = name;
        double a = alpha;
        if (const auto colon = id.find(':'); colon != std::string::npos) {
            try {
                a = std::stod(id.substr(colon + 1));
            } catch (const std::exception&) {
                fail_usage("signal parameter in '" + id + "' is not a number");
            }
            id = id.substr(0, colon);
        }
        mxs_coeffs* c = nullptr;
        check(mxs_coeffs_signal(id.c_str(), a, j_max, &c), "building signal " + id);
        return coeffs_ptr(c);
    }

    // alpha after applying any name:alpha suffix
    double effective_alpha() const {
        if (const auto colon = name.find(':'); colon != std::string::npos) {
            try {
                return std::stod(name.substr(colon + 1));
            } catch (const std::exception&) {
                fail_usage("signal parameter in '" + name + "' is not a number");
            }
        }
        return alpha;
    }
};

struct penalty_opt {
    std::string kind = "logn";
    double lambda0 = 16.0;
    bool over_penalize = false;

    void attach(CLI::App* cmd, const char* default_kind, double default_lambda0) {
        kind = default_kind;
        lambda0 = default_lambda0;
        cmd->add_option("--penalty", kind, "penalty shape: const | logn")
            ->check(CLI::IsMember({"const", "logn"}));
        cmd->add_option("--lambda0", lambda0, "penalty scale lambda0");
        cmd->add_flag("--over-penalize", over_penalize,
                      "charge the untruncated budgeted dimension");
    }

    mxs_penalty value() const {
        mxs_penalty pen;
        pen.kind = kind == "logn" ? MXS_PENALTY_LOGN : MXS_PENALTY_CONSTANT;
        pen.lambda0 = lambda0;
        pen.over_penalize = over_penalize ? 1 : 0;
        return pen;
    }
};

struct collection_opt {
    std::string kind = "full";
    double theta = 3.0;
    int j_trunc = 18;

    void attach(CLI::App* cmd) {
        cmd->add_option("--collection", kind, "collection: sieve | full | hybrid")
            ->check(CLI::IsMember({"sieve", "full", "hybrid"}));
        cmd->add_option("--theta", theta, "hybrid budget decay exponent (> 2)");
        cmd->add_option("--jtrunc", j_trunc, "hybrid level truncation");
    }

    // family form: per-n truncation, j0 ignored
    mxs_collection family() const {
        mxs_collection c{};
        c.kind = kind == "sieve"  ? MXS_COLLECTION_SIEVE
                 : kind == "full" ? MXS_COLLECTION_FULL
                                  : MXS_COLLECTION_HYBRID_TRUNC;
        c.j0 = 0;
        c.theta = theta;
        c.j_trunc = j_trunc;
        return c;
    }

    // fixed form with an explicit scan bound
    mxs_collection fixed(int j0) const {
        mxs_collection c = family();
        c.j0 = j0;
        if (c.kind == MXS_COLLECTION_HYBRID_TRUNC && c.j0 > c.j_trunc) c.j0 = c.j_trunc;
        return c;
    }
};

struct grid_opt {
    std::string range = "8:16";

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid", range, "dyadic n grid lo:hi (n = 2^lo .. 2^hi)");
    }

    std::vector<int64_t> value() const {
        int lo = 0, hi = 0;
        char sep = 0;
        std::istringstream in(range);
        if (!(in >> lo >> sep >> hi) || sep != ':' || !in.eof() || lo < 0 || hi < lo ||
            hi > 62)
            fail_usage("grid '" + range + "' must be lo:hi with 0 <= lo <= hi <= 62");
        std::vector<int64_t> grid;
        for (int k = lo; k <= hi; ++k) grid.push_back(int64_t{1} << k);
        return grid;
    }
};

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

struct out_opt {
    std::string dir;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", dir, "output directory (default: print to stdout)");
    }

    void deliver(const std::string& filename, const std::string& content) const {
        if (dir.empty()) {
            std::cout << content << "\n";
            return;
        }
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) fail_usage("cannot create output directory '" + dir + "': " + ec.message());
        const std::filesystem::path path = std::filesystem::path(dir) / filename;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) fail_usage("cannot write '" + path.string() + "'");
        out << content;
        if (content.empty() || content.back() != '\n') out << "\n";
        out.close();
        std::cout << "wrote " << path.string() << "\n";
    }
};

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// CSV with the fixed column contract; floats at 17 significant digits.
std::string series_csv(const njson& series) {
    std::string csv = "n,lambda_n,value,stderr\n";
    for (const auto& row : series) {
        csv += std::to_string(row.at("n").get<int64_t>());
        csv += ',';
        csv += format17(row.at("lambda_n").get<double>());
        csv += ',';
        csv += format17(row.at("value").get<double>());
        csv += ',';
        csv += format17(row.at("stderr").get<double>());
        csv += '\n';
    }
    return csv;
}

njson parse_report(const std::string& text) {
    return njson::parse(text);
}

int default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalized wavelet model selection: signals, selectors, rates, and "
                 "approximation-space reports"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<json_config>());
    app.set_config("--config", "", "JSON config file; command-line flags override it");

    // ---- signals emit -----------------------------------------------------
    auto* signals = app.add_subcommand("signals", "generate witness signals");
    signals->require_subcommand(1);
    auto* emit = signals->add_subcommand("emit", "write a signal's coefficient JSON");
    struct {
        std::string name = "s0";
        double alpha = 0.5;
        int j_max = 16;
        out_opt out;
    } emit_opts;
    emit->add_option("--name", emit_opts.name, "zero | s0 | s1 | besov_extremal")
        ->required();
    emit->add_option("--alpha", emit_opts.alpha, "signal smoothness parameter");
    emit->add_option("--jmax", emit_opts.j_max, "signal depth (levels)");
    emit_opts.out.attach(emit);
    emit->callback([&] {
        mxs_coeffs* c = nullptr;
        check(mxs_coeffs_signal(emit_opts.name.c_str(), emit_opts.alpha, emit_opts.j_max, &c),
              "building signal " + emit_opts.name);
        const coeffs_ptr holder(c);
        char* json = nullptr;
        check(mxs_coeffs_to_json(c, &json), "serializing signal");
        std::string name = emit_opts.name;
        for (const auto colon = name.find(':'); colon != std::string::npos;) {
            name = name.substr(0, colon);
            break;
        }
        emit_opts.out.deliver(name + ".json", take_string(json));
    });

    // ---- select -----------------------------------------------------------
    auto* select = app.add_subcommand("select", "one observation draw + model selection");
    struct {
        signal_opt signal;
        penalty_opt pen;
        collection_opt coll;
        seed_opt seed;
        out_opt out;
        int64_t n = 4096;
        int j0 = -1;
    } sel;
    sel.signal.attach(select, 18);
    sel.pen.attach(select, "logn", 4.0);
    sel.coll.attach(select);
    sel.seed.attach(select);
    sel.out.attach(select);
    select->add_option("--n", sel.n, "inverse squared noise level")->required();
    select->add_option("--j0", sel.j0, "scan bound (default: admissible resolution)");
    select->callback([&] {
        const coeffs_ptr s = sel.signal.build();
        const mxs_penalty pen = sel.pen.value();
        int j0 = sel.j0;
        if (j0 < 0) check(mxs_j0(&pen, sel.n, &j0), "computing the admissible resolution");
        const mxs_collection coll = sel.coll.fixed(j0);
        char* json = nullptr;
        check(mxs_select_report(s.get(), &coll, &pen, sel.n, sel.seed.value(), &json),
              "select");
        sel.out.deliver("select.json", parse_report(take_string(json)).dump(2));
    });

    // ---- rate -------------------------------------------------------------
    auto* rate = app.add_subcommand("rate", "rate curves: deterministic Q, Monte Carlo "
                                            "risk, or the normalized equivalence check");
    struct {
        signal_opt signal;
        penalty_opt pen;
        collection_opt coll;
        grid_opt grid;
        seed_opt seed;
        out_opt out;
        std::string mode = "risk";
        int64_t reps = 100;
        int jobs = 0;
    } rt;
    rt.signal.attach(rate, 18);
    rt.pen.attach(rate, "logn", 16.0);
    rt.coll.attach(rate);
    rt.grid.attach(rate);
    rt.seed.attach(rate);
    rt.out.attach(rate);
    rate->add_option("--mode", rt.mode, "q | risk | equiv")
        ->check(CLI::IsMember({"q", "risk", "equiv"}));
    rate->add_option("--reps", rt.reps, "Monte Carlo replications");
    rate->add_option("--jobs", rt.jobs, "worker threads (default: available cores)");
    rate->callback([&] {
        const coeffs_ptr s = rt.signal.build();
        const mxs_penalty pen = rt.pen.value();
        const mxs_collection fam = rt.coll.family();
        const std::vector<int64_t> grid = rt.grid.value();
        const int jobs = rt.jobs > 0 ? rt.jobs : default_jobs();
        char* json = nullptr;
        if (rt.mode == "q") {
            check(mxs_q_curve(s.get(), &fam, &pen, grid.data(), grid.size(), &json),
                  "q curve");
        } else if (rt.mode == "risk") {
            check(mxs_risk_curve(s.get(), &fam, &pen, grid.data(), grid.size(), rt.reps,
                                 rt.seed.value(), jobs, &json),
                  "risk curve");
        } else {
            check(mxs_equivalence_check(s.get(), &fam, &pen, grid.data(), grid.size(),
                                        rt.signal.effective_alpha(), rt.reps,
                                        rt.seed.value(), jobs, &json),
                  "equivalence check");
        }
        const std::string text = take_string(json);
        const njson doc = parse_report(text);
        if (rt.mode == "equiv") {
            rt.out.deliver("rate_equiv.json", doc.dump(2));
            rt.out.deliver("rate_q_normalized.csv", series_csv(doc.at("q_normalized").at("series")));
            rt.out.deliver("rate_risk_normalized.csv",
                           series_csv(doc.at("risk_normalized").at("series")));
        } else {
            rt.out.deliver("rate.json", doc.dump(2));
            rt.out.deliver("rate.csv", series_csv(doc.at("series")));
        }
    });

    // ---- spaces report ----------------------------------------------------
    auto* spaces = app.add_subcommand("spaces", "approximation-space functionals");
    spaces->require_subcommand(1);
    auto* report = spaces->add_subcommand("report", "evaluate every functional on a signal");
    struct {
        signal_opt signal;
        penalty_opt pen;
        grid_opt grid;
        out_opt out;
        double theta = 3.0;
        bool with_linear = false;
    } sp;
    sp.signal.attach(report, 16);
    sp.pen.attach(report, "logn", 16.0);
    sp.grid.attach(report);
    sp.out.attach(report);
    report->add_option("--theta", sp.theta, "hybrid budget decay exponent (> 2)");
    report->add_flag("--with-linear", sp.with_linear,
                     "include the linear-truncation series over the --grid");
    report->callback([&] {
        const coeffs_ptr s = sp.signal.build();
        const mxs_penalty pen = sp.pen.value();
        std::vector<int64_t> grid;
        if (sp.with_linear) grid = sp.grid.value();
        char* json = nullptr;
        check(mxs_spaces_report(s.get(), sp.signal.effective_alpha(), sp.theta, &pen,
                                grid.empty() ? nullptr : grid.data(), grid.size(), &json),
              "spaces report");
        sp.out.deliver("spaces.json", parse_report(take_string(json)).dump(2));
    });

    // ---- embeddings -------------------------------------------------------
    auto* embeddings = app.add_subcommand("embeddings", "witness-by-functional membership matrix");
    struct {
        out_opt out;
        double alpha = 0.5;
        double theta = 3.0;
        int j_max = 16;
    } em;
    embeddings->add_option("--alpha", em.alpha, "rate smoothness parameter");
    embeddings->add_option("--theta", em.theta, "hybrid budget decay exponent (> 2)");
    embeddings->add_option("--jmax", em.j_max, "scan depth");
    em.out.attach(embeddings);
    embeddings->callback([&] {
        char* json = nullptr;
        check(mxs_embedding_report(em.alpha, em.theta, em.j_max, &json), "embedding report");
        em.out.deliver("embeddings.json", parse_report(take_string(json)).dump(2));
    });

    // ---- oracle -----------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "empirical oracle-inequality constant");
    struct {
        signal_opt signal;
        penalty_opt pen;
        collection_opt coll;
        grid_opt grid;
        seed_opt seed;
        out_opt out;
        int64_t reps = 100;
        int jobs = 0;
    } orc;
    orc.signal.attach(oracle, 18);
    orc.pen.attach(oracle, "logn", 16.0);
    orc.coll.attach(oracle);
    orc.grid.attach(oracle);
    orc.seed.attach(oracle);
    orc.out.attach(oracle);
    oracle->add_option("--reps", orc.reps, "Monte Carlo replications");
    oracle->add_option("--jobs", orc.jobs, "worker threads (default: available cores)");
    oracle->callback([&] {
        const coeffs_ptr s = orc.signal.build();
        const mxs_penalty pen = orc.pen.value();
        const mxs_collection fam = orc.coll.family();
        const std::vector<int64_t> grid = orc.grid.value();
        const int jobs = orc.jobs > 0 ? orc.jobs : default_jobs();
        char* json = nullptr;
        check(mxs_oracle_check(s.get(), &fam, &pen, grid.data(), grid.size(), orc.reps,
                               orc.seed.value(), jobs, &json),
              "oracle check");
        const njson doc = parse_report(take_string(json));
        orc.out.deliver("oracle.json", doc.dump(2));
        // CSV view: value = ratio, stderr = risk stderr scaled by the same denominator
        std::string csv = "n,lambda_n,value,stderr\n";
        for (const auto& row : doc.at("rows")) {
            const double risk = row.at("risk").get<double>();
            const double ratio = row.at("ratio").get<double>();
            const double rerr = row.at("risk_stderr").get<double>();
            const double scaled = risk > 0.0 ? ratio * rerr / risk : 0.0;
            csv += std::to_string(row.at("n").get<int64_t>());
            csv += ',';
            csv += format17(row.at("lambda_n").get<double>());
            csv += ',';
            csv += format17(ratio);
            csv += ',';
            csv += format17(scaled);
            csv += '\n';
        }
        orc.out.deliver("oracle.csv", csv);
    });

    // ---- an ---------------------------------------------------------------
    auto* an = app.add_subcommand("an", "Monte Carlo estimate of the noise-control event");
    struct {
        penalty_opt pen;
        collection_opt coll;
        seed_opt seed;
        out_opt out;
        int64_t n = 1024;
        int64_t reps = 10000;
        int j0 = -1;
    } ap;
    ap.pen.attach(an, "const", 9.0);
    ap.coll.attach(an);
    ap.seed.attach(an);
    ap.out.attach(an);
    an->add_option("--n", ap.n, "inverse squared noise level");
    an->add_option("--reps", ap.reps, "Monte Carlo replications");
    an->add_option("--j0", ap.j0, "scan bound (default: admissible resolution)");
    an->callback([&] {
        const mxs_penalty pen = ap.pen.value();
        int j0 = ap.j0;
        if (j0 < 0) check(mxs_j0(&pen, ap.n, &j0), "computing the admissible resolution");
        const mxs_collection coll = ap.coll.fixed(j0);
        double prob = 0.0, se = 0.0;
        check(mxs_an_prob(&coll, ap.n, &pen, ap.reps, ap.seed.value(), &prob, &se),
              "event probability estimate");
        njson out;
        out["n"] = ap.n;
        double lam = 0.0;
        if (mxs_lambda_n(&pen, ap.n, &lam) == MXS_OK) out["lambda_n"] = lam;
        out["collection"] = ap.coll.kind;
        out["j0"] = j0;
        out["reps"] = ap.reps;
        out["prob"] = prob;
        out["stderr"] = se;
        double kraft = 0.0;
        if (mxs_kraft_sum(&coll, ap.n, &pen, &kraft) == MXS_OK) {
            out["kraft"] = kraft;
            out["kraft_sq_bound"] = kraft * kraft; // bounds 1 - P from above
        }
        ap.out.deliver("an.json", out.dump(2));
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
