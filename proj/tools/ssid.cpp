// ssid: decide whether elliptic curves over F_p / F_p(t) are ordinary or
// supersingular, generate test inputs, export small isogeny graphs, and run
// benchmarks and self-tests.
//
// Verdict reports are written to stdout and are byte-stable for a fixed
// seed; timings and diagnostics go to stderr.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssid/classify.hpp"
#include "ssid/curve.hpp"
#include "ssid/gen.hpp"
#include "ssid/selftest.hpp"
#include "ssid/volcano.hpp"

using namespace ssid;
using nlohmann::json;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

Integer parse_integer(const std::string& s, const char* what) {
    try {
        return Integer(s);
    } catch (const std::invalid_argument&) {
        fail(Errc::ParseError, std::string("bad ") + what + ": " + s);
    }
}

json verdict_json(const Verdict& v) {
    json j;
    j["result"] = to_string(v.result);
    j["method"] = to_string(v.method);
    j["steps"] = v.steps;
    j["terminated_at"] = v.terminated_at;
    if (v.seed)
        j["seed"] = *v.seed;
    else
        j["seed"] = nullptr;
    return j;
}

struct ClassifyArgs {
    std::string p, alpha, A, B;
    std::string method = "auto";
    std::string mode = "lv";
    std::string qnr, cnr;
    uint64_t seed = 0;
    int mc_reps = 2;
};

int run_classify(const ClassifyArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    Integer p = parse_integer(args.p, "prime");

    json report;
    report["command"] = "classify";
    report["seed"] = args.seed;
    report["method_requested"] = args.method;
    report["mode"] = args.mode;

    if (p == 2 || p == 3) {
        Verdict v = classify_small_char(p, parse_integer(args.A, "A"), parse_integer(args.B, "B"));
        report["curve"] = {{"p", p.get_str()}, {"A", args.A}, {"B", args.B}};
        report["verdict"] = verdict_json(v);
        std::cout << report.dump(2) << "\n";
        std::cerr << "time_ms=" << ms_since(t0) << "\n";
        return 0;
    }

    bool wants_extension = !args.alpha.empty() || args.A.find(',') != std::string::npos ||
                           args.B.find(',') != std::string::npos;
    if (wants_extension && args.alpha.empty())
        fail(Errc::BadInput, "coefficients over F_p(t) need --alpha to fix the field");
    Field F = args.alpha.empty() ? Field(p) : Field(p, parse_integer(args.alpha, "alpha"));
    Curve E = make_curve(F, F.parse_element(args.A), F.parse_element(args.B));

    ClassifierConfig cfg;
    cfg.seed = args.seed;
    cfg.mc_repetitions = args.mc_reps;
    if (args.mode == "det")
        cfg.mode = ClassifierConfig::Mode::Deterministic;
    else if (args.mode != "lv")
        fail(Errc::BadInput, "--mode must be det or lv");
    if (!args.qnr.empty() || !args.cnr.empty()) {
        Field F2 = F.degree() == 2 ? F : Field::quadratic_canonical(p);
        if (!args.qnr.empty()) cfg.qnr = F2.parse_element(args.qnr);
        if (!args.cnr.empty()) cfg.cnr = F2.parse_element(args.cnr);
    }

    Verdict v = classify_curve(E, method_from_name(args.method), cfg);

    json curve;
    curve["p"] = p.get_str();
    if (F.degree() == 2) curve["alpha"] = F.alpha().get_str();
    curve["A"] = F.to_string(E.A);
    curve["B"] = F.to_string(E.B);
    report["curve"] = curve;
    report["verdict"] = verdict_json(v);
    std::cout << report.dump(2) << "\n";
    std::cerr << "time_ms=" << ms_since(t0) << "\n";
    return 0;
}

int run_gen(const std::string& pstr, const std::string& type, uint64_t seed) {
    Integer p = parse_integer(pstr, "prime");
    Rng rng(seed);
    Curve E = [&] {
        if (type == "supersingular") return gen_supersingular_fp2(p, rng);
        if (type == "ordinary") return gen_ordinary(Field(p), rng);
        fail(Errc::BadInput, "--type must be supersingular or ordinary");
    }();
    std::cout << curve_to_string(E) << "\n";
    std::cerr << "seed=" << seed << " j=" << E.F.to_string(j_invariant(E)) << "\n";
    return 0;
}

int run_graph(const std::string& pstr, bool ext, int ell, const std::string& format) {
    Integer p = parse_integer(pstr, "prime");
    Field F = ext ? Field::quadratic_canonical(p) : Field(p);
    if (F.q() > 100000 && ell > 2)
        std::cerr << "note: ell > 2 uses brute-force root scans; this will take a while\n";
    IsogenyGraph g = build_graph(F, ell);
    if (format == "csv") {
        export_csv(g, std::cout);
        return 0;
    }
    std::vector<char> ss = classify_vertices(g);
    if (format == "dot")
        export_dot(g, ss, std::cout);
    else if (format == "json")
        export_json(g, ss, std::cout);
    else
        fail(Errc::BadInput, "--format must be dot, json or csv");
    return 0;
}

struct BenchArgs {
    std::vector<unsigned> bits;
    int count = 5;
    std::string methods = "volcano,mc";
    uint64_t seed = 0;
};

struct BenchCell {
    std::vector<double> times;
};

int run_bench(const BenchArgs& args) {
    std::vector<std::string> methods;
    {
        std::stringstream ss(args.methods);
        std::string item;
        while (std::getline(ss, item, ',')) methods.push_back(item);
    }
    for (const auto& m : methods)
        if (m != "volcano" && m != "shortcut" && m != "mc" && m != "modpoly" && m != "oracle")
            fail(Errc::BadInput, "unknown method in --methods: " + m);

    std::cout << "bits,field,class,method,count,mean_ms,median_ms\n";
    for (unsigned bits : args.bits) {
        if (bits < 4) fail(Errc::BadInput, "--bits entries must be at least 4");
        // cell key: field, class, method
        std::map<std::string, BenchCell> cells;
        for (int inst = 0; inst < args.count; ++inst) {
            Rng rng(Rng::derive(args.seed, (static_cast<uint64_t>(bits) << 20) + inst));
            Integer p = random_prime(rng, bits, [](const Integer& c) { return c % 4 == 3; });
            Field Fp(p);
            Field F2 = Field::quadratic_sampled(p, rng);

            struct Input {
                const char* field;
                const char* cls;
                Curve E;
            };
            std::vector<Input> inputs;
            inputs.push_back({"fp", "ordinary", gen_ordinary(Fp, rng)});
            inputs.push_back({"fp2", "ordinary", gen_ordinary(F2, rng)});
            inputs.push_back({"fp", "supersingular", gen_supersingular_fp(p, rng)});
            inputs.push_back({"fp2", "supersingular", gen_supersingular_fp2(p, rng)});

            for (const auto& in : inputs) {
                for (const auto& m : methods) {
                    if (m == "shortcut" && std::string(in.field) != "fp") continue;
                    if (m == "oracle" && p > kOracleMaxP) continue;
                    ClassifierConfig cfg;
                    cfg.seed = Rng::derive(args.seed, inst * 131 + bits);
                    Method method = m == "volcano" ? Method::Volcano
                                    : m == "shortcut" ? Method::Auto
                                    : m == "mc"       ? Method::MonteCarlo
                                    : m == "oracle"   ? Method::Oracle
                                                      : Method::ModPoly;
                    try {
                        auto t0 = std::chrono::steady_clock::now();
                        Verdict v = m == "shortcut" ? identify_fp_shortcut(in.E, cfg)
                                                    : classify_curve(in.E, method, cfg);
                        double dt = ms_since(t0);
                        (void)v;
                        cells[std::string(in.field) + "," + in.cls + "," + m].times.push_back(dt);
                    } catch (const Error& e) {
                        if (e.code() == Errc::FileMissing) {
                            std::cerr << "skipping " << m << " at " << bits
                                      << " bits: " << e.what() << "\n";
                        } else {
                            throw;
                        }
                    }
                }
            }
        }
        for (const auto& [key, cell] : cells) {
            if (cell.times.empty()) continue;
            std::vector<double> t = cell.times;
            std::sort(t.begin(), t.end());
            double mean = std::accumulate(t.begin(), t.end(), 0.0) / t.size();
            double median = t[t.size() / 2];
            std::ostringstream row;
            row.setf(std::ios::fixed);
            row.precision(4);
            row << bits << "," << key << "," << t.size() << "," << mean << "," << median;
            std::cout << row.str() << "\n";
        }
    }
    return 0;
}

int run_selftest(unsigned long max_p) {
    bool ok = true;
    auto report = [&](const char* name, const SuiteOutcome& o) {
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " (" << o.checks << " checks)\n";
        for (const auto& f : o.failures) std::cout << "       " << f << "\n";
        ok = ok && o.pass;
    };
    report("oracle equivalence", oracle_equivalence_suite(max_p, 11, true));
    report("legendre oracle", legendre_oracle_suite(std::min<unsigned long>(max_p, 50)));
    report("volcano structure", volcano_structure_suite(std::min<unsigned long>(4 * max_p, 2000)));
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"supersingular elliptic curve identification"};
    app.require_subcommand(1);

    ClassifyArgs cargs;
    auto* classify = app.add_subcommand("classify", "classify one curve");
    classify->add_option("--p", cargs.p, "prime characteristic")->required();
    classify->add_option("--alpha", cargs.alpha, "non-residue defining F_p(t)");
    classify->add_option("--A", cargs.A, "coefficient A (c0 or c0,c1)")->required();
    classify->add_option("--B", cargs.B, "coefficient B (c0 or c0,c1)")->required();
    classify->add_option("--method", cargs.method, "auto|volcano|mc|modpoly|oracle");
    classify->add_option("--mode", cargs.mode, "det|lv");
    classify->add_option("--qnr", cargs.qnr, "quadratic non-residue of F_p(t) (det mode)");
    classify->add_option("--cnr", cargs.cnr, "cubic non-residue of F_p(t) (det mode)");
    classify->add_option("--seed", cargs.seed, "random seed");
    classify->add_option("--mc-reps", cargs.mc_reps, "Monte Carlo repetitions");

    std::string gen_p, gen_type;
    uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a test curve");
    gen->add_option("--p", gen_p, "prime characteristic")->required();
    gen->add_option("--type", gen_type, "supersingular|ordinary")->required();
    gen->add_option("--seed", gen_seed, "random seed");

    std::string graph_p, graph_format;
    bool graph_ext = false;
    int graph_ell = 2;
    auto* graph = app.add_subcommand("graph", "build and export an isogeny graph");
    graph->add_option("--p", graph_p, "prime characteristic")->required();
    graph->add_flag("--ext", graph_ext, "work over F_p^2 instead of F_p");
    graph->add_option("--ell", graph_ell, "isogeny degree (prime)")->required();
    graph->add_option("--format", graph_format, "dot|json|csv")->required();

    BenchArgs bargs;
    auto* bench = app.add_subcommand("bench", "timing table across bit sizes");
    bench->add_option("--bits", bargs.bits, "bit sizes")->required()->delimiter(',');
    bench->add_option("--count", bargs.count, "inputs per cell");
    bench->add_option("--methods", bargs.methods, "comma list: volcano,shortcut,mc,modpoly,oracle");
    bench->add_option("--seed", bargs.seed, "random seed");

    unsigned long selftest_max_p = 60;
    auto* selftest = app.add_subcommand("selftest", "run the verification suites");
    selftest->add_option("--max-p", selftest_max_p, "oracle sweep bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(classify)) return run_classify(cargs);
        if (app.got_subcommand(gen)) return run_gen(gen_p, gen_type, gen_seed);
        if (app.got_subcommand(graph)) return run_graph(graph_p, graph_ext, graph_ell, graph_format);
        if (app.got_subcommand(bench)) return run_bench(bargs);
        if (app.got_subcommand(selftest)) return run_selftest(selftest_max_p);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::InvariantViolation ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
