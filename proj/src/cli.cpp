#include "ecstat/cli.hpp"

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecstat/analytic.hpp"
#include "ecstat/arith.hpp"
#include "ecstat/cache.hpp"
#include "ecstat/cusp_census.hpp"
#include "ecstat/errors.hpp"
#include "ecstat/level_fibers.hpp"
#include "ecstat/report.hpp"
#include "ecstat/torsion_families.hpp"
#include "ecstat/trace_formula.hpp"

namespace ecstat {

namespace {

struct CommonOpts {
    std::string config_file;
    std::string out;
    std::string format = "csv";
    std::string cache_dir;
    int jobs = 1;
    uint64_t seed = 0;

    std::vector<std::string> levels;
    int64_t q = 0;
    std::string q_range;
    double B = 0;
    double X = 0;
    double sigma = 0.6;
    int R = 2;
    int64_t n1 = 0, n2 = 1;
    int64_t k = 2;
    double margin = 4.0;
    bool complete = false;
};

std::pair<int64_t, int64_t> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw bad_input_error("range must look like a..b: " + s);
    try {
        int64_t lo = std::stoll(s.substr(0, dots));
        int64_t hi = std::stoll(s.substr(dots + 2));
        if (lo > hi) throw bad_input_error("empty range: " + s);
        return {lo, hi};
    } catch (const bad_input_error&) {
        throw;
    } catch (const std::exception&) {
        throw bad_input_error("range must look like a..b: " + s);
    }
}

// plain key=value configuration; command line flags win
void apply_config_file(CommonOpts& o, const CLI::App& app) {
    if (o.config_file.empty()) return;
    std::ifstream in(o.config_file);
    if (!in) throw bad_input_error("cannot open config file " + o.config_file);
    auto overridden = [&](const std::string& flag) {
        auto* opt = app.get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw bad_input_error("bad config line: " + line);
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "cache_dir" && !overridden("--cache-dir")) o.cache_dir = val;
        else if (key == "jobs" && !overridden("--jobs")) o.jobs = std::stoi(val);
        else if (key == "seed" && !overridden("--seed")) o.seed = std::stoull(val);
        else if (key == "format" && !overridden("--format")) o.format = val;
        else if (key == "sigma" && !overridden("--sigma")) o.sigma = std::stod(val);
        else if (key == "margin" && !overridden("--margin")) o.margin = std::stod(val);
        else if (key == "B" && !overridden("--B")) o.B = std::stod(val);
        else if (key == "X" && !overridden("--X")) o.X = std::stod(val);
        // unknown keys are tolerated so config files can be shared across tools
    }
}

void emit(const CommonOpts& o, const std::string& contents) {
    if (o.out.empty()) {
        std::cout << contents;
    } else {
        atomic_write_file(o.out, contents);
    }
}

std::map<std::string, std::string> config_map(const CommonOpts& o, const std::string& cmd) {
    std::map<std::string, std::string> m;
    m["cmd"] = cmd;
    m["levels"] = [&] {
        std::string s;
        for (const auto& l : o.levels) s += (s.empty() ? "" : "+") + l;
        return s;
    }();
    m["q"] = std::to_string(o.q);
    m["q_range"] = o.q_range;
    m["B"] = std::to_string(o.B);
    m["X"] = std::to_string(o.X);
    m["sigma"] = std::to_string(o.sigma);
    m["R"] = std::to_string(o.R);
    m["seed"] = std::to_string(o.seed);
    m["margin"] = std::to_string(o.margin);
    return m;
}

std::vector<int64_t> primes_in(int64_t lo, int64_t hi) {
    std::vector<int64_t> ps;
    for (int64_t q = std::max<int64_t>(lo, 2); q <= hi; ++q)
        if (is_prime(q)) ps.push_back(q);
    return ps;
}

void parallel_for(int jobs, int64_t n, const std::function<void(int64_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (;;) {
                int64_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : workers) t.join();
    if (err) std::rethrow_exception(err);
}

int cmd_census(const CommonOpts& o) {
    if (o.q_range.empty() && o.q == 0) throw bad_input_error("census: need --q or --q-range");
    auto [lo, hi] = o.q == 0 ? parse_range(o.q_range) : std::make_pair(o.q, o.q);
    CensusProvider provider(o.cache_dir);
    std::ostringstream os;
    std::vector<int64_t> targets;
    for (int64_t q = lo; q <= hi; ++q) {
        if (!is_prime(q)) {
            if (o.q != 0 || (q == lo && lo == hi))
                os << "skip " << q << " (not prime)\n";
            continue;
        }
        if (q < 5) {
            os << "skip " << q << " (p >= 5 required)\n";
            continue;
        }
        targets.push_back(q);
    }
    std::vector<std::string> lines(targets.size());
    std::vector<CensusProvider> providers;
    parallel_for(o.jobs, static_cast<int64_t>(targets.size()), [&](int64_t i) {
        CensusProvider local(o.cache_dir); // append-only dir, atomic per-file writes
        bool built = local.ensure(targets[i]);
        const CurveCensus& c = local.get(targets[i]);
        lines[i] = "census p=" + std::to_string(targets[i]) +
                   " classes=" + std::to_string(c.classes.size()) + (built ? " built" : " cached");
    });
    for (const auto& l : lines) os << l << "\n";
    emit(o, os.str());
    return 0;
}

int cmd_cusps(const CommonOpts& o) {
    if (o.levels.empty()) throw bad_input_error("cusps: need --level");
    std::vector<int64_t> qs;
    if (!o.q_range.empty()) {
        auto [lo, hi] = parse_range(o.q_range);
        for (int64_t q = lo; q <= hi; ++q) qs.push_back(q);
    } else if (o.q != 0) {
        qs.push_back(o.q);
    } else {
        throw bad_input_error("cusps: need --q or --q-range");
    }
    CsvReport rep;
    rep.columns = {"spec", "N", "q", "orbit_count", "rational_count", "index", "e_gamma"};
    for (const auto& tok : o.levels) {
        LevelSpec spec = LevelSpec::parse(tok);
        auto orbits = cusp_orbits(spec);
        auto [index, e] = index_and_e(spec);
        for (int64_t q : qs) {
            if (std::gcd(mod_floor(q, spec.level()), spec.level()) != 1 && spec.level() > 1) continue;
            rep.rows.push_back({spec.token(), std::to_string(spec.level()), std::to_string(q),
                                std::to_string(orbits.size()),
                                std::to_string(rational_cusp_count(spec, q)),
                                std::to_string(index), rat_str(e)});
        }
    }
    emit(o, rep.render(config_map(o, "cusps")));
    return 0;
}

int cmd_hgamma(const CommonOpts& o) {
    if (o.levels.size() != 1 || o.q == 0) throw bad_input_error("hgamma: need --level and --q");
    LevelSpec spec = LevelSpec::parse(o.levels[0]);
    CensusProvider provider(o.cache_dir);
    HGammaTable table = h_gamma(spec, provider.get(o.q));
    CsvReport rep;
    rep.columns = {"q", "a", "H_num", "H_den"};
    for (const auto& [a, v] : table.values)
        rep.rows.push_back({std::to_string(o.q), std::to_string(a), rat_num(v).str(), rat_den(v).str()});
    rep.footers.push_back("sum=" + rat_str(table.sum()));
    emit(o, rep.render(config_map(o, "hgamma")));
    return 0;
}

int cmd_moments(const CommonOpts& o) {
    if (o.levels.size() != 1) throw bad_input_error("moments: need --level");
    if (o.q_range.empty() && o.q == 0) throw bad_input_error("moments: need --q or --q-range");
    LevelSpec spec = LevelSpec::parse(o.levels[0]);
    auto [lo, hi] = o.q == 0 ? parse_range(o.q_range) : std::make_pair(o.q, o.q);
    std::vector<int64_t> qs;
    for (int64_t q : primes_in(lo, hi))
        if (q >= 5 && std::gcd(q, 6 * spec.level()) == 1) qs.push_back(q);
    CsvReport rep;
    rep.columns = {"q", "m0_num", "m0_den", "m1_num", "m1_den", "m2_num", "m2_den"};
    rep.rows.resize(qs.size());
    parallel_for(o.jobs, static_cast<int64_t>(qs.size()), [&](int64_t i) {
        CensusProvider provider(o.cache_dir);
        HGammaTable table = h_gamma(spec, provider.get(qs[i]));
        Rat m0 = moment(table, 0), m1 = moment(table, 1), m2 = moment(table, 2);
        rep.rows[i] = {std::to_string(qs[i]), rat_num(m0).str(), rat_den(m0).str(),
                       rat_num(m1).str(),     rat_den(m1).str(), rat_num(m2).str(),
                       rat_den(m2).str()};
    });
    emit(o, rep.render(config_map(o, "moments")));
    return 0;
}

// height^12 surrogate max(|A|^3, B^2) for the weight (4,6) line
Int height12(const GlobalCurve& c) {
    Int a3 = boost::multiprecision::abs(c.A);
    a3 = a3 * a3 * a3;
    Int b2 = c.B * c.B;
    return std::max(a3, b2);
}

int cmd_family(const CommonOpts& o) {
    if (o.levels.size() != 1 || o.B <= 0) throw bad_input_error("family: need --level and --B");
    LevelSpec spec = LevelSpec::parse(o.levels[0]);
    FamilyParametrization param = builtin_parametrization(spec);
    FamilyOptions fo;
    fo.margin = o.margin;
    fo.force_complete = o.complete;
    FamilyResult fam = generate_family(param, Rat(static_cast<int64_t>(o.B)), fo);
    std::ostringstream os;
    for (const auto& c : fam.curves) {
        os << "{\"t\":[" << c.t0 << "," << c.t1 << "],\"A\":" << c.A.str()
           << ",\"B\":" << c.B.str() << ",\"height12\":" << height12(c).str() << "}\n";
    }
    os << "# curves=" << fam.curves.size() << " scan_radius=" << fam.scan_radius
       << " complete=" << (fam.complete ? "yes" : "no") << "\n";
    if (!fam.complete)
        os << "# warning: t-scan margin not provably sufficient at this bound\n";
    emit(o, os.str());
    return 0;
}

int cmd_local_stats(const CommonOpts& o) {
    if (o.levels.size() != 1 || o.B <= 0 || o.q == 0)
        throw bad_input_error("local-stats: need --level, --B and --q");
    LevelSpec spec = LevelSpec::parse(o.levels[0]);
    FamilyParametrization param = builtin_parametrization(spec);
    FamilyOptions fo;
    fo.margin = o.margin;
    fo.force_complete = o.complete;
    FamilyResult fam = generate_family(param, Rat(static_cast<int64_t>(o.B)), fo);
    LocalStatistics st = local_statistics(param, fam, o.q);
    CsvReport rep;
    rep.columns = {"q", "z_or_kind", "count", "predicted_fraction_num", "predicted_fraction_den"};
    for (const auto& [z, n] : st.per_point) {
        auto it = st.predicted_per_point.find(z);
        Rat pred = it == st.predicted_per_point.end() ? Rat(0) : it->second;
        rep.rows.push_back({std::to_string(o.q),
                            "z[" + std::to_string(z[0]) + ":" + std::to_string(z[1]) + "]",
                            std::to_string(n), rat_num(pred).str(), rat_den(pred).str()});
    }
    rep.rows.push_back({std::to_string(o.q), "mult", std::to_string(st.mult_count),
                        rat_num(st.predicted_mult_fraction).str(),
                        rat_den(st.predicted_mult_fraction).str()});
    rep.rows.push_back({std::to_string(o.q), "split", std::to_string(st.split_count), "0", "1"});
    rep.rows.push_back({std::to_string(o.q), "nonsplit", std::to_string(st.nonsplit_count), "0", "1"});
    if (st.additive_count > 0)
        rep.rows.push_back({std::to_string(o.q), "additive", std::to_string(st.additive_count), "0", "1"});
    rep.footers.push_back("family_size=" + std::to_string(st.family_size));
    emit(o, rep.render(config_map(o, "local-stats")));
    return 0;
}

int cmd_trace(const CommonOpts& o) {
    if (o.n1 == 0) throw bad_input_error("trace: need --n1 (and optionally --n2, --k)");
    if (o.q_range.empty() && o.q == 0) throw bad_input_error("trace: need --q or --q-range");
    auto [lo, hi] = o.q == 0 ? parse_range(o.q_range) : std::make_pair(o.q, o.q);
    AbelianRank2 A(o.n1, o.n2);
    CsvReport rep;
    rep.columns = {"n1", "n2", "k", "q", "expectation_num", "expectation_den",
                   "trace_num", "trace_den", "integer_ok", "deligne_ok"};
    CensusProvider provider(o.cache_dir);
    for (int64_t q : primes_in(lo, hi)) {
        if (q < 5 || std::gcd(q, 6 * o.n1) != 1) continue;
        if (std::gcd(q - 1, o.n1) != o.n2) continue; // single-term regime only
        TraceParams params{o.n1, o.n2, o.k, q, 1, 1};
        TraceReport tr = solve_trace(params, provider.get(q), A);
        rep.rows.push_back({std::to_string(o.n1), std::to_string(o.n2), std::to_string(o.k),
                            std::to_string(q), rat_num(tr.expectation).str(),
                            rat_den(tr.expectation).str(), rat_num(tr.solved_trace).str(),
                            rat_den(tr.solved_trace).str(), tr.integer_verdict ? "1" : "0",
                            tr.deligne_verdict ? "1" : "0"});
    }
    emit(o, rep.render(config_map(o, "trace")));
    return 0;
}

int cmd_rank_bound(const CommonOpts& o) {
    if (o.levels.size() != 1 || o.X <= 0) throw bad_input_error("rank-bound: need --level and --X");
    LevelSpec spec = LevelSpec::parse(o.levels[0]);
    FamilyParametrization param = builtin_parametrization(spec);
    FamilyOptions fo;
    fo.margin = o.margin;
    FamilyResult fam = generate_family(param, Rat(static_cast<int64_t>(o.X)), fo);
    ExplicitFormulaReport rep = s1_s2_empirical(param, fam, o.X, o.sigma);
    nlohmann::json j;
    j["X"] = rep.X;
    j["sigma"] = rep.sigma;
    j["S1"] = rep.S1;
    j["S2"] = rep.S2;
    j["S2_pred"] = rep.predicted_S2_main;
    j["rank_bound"] = rep.rank_bound;
    j["budget_terms"] = rep.budget_terms;
    j["family_size"] = fam.curves.size();
    j["config_hash"] = config_hash(config_map(o, "rank-bound"));
    j["version"] = kLibraryVersion;
    emit(o, j.dump(2) + "\n");
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"exhaustive desk-scale computations for elliptic-curve censuses, "
                 "cusp counts, trace identities and rank-bound sums"};
    app.require_subcommand(1);
    CommonOpts o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_file, "key=value config file; flags win");
        sub->add_option("--level", o.levels, "level tokens G1-<N>, G-<N>, G1-<M>-<N>")
            ->delimiter(',');
        sub->add_option("--q", o.q, "single prime / residue parameter");
        sub->add_option("--q-range", o.q_range, "range a..b");
        sub->add_option("--B", o.B, "height bound for families");
        sub->add_option("--X", o.X, "height bound for the rank harness");
        sub->add_option("--sigma", o.sigma, "test-function support parameter");
        sub->add_option("--R", o.R, "moment order");
        sub->add_option("--n1", o.n1, "first invariant factor (trace)");
        sub->add_option("--n2", o.n2, "second invariant factor (trace)");
        sub->add_option("--k", o.k, "modular weight (trace)");
        sub->add_option("--margin", o.margin, "t-scan margin factor");
        sub->add_flag("--complete", o.complete, "force provably complete family scans");
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv|json");
        sub->add_option("--jobs", o.jobs, "worker count");
        sub->add_option("--seed", o.seed, "seed for randomized spot checks");
        sub->add_option("--cache-dir", o.cache_dir, "census cache directory");
    };

    auto* census = app.add_subcommand("census", "build and cache curve censuses");
    auto* cusps = app.add_subcommand("cusps", "cusp orbit and rational cusp counts");
    auto* hg = app.add_subcommand("hgamma", "weighted Hurwitz class numbers H_Gamma(a,q)");
    auto* moments = app.add_subcommand("moments", "moments of H_Gamma over a prime sweep");
    auto* family = app.add_subcommand("family", "bounded-height torsion family");
    auto* localstats = app.add_subcommand("local-stats", "reduction statistics of a family");
    auto* trace = app.add_subcommand("trace", "solved Hecke traces with verdicts");
    auto* rank = app.add_subcommand("rank-bound", "explicit-formula rank bound report");
    for (auto* sub : {census, cusps, hg, moments, family, localstats, trace, rank}) add_common(sub);

    std::vector<const char*> argv;
    std::string prog = "ecstat";
    argv.push_back(prog.c_str());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config_file(o, *sub);
        if (sub == census) return cmd_census(o);
        if (sub == cusps) return cmd_cusps(o);
        if (sub == hg) return cmd_hgamma(o);
        if (sub == moments) return cmd_moments(o);
        if (sub == family) return cmd_family(o);
        if (sub == localstats) return cmd_local_stats(o);
        if (sub == trace) return cmd_trace(o);
        if (sub == rank) return cmd_rank_bound(o);
        return 4;
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const bad_input_error& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace ecstat
